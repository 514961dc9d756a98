"""
BL Frame - System Cache

This module contains the SQLAlchemy model and store that keep constructed
spline systems between runs, so the CLI and the JSON service do not rebuild
them for every invocation.
"""

import json
import logging
import os
import uuid
from datetime import datetime, timezone

from sqlalchemy import (
    Column,
    DateTime,
    Integer,
    String,
    Text,
    UniqueConstraint,
    create_engine,
    select,
)
from sqlalchemy.orm import Session, declarative_base
from sqlalchemy.pool import StaticPool

from .blsystem import SplineSystem, build_system

logger = logging.getLogger(__name__)

Base = declarative_base()

AUTO_TRUNCATION = -1


def generate_uuid():
    """Generate a unique identifier for stored systems.

    Returns:
        str: A UUID4 string identifier.
    """
    return str(uuid.uuid4())


class StoredSystem(Base):
    """
    A constructed spline system, stored as its JSON document.

    Attributes:
        id: Unique identifier of the row
        order: Spline order n
        requested_truncation: Truncation K as requested, -1 for automatic
        symbol_samples: Number N of symbol samples
        truncation: Truncation K actually used
        document: JSON text of SplineSystem.to_dict()
        created_at: Timestamp of construction
    """
    __tablename__ = 'spline_systems'
    __table_args__ = (
        UniqueConstraint('order', 'requested_truncation', 'symbol_samples'),
    )

    id = Column(String(36), primary_key=True, default=generate_uuid)
    order = Column(Integer, nullable=False)
    requested_truncation = Column(Integer, nullable=False)
    symbol_samples = Column(Integer, nullable=False)
    truncation = Column(Integer, nullable=False)
    document = Column(Text, nullable=False)
    created_at = Column(DateTime, nullable=False, default=lambda: datetime.now(timezone.utc))

    def to_system(self):
        """Rebuild the SplineSystem held by this row."""
        return SplineSystem.from_dict(json.loads(self.document))

    def to_dict(self):
        """Summary used by listings.

        Returns:
            dict: Identifier, order, truncations, samples and creation time.
        """
        return {
            'id': self.id,
            'order': self.order,
            'requested_truncation': None if self.requested_truncation == AUTO_TRUNCATION
            else self.requested_truncation,
            'truncation': self.truncation,
            'symbol_samples': self.symbol_samples,
            'created_at': self.created_at.isoformat() if self.created_at else None,
        }

    def __repr__(self):
        return f'<StoredSystem {self.id}: n={self.order}, K={self.truncation}>'


def database_url(location):
    """Turn a cache directory or an SQLAlchemy URL into a URL."""
    if '://' in location:
        return location
    location = os.path.expanduser(location)
    os.makedirs(location, exist_ok=True)
    return 'sqlite:///' + os.path.join(os.path.abspath(location), 'systems.db')


class SystemCache:
    """Store of spline systems keyed by (n, requested K, N).

    Args:
        location: Cache directory (the database is ``systems.db`` inside it) or
            an SQLAlchemy URL such as ``sqlite:///:memory:``.
    """

    def __init__(self, location):
        self.url = database_url(location)
        if self.url.startswith('sqlite') and ':memory:' in self.url:
            # one shared connection, or every session sees an empty database
            self.engine = create_engine(self.url, poolclass=StaticPool,
                                        connect_args={'check_same_thread': False})
        else:
            self.engine = create_engine(self.url)
        Base.metadata.create_all(self.engine)

    def _find(self, session, n, K, N):
        requested = AUTO_TRUNCATION if K is None else int(K)
        query = select(StoredSystem).where(
            StoredSystem.order == n,
            StoredSystem.requested_truncation == requested,
            StoredSystem.symbol_samples == N,
        )
        return session.scalars(query).first()

    def load(self, n, K=None, N=8192):
        """Return the cached system, or None when it has not been stored."""
        with Session(self.engine) as session:
            row = self._find(session, n, K, N)
            return row.to_system() if row else None

    def store(self, system, K=None):
        """Store a system under its key, replacing an older entry.

        Args:
            system: SplineSystem.
            K: Truncation as requested (None for automatic).
        """
        with Session(self.engine) as session:
            row = self._find(session, system.order, K, system.symbol_samples)
            if row is None:
                row = StoredSystem(
                    order=system.order,
                    requested_truncation=AUTO_TRUNCATION if K is None else int(K),
                    symbol_samples=system.symbol_samples,
                )
                session.add(row)
            row.truncation = system.truncation
            row.document = json.dumps(system.to_dict())
            row.created_at = datetime.now(timezone.utc)
            session.commit()

    def get_or_build(self, n, K=None, N=8192):
        """Return the cached system or build, store and return it."""
        system = self.load(n, K, N)
        if system is not None:
            logger.debug('cache hit for n=%d, K=%s, N=%d', n, K, N)
            return system
        logger.info('cache miss for n=%d, K=%s, N=%d; building', n, K, N)
        system = build_system(n, K, N)
        self.store(system, K)
        return system

    def list(self):
        """Return summaries of every stored system, by order."""
        with Session(self.engine) as session:
            rows = session.scalars(select(StoredSystem).order_by(StoredSystem.order)).all()
            return [row.to_dict() for row in rows]

    def clear(self):
        """Delete every stored system and return how many were removed."""
        with Session(self.engine) as session:
            rows = session.scalars(select(StoredSystem)).all()
            for row in rows:
                session.delete(row)
            session.commit()
            return len(rows)
