"""
BL Frame - System Cache Tests

Tests for the StoredSystem model and the SystemCache store.
"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from sqlalchemy.orm import Session

from blframe.cache import StoredSystem, SystemCache, database_url, generate_uuid

MEMORY = 'sqlite:///:memory:'


@pytest.fixture
def cache():
    """Provide an in-memory cache, disposed after the test."""
    store = SystemCache(MEMORY)
    yield store
    store.engine.dispose()


class TestGenerateUUID:
    """Tests for UUID generation."""

    def test_generate_uuid_returns_string(self):
        """Test that generate_uuid returns a string."""
        assert isinstance(generate_uuid(), str)

    def test_generate_uuid_unique(self):
        """Test that generate_uuid returns unique values.

        Generates 100 UUIDs and verifies that all values are unique
        by comparing list length to set length.
        """
        uuids = [generate_uuid() for _ in range(100)]
        assert len(uuids) == len(set(uuids))

    def test_generate_uuid_format(self):
        """Test the 8-4-4-4-12 layout of the identifier."""
        assert [len(part) for part in generate_uuid().split('-')] == [8, 4, 4, 4, 12]


class TestDatabaseUrl:
    """Tests for database_url."""

    def test_url_passes_through(self):
        """Test that SQLAlchemy URLs are returned unchanged."""
        assert database_url(MEMORY) == MEMORY

    def test_directory_is_created(self, tmp_path):
        """Test that a directory becomes a systems.db URL and is created."""
        target = tmp_path / 'nested' / 'cache'
        url = database_url(str(target))
        assert url == 'sqlite:///' + str(target / 'systems.db')
        assert target.is_dir()


class TestSystemCache:
    """Tests for loading, storing and listing systems."""

    def test_load_missing(self, cache):
        """Test that an empty cache returns None."""
        assert cache.load(1) is None

    def test_get_or_build_round_trip(self, cache, linear):
        """Test that a built system is stored and read back within 1e-15."""
        built = cache.get_or_build(1)
        loaded = cache.load(1)
        assert loaded is not None
        np.testing.assert_allclose(loaded.wavelet_coeffs, built.wavelet_coeffs, rtol=0,
                                   atol=1e-15)
        np.testing.assert_allclose(loaded.scaling_coeffs, linear.scaling_coeffs, rtol=0,
                                   atol=1e-15)

    def test_keys_are_separate(self, cache, haar):
        """Test that requested K and N are part of the key."""
        cache.store(haar)
        assert cache.load(0) is not None
        assert cache.load(0, K=12) is None
        assert cache.load(0, N=4096) is None

    def test_store_replaces(self, cache, haar):
        """Test that storing the same key twice keeps one row."""
        cache.store(haar)
        cache.store(haar)
        assert len(cache.list()) == 1

    def test_list_and_clear(self, cache, haar, linear):
        """Test listing by order and clearing the store."""
        cache.store(linear)
        cache.store(haar, K=8)
        listing = cache.list()
        assert [entry['order'] for entry in listing] == [0, 1]
        assert listing[0]['requested_truncation'] == 8
        assert listing[1]['requested_truncation'] is None
        assert listing[1]['truncation'] == linear.truncation
        assert cache.clear() == 2
        assert cache.list() == []

    def test_directory_cache(self, tmp_path, haar):
        """Test that a directory cache persists across instances."""
        SystemCache(str(tmp_path)).store(haar)
        assert (tmp_path / 'systems.db').exists()
        assert SystemCache(str(tmp_path)).load(0).order == 0


class TestStoredSystem:
    """Tests for the StoredSystem model."""

    def test_to_dict_and_repr(self, cache, haar):
        """Test the listing dictionary and the representation of a row."""
        cache.store(haar)
        with Session(cache.engine) as session:
            row = session.query(StoredSystem).first()
            data = row.to_dict()
            assert data['order'] == 0
            assert data['symbol_samples'] == haar.symbol_samples
            assert data['created_at'] is not None
            assert repr(row) == f'<StoredSystem {row.id}: n=0, K={haar.truncation}>'
            assert row.to_system().summary() == haar.summary()
