#!/usr/bin/env python3
"""
BL Frame - Command Line Entry Point

This module serves as the main entry point for the ``blframe`` commands. It
puts the src directory on the import path and hands over to the command-line
front end.
"""

import os
import sys

# Add src directory to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from dotenv import load_dotenv
from blframe.cli import main

# Load environment variables
load_dotenv()


if __name__ == '__main__':
    main()
