#!/usr/bin/env python3
"""
chi-lt - command-line entry point

Usage: ./chi-lt.py <command> [options]; run with --help for the command list.
"""

import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
