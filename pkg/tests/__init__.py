"""
Forensic Agreement Test Suite
=============================

This package contains the complete test suite for the forensic agreement library.
Test modules are organized to mirror the main package structure.
"""

from tests.fixtures import MockCommand

__all__ = [
    "MockCommand",
]
