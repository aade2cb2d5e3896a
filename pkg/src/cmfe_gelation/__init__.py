"""Top-level package for CMFE Gelation."""

__author__ = """CMFE Gelation developers"""
__version__ = "0.1.0"
