"""Unit test package for cmfe_gelation."""
