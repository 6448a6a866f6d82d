"""Orbitree tests."""
