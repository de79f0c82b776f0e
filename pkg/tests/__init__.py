"""Test suite configuration."""
