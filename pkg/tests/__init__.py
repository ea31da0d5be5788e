"""Test package for the point-interaction toolkit."""
