"""Core infrastructure: error hierarchy."""
