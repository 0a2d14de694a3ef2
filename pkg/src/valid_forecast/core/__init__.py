"""Settings, errors and domain models."""
