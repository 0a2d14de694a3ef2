"""JSON and TSV report emission."""
