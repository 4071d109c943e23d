"""Command-line surface: config ingestion, command dispatch, CSV output."""
