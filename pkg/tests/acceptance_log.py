"""Collects one pass/fail line per acceptance criterion."""
RESULTS: dict = {}
