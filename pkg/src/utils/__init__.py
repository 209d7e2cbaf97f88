"""Shared helpers for the ergolab command line."""
