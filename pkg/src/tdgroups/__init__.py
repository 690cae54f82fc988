"""Totally deranged cosets and invariable generation in almost simple classical groups."""

__version__ = "0.1.0"
