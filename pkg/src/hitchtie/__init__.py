"""Desk-scale hitch-knot tying: simulator, perception, and a multimodal policy."""

__version__ = "0.1.0"
