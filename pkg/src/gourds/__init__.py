"""Gourds: engine, solver and analysis toolkit for a sliding-block puzzle of
1x2 pieces on hexagonal boards."""

__version__ = "0.1.0"
