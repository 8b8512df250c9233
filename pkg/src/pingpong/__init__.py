"""Exact construction and certification of free subgroups of split matrix groups
over Q((t)) by ping-pong on the reduction of projective space at t = 0."""

__version__ = "0.1.0"
