"""Exact computations with Hecke operators on compact inductions of GL_2 over a local field."""

__version__ = "0.1.0"
