"""HTTP service exposing the curvemetric pipeline."""

from .app import app

__all__ = ["app"]
