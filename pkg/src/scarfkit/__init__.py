"""Uncertainty-aware scarf plots from 3D gaze recordings and AOI detection logs."""

__version__ = "0.1.0"
