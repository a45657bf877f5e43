"""Contour dynamics for uniform vortex patches."""
