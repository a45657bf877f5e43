"""Corner-angle dynamics and contour dynamics for symmetric singular vortex patches."""
__version__ = "0.1.0"
