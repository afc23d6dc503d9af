"""Experiment drivers, CSV/SVG output and the vslab command line."""
