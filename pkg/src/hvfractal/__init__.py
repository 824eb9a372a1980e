"""Hidden-variable fractal interpolation toolkit.

Builds an iterated function system from data points and strict contractions,
solves the interpolation operator fixed point, reconstructs the attractor by
independent samplers, and estimates smoothness and box-counting dimension of
the visible component.
"""

__version__ = "0.1.0"
