"""Volume bounds for polyhedra inscribed in the unit sphere."""

__version__ = "0.1.0"
