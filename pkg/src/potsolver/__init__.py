"""potsolver - exact solvers for networks of the partially ordered time point algebra."""

__version__ = "0.1.0"
