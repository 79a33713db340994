"""Computational checks of real enumerative geometry: Schubert calculus,
incidence and tangency systems, and homotopy continuation with real/complex
solution accounting."""

__version__ = "0.1.0"
