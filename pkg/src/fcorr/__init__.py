"""Exact contraction data between tensor fields on the DG manifold (F[1], d_F) and
Chevalley-Eilenberg cochains of a Lie pair, with Atiyah, Todd and transferred brackets."""

from .coeffring import DegreeOverflow, GaussianRational, ParseError, Poly
from .liepair import CORPUS, Scene, SceneError, bundled, load_scene

__version__ = "0.1.0"
