"""Short pants decompositions of hyperbolic spheres and checks of their length bounds."""
from .bounds import consistency_suite, evaluate
from .constructions import check_separation_lemma, hairy_constants, hyperelliptic_lift
from .curves import CurveClass, PantsDecomposition, standard_curve
from .decompose import bers_decompose, find_splitter, project_insert_search
from .normal_position import NormalPositionInstance, project_insert_combinatorial
from .surface import PunctureDecoration, Surface, build_surface, curve_length, cut_and_cap

__version__ = "0.1.0"
