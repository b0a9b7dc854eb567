"""Exact workbench for the quantum torus A_q, its Calogero-Moser points and ideal classes."""
from .torus import TorusAutomorphism, TorusElement, apply_automorphism, torus_mul
from .skewlocal import SkewLaurent, SkewSeries, ideal_member
from .cmspace import CMPoint, GroupWord, cm_act, cm_equivalent, cm_make, cm_validate
from .ideals import (FractionalIdeal, KappaData, SearchBounds, equivariance_check, ideal_isomorphic,
                     is_cyclic, kappa_series, normalize_ideal, omega_x, omega_y, stabilizer_in_pic,
                     unit_stabilizer)
from .picard import (PicElement, is_inner, omega_of_automorphism, pic_inverse, pic_mul, pic_normalize,
                     pic_to_automorphism, word_from_matrix)

__version__ = "0.1.0"

__all__ = [
    "TorusAutomorphism", "TorusElement", "apply_automorphism", "torus_mul",
    "SkewLaurent", "SkewSeries", "ideal_member",
    "CMPoint", "GroupWord", "cm_act", "cm_equivalent", "cm_make", "cm_validate",
    "FractionalIdeal", "KappaData", "SearchBounds", "equivariance_check", "ideal_isomorphic",
    "is_cyclic", "kappa_series", "normalize_ideal", "omega_x", "omega_y", "stabilizer_in_pic",
    "unit_stabilizer",
    "PicElement", "is_inner", "omega_of_automorphism", "pic_inverse", "pic_mul", "pic_normalize",
    "pic_to_automorphism", "word_from_matrix",
]
