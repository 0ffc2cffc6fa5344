"""Exact verification toolkit for the two densest lattices in PGL3(Q2)."""

from .qlambda import (
    LAM,
    LBAR,
    THETA,
    PadicApprox,
    QuadInt,
    QuadRat,
    embed_2adic,
    parse_quadrat,
    render_quadrat,
    val2,
)

__version__ = "0.1.0"
