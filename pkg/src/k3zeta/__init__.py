"""Motivic and monodromy zeta functions of triple-point-free K3 degenerations."""

from __future__ import annotations

from .grotring import ClassSymbol, GrotElem, L, VLaurent, euler_specialize, poincare_specialize
from .ratzeta import ZetaRat, render_latex, render_plain, zeta_equals, zeta_term
from .sncmodel import Model, classify, load_model, parse_model, validate
from .motivic import assemble, candidate_poles, exact_poles, poincare_pole_test, theta_specialize
from .monodromy import acampo, check_property, cyclo_multiplicity, degree_check
from .countercand import enumerate_all, enumerate_case

__version__ = "0.1.0"

__all__ = [
    "ClassSymbol",
    "GrotElem",
    "L",
    "VLaurent",
    "euler_specialize",
    "poincare_specialize",
    "ZetaRat",
    "render_latex",
    "render_plain",
    "zeta_equals",
    "zeta_term",
    "Model",
    "classify",
    "load_model",
    "parse_model",
    "validate",
    "assemble",
    "candidate_poles",
    "exact_poles",
    "poincare_pole_test",
    "theta_specialize",
    "acampo",
    "check_property",
    "cyclo_multiplicity",
    "degree_check",
    "enumerate_all",
    "enumerate_case",
]
