"""Local uniformization of Abhyankar places on rational function fields.

Given a monomial place on ``k(t, x, y)`` and a finite set of elements, the
engine computes a regular chart in which every element is a unit times a
monomial, together with certificates that can be re-verified exactly.
"""

from .errors import ValuniformError
from .funcfield import Context, FieldSpec, Polynomial, RationalFunction, VarDecl, parse_ratfun
from .inertial import (
    EtalePresentation,
    ExtElement,
    Representation,
    ascend_chart,
    check_inertial,
    collect_constants,
    ext_value,
    split_units,
    verify_ascended,
)
from .monomialize import Chart, chart_report, monomialize_set
from .ordered_group import GroupElement, OrderSpec, QuadraticNumber, perron_basis
from .pipeline import uniformize
from .transforms import establish_nc_v, initial_state, monoidal_transform
from .valuation import INF, check_setting, residue, value_poly, value_ratfun

__version__ = "0.1.0"

__all__ = [
    "INF",
    "Chart",
    "Context",
    "EtalePresentation",
    "ExtElement",
    "FieldSpec",
    "GroupElement",
    "OrderSpec",
    "Polynomial",
    "QuadraticNumber",
    "RationalFunction",
    "Representation",
    "ValuniformError",
    "VarDecl",
    "ascend_chart",
    "chart_report",
    "check_inertial",
    "check_setting",
    "collect_constants",
    "establish_nc_v",
    "ext_value",
    "initial_state",
    "monoidal_transform",
    "monomialize_set",
    "parse_ratfun",
    "perron_basis",
    "residue",
    "split_units",
    "uniformize",
    "value_poly",
    "value_ratfun",
    "verify_ascended",
]
