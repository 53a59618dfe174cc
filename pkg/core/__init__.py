"""
Core package - Contains the arithmetic, theta, norm and oracle modules
"""

from .errors import HeckeNormError, InputError, ParseError, ArithmeticFailure, OracleError
from .quadfield import QuadNum, QuadLattice, FieldContext, UnitRecord, make_context
from .rademacher import IntMatrix2, psi
from .hecke_theta import HeckeLattice, ThetaSeries, make_hecke_lattice, theta_expansion
from .norm_engine import RatMatrix2, NormReport, closed_form_norm
from .oracles import QuadratureConfig, Verdict, verify

__all__ = [
    'HeckeNormError', 'InputError', 'ParseError', 'ArithmeticFailure', 'OracleError',
    'QuadNum', 'QuadLattice', 'FieldContext', 'UnitRecord', 'make_context',
    'IntMatrix2', 'psi',
    'HeckeLattice', 'ThetaSeries', 'make_hecke_lattice', 'theta_expansion',
    'RatMatrix2', 'NormReport', 'closed_form_norm',
    'QuadratureConfig', 'Verdict', 'verify',
]
