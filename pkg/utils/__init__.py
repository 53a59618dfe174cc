"""
Utils package - Contains input parsers
"""

from .parsers import parse_rational, parse_ideal, parse_matrix, parse_quadnum

__all__ = ['parse_rational', 'parse_ideal', 'parse_matrix', 'parse_quadnum']
