"""
Errors Module
Satu hierarki exception untuk semua operasi; pesan diambil dari ERROR_MESSAGES
"""

from typing import Any, Optional

from config import ERROR_MESSAGES


class HeckeNormError(Exception):
    """Base error with a stable code string"""

    def __init__(self, code: str, value: Any = None, detail: Optional[str] = None):
        self.code = code
        self.value = value
        template = ERROR_MESSAGES.get(code, "{value}")
        message = template.format(value=value)
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)

    def __str__(self) -> str:
        return f"[{self.code}] {self.args[0]}"


class InputError(HeckeNormError):
    """Bad user input: maps to exit code 1"""


class ParseError(InputError):
    """Input string could not be parsed"""

    def __init__(self, text: str, position: int, detail: str = ""):
        self.text = text
        self.position = position
        super().__init__('PARSE_ERROR', repr(text), f"posisi {position}: {detail}" if detail else f"posisi {position}")


class ArithmeticFailure(HeckeNormError):
    """Exact arithmetic contradicted itself; indicates a bug, never bad input"""


class OracleError(HeckeNormError):
    """Numerical oracle preconditions not met"""


_INPUT_CODES = {
    'NOT_FUNDAMENTAL', 'RANK_DEFICIENT', 'ZERO_SCALAR', 'NOT_UNIMODULAR',
    'NOT_INTEGRAL_MATRIX', 'NOT_HYPERBOLIC', 'PARABOLIC_AXIS',
    'NOT_INTEGRAL_IDEAL', 'SINGULAR', 'PARSE_ERROR', 'NOT_A_LATTICE',
    'CONTEXT_MISMATCH', 'INVALID_CONFIG',
}
_ARITHMETIC_CODES = {'INTERNAL', 'INTEGRALITY_VIOLATION', 'SEARCH_CAP'}


def raise_error(code: str, value: Any = None, detail: Optional[str] = None):
    """Raise the exception class that matches ``code``"""
    if code in _INPUT_CODES:
        raise InputError(code, value, detail)
    if code in _ARITHMETIC_CODES:
        raise ArithmeticFailure(code, value, detail)
    raise OracleError(code, value, detail)
