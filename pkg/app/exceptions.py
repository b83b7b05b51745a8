"""Error hierarchy shared by the library, the CLI and the HTTP API"""

from typing import Any, Optional


class CalculusError(Exception):
    """Base class for all toolkit errors"""

    exit_code: int = 2
    http_status: int = 400

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.message = message
        self.witness = witness

    def to_dict(self) -> dict:
        """Serializable form used in reports and HTTP error bodies"""
        payload = {"error": type(self).__name__, "message": self.message}
        if self.witness is not None:
            payload["witness"] = self.witness
        return payload


class InputError(CalculusError):
    """Malformed input file or schema violation"""


class ArgumentError(CalculusError):
    """Invalid argument: index sets, arities, weights, ranks"""


class GroupMismatchError(CalculusError):
    """Elements or modules belong to different groups"""


class ModuleMismatchError(CalculusError):
    """Mixed module kinds, or a group that cannot act on the module"""


class UnsupportedGroupError(CalculusError):
    """Operation only defined for abelian or free abelian groups"""

    http_status = 422


class NotPolynomialLikeError(CalculusError):
    """Membership precondition a in P_n failed"""

    exit_code = 1
    http_status = 422

    def __init__(self, message: str, witness: Optional[Any] = None, level: Optional[int] = None):
        super().__init__(message, witness)
        self.level = level

    def to_dict(self) -> dict:
        payload = super().to_dict()
        if self.level is not None:
            payload["level"] = self.level
        return payload


class PropertyViolationError(CalculusError):
    """An identity or bound that must hold did not"""

    exit_code = 1
    http_status = 422
