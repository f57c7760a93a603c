from typing import Optional


class ClosedGraphsError(Exception):
    """Base class for failures raised by the services"""


class GraphFormatError(ClosedGraphsError):
    """Malformed edge-list or DIMACS input"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.message = message
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)

    def __reduce__(self):
        return type(self), (self.message, self.line_number)


class SizeLimitError(ClosedGraphsError):
    """An exponential routine refused an instance that is too large"""

    def __init__(self, what: str, size: int, limit: int, hint: str = ""):
        self.what = what
        self.size = size
        self.limit = limit
        self.hint = hint
        message = f"{what}: size {size} exceeds limit {limit}"
        if hint:
            message = f"{message} ({hint})"
        super().__init__(message)

    # worker processes send exceptions back pickled
    def __reduce__(self):
        return type(self), (self.what, self.size, self.limit, self.hint)


class PredicateError(ClosedGraphsError):
    """Predicate misuse: bad parameters or a set that does not satisfy it"""


class BoundViolationError(ClosedGraphsError):
    """A counting bound was exceeded"""

    def __init__(self, message: str, observed: float, bound: float):
        self.message = message
        self.observed = observed
        self.bound = bound
        super().__init__(f"{message} (observed {observed}, bound {bound})")

    def __reduce__(self):
        return type(self), (self.message, self.observed, self.bound)


class CommandError(Exception):
    """Raised by command handlers; carries the process exit code"""

    def __init__(self, exit_code: int, detail: str):
        self.exit_code = exit_code
        self.detail = detail
        super().__init__(detail)

    def __reduce__(self):
        return type(self), (self.exit_code, self.detail)
