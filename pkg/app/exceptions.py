from typing import Optional


class AlgebraError(Exception):
    """
    Base error of the engine.

    Every error carries the process exit code the CLI reports for it and a
    human-readable detail message.
    """

    exit_code: int = 3

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class PresentationError(AlgebraError):
    """Malformed input or presentation (duplicate arrow, inhomogeneous relation)"""

    def __init__(self, detail: str, line: Optional[int] = None):
        if line is not None:
            detail = f"line {line}: {detail}"
        super().__init__(detail, exit_code=3)
        self.line = line


class UsageError(AlgebraError):
    """Caller violated an operation's precondition"""

    exit_code = 3


class RefusedError(AlgebraError):
    """Precondition not certified at the current truncation"""

    exit_code = 2

    def __init__(self, detail: str, provenance: Optional[str] = None, exit_code: Optional[int] = None):
        if provenance:
            detail = f"{provenance}: {detail}"
        super().__init__(detail, exit_code=exit_code)
        self.provenance = provenance
