"""Error types carrying machine-readable codes."""


class ToricError(Exception):
    """Base error. ``code`` is a short stable identifier, ``detail`` is free text."""

    exit_status = 3

    def __init__(self, code: str, detail: str = ""):
        super().__init__(f"{code}: {detail}" if detail else code)
        self.code = code
        self.detail = detail

    def to_json(self) -> dict:
        return {"error": self.code, "detail": self.detail}


class InputError(ToricError, ValueError):
    """Malformed or out-of-contract input (CLI status 2)."""

    exit_status = 2


class ComputationError(ToricError):
    """A well-formed input on which the computation cannot conclude (CLI status 3)."""

    exit_status = 3
