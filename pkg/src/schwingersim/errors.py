"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid or unsupported physics, schedule, or run parameters."""


class ZeroSupportError(RuntimeError):
    """Post-selection hit a state with no weight in the kept subspace."""


class StructureError(ValueError):
    """Circuit structure violated: hide/unhide bookkeeping, masks, pulse patterns."""


class PulseSyntaxError(ValueError):
    """Pulse program text rejected.  Carries the 1-based source line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class UnboundSymbolError(ValueError):
    """A symbolic pulse angle was evaluated without a binding for some symbol."""

    def __init__(self, symbol: str):
        super().__init__(f"no binding for symbol {symbol!r}")
        self.symbol = symbol
