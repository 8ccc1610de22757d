"""Exception taxonomy shared by all modules.

Three outcomes must stay distinguishable everywhere: a precondition violation
(DomainError), an honest "not enough guaranteed precision to decide"
(InconclusiveError), and a verification failure, which is reported through
report objects rather than raised.
"""


class MoonshineError(Exception):
    """Base class for every library error."""


class DomainError(MoonshineError, ValueError):
    """A precondition on inputs was violated (bad matrix, bad valuation, ...)."""


class InconclusiveError(MoonshineError):
    """The guaranteed precision window is too small to decide the question."""


class IncompleteFamilyError(DomainError):
    """An equivariant family is missing a component required by an operator."""

    def __init__(self, pair, canonical=None):
        self.pair = pair
        self.canonical = canonical
        extra = f" (canonical form {canonical})" if canonical is not None else ""
        super().__init__(f"family has no entry for commuting pair {pair}{extra}")


class NotReplicableError(MoonshineError):
    """The H-table of a series violates the replicate relations."""

    def __init__(self, witness, detail=""):
        self.witness = witness
        msg = f"series is not replicable; relation fails at H{witness}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NotMonicError(MoonshineError):
    """A series that should be a polynomial in the base function is not."""

    def __init__(self, what, exponent=None):
        self.what = what
        self.exponent = exponent
        msg = f"{what} is not a polynomial in the base series"
        if exponent is not None:
            msg += f" (residual at exponent {exponent})"
        super().__init__(msg)


class InconsistentDataError(MoonshineError):
    """Over-determined coefficient equations disagree; input data is corrupt."""

    def __init__(self, equation, index):
        self.equation = equation
        self.index = index
        super().__init__(
            f"inconsistent coefficient system at equation {equation}"
            f" (highest index {index}); input is not completely replicable"
        )


class UnsolvableSystemError(MoonshineError):
    """Coefficient propagation stalled before reaching the requested index."""

    def __init__(self, reached, target):
        self.reached = reached
        self.target = target
        super().__init__(
            f"coefficient system stalled at index {reached} before target {target}"
        )


class ParseError(MoonshineError, ValueError):
    """A data file is malformed; carries location diagnostics."""

    def __init__(self, path, line, message):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")
