"""Exception hierarchy shared by all cmt modules.

Every error carries the name of the pipeline stage that raised it so the
CLI can print module-tagged messages and map them to exit codes.
"""


class CmtError(Exception):
    """Base class for all analysis errors."""

    module = "cmt"

    def tagged(self) -> str:
        return f"{self.module}: {self}"


class DimensionMismatchError(CmtError):
    module = "poly"


class DslError(CmtError):
    """Input-file error with a 1-based source position."""

    module = "sysdsl"

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        if line:
            message = f"line {line}, col {col}: {message}"
        super().__init__(message)


class DslSyntaxError(DslError):
    pass


class NonPolynomialError(DslError):
    pass


class UndeclaredNameError(DslError):
    pass


class NotAnEquilibriumError(CmtError):
    module = "sysdsl"

    def __init__(self, residuals):
        self.residuals = tuple(residuals)
        detail = ", ".join(f"{name}: {val:.3e}" for name, val in self.residuals)
        super().__init__(f"not an equilibrium; per-component residuals: {detail}")


class NotShiftedError(CmtError):
    module = "spectral"


class UnsupportedSpectrumError(CmtError):
    module = "spectral"


class DefectiveSpectrumError(CmtError):
    module = "spectral"


class InconsistentSplitError(CmtError):
    module = "spectral"


class ReductionScopeError(CmtError):
    module = "manifold"


class ResonanceError(CmtError):
    module = "manifold"

    def __init__(self, degree: int, condition: float):
        self.degree = degree
        self.condition = condition
        super().__init__(
            f"resonant invariance operator at degree {degree} "
            f"(condition number {condition:.3e})"
        )


class DivergenceError(CmtError):
    module = "sim"

    def __init__(self, time: float, norm: float):
        self.time = time
        self.norm = norm
        super().__init__(f"trajectory diverged at t={time:.6g} (state norm {norm:.3e})")
