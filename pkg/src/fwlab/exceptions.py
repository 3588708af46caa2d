"""Exception hierarchy.

Configuration problems and numerical precondition failures are kept apart
because the CLI maps them to different exit codes.
"""


class FWLabError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(FWLabError, ValueError):
    """Invalid lattice, profile, scenario or run configuration."""


class NumericalPreconditionError(FWLabError, ValueError):
    """An operator does not satisfy the precondition of a transform."""


class HermiticityError(NumericalPreconditionError):
    def __init__(self, residual, tol, what="matrix"):
        self.residual = float(residual)
        self.tol = float(tol)
        super().__init__(
            f"{what} is not Hermitian: residual {self.residual:.3e} > tol {self.tol:.3e}"
        )


class UnitarityError(NumericalPreconditionError):
    def __init__(self, residual, tol):
        self.residual = float(residual)
        self.tol = float(tol)
        super().__init__(
            f"operator is not unitary: residual {self.residual:.3e} > tol {self.tol:.3e}"
        )


class SpectralGapError(NumericalPreconditionError):
    """An eigenvalue lies closer to zero than the allowed gap."""

    def __init__(self, eigenvalue, gap_min):
        self.eigenvalue = float(eigenvalue)
        self.gap_min = float(gap_min)
        super().__init__(
            f"spectral gap violation: eigenvalue {self.eigenvalue:.3e} "
            f"within gap_min={self.gap_min:.1e}"
        )


class EriksenDegeneracyError(NumericalPreconditionError):
    def __init__(self, eigenvalue, gap_min):
        self.eigenvalue = float(eigenvalue)
        super().__init__(
            f"Eriksen degeneracy: 2 + beta*lam + lam*beta has eigenvalue "
            f"{self.eigenvalue:.3e} below gap_min={gap_min:.1e}"
        )


class CommutingPreconditionError(NumericalPreconditionError):
    def __init__(self, norm, tol):
        self.norm = float(norm)
        self.tol = float(tol)
        super().__init__(
            f"commuting-case precondition violated: ||[even, odd]|| = "
            f"{self.norm:.3e} > {self.tol:.3e}"
        )


class SusyViolationError(NumericalPreconditionError):
    pass


class DomainError(NumericalPreconditionError):
    pass


class DegenerateMomentumError(NumericalPreconditionError):
    def __init__(self, p_perp, gap_min):
        self.p_perp = float(p_perp)
        super().__init__(
            f"transverse momentum degenerate: |p_perp| = {self.p_perp:.3e} < {gap_min:.1e}"
        )


class AnticommutationError(NumericalPreconditionError):
    """An operator required to anticommute with a fixed matrix does not."""

    def __init__(self, what, residual, tol):
        self.residual = float(residual)
        self.tol = float(tol)
        super().__init__(f"{what}: residual {self.residual:.3e} > tol {self.tol:.3e}")
