"""Exception types raised by xyzchain."""


class XYZChainError(Exception):
    """Base class for all library errors."""


class NonHermitianError(XYZChainError, ValueError):
    """Input operator is not Hermitian within tolerance.

    ``pair`` holds the (row, col) indices of the worst offending entry and
    ``deviation`` the size of ``|a[i, j] - conj(a[j, i])|`` there.
    """

    def __init__(self, pair, deviation, scale):
        self.pair = pair
        self.deviation = deviation
        self.scale = scale
        i, j = pair
        super().__init__(
            f"operator is not Hermitian: |a[{i},{j}] - conj(a[{j},{i}])| = "
            f"{deviation:.3e} exceeds tolerance (max |entry| = {scale:.3e})"
        )


class ConvergenceError(XYZChainError, RuntimeError):
    """Jacobi sweeps hit the iteration cap before the off-diagonal norm vanished."""

    def __init__(self, sweeps, residual, threshold):
        self.sweeps = sweeps
        self.residual = residual
        self.threshold = threshold
        super().__init__(
            f"Jacobi eigensolver did not converge in {sweeps} sweeps: off-diagonal "
            f"norm {residual:.3e} > {threshold:.3e}"
        )


class InvalidStateError(XYZChainError, ValueError):
    """Input is not a valid density matrix (trace, positivity, shape)."""


class NotXStateError(XYZChainError, ValueError):
    """Two-qubit state has weight outside the X pattern."""

    def __init__(self, message, residual):
        self.residual = residual
        super().__init__(message)


class NoTransitionError(XYZChainError, RuntimeError):
    """No critical point was found inside the requested bracket."""


class SweepPointError(XYZChainError, RuntimeError):
    """A single grid point failed; ``coords`` names the point."""

    def __init__(self, coords, cause):
        self.coords = coords
        self.cause = cause
        where = ", ".join(f"{k}={v!r}" for k, v in coords.items())
        super().__init__(f"sweep failed at {where}: {cause}")
