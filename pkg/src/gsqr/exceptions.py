"""Exception types raised by the factorization kernels and the audit harness."""


class GsqrError(Exception):
    """Base class for all gsqr errors."""


class Breakdown(GsqrError):
    """A diagonal entry of R could not be computed positive.

    Raised by the Gram-Schmidt kernels when a column is numerically
    dependent on its predecessors: the standard variant sees ``||v_k|| = 0``,
    the Pythagorean variant sees ``psi_k <= phi_k``.

    Attributes:
        column: 1-based index of the failing column.
        psi: computed ``||a_k||`` at the failing column (Pythagorean path only).
        phi: computed ``||s_k||`` at the failing column (Pythagorean path only).
    """

    def __init__(self, column, psi=None, phi=None):
        self.column = column
        self.psi = psi
        self.phi = phi
        if psi is None:
            msg = f"breakdown at column {column}: zero pivot"
        else:
            msg = (
                f"breakdown at column {column}: psi={psi!r} <= phi={phi!r} "
                "(numerically dependent column)"
            )
        super().__init__(msg)


class NonConvergence(GsqrError):
    """The Jacobi singular-value iteration hit its sweep cap.

    Attributes:
        sweeps: number of full sweeps executed before giving up.
    """

    def __init__(self, sweeps):
        self.sweeps = sweeps
        super().__init__(f"Jacobi iteration did not converge after {sweeps} sweeps")


class SingularInput(GsqrError):
    """Condition number requested for a matrix with a zero singular value."""


class RankDeficient(GsqrError):
    """Orthonormalization requested for a numerically rank-deficient matrix."""


class VacuousBound(GsqrError):
    """A condition-number relation was requested outside its region of validity."""


class ParseError(GsqrError):
    """A matrix file could not be parsed."""
