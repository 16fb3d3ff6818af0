"""QR factorization kernels: classical Gram-Schmidt and a Householder oracle.

Both Gram-Schmidt variants run the identical column loop

    s_k = Q_{k-1}^T a_k
    v_k = a_k - Q_{k-1} s_k
    q_k = v_k / r_kk

and differ only in the diagonal entry.  The standard variant sets
``r_kk = ||v_k||``.  The Pythagorean variant instead computes
``psi_k = ||a_k||``, ``phi_k = ||s_k||`` and

    r_kk = sqrt(psi_k - phi_k) * sqrt(psi_k + phi_k)

evaluated in exactly that order: difference, sum, two square roots, one
product.  The evaluation order is part of the algorithm; rearranging it to
``sqrt(psi^2 - phi^2)`` changes its rounding-error behavior.  The diagonal
formula is what restores the Cholesky-level backward error of ``R^T R``
relative to ``A^T A`` that the standard variant loses on ill-conditioned
columns.

``s_k`` is formed as k-1 independent dot products against earlier columns
and ``v_k`` by one left-to-right accumulation pass, so each column's
computation depends only on the columns before it.  That makes the
factorization of the first k columns of A bitwise identical to the first
k columns of the factorization of A, which is what licenses per-prefix
audits without re-running the algorithm.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import Breakdown, RankDeficient
from .linalg import singular_values, vec_norm2
from .validation import check_count, check_tall

__all__ = [
    "CGS_S",
    "CGS_P",
    "HOUSEHOLDER",
    "StepTrace",
    "QRFactorization",
    "cgs_s",
    "cgs_p",
    "householder_qr",
    "orth",
    "prefix",
]

CGS_S = "cgs-s"
CGS_P = "cgs-p"
HOUSEHOLDER = "householder"

# Rank cutoff for orth(): R diagonals below this multiple of ||A||_2 are
# treated as numerically zero.
_ORTH_RANK_TOL = 1e-13


@dataclass(frozen=True)
class StepTrace:
    """Per-column scalars recorded while factorizing.

    psi and phi are the floating-point norms ``||a_k||`` and ``||s_k||``
    (phi is 0 for the first column, which has no projection).  v_norm is
    ``||v_k||``, which equals r_kk under the standard diagonal formula.
    """

    k: int
    psi: float
    phi: float
    v_norm: float
    r_kk: float


@dataclass
class QRFactorization:
    """A left-orthogonal Q, upper-triangular R and the per-column traces."""

    q: np.ndarray
    r: np.ndarray
    traces: list[StepTrace] = field(repr=False)
    algorithm: str = CGS_P

    @property
    def shape(self):
        return self.q.shape


def _cgs(a, pythagorean):
    a = check_tall(a)
    a = np.asfortranarray(a)
    m, n = a.shape
    q = np.zeros((m, n), order="F")
    r = np.zeros((n, n))
    traces = []

    col = a[:, 0]
    r11 = vec_norm2(col)
    if r11 == 0.0:
        if pythagorean:
            raise Breakdown(1, psi=0.0, phi=0.0)
        raise Breakdown(1)
    r[0, 0] = r11
    q[:, 0] = col / r11
    traces.append(StepTrace(k=1, psi=r11, phi=0.0, v_norm=r11, r_kk=r11))

    for k in range(1, n):
        col = a[:, k]
        s = np.empty(k)
        for j in range(k):
            s[j] = np.dot(q[:, j], col)
        v = col.copy()
        for j in range(k):
            v -= s[j] * q[:, j]
        psi = vec_norm2(col)
        phi = vec_norm2(s)
        v_norm = vec_norm2(v)
        if pythagorean:
            if psi <= phi:
                raise Breakdown(k + 1, psi=psi, phi=phi)
            r_kk = np.sqrt(psi - phi) * np.sqrt(psi + phi)
        else:
            r_kk = v_norm
            if r_kk == 0.0:
                raise Breakdown(k + 1)
        r[:k, k] = s
        r[k, k] = r_kk
        q[:, k] = v / r_kk
        traces.append(StepTrace(k=k + 1, psi=psi, phi=phi, v_norm=v_norm, r_kk=r_kk))

    return q, r, traces


def cgs_s(a):
    """Classical Gram-Schmidt with the standard diagonal ``r_kk = ||v_k||``.

    Raises:
        Breakdown: when ``||v_k|| = 0`` (numerically dependent column).
    """
    q, r, traces = _cgs(a, pythagorean=False)
    return QRFactorization(q=q, r=r, traces=traces, algorithm=CGS_S)


def cgs_p(a):
    """Classical Gram-Schmidt with the Pythagorean diagonal.

    Raises:
        Breakdown: when ``psi_k <= phi_k``, i.e. the diagonal cannot be
            computed positive (rank deficiency or an input too ill
            conditioned for the working precision).
    """
    q, r, traces = _cgs(a, pythagorean=True)
    return QRFactorization(q=q, r=r, traces=traces, algorithm=CGS_P)


def householder_qr(a):
    """Householder QR with the diagonal of R sign-corrected to be >= 0.

    Serves as the reference orthogonalizer: Q is left orthogonal to machine
    precision regardless of conditioning, so it is the oracle the
    Gram-Schmidt variants are measured against.  Rank-deficient input is
    permitted and yields zero diagonal entries.
    """
    a = check_tall(a)
    q, r = np.linalg.qr(a)
    signs = np.where(np.diagonal(r) < 0.0, -1.0, 1.0)
    q = q * signs
    r = r * signs[:, None]
    traces = [
        StepTrace(
            k=k + 1,
            psi=vec_norm2(a[:, k]),
            phi=0.0,
            v_norm=float(r[k, k]),
            r_kk=float(r[k, k]),
        )
        for k in range(a.shape[1])
    ]
    return QRFactorization(q=q, r=r, traces=traces, algorithm=HOUSEHOLDER)


def orth(a):
    """Orthonormal basis for the range of ``a`` (Q from Householder QR).

    Raises:
        RankDeficient: if any diagonal of R falls below ``1e-13 * ||a||_2``.
    """
    f = householder_qr(a)
    # the scale only feeds an order-of-magnitude rank cutoff, so the Jacobi
    # run can stop at a loose pairwise tolerance: sigma_max is still exact
    # to ~(n * 1e-6) relative, a million times finer than the threshold needs
    scale = float(singular_values(a, tol=1e-6).values[0])
    diag = np.abs(np.diagonal(f.r))
    if np.any(diag < _ORTH_RANK_TOL * scale):
        bad = int(np.argmax(diag < _ORTH_RANK_TOL * scale)) + 1
        raise RankDeficient(
            f"column {bad}: |r_kk| = {diag[bad - 1]:.3e} below rank tolerance"
        )
    return f.q


def prefix(f, k):
    """Leading-k factorization: first k columns of Q, leading k x k of R.

    Because both Gram-Schmidt variants build Q and R column by column, this
    equals, bit for bit, the factorization of the first k columns of the
    original matrix.
    """
    n = f.r.shape[0]
    k = check_count(k, 1, "k")
    if k > n:
        raise ValueError(f"k must be at most {n}, got {k}")
    if k == n:
        return f
    return QRFactorization(
        q=np.array(f.q[:, :k]),
        r=np.array(f.r[:k, :k]),
        traces=list(f.traces[:k]),
        algorithm=f.algorithm,
    )
