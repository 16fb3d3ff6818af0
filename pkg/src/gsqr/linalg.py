"""Dense linear-algebra kernels: norms, Gram matrices and a one-sided Jacobi SVD.

Singular values are computed by one-sided Jacobi rotations rather than by an
eigendecomposition of the Gram matrix: squaring a matrix with condition number
near 1e7 would lose half the significant digits of its smallest singular
value, and condition numbers of that size are exactly what the audit harness
has to resolve.  All operations are pure functions of their inputs and use
ordinary floating-point accumulation (no compensated summation), so measured
rounding errors reflect the behavior of the factorization algorithms
themselves.
"""

import functools
import math
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .exceptions import NonConvergence, SingularInput
from .validation import check_matrix, check_vector

__all__ = [
    "SingularSpectrum",
    "vec_norm2",
    "gram",
    "singular_values",
    "spectral_norm",
    "cond2",
]

# Plain accumulation stays exact up to ~1e150; outside that range vec_norm2
# rescales by the max magnitude before squaring.
_SCALE_HI = 1e150
_SCALE_LO = 1e-150
# The Jacobi convergence test compares g^2 against products of squared column
# norms, so the SVD path must rescale much earlier to keep those products
# inside the exponent range.
_SVD_SCALE_HI = 1e100
_SVD_SCALE_LO = 1e-100


class SingularSpectrum(NamedTuple):
    """Singular values in descending order plus the Jacobi sweep count."""

    values: np.ndarray
    sweeps: int


def vec_norm2(x):
    """Euclidean norm with a single accumulation pass.

    A two-pass rescaling is used only when the largest magnitude falls
    outside [1e-150, 1e150]; everything else goes through one plain
    dot product so the rounding behavior matches the standard model.
    """
    x = check_vector(x)
    amax = float(np.max(np.abs(x)))
    if amax == 0.0:
        return 0.0
    if amax > _SCALE_HI or amax < _SCALE_LO:
        y = x / amax
        return amax * math.sqrt(float(np.dot(y, y)))
    return math.sqrt(float(np.dot(x, x)))


def gram(a):
    """Form ``A^T A`` with exactly symmetric output.

    The upper triangle is computed and mirrored, so ``G[i, j]`` and
    ``G[j, i]`` are bitwise equal for every input.
    """
    a = check_matrix(a)
    g = a.T @ a
    upper = np.triu(g)
    return upper + np.triu(g, 1).T


@functools.lru_cache(maxsize=64)
def _round_robin_rounds(n):
    """Tournament schedule: each round pairs disjoint column indices and the
    n-1 (or n) rounds together cover every unordered pair exactly once."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    count = len(players)
    rounds = []
    for _ in range(count - 1):
        ii, jj = [], []
        for k in range(count // 2):
            a, b = players[k], players[count - 1 - k]
            if a != -1 and b != -1:
                ii.append(min(a, b))
                jj.append(max(a, b))
        rounds.append((np.array(ii), np.array(jj)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return tuple(rounds)


def _jacobi_values(x, tol, max_sweeps):
    """Orthogonalize the columns of ``x`` in place by Jacobi rotations.

    Returns the column norms (descending) and the number of full sweeps.
    Pairs are visited in a fixed round-robin order; each round rotates a
    batch of disjoint pairs, which keeps results deterministic while letting
    the updates run as vectorized array operations.
    """
    m, n = x.shape
    if n == 1:
        return np.array([vec_norm2(x[:, 0])]), 0
    rounds = _round_robin_rounds(n)
    z = np.empty((m, (n + 1) // 2), dtype=complex, order="F")
    tol2 = tol * tol
    einsum = np.einsum
    sqrt = np.sqrt
    sweeps = 0
    converged = False
    while sweeps < max_sweeps:
        sweeps += 1
        sq = einsum("ij,ij->j", x, x)
        rotated = False
        for ii, jj in rounds:
            u = x[:, ii]
            v = x[:, jj]
            g = einsum("ij,ij->j", u, v)
            a = sq[ii]
            b = sq[jj]
            need = (g != 0.0) & (g * g > tol2 * (a * b))
            if not need.any():
                continue
            rotated = True
            if not need.all():
                ii = ii[need]
                jj = jj[need]
                u = u[:, need]
                v = v[:, need]
                g = g[need]
                a = a[need]
                b = b[need]
            zeta = (b - a) / (2.0 * g)
            # copysign keeps t = 1 at zeta == 0 (a valid 45-degree rotation)
            t = np.copysign(1.0, zeta) / (np.abs(zeta) + sqrt(1.0 + zeta * zeta))
            c = 1.0 / sqrt(1.0 + t * t)
            # Pack the two column blocks as real/imaginary parts: multiplying
            # by c + i*s applies all plane rotations of the round in one pass.
            zk = z[:, : len(ii)]
            zk.real = u
            zk.imag = v
            np.multiply(zk, c * (1.0 + 1j * t), out=zk)
            x[:, ii] = zk.real
            x[:, jj] = zk.imag
            sq[ii] = a - t * g
            sq[jj] = b + t * g
        if not rotated:
            converged = True
            break
    if not converged:
        raise NonConvergence(sweeps)
    values = sqrt(einsum("ij,ij->j", x, x))
    values.sort()
    return values[::-1].copy(), sweeps


def singular_values(a, *, tol=1e-15, max_sweeps=100, precondition=True):
    """Singular values of ``a`` by one-sided Jacobi, descending.

    Convergence requires every column pair to satisfy
    ``|c_i . c_j| <= tol * ||c_i|| * ||c_j||``.  Inputs wider than tall are
    transposed first (the spectrum is unchanged).  With ``precondition``
    enabled, a pivoted QR factorization is applied first; that orthogonal
    reduction leaves the singular values intact to machine precision and
    roughly halves the number of sweeps, which matters on 200x200 audits.

    Raises:
        NonConvergence: if ``max_sweeps`` full sweeps do not converge.
    """
    a = check_matrix(a)
    if a.shape[0] < a.shape[1]:
        a = a.T
    scale = 1.0
    amax = float(np.max(np.abs(a)))
    if amax > _SVD_SCALE_HI or (0.0 < amax < _SVD_SCALE_LO):
        scale = amax
        a = a / amax
    n = a.shape[1]
    if precondition and n > 2:
        # Orthogonal reductions (pivoted QR, then two QR passes on the
        # transpose) leave the spectrum intact and cut the Jacobi sweep
        # count roughly in half on graded matrices.
        r = scipy.linalg.qr(a, mode="r", pivoting=True, check_finite=False)[0][:n, :]
        r = np.linalg.qr(r.T, mode="r")
        r = np.linalg.qr(r.T, mode="r")
        x = np.asfortranarray(r.T)
    else:
        x = np.array(a, order="F")
    values, sweeps = _jacobi_values(x, tol, max_sweeps)
    if scale != 1.0:
        values = values * scale
    return SingularSpectrum(values, sweeps)


def spectral_norm(a):
    """Largest singular value of ``a``."""
    return float(singular_values(a).values[0])


def cond2(a):
    """2-norm condition number ``sigma_max / sigma_min``.

    Raises:
        SingularInput: if the smallest singular value is exactly zero.
    """
    values = singular_values(a).values
    smin = float(values[-1])
    if smin == 0.0:
        raise SingularInput("matrix is rank deficient at working precision")
    return float(values[0]) / smin


