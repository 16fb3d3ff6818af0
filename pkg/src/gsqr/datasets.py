"""Deterministic test-matrix generators.

Hilbert, Pascal and a fixed 6x5 composite are exact constructions; the
random families (Gaussian, glued, condition-controlled) draw from a seeded
PCG64 stream so that every matrix is bit-reproducible from its seed across
platforms.  Normal deviates are produced by an explicit Box-Muller transform
over the generator's uniform output rather than the library's ziggurat
sampler, to keep the stream layout fully specified.
"""

import math
from dataclasses import dataclass

import numpy as np

from .factorize import orth
from .validation import check_count

__all__ = [
    "Rng",
    "GluedParams",
    "hilbert",
    "pascal",
    "example1_matrix",
    "uniform_matrix",
    "gaussian_matrix",
    "glued_matrix",
    "conditioned_matrix",
]


class Rng:
    """Seeded random stream (PCG64) with splittable children.

    The same seed always yields the same stream.  ``split`` derives
    independent child streams from the seed, so parallel consumers can each
    own a private generator while the whole ensemble stays reproducible.
    """

    def __init__(self, seed):
        self.seed = int(seed)
        self._generator = np.random.Generator(np.random.PCG64(self.seed))

    def random(self, count):
        """``count`` uniforms in [0, 1) from the stream."""
        return self._generator.random(int(count))

    def integers(self, low, high):
        """One integer drawn uniformly from [low, high)."""
        return int(self._generator.integers(low, high))

    def split(self, count):
        """``count`` independent child streams derived from this seed."""
        children = np.random.SeedSequence(self.seed).spawn(int(count))
        out = []
        for child in children:
            rng = Rng.__new__(Rng)
            rng.seed = self.seed
            rng._generator = np.random.Generator(np.random.PCG64(child))
            out.append(rng)
        return out

    def __repr__(self):
        return f"Rng(seed={self.seed})"


@dataclass(frozen=True)
class GluedParams:
    """Parameters of the glued-matrix family.

    cond_a_glob and cond_a are log10 magnitudes: the global scaling spreads
    column norms over 10**cond_a_glob, and each of the nbglued blocks of
    nglued consecutive columns is additionally scaled over 10**cond_a.
    """

    cond_a_glob: float
    cond_a: float
    m: int
    nglued: int
    nbglued: int
    seed: int

    def __post_init__(self):
        check_count(self.m, 1, "m")
        check_count(self.nglued, 2, "nglued")
        check_count(self.nbglued, 1, "nbglued")
        if self.m < self.nglued * self.nbglued:
            raise ValueError(
                f"m = {self.m} must be at least nglued * nbglued = "
                f"{self.nglued * self.nbglued}"
            )

    @property
    def n(self):
        return self.nglued * self.nbglued


def hilbert(n):
    """Hilbert matrix: H[i, j] = 1 / (i + j + 1), 0-based."""
    n = check_count(n, 1, "n")
    idx = np.arange(n, dtype=np.float64)
    return 1.0 / (idx[:, None] + idx[None, :] + 1.0)


def pascal(n):
    """Symmetric Pascal matrix: P[i, j] = binomial(i + j, i), 0-based.

    Built by the additive recurrence with first row and column all ones,
    which is exact in binary64 up to n = 30.
    """
    n = check_count(n, 1, "n")
    p = np.ones((n, n))
    for i in range(1, n):
        for j in range(1, n):
            p[i, j] = p[i - 1, j] + p[i, j - 1]
    return p


def example1_matrix():
    """Fixed 6x5 matrix that separates the two Gram-Schmidt diagonals.

    Columns 1-3 are ones plus 1e-2 times the first three Hilbert columns
    (three nearly parallel directions); columns 4-5 are the first two Pascal
    columns.  Deterministic, no randomness involved.
    """
    b = hilbert(6)
    a1 = np.ones((6, 3)) + b[:, :3] * 1e-2
    a2 = pascal(6)[:, :2]
    return np.hstack([a1, a2])


def uniform_matrix(rng, m, n):
    """m x n matrix of uniforms in [0, 1), filled column-major from the stream."""
    m = check_count(m, 1, "m")
    n = check_count(n, 1, "n")
    flat = rng.random(m * n)
    return np.asfortranarray(flat.reshape((m, n), order="F"))


def gaussian_matrix(rng, m, n):
    """m x n standard-normal matrix via Box-Muller, filled column-major.

    Each uniform pair (u1, u2) yields two deviates
    ``sqrt(-2 ln u1) * (cos, sin)(2 pi u2)`` with u1 shifted into (0, 1]
    so the logarithm is always finite.
    """
    m = check_count(m, 1, "m")
    n = check_count(n, 1, "n")
    total = m * n
    pairs = (total + 1) // 2
    u1 = 1.0 - rng.random(pairs)
    u2 = rng.random(pairs)
    radius = np.sqrt(-2.0 * np.log(u1))
    z = np.empty(2 * pairs)
    z[0::2] = radius * np.cos(2.0 * math.pi * u2)
    z[1::2] = radius * np.sin(2.0 * math.pi * u2)
    return np.asfortranarray(z[:total].reshape((m, n), order="F"))


def glued_matrix(params):
    """Block-structured random matrix with coupled ill-conditioned blocks.

    Construction, step for step: start from an orthonormal basis of a
    uniform random m x n matrix; scale columns by a log-spaced grid over
    10**cond_a_glob and mix with a random orthogonal matrix; then scale and
    mix each block of nglued consecutive columns the same way over
    10**cond_a.  The first random matrix is uniform, all later ones
    Gaussian.

    Raises:
        RankDeficient: propagated from orth (probability ~0).
    """
    if not isinstance(params, GluedParams):
        raise TypeError("glued_matrix expects a GluedParams instance")
    rng = Rng(params.seed)
    m, n = params.m, params.n
    a = orth(uniform_matrix(rng, m, n))
    a = a * (10.0 ** np.linspace(0.0, params.cond_a_glob, n))
    a = a @ orth(gaussian_matrix(rng, n, n))
    block_scale = 10.0 ** np.linspace(0.0, params.cond_a, params.nglued)
    for b in range(params.nbglued):
        lo = b * params.nglued
        hi = lo + params.nglued
        block = a[:, lo:hi] * block_scale
        a[:, lo:hi] = block @ orth(gaussian_matrix(rng, params.nglued, params.nglued))
    return a


def conditioned_matrix(rng, m, n, kappa):
    """Random m x n matrix with singular values log-spaced from 1 to 1/kappa.

    Built as U diag(sigma) V^T with U, V orthonormal bases of Gaussian
    draws, so the target condition number is hit up to rounding.
    """
    m = check_count(m, 1, "m")
    n = check_count(n, 1, "n")
    if m < n:
        raise ValueError(f"need m >= n, got {m}x{n}")
    if kappa < 1.0:
        raise ValueError(f"kappa must be >= 1, got {kappa!r}")
    u = orth(gaussian_matrix(rng, m, n))
    v = orth(gaussian_matrix(rng, n, n))
    if n == 1:
        sigma = np.ones(1)
    else:
        sigma = 10.0 ** np.linspace(0.0, -math.log10(kappa), n)
    return (u * sigma) @ v.T
