"""Closed-form rounding-error coefficients and the conditioning predicate.

The coefficients bound, for an m x k column prefix factorized by the
Pythagorean variant and machine unit eps:

    c1(m,k) * ||A_k|| * eps          backward error ||Q_k R_k - A_k||
    c2(m,k) * ||A_k||^2 * eps        normal-equations residual ||R^T R - A^T A||
    c3(m,k) * eps                    relative norm agreement  | ||R_k||/||A_k|| - 1 |
    c4(m,k) * kappa2(R_k)^2 * eps    orthogonality loss ||I - Q^T Q||

They are meaningful whenever ``c4(m,k) * eps * kappa2(R_k)^2 < 1``; the
predicate is advisory, not fatal, because the orthogonality-loss audit is
still informative (and routinely reported) on inputs that violate it.
"""

import math
from dataclasses import dataclass

from .exceptions import VacuousBound
from .validation import check_count

__all__ = [
    "EPS_BINARY64",
    "BoundConstants",
    "AssumptionReport",
    "bound_constants",
    "check_assumption",
    "relate_kappa",
]

# Unit roundoff of IEEE binary64.  Every bound takes epsilon as a parameter
# and merely defaults to this value.
EPS_BINARY64 = 2.0 ** -52


@dataclass(frozen=True)
class BoundConstants:
    """Evaluated coefficients for a given prefix shape (m rows, k columns)."""

    c1: float
    c2: float
    c3: float
    c4: float
    m: int
    k: int


@dataclass(frozen=True)
class AssumptionReport:
    """Result of the conditioning predicate ``c4 * eps * kappa^2 < 1``."""

    m: int
    k: int
    kappa_r: float
    epsilon: float
    lhs: float
    satisfied: bool


def bound_constants(m, k):
    """Evaluate c1..c4 for an m x k prefix.

    The k = 1 column has its own, much smaller constants; the identities
    ``c3 = 0.5 * c2`` and ``c4 = c2 + 2 * c1`` hold exactly (they are
    computed that way, and halving and adding are exact here).
    """
    m = check_count(m, 1, "m")
    k = check_count(k, 1, "k")
    if k == 1:
        c1 = 1.0
        c2 = float(m + 2)
    else:
        c1 = 2.0 * math.sqrt(2.0) * m * k + 2.0 * math.sqrt(k)
        c2 = 3.5 * m * k * k - 1.5 * m * k + 16.0 * k
    c3 = 0.5 * c2
    c4 = c2 + 2.0 * c1
    return BoundConstants(c1=c1, c2=c2, c3=c3, c4=c4, m=m, k=k)


def check_assumption(m, k, kappa_r, epsilon=EPS_BINARY64):
    """Evaluate ``c4(m,k) * epsilon * kappa_r^2`` against 1.

    Advisory only: callers may proceed when the predicate fails, but must
    surface the flag in their reports since the orthogonality-loss bound is
    vacuous in that regime.
    """
    if kappa_r < 1.0:
        raise ValueError(f"kappa_r must be >= 1, got {kappa_r!r}")
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    c = bound_constants(m, k)
    lhs = c.c4 * epsilon * kappa_r * kappa_r
    return AssumptionReport(
        m=c.m,
        k=c.k,
        kappa_r=float(kappa_r),
        epsilon=float(epsilon),
        lhs=float(lhs),
        satisfied=bool(lhs < 1.0),
    )


def relate_kappa(kappa_r, m, k, epsilon=EPS_BINARY64):
    """Multiplicative factor bounding ``kappa2(R_k) / kappa2(A_k)``.

    Returns ``(1 + c3 * eps) / sqrt(1 - zeta)`` with
    ``zeta = eps * c2(m,k) * kappa_r^2``, dropping second-order terms in
    eps.  Callers divide or multiply as needed to move between the two
    condition numbers.

    Raises:
        VacuousBound: when ``zeta >= 1`` and the relation says nothing.
    """
    if kappa_r < 1.0:
        raise ValueError(f"kappa_r must be >= 1, got {kappa_r!r}")
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    c = bound_constants(m, k)
    zeta = epsilon * c.c2 * kappa_r * kappa_r
    if zeta >= 1.0:
        raise VacuousBound(f"zeta = {zeta:.3e} >= 1; the bound is vacuous")
    return (1.0 + c.c3 * epsilon) / math.sqrt(1.0 - zeta)
