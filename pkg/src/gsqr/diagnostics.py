"""Measure the factorization error quantities and audit them per column prefix.

For every prefix k the report records five measured quantities, each next to
its closed-form bound:

    backward error      ||Q_k R_k - A_k||        vs  c1(m,k) ||A_k|| eps
    normal residual     ||R_k^T R_k - A_k^T A_k|| vs  c2(m,k) ||A_k||^2 eps
    norm agreement      ||R_k|| / ||A_k|| - 1    vs  c3(m,k) eps
    orthogonality loss  ||I - Q_k^T Q_k||        vs  c4(m,k) kappa2(R_k)^2 eps
    basis norm          ||Q_k||                  vs  sqrt(2)

All norms are spectral; Frobenius values ride along as a cheap cross-check.
Pass flags are strict (measured <= bound, no slack) so the report stays an
honest measurement; any slack belongs in the consumer's acceptance logic.
kappa2(R_k) is taken from the factorization's own R because that is the
quantity the orthogonality bound is stated in, and it is cheaper to obtain
than kappa2(A_k).

Precision note: the error matrices and Q_k only contribute their largest
singular value, which after Jacobi convergence at pairwise tolerance tau is
exact to (k-1)*tau/2 relative; those four norms therefore run at tau = 1e-9
(error ~1e-8, far below anything the audits or the 5-digit reports resolve).
||A_k|| and the spectrum of R_k stay at full precision: the norm-agreement
audit compares |mu| against c3*eps ~ 1e-13 and kappa needs an accurate
smallest singular value.
"""

import csv
import io as _io
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ._version import __version__ as _version
from .bounds import AssumptionReport, EPS_BINARY64, bound_constants, check_assumption
from .exceptions import SingularInput
from .factorize import QRFactorization, prefix
from .linalg import gram, singular_values, spectral_norm
from .validation import check_matrix

__all__ = [
    "PrefixAudit",
    "DiagnosticsReport",
    "TableDocument",
    "backward_error",
    "normal_residual",
    "orthogonality_loss",
    "diagnose",
    "summary_table",
]

_SQRT2 = math.sqrt(2.0)
# Pairwise Jacobi tolerance for sigma_max-only measurements (see module
# docstring for the error bound).
_MEASURE_TOL = 1e-9


def _sigma_max(a):
    return float(singular_values(a, tol=_MEASURE_TOL).values[0])


def backward_error(a, q, r):
    """Spectral norm of ``Q R - A``."""
    return spectral_norm(q @ r - a)


def normal_residual(a, r):
    """Spectral norm of ``R^T R - A^T A`` (backward error of R as a
    Cholesky factor of the normal-equations matrix)."""
    return spectral_norm(gram(r) - gram(a))


def orthogonality_loss(q):
    """Spectral norm of ``I - Q^T Q``."""
    n = q.shape[1]
    return spectral_norm(np.eye(n) - gram(q))


@dataclass(frozen=True)
class PrefixAudit:
    """Measured quantities and bound comparisons for one column prefix."""

    k: int
    norm_a: float
    norm_r: float
    kappa_r: float
    backward_error: float
    backward_bound: float
    backward_pass: bool
    normal_residual: float
    normal_bound: float
    normal_pass: bool
    mu: float
    mu_bound: float
    mu_pass: bool
    ortho_loss: float
    ortho_bound: float
    ortho_pass: bool
    q_norm: float
    q_norm_limit: float
    q_norm_pass: bool
    backward_error_fro: float
    normal_residual_fro: float
    ortho_loss_fro: float


@dataclass
class DiagnosticsReport:
    """Per-prefix audits for one factorization, plus reproducibility metadata."""

    algorithm: str
    m: int
    n: int
    epsilon: float
    rows: list[PrefixAudit] = field(repr=False)
    kappa_r_full: float = 0.0
    assumption: AssumptionReport | None = None
    seed: int | None = None

    @property
    def summary(self):
        """The k = n row."""
        return self.rows[-1]

    def to_dict(self):
        d = {
            "version": _version,
            "algorithm": self.algorithm,
            "m": self.m,
            "n": self.n,
            "epsilon": self.epsilon,
            "seed": self.seed,
            "kappa_r_full": self.kappa_r_full,
            "assumption": asdict(self.assumption) if self.assumption else None,
            "rows": [asdict(row) for row in self.rows],
            "summary": asdict(self.summary),
        }
        return d

    @classmethod
    def from_dict(cls, d):
        assumption = d.get("assumption")
        return cls(
            algorithm=d["algorithm"],
            m=d["m"],
            n=d["n"],
            epsilon=d["epsilon"],
            rows=[PrefixAudit(**row) for row in d["rows"]],
            kappa_r_full=d["kappa_r_full"],
            assumption=AssumptionReport(**assumption) if assumption else None,
            seed=d.get("seed"),
        )


def _audit_prefix(a_k, f_k, m, k, epsilon):
    sv_a = singular_values(a_k).values
    norm_a = float(sv_a[0])
    sv_r = singular_values(f_k.r).values
    norm_r = float(sv_r[0])
    smin_r = float(sv_r[-1])
    if smin_r == 0.0:
        raise SingularInput(f"R at prefix {k} is exactly singular")
    kappa_r = norm_r / smin_r

    delta = f_k.q @ f_k.r - a_k
    be = _sigma_max(delta)
    be_fro = float(np.linalg.norm(delta))

    resid = gram(f_k.r) - gram(a_k)
    nr = _sigma_max(resid)
    nr_fro = float(np.linalg.norm(resid))

    mu = norm_r / norm_a - 1.0

    defect = np.eye(k) - gram(f_k.q)
    ortho = _sigma_max(defect)
    ortho_fro = float(np.linalg.norm(defect))

    q_norm = _sigma_max(f_k.q)

    c = bound_constants(m, k)
    backward_bound = c.c1 * norm_a * epsilon
    normal_bound = c.c2 * norm_a * norm_a * epsilon
    mu_bound = c.c3 * epsilon
    ortho_bound = c.c4 * kappa_r * kappa_r * epsilon

    return PrefixAudit(
        k=k,
        norm_a=norm_a,
        norm_r=norm_r,
        kappa_r=kappa_r,
        backward_error=be,
        backward_bound=backward_bound,
        backward_pass=bool(be <= backward_bound),
        normal_residual=nr,
        normal_bound=normal_bound,
        normal_pass=bool(nr <= normal_bound),
        mu=mu,
        mu_bound=mu_bound,
        mu_pass=bool(abs(mu) <= mu_bound),
        ortho_loss=ortho,
        ortho_bound=ortho_bound,
        ortho_pass=bool(ortho <= ortho_bound),
        q_norm=q_norm,
        q_norm_limit=_SQRT2,
        q_norm_pass=bool(q_norm <= _SQRT2),
        backward_error_fro=be_fro,
        normal_residual_fro=nr_fro,
        ortho_loss_fro=ortho_fro,
    )


def diagnose(a, f, epsilon=EPS_BINARY64):
    """Audit a factorization of ``a`` at every column prefix.

    ``f`` must have been produced from ``a`` (dimensions are checked).  Each
    prefix is sliced out of the factorization rather than re-factorized,
    which the column-by-column construction makes exact.

    Returns a DiagnosticsReport whose last row is also its summary and whose
    assumption field evaluates the conditioning predicate at k = n.
    """
    a = check_matrix(a)
    if not isinstance(f, QRFactorization):
        raise TypeError("diagnose expects a QRFactorization")
    m, n = a.shape
    if f.q.shape != (m, n) or f.r.shape != (n, n):
        raise ValueError(
            f"factorization shape {f.q.shape} does not match input {a.shape}"
        )
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")

    rows = []
    for k in range(1, n + 1):
        rows.append(_audit_prefix(np.array(a[:, :k]), prefix(f, k), m, k, epsilon))

    kappa_full = rows[-1].kappa_r
    report = DiagnosticsReport(
        algorithm=f.algorithm,
        m=m,
        n=n,
        epsilon=float(epsilon),
        rows=rows,
        kappa_r_full=kappa_full,
        assumption=check_assumption(m, n, kappa_full, epsilon),
    )
    return report


@dataclass
class TableDocument:
    """A small column-labelled table serializable as markdown or CSV."""

    columns: list[str]
    rows: list[list[str]]
    title: str | None = None

    def to_markdown(self):
        lines = []
        if self.title:
            lines.append(f"### {self.title}")
            lines.append("")
        lines.append("| " + " | ".join(self.columns) + " |")
        lines.append("|" + "|".join(" --- " for _ in self.columns) + "|")
        for row in self.rows:
            lines.append("| " + " | ".join(row) + " |")
        return "\n".join(lines) + "\n"

    def to_csv(self):
        buf = _io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        writer.writerows(self.rows)
        return buf.getvalue()


def _sci(value):
    """Scientific notation with 5 significant digits."""
    return f"{value:.4e}"


def summary_table(reports, title=None):
    """One row per report: algorithm, relative normal residual, orthogonality loss.

    Mirrors the layout used to compare the two variants side by side; the
    normal residual is normalized by ``||A||^2`` from the report's own
    summary row.
    """
    if not reports:
        raise ValueError("summary_table needs at least one report")
    rows = []
    for rep in reports:
        s = rep.summary
        rows.append(
            [
                rep.algorithm,
                _sci(s.normal_residual / (s.norm_a * s.norm_a)),
                _sci(s.ortho_loss),
            ]
        )
    return TableDocument(
        columns=["algorithm", "normal_residual/||A||^2", "ortho_loss"],
        rows=rows,
        title=title,
    )
