"""gsqr: classical Gram-Schmidt QR factorization with two diagonal formulas,
plus the measurement harness that audits their floating-point error bounds.

The library exposes three layers:

* factorization kernels (``cgs_s``, ``cgs_p``, ``householder_qr``) returning
  a ``QRFactorization`` with per-column traces;
* the audit machinery (``diagnose``, ``bound_constants``,
  ``check_assumption``) that measures backward error, normal-equations
  residual, norm agreement, orthogonality loss and basis norm per column
  prefix against their closed-form bounds;
* scikit-learn style transformers (``GramSchmidtQR``, ``HouseholderQR``)
  so the factorizations compose with pipelines.

Deterministic test matrices (Hilbert, Pascal, the glued family) live in
``gsqr.datasets``; the ``gsqr`` command line drives everything end to end.
"""

from ._version import __version__
from .bounds import (
    AssumptionReport,
    BoundConstants,
    EPS_BINARY64,
    bound_constants,
    check_assumption,
    relate_kappa,
)
from .datasets import (
    GluedParams,
    Rng,
    conditioned_matrix,
    example1_matrix,
    gaussian_matrix,
    glued_matrix,
    hilbert,
    pascal,
    uniform_matrix,
)
from .diagnostics import (
    DiagnosticsReport,
    PrefixAudit,
    TableDocument,
    backward_error,
    diagnose,
    normal_residual,
    orthogonality_loss,
    summary_table,
)
from .estimators import GramSchmidtQR, HouseholderQR
from .exceptions import (
    Breakdown,
    GsqrError,
    NonConvergence,
    ParseError,
    RankDeficient,
    SingularInput,
    VacuousBound,
)
from .factorize import (
    CGS_P,
    CGS_S,
    HOUSEHOLDER,
    QRFactorization,
    StepTrace,
    cgs_p,
    cgs_s,
    householder_qr,
    orth,
    prefix,
)
from .io import read_matrix, write_matrix
from .linalg import (
    SingularSpectrum,
    cond2,
    gram,
    singular_values,
    spectral_norm,
    vec_norm2,
)

__all__ = [
    "__version__",
    # linalg
    "SingularSpectrum",
    "vec_norm2",
    "gram",
    "singular_values",
    "spectral_norm",
    "cond2",
    # factorization
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
    # bounds
    "EPS_BINARY64",
    "BoundConstants",
    "AssumptionReport",
    "bound_constants",
    "check_assumption",
    "relate_kappa",
    # diagnostics
    "PrefixAudit",
    "DiagnosticsReport",
    "TableDocument",
    "backward_error",
    "normal_residual",
    "orthogonality_loss",
    "diagnose",
    "summary_table",
    # datasets
    "Rng",
    "GluedParams",
    "hilbert",
    "pascal",
    "example1_matrix",
    "uniform_matrix",
    "gaussian_matrix",
    "glued_matrix",
    "conditioned_matrix",
    # estimators
    "GramSchmidtQR",
    "HouseholderQR",
    # io
    "read_matrix",
    "write_matrix",
    # errors
    "GsqrError",
    "Breakdown",
    "NonConvergence",
    "SingularInput",
    "RankDeficient",
    "VacuousBound",
    "ParseError",
]
