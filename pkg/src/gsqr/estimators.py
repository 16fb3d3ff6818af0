"""Scikit-learn style estimator facade over the factorization kernels.

``fit`` factorizes the training matrix (rows are samples, columns are
features) and stores Q, R and the per-column traces as fitted attributes.
``transform`` maps samples into the orthonormalized feature coordinates by
a triangular solve against R, so ``fit_transform(A)`` recovers the computed
Q exactly; ``inverse_transform`` multiplies back by R.  The estimators
clone, pickle and compose in pipelines like any other transformer.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .factorize import cgs_p, cgs_s, householder_qr
from .validation import check_tall

__all__ = ["GramSchmidtQR", "HouseholderQR"]


class _QRTransformer(BaseEstimator, TransformerMixin):
    def _factorize(self, x):
        raise NotImplementedError

    def fit(self, X, y=None):
        X = check_tall(X, name="X")
        f = self._factorize(X)
        self.factorization_ = f
        self.q_ = f.q
        self.r_ = f.r
        self.traces_ = f.traces
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        """Coordinates of the rows of ``X`` in the fitted orthonormal basis."""
        check_is_fitted(self, "r_")
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X must have {self.n_features_in_} columns, got shape {X.shape}"
            )
        # each row z solves z R = x, i.e. R^T z^T = x^T with R^T lower
        # triangular: forward substitution
        rt = self.r_.T
        n = rt.shape[0]
        zt = np.zeros((n, X.shape[0]))
        xt = X.T
        for i in range(n):
            zt[i] = (xt[i] - rt[i, :i] @ zt[:i]) / rt[i, i]
        return zt.T

    def fit_transform(self, X, y=None):
        """Factorize and return the computed Q itself (not a re-solve)."""
        return self.fit(X, y).q_

    def inverse_transform(self, Z):
        check_is_fitted(self, "r_")
        Z = np.asarray(Z, dtype=np.float64)
        return Z @ self.r_


class GramSchmidtQR(_QRTransformer):
    """Classical Gram-Schmidt orthogonalizer with selectable diagonal formula.

    Parameters:
        variant: "pythagorean" (default) computes the diagonal of R from the
            column and projection norms, which preserves the backward error
            of ``R^T R`` against ``A^T A`` on ill-conditioned input;
            "standard" uses ``r_kk = ||v_k||``.

    Attributes (after fit):
        q_, r_: the factors; traces_: per-column norm records;
        factorization_: the full QRFactorization.
    """

    def __init__(self, variant="pythagorean"):
        self.variant = variant

    def _factorize(self, x):
        if self.variant == "pythagorean":
            return cgs_p(x)
        if self.variant == "standard":
            return cgs_s(x)
        raise ValueError(
            f"variant must be 'pythagorean' or 'standard', got {self.variant!r}"
        )


class HouseholderQR(_QRTransformer):
    """Householder QR as a transformer; the reference orthogonalizer."""

    def _factorize(self, x):
        return householder_qr(x)
