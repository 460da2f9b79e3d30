"""scikit-learn style wrappers around the reduction and the phase search."""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .critical import _damped_newton, minimize_classify
from .landau import InvariantExpansion, LdGCoefficients, expand
from .normalize import build_h, reduce
from .poly5 import CompiledPoly, NVARS, Poly5


def as_coefficients(X) -> LdGCoefficients:
    """Accept an LdGCoefficients, a ``{"c1": ...}`` mapping, or 9 numbers (also one row)."""
    if isinstance(X, LdGCoefficients):
        return X
    if isinstance(X, Mapping):
        return LdGCoefficients.from_json(dict(X))
    vals = list(np.asarray(X, dtype=object).reshape(-1))
    if len(vals) != 9:
        raise ValueError("expected 9 coefficients c1..c9")
    return LdGCoefficients.from_sequence([_exact(v) for v in vals])


def _exact(v):
    if isinstance(v, (int, Fraction, np.integer)):
        return Fraction(int(v)) if isinstance(v, np.integer) else Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    return Fraction(float(v))


def _points(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.shape[1] != NVARS:
        raise ValueError(f"points have {NVARS} coordinates, got {X.shape[1]}")
    return X


class NormalFormReducer(BaseEstimator, TransformerMixin):
    """Fit the near-identity change of variables; transform maps ``x -> x + h(x)``.

    Parameters mirror :func:`ldgnormal.normalize.reduce`.  After ``fit`` the
    exact report is in ``report_`` and the shift coefficients in ``ks_``.
    """

    def __init__(self, order=6, regime="auto", mode="full", case="a", k4=0, k8=0,
                 method="diagonal"):
        self.order = order
        self.regime = regime
        self.mode = mode
        self.case = case
        self.k4 = k4
        self.k8 = k8
        self.method = method

    def fit(self, X, y=None):
        c = as_coefficients(X)
        self.coefficients_ = c
        self.report_ = reduce(c, self.order, self.regime, self.mode, self.case,
                              Fraction(self.k4), Fraction(self.k8), self.method)
        self.ks_ = self.report_.ks
        self.reduced_ = self.report_.reduced.surviving
        self.verified_ = self.report_.verified
        self.h_ = build_h(self.ks_)
        self._h_eval = [CompiledPoly(p) if p else None for p in self.h_]
        self.n_features_in_ = NVARS
        return self

    def _check(self):
        if not hasattr(self, "report_"):
            raise NotFittedError("NormalFormReducer is not fitted yet")

    def shift(self, X) -> np.ndarray:
        """``h(x)`` row by row."""
        self._check()
        X = _points(X)
        out = np.zeros_like(X)
        for j, ev in enumerate(self._h_eval):
            if ev is not None:
                out[:, j] = [ev.value(x) for x in X]
        return out

    def transform(self, X) -> np.ndarray:
        X = _points(X)
        return X + self.shift(X)

    def reduced_potential(self) -> Poly5:
        self._check()
        return expand(self.reduced_)


class PhaseMinimizer(BaseEstimator):
    """Locate local minima of an invariant potential and label points by the minimum they reach.

    ``fit`` takes an :class:`InvariantExpansion`, an invariant Poly5, or a
    coefficient record.  ``predict`` runs the same descent from each row and
    returns the phase label of the minimum reached.
    """

    def __init__(self, starts=16, seed=0, dedup_tol=1e-8):
        self.starts = starts
        self.seed = seed
        self.dedup_tol = dedup_tol

    def fit(self, X, y=None):
        e = X
        if not isinstance(X, (InvariantExpansion, Poly5)):
            e = as_coefficients(X).expansion()
        self.minima_ = minimize_classify(e, self.starts, self.seed, self.dedup_tol)
        self.classes_ = np.array(sorted({m.label for m in self.minima_}))
        ef = e if isinstance(e, Poly5) else expand(InvariantExpansion([float(v) for v in e]))
        self._cp = CompiledPoly(ef)
        self.n_features_in_ = NVARS
        return self

    def _nearest(self, x: np.ndarray) -> int:
        from .so3rep import invariants
        from .poly5 import evaluate
        t2p, t3p = invariants()
        xr, *_ = _damped_newton(self._cp, x)
        t2, t3 = float(evaluate(t2p, list(xr))), float(evaluate(t3p, list(xr)))
        d = [abs(m.t2 - t2) + abs(m.t3 - t3) for m in self.minima_]
        return int(np.argmin(d))

    def descend(self, X) -> np.ndarray:
        """Index into ``minima_`` of the minimum reached from each row."""
        if not hasattr(self, "minima_"):
            raise NotFittedError("PhaseMinimizer is not fitted yet")
        return np.array([self._nearest(x) for x in _points(X)], dtype=int)

    def predict(self, X) -> np.ndarray:
        idx = self.descend(X)
        return np.array([self.minima_[i].label for i in idx])

    def global_minimum(self):
        if not hasattr(self, "minima_"):
            raise NotFittedError("PhaseMinimizer is not fitted yet")
        return self.minima_[0]
