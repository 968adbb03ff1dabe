"""scikit-learn style wrapper: fit a configuration fan, then locate points in it."""

from __future__ import annotations

from fractions import Fraction
from numbers import Integral, Rational

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .chow import LATTICE_READINGS, configuration_fan
from .cones import Position
from .scaffolds import Scaffold


def _to_fraction(x, where: str) -> Fraction:
    if isinstance(x, bool):
        raise ValueError(f"{where}: booleans are not coordinates")
    if isinstance(x, (Integral, Rational)):
        return Fraction(x)
    if isinstance(x, (float, np.floating)):
        if not float(x).is_integer():
            raise ValueError(f"{where}: non-integral float {x!r}; pass a Fraction or a 'p/q' string")
        return Fraction(int(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"{where}: cannot read {x!r} as a rational number") from None
    raise ValueError(f"{where}: unsupported coordinate type {type(x).__name__}")


def check_points(X, n_features: int) -> list[tuple[Fraction, ...]]:
    """Validate a 2-d batch of exact rational points."""
    if isinstance(X, np.ndarray):
        if X.ndim != 2:
            raise ValueError(f"expected a 2-d array, got {X.ndim} dimensions")
        rows = X.tolist()
    else:
        rows = list(X)
    out = []
    for i, row in enumerate(rows):
        row = list(row)
        if len(row) != n_features:
            raise ValueError(f"row {i} has {len(row)} coordinates, expected {n_features}")
        out.append(tuple(_to_fraction(x, f"row {i}, column {j}") for j, x in enumerate(row)))
    return out


def check_scaffold(s) -> Scaffold:
    if not isinstance(s, Scaffold):
        raise TypeError(f"fit expects a Scaffold, got {type(s).__name__}")
    return s


class ConfigurationSpace(TransformerMixin, BaseEstimator):
    """Configuration fan of a scaffold.

    fit(scaffold) builds the fan; predict(points) returns, per point, the index
    of the cone (in the fan's canonical cone order) whose relative interior
    contains it; transform(points) returns the 0/1 membership matrix against
    the maximal cones.
    """

    def __init__(self, lattice_reading: str = "equal", certify: bool = True):
        self.lattice_reading = lattice_reading
        self.certify = certify

    def fit(self, X, y=None):
        s = check_scaffold(X)
        if self.lattice_reading not in LATTICE_READINGS:
            raise ValueError(f"lattice_reading must be one of {LATTICE_READINGS}")
        self.configuration_ = configuration_fan(s, self.lattice_reading, certify=self.certify)
        fan = self.configuration_.pi_fan.fan
        self.n_features_in_ = s.base_rank
        self.cones_ = fan.all_cones
        self.maximal_cones_ = fan.maximal_cones
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "configuration_")
        fan = self.configuration_.pi_fan.fan
        pts = check_points(X, self.n_features_in_)
        return np.array([fan.index(fan.locate(p)) for p in pts], dtype=np.int64)

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "configuration_")
        pts = check_points(X, self.n_features_in_)
        out = np.zeros((len(pts), len(self.maximal_cones_)), dtype=np.int8)
        for i, p in enumerate(pts):
            for j, c in enumerate(self.maximal_cones_):
                if c.contains(p) is not Position.OUTSIDE:
                    out[i, j] = 1
        return out

    def fit_transform(self, X, y=None, **fit_params):
        raise TypeError("fit takes a scaffold and transform takes points; call them separately")
