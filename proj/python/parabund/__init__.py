"""Filtered bundles on the punctured disk: exact calculus, metric models and estimators.

Weights may be given as ``int``, ``str`` ("-1/3") or ``fractions.Fraction`` and come back as
``Fraction``. Metric models are JSON-style dicts, e.g. ``{"line": {"c": "1/3", "N": 2}}``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from . import _core
from ._core import CalculusError, InputError, NumericError, RefusedError

__all__ = [
    "CalculusError", "InputError", "NumericError", "RefusedError",
    "FilteredBundle", "line", "direct_sum", "tensor_model", "dual_model", "unipotent_twist", "perturb", "pullback",
    "evaluate", "curvature_norm", "poincare_density", "predicted_bundle", "raw_frame_degrees",
    "gamma_estimate", "acceptability_scan", "weak_norm_fit", "membership_test", "log_slope_limit", "lelong_estimate",
    "br_value", "diophantine_search", "isotypic_project", "check",
]


def _w(x) -> str:
    if isinstance(x, bool) or not isinstance(x, (int, str, Fraction)):
        raise TypeError(f"weight must be int, str or Fraction, not {type(x).__name__}")
    return str(x)


def _ws(xs: Iterable) -> list[str]:
    return [_w(x) for x in xs]


def _f(xs: Iterable[str]) -> list[Fraction]:
    return [Fraction(x) for x in xs]


class FilteredBundle:
    """Isomorphism class of a filtered bundle, stored as canonical weights in (-1, 0]."""

    def __init__(self, weights: Iterable):
        self._w = _core.canonical_weights(_ws(weights))

    @classmethod
    def _raw(cls, canonical: list[str]) -> "FilteredBundle":
        fb = cls.__new__(cls)
        fb._w = canonical
        return fb

    @property
    def weights(self) -> list[Fraction]:
        return _f(self._w)

    @property
    def rank(self) -> int:
        return len(self._w)

    def __eq__(self, other) -> bool:
        return isinstance(other, FilteredBundle) and sorted(self.weights) == sorted(other.weights)

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.weights)))

    def __repr__(self) -> str:
        return f"FilteredBundle({self._w!r})"

    def par(self, a=0) -> list[Fraction]:
        return _f(_core.par(self._w, _w(a)))

    def gamma(self, a=0) -> Fraction:
        return Fraction(_core.gamma(self._w, _w(a)))

    def frame_exponents(self, a=0) -> list[int]:
        return _core.frame_exponents(self._w, _w(a))

    def jump_set(self, lo, hi) -> list[tuple[Fraction, int]]:
        return [(Fraction(w), k) for w, k in _core.jump_set(self._w, _w(lo), _w(hi))]

    def det(self) -> tuple["FilteredBundle", Fraction]:
        ws, index = _core.det(self._w)
        return FilteredBundle._raw(ws), Fraction(index)

    def dual(self) -> "FilteredBundle":
        return FilteredBundle._raw(_core.dual(self._w))

    def dual_epsilon(self, a=0) -> tuple[Fraction, list[Fraction]]:
        eps, ws = _core.dual_epsilon(self._w, _w(a))
        return Fraction(eps), _f(ws)

    def tensor(self, other: "FilteredBundle") -> "FilteredBundle":
        return FilteredBundle._raw(_core.tensor(self._w, other._w))

    def hom(self, other: "FilteredBundle") -> "FilteredBundle":
        return FilteredBundle._raw(_core.hom(self._w, other._w))

    def hom_exponents(self, other: "FilteredBundle", a=0) -> list[list[int]]:
        return _core.hom_exponents(self._w, other._w, _w(a))

    def cyclic_pullback(self, m: int) -> "FilteredBundle":
        return FilteredBundle._raw(_core.cyclic_pullback(self._w, m))

    def section_degree(self, orders: Sequence[Optional[int]]) -> Optional[Fraction]:
        d = _core.section_degree(self._w, list(orders))
        return None if d is None else Fraction(d)

    def is_compatible_frame(self, degrees: Iterable, a=0) -> bool:
        return _core.is_compatible_frame(self._w, _w(a), _ws(degrees))


def line(c, N: int = 0) -> dict:
    return {"line": {"c": _w(c), "N": N}}


def direct_sum(*models: dict) -> dict:
    return {"direct_sum": list(models)}


def tensor_model(*models: dict) -> dict:
    return {"tensor": list(models)}


def dual_model(model: dict) -> dict:
    return {"dual": model}


def unipotent_twist(U, model: dict) -> dict:
    rows = [[[complex(x).real, complex(x).imag] for x in row] for row in U]
    return {"gauge": {"unipotent": rows, "model": model}}


def perturb(model: dict, log_power: Optional[float] = None, radial_power: Optional[float] = None, coef: float = 1.0) -> dict:
    if (log_power is None) == (radial_power is None):
        raise ValueError("give exactly one of log_power and radial_power")
    rho = {"log_power": log_power} if log_power is not None else {"radial_power": radial_power}
    rho["coef"] = coef
    return {"perturb": {"rho": rho, "model": model}}


def pullback(m: int, model: dict) -> dict:
    return {"pullback": {"m": m, "model": model}}


def _m(model: dict) -> str:
    return json.dumps(model)


def evaluate(model: dict, z: complex):
    """Gram matrix H(z) as a complex numpy array."""
    return _core.evaluate(_m(model), complex(z))


def curvature_norm(model: dict, z: complex) -> float:
    return _core.curvature_norm(_m(model), complex(z))


poincare_density = _core.poincare_density


def predicted_bundle(model: dict) -> FilteredBundle:
    return FilteredBundle._raw(_core.predicted_bundle(_m(model)))


def raw_frame_degrees(model: dict) -> list[Fraction]:
    return _f(_core.raw_frame_degrees(_m(model)))


def gamma_estimate(model: dict, schedule: str = "", tolerance: float = _core.default_residual_tolerance) -> dict:
    return json.loads(_core.gamma_estimate(_m(model), schedule, tolerance))


def acceptability_scan(model: dict, schedule: str = "") -> dict:
    return json.loads(_core.acceptability_scan(_m(model), schedule))


def weak_norm_fit(model: dict, schedule: str = "", rate_tolerance: float = _core.default_rate_tolerance) -> dict:
    return json.loads(_core.weak_norm_fit(_m(model), schedule, rate_tolerance))


def membership_test(model: dict, k: int, a, schedule: str = "") -> dict:
    return json.loads(_core.membership_test(_m(model), k, _w(a), schedule))


def log_slope_limit(f: Callable[[complex], float], schedule: str = "", tolerance: float = _core.default_residual_tolerance) -> dict:
    return json.loads(_core.log_slope_limit(f, schedule, tolerance))


def lelong_estimate(u: Callable[[complex], float], schedule: str = "", tolerance: float = _core.default_residual_tolerance) -> dict:
    return json.loads(_core.lelong_estimate(u, schedule, tolerance))


def br_value(w: complex, r: float) -> dict:
    return json.loads(_core.br_value(complex(w), r))


def diophantine_search(alpha: Sequence[float], q: float) -> dict:
    return json.loads(_core.diophantine_search(list(alpha), q))


def isotypic_project(values: Sequence[complex], j: int) -> complex:
    return _core.isotypic_project([complex(v) for v in values], j)


def check(model: dict, checks: Sequence[str] = (), schedule: str = "", tolerance: Optional[float] = None, anchor=0) -> dict:
    """Predict-vs-estimate report for a model, as produced by ``parabund check``."""
    return json.loads(_core.check(_m(model), list(checks), schedule, tolerance, _w(anchor)))
