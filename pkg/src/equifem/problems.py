"""Benchmark problems with closed-form solutions.

reaction_diffusion
    ``-eps u'' + u = -2 eps - x(1 - x) - 1``; layers at both ends (default eps = 1e-5).
convection_dominated
    ``-eps u'' + (1 - eps/2) u' + (1 - eps/4) u / 4 = exp(-x/4)``; layer at x = 1
    (default eps = 2e-3).
babuska_rheinboldt
    ``-((x + alpha)^p u')' + (x + alpha)^q u = f`` with f manufactured so that
    ``u = (x + alpha)^r - (alpha^r (1 - x) + (1 + alpha)^r x)``
    (defaults p = 2, q = 1, r = -1, alpha = 0.01).

For every problem the exact residual is ``r = -a u''``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

import numpy as np

from .exceptions import InvalidArgument
from .fem import Problem


class Benchmark(str, Enum):
    REACTION_DIFFUSION = "reaction_diffusion"
    CONVECTION_DOMINATED = "convection_dominated"
    BABUSKA_RHEINBOLDT = "babuska_rheinboldt"


DEFAULTS = {
    Benchmark.REACTION_DIFFUSION: {"epsilon": 1e-5},
    Benchmark.CONVECTION_DOMINATED: {"epsilon": 2e-3},
    Benchmark.BABUSKA_RHEINBOLDT: {"p": 2.0, "q": 1.0, "r": -1.0, "alpha": 0.01},
}


@dataclass(frozen=True)
class BenchmarkSpec:
    name: Benchmark
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        try:
            name = Benchmark(self.name)
        except ValueError:
            known = ", ".join(b.value for b in Benchmark)
            raise InvalidArgument(f"unknown benchmark {self.name!r} (known: {known})") from None
        unknown = set(self.params) - set(DEFAULTS[name])
        if unknown:
            raise InvalidArgument(f"unknown parameters for {name.value}: {sorted(unknown)}")
        params = {**DEFAULTS[name], **{k: float(v) for k, v in self.params.items()}}
        if "epsilon" in params and not params["epsilon"] > 0:
            raise InvalidArgument("epsilon must be positive")
        if "alpha" in params and not params["alpha"] > 0:
            raise InvalidArgument("alpha must be positive")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "params", params)


def _decay(z, width):
    """``exp(-z/width)`` for ``z >= 0``; underflows cleanly to 0."""
    return np.exp(-np.maximum(z, 0.0) / width)


def _const(value):
    return lambda x: np.full_like(x, value, dtype=float)


def reaction_diffusion(epsilon: float = 1e-5) -> Problem:
    s = np.sqrt(epsilon)
    scale = 1.0 / (1.0 - _decay(2.0, s))

    def layers(x):
        return _decay(1 - x, s) - _decay(1 + x, s) + _decay(x, s) - _decay(2 - x, s)

    def u(x):
        return scale * layers(x) - x * (1 - x) - 1

    def du(x):
        d = _decay(1 - x, s) + _decay(1 + x, s) - _decay(x, s) - _decay(2 - x, s)
        return scale * d / s - (1 - 2 * x)

    def r(x):
        # -eps u''
        return -scale * layers(x) - 2 * epsilon

    return Problem(
        a=_const(epsilon),
        c=_const(1.0),
        f=lambda x: -2 * epsilon - x * (1 - x) - 1,
        u=u,
        du=du,
        r=r,
        label=f"reaction_diffusion(epsilon={epsilon:g})",
    )


def convection_dominated(epsilon: float = 2e-3) -> Problem:
    denom = 1.0 - _decay(1.0, epsilon)
    tail = _decay(1.0, epsilon)

    def g(x):
        return (_decay(1 - x, epsilon) - tail) / denom

    def dg(x):
        return _decay(1 - x, epsilon) / (epsilon * denom)

    def u(x):
        return np.exp(-x / 4) * (x - g(x))

    def du(x):
        return np.exp(-x / 4) * (1 - dg(x) - (x - g(x)) / 4)

    def d2u(x):
        w = np.exp(-x / 4)
        return w * (-dg(x) / epsilon - (1 - dg(x)) / 2 + (x - g(x)) / 16)

    return Problem(
        a=_const(epsilon),
        b=_const(1 - epsilon / 2),
        c=_const(0.25 * (1 - epsilon / 4)),
        f=lambda x: np.exp(-x / 4),
        u=u,
        du=du,
        r=lambda x: -epsilon * d2u(x),
        label=f"convection_dominated(epsilon={epsilon:g})",
    )


def babuska_rheinboldt(p: float = 2.0, q: float = 1.0, r: float = -1.0, alpha: float = 0.01) -> Problem:
    slope = (1 + alpha) ** r - alpha**r

    def u(x):
        return (x + alpha) ** r - (alpha**r * (1 - x) + (1 + alpha) ** r * x)

    def du(x):
        return r * (x + alpha) ** (r - 1) - slope

    def d2u(x):
        return r * (r - 1) * (x + alpha) ** (r - 2)

    def a(x):
        return (x + alpha) ** p

    def da(x):
        return p * (x + alpha) ** (p - 1)

    def c(x):
        return (x + alpha) ** q

    def f(x):
        return -(da(x) * du(x) + a(x) * d2u(x)) + c(x) * u(x)

    return Problem(
        a=a,
        da=da,
        c=c,
        f=f,
        u=u,
        du=du,
        r=lambda x: -a(x) * d2u(x),
        label=f"babuska_rheinboldt(p={p:g}, q={q:g}, r={r:g}, alpha={alpha:g})",
    )


_BUILDERS = {
    Benchmark.REACTION_DIFFUSION: reaction_diffusion,
    Benchmark.CONVECTION_DOMINATED: convection_dominated,
    Benchmark.BABUSKA_RHEINBOLDT: babuska_rheinboldt,
}


def make_problem(spec: BenchmarkSpec | str, **params) -> Problem:
    """Build a benchmark problem from a spec or a benchmark name plus overrides."""
    if not isinstance(spec, BenchmarkSpec):
        spec = BenchmarkSpec(spec, params)
    elif params:
        spec = BenchmarkSpec(spec.name, {**spec.params, **params})
    return _BUILDERS[spec.name](**spec.params)
