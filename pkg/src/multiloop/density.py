"""Numerical density demonstrations: Fourier truncation on the real torus and
the integrate-the-derivative Weierstrass construction on [0, 1].

Torus computations run in a private mpmath context (default 150 digits):
truncation errors of analytic functions fall below 1e-100 at N = 64, far
under the double-precision floor, and the convergence checks need to see
them.  The interval (Bernstein) side is plain numpy double precision.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import mpmath
import numpy as np

DEFAULT_DPS = 150


def make_context(dps: int = DEFAULT_DPS) -> mpmath.MPContext:
    ctx = mpmath.MPContext()
    ctx.dps = dps
    return ctx


# ---------------------------------------------------------------------------
# torus catalogue

@lru_cache(maxsize=None)
def _exp_sin_factors(k: int) -> tuple[dict, ...]:
    """P_0..P_k with d^j/dθ^j exp(sin θ) = P_j(sin θ, cos θ) exp(sin θ).

    P_{j+1} = dP_j/dθ + cos θ * P_j, polynomials stored as {(i, j): c} for sin^i cos^j.
    """
    out = [{(0, 0): 1}]
    for _ in range(k):
        p = out[-1]
        q: dict = {}
        for (i, j), c in p.items():
            for key, v in (((i - 1, j + 1), i * c), ((i + 1, j - 1), -j * c), ((i, j + 1), c)):
                if v:
                    q[key] = q.get(key, 0) + v
        out.append({key: v for key, v in q.items() if v})
    return tuple(out)


def _exp_sin_derivative(ctx, theta, order: int):
    s, c = ctx.sin(theta), ctx.cos(theta)
    p = _exp_sin_factors(order)[order]
    poly = ctx.fsum(v * s ** i * c ** j for (i, j), v in p.items())
    return poly * ctx.exp(s)


def _exp_cos_derivative(ctx, theta, order: int):
    # exp(cos θ) = exp(sin(θ + π/2))
    return _exp_sin_derivative(ctx, theta + ctx.pi / 2, order)


def _hermite_e(k: int, x, ctx):
    # probabilists' Hermite He_k by the three-term recurrence
    a, b = ctx.mpf(1), x
    if k == 0:
        return a
    for j in range(1, k):
        a, b = b, x * b - j * a
    return b


GAUSS_WIDTH = Fraction(7, 10)


def _gauss_periodic_derivative(ctx, theta, order: int):
    """Periodization of exp(-(θ-π)^2 / (2 s^2)) and its derivatives via Hermite polynomials."""
    s = ctx.mpf(GAUSS_WIDTH.numerator) / GAUSS_WIDTH.denominator
    # images beyond J periods contribute below 10^-(dps + 10)
    J = int(math.ceil(float(s) * math.sqrt(2 * math.log(10) * (ctx.dps + 10)) / (2 * math.pi))) + 1
    total = ctx.mpf(0)
    for j in range(-J, J + 1):
        x = (theta - ctx.pi + 2 * ctx.pi * j) / s
        total += _hermite_e(order, x, ctx) * ctx.exp(-x * x / 2)
    return total * (-1) ** order / s ** order


@dataclass(frozen=True)
class SmoothTestFunction:
    """Catalogue function on the real torus with exact derivative rule.

    ``rule(ctx, thetas, alpha)`` returns the mixed partial of order alpha at
    the point thetas.  ``exact_coeffs`` is set when the function is itself a
    trigonometric polynomial.
    """
    name: str
    n: int
    rule: Callable = dc_field(repr=False, compare=False)
    exact_coeffs: tuple = dc_field(default=(), repr=False, compare=False)

    def derivative(self, ctx, thetas: Sequence, alpha: Sequence[int]):
        return self.rule(ctx, tuple(thetas), tuple(alpha))

    def __call__(self, ctx, thetas: Sequence):
        return self.derivative(ctx, thetas, (0,) * self.n)

    @property
    def degree(self) -> int | None:
        if not self.exact_coeffs:
            return None
        return max(max(abs(x) for x in m) for m, _ in self.exact_coeffs)


def _separable(one_d: Callable) -> Callable:
    def rule(ctx, thetas, alpha):
        out = ctx.mpf(1)
        for t, a in zip(thetas, alpha):
            out *= one_d(ctx, t, a)
        return out
    return rule


def _trig_rule(coeffs) -> Callable:
    def rule(ctx, thetas, alpha):
        thetas = [ctx.mpf(t) for t in thetas]
        total = ctx.mpc(0)
        for m, c in coeffs:
            c = ctx.mpc(c.real, c.imag) if isinstance(c, complex) else ctx.mpf(c)
            fac = ctx.mpc(1)
            for mk, ak in zip(m, alpha):
                fac *= (1j * mk) ** ak
            total += c * fac * ctx.expj(ctx.fsum(mk * t for mk, t in zip(m, thetas)))
        return total
    return rule


# 1 + cos θ - (1/2) sin 3θ + (1/4) cos 5θ, written in exponentials
_TRIG1 = (((0,), 1.0), ((1,), 0.5), ((-1,), 0.5), ((3,), 0.25j), ((-3,), -0.25j),
          ((5,), 0.125), ((-5,), 0.125))
# cos θ1 sin 2θ2 + (1/2) cos(θ1 - θ2)
_TRIG2 = (((1, 2), -0.25j), ((-1, 2), -0.25j), ((1, -2), 0.25j), ((-1, -2), 0.25j),
          ((1, -1), 0.25), ((-1, 1), 0.25))

CATALOGUE: dict[str, SmoothTestFunction] = {
    "exp-sin": SmoothTestFunction("exp-sin", 1, _separable(_exp_sin_derivative)),
    "exp-cos2": SmoothTestFunction("exp-cos2", 2, _separable(_exp_cos_derivative)),
    "gauss-periodic": SmoothTestFunction("gauss-periodic", 1, _separable(_gauss_periodic_derivative)),
    "trig-poly": SmoothTestFunction("trig-poly", 1, _trig_rule(_TRIG1), _TRIG1),
    "trig-poly2": SmoothTestFunction("trig-poly2", 2, _trig_rule(_TRIG2), _TRIG2),
}


def catalogue(name: str) -> SmoothTestFunction:
    try:
        return CATALOGUE[name]
    except KeyError:
        raise KeyError(f"unknown torus function {name!r}; choose from {sorted(CATALOGUE)}") from None


# ---------------------------------------------------------------------------
# trigonometric polynomials

class TrigPoly:
    """sum_m c_m e^{i m.θ}, i.e. the Laurent polynomial sum_m c_m t^m at t_k = e^{iθ_k}."""

    def __init__(self, ctx, n: int, coeffs: dict):
        self.ctx = ctx
        self.n = n
        self.coeffs = {tuple(m): ctx.mpc(c) for m, c in coeffs.items()}

    @property
    def degree(self) -> int:
        return max((max(abs(x) for x in m) for m in self.coeffs), default=0)

    def derivative(self, alpha: Sequence[int]) -> TrigPoly:
        """Analytic mixed partial: multiply c_m by prod (i m_k)^alpha_k."""
        out = {}
        for m, c in self.coeffs.items():
            fac = self.ctx.mpc(1)
            for mk, ak in zip(m, alpha):
                fac *= self.ctx.mpc(0, mk) ** ak
            out[m] = c * fac
        return TrigPoly(self.ctx, self.n, out)

    def evaluate(self, thetas: Sequence) -> object:
        ctx = self.ctx
        return ctx.fsum(c * ctx.expj(ctx.fsum(mk * t for mk, t in zip(m, thetas)))
                        for m, c in self.coeffs.items())

    def evaluate_grid(self, grid: int, alpha: Sequence[int] | None = None) -> dict:
        """Values of the alpha-derivative at the uniform product grid, keyed by grid index."""
        p = self.derivative(alpha) if alpha is not None and any(alpha) else self
        return {idx: p.evaluate(_grid_point(self.ctx, idx, grid)) for idx in _grid_indices(self.n, grid)}

    def to_laurent(self, field=None, max_denominator: int = 10 ** 12):
        """Round the coefficients into Q(i) and return an exact LaurentPoly."""
        from .exactnum import make_cyclotomic
        from .laurent import LaurentPoly
        field = field or make_cyclotomic(4)
        if field.order % 4:
            raise ValueError("complex coefficients need a field containing i (order divisible by 4)")
        i = field.root_of_unity(field.order // 4)
        terms = {}
        for m, c in self.coeffs.items():
            re = Fraction(str(self.ctx.nstr(c.real, 40))).limit_denominator(max_denominator)
            im = Fraction(str(self.ctx.nstr(c.imag, 40))).limit_denominator(max_denominator)
            terms[m] = field(re) + i * field(im)
        return LaurentPoly(self.n, terms, field)

    def __repr__(self):
        return f"TrigPoly(n={self.n}, degree={self.degree}, terms={len(self.coeffs)})"


def _grid_indices(n: int, grid: int):
    return itertools.product(range(grid), repeat=n)


def _grid_point(ctx, idx, grid):
    return tuple(2 * ctx.pi * j / grid for j in idx)


def _quadrature_coeffs(ctx, f: SmoothTestFunction, N: int, alpha: Sequence[int]) -> dict:
    P = max(4 * N + 1, 64)
    vals = {idx: f.derivative(ctx, _grid_point(ctx, idx, P), alpha) for idx in _grid_indices(f.n, P)}
    # separable DFT, one axis at a time
    roots = [ctx.expj(-2 * ctx.pi * j / P) for j in range(P)]
    data = vals
    for axis in range(f.n):
        nxt = {}
        keys = {k[:axis] + k[axis + 1:] for k in data}
        for rest in keys:
            col = [data[rest[:axis] + (j,) + rest[axis:]] for j in range(P)]
            for m in range(-N, N + 1):
                s = ctx.fsum(col[j] * roots[(m * j) % P] for j in range(P)) / P
                nxt[rest[:axis] + (m,) + rest[axis:]] = s
        data = nxt
    return data


def fourier_truncate(f: SmoothTestFunction, N: int, ctx=None) -> TrigPoly:
    """Coefficients |m_k| <= N by the trapezoid rule on max(4N+1, 64) points per axis."""
    if N < 0:
        raise ValueError(f"truncation degree must be >= 0, got {N}")
    ctx = ctx or make_context()
    return TrigPoly(ctx, f.n, _quadrature_coeffs(ctx, f, N, (0,) * f.n))


def truncate_derivative(f: SmoothTestFunction, N: int, alpha: Sequence[int], ctx=None) -> TrigPoly:
    """Truncation of the exact derivative of f (second route for derivative consistency)."""
    ctx = ctx or make_context()
    return TrigPoly(ctx, f.n, _quadrature_coeffs(ctx, f, N, tuple(alpha)))


# ---------------------------------------------------------------------------
# error reports

@dataclass(frozen=True)
class ApproxReport:
    """Sup-norm errors by derivative order (max over |alpha| = j) on a sampling grid."""
    function: str
    N: int
    errors: tuple[float, ...]
    grid: int
    mode: str = "fourier"

    @property
    def k(self) -> int:
        return len(self.errors) - 1

    def ck_error(self) -> float:
        return max(self.errors)


def _multi_orders(n: int, j: int):
    return [a for a in itertools.product(range(j + 1), repeat=n) if sum(a) == j]


def _contract(coeffs: dict, pw: dict, grid: int, n: int) -> dict:
    """Evaluate sum_m c_m prod_k z_k^m_k on the product grid, one axis at a time."""
    data = coeffs
    for axis in range(n):
        nxt: dict = {}
        for key, c in data.items():
            m = key[axis]
            for j in range(grid):
                k2 = key[:axis] + (j,) + key[axis + 1:]
                v = c * pw[j][m]
                nxt[k2] = nxt[k2] + v if k2 in nxt else v
        data = nxt
    return data


def ck_error(f: SmoothTestFunction, approx: TrigPoly, k: int, grid: int = 256) -> ApproxReport:
    if k < 0:
        raise ValueError("derivative order must be >= 0")
    ctx = approx.ctx
    points = {idx: _grid_point(ctx, idx, grid) for idx in _grid_indices(f.n, grid)}
    # powers e^{i m θ} per point and axis, shared across derivative orders
    deg = approx.degree
    pw = {}
    for j in range(grid):
        z = ctx.expj(2 * ctx.pi * j / grid)
        zi = 1 / z
        row = {0: ctx.mpc(1)}
        for m in range(1, deg + 1):
            row[m] = row[m - 1] * z
            row[-m] = row[-m + 1] * zi
        pw[j] = row
    errors = []
    for j in range(k + 1):
        worst = ctx.mpf(0)
        for alpha in _multi_orders(f.n, j):
            vals = _contract(approx.derivative(alpha).coeffs, pw, grid, f.n)
            for idx, th in points.items():
                e = abs(f.derivative(ctx, th, alpha) - vals[idx])
                if e > worst:
                    worst = e
        errors.append(float(worst))
    return ApproxReport(f.name, approx.degree, tuple(errors), grid)


def fourier_ladder(name: str, Ns: Sequence[int], k: int, grid: int = 256, dps: int = DEFAULT_DPS) -> list[ApproxReport]:
    f = catalogue(name)
    ctx = make_context(dps)
    out = []
    for N in Ns:
        rep = ck_error(f, fourier_truncate(f, N, ctx), k, grid)
        out.append(ApproxReport(rep.function, N, rep.errors, grid))
    return out


def injectivity_witness(rng: np.random.Generator, degree: int = 8, grid: int = 64, n: int = 1) -> float:
    """Grid sup-norm of a random nonzero trig polynomial of the given degree."""
    shape = (2 * degree + 1,) * n
    c = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    theta = 2 * np.pi * np.arange(grid) / grid
    E = np.exp(1j * np.outer(np.arange(-degree, degree + 1), theta))
    vals = c
    for axis in range(n):
        vals = np.tensordot(vals, E, axes=([0], [0]))
    return float(np.max(np.abs(vals)))


# ---------------------------------------------------------------------------
# interval side: Bernstein polynomials

class Bernstein:
    """Polynomial on [0, 1] in the degree-N Bernstein basis."""

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=float)
        if self.coeffs.ndim != 1 or not len(self.coeffs):
            raise ValueError("need a nonempty coefficient vector")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def approximate(cls, g: Callable[[np.ndarray], np.ndarray], N: int) -> Bernstein:
        """B_N g = sum_k g(k/N) b_{k,N}."""
        if N < 0:
            raise ValueError("degree must be >= 0")
        if N == 0:
            return cls([float(g(np.array([0.0]))[0])])
        return cls(g(np.arange(N + 1) / N))

    def __call__(self, x) -> np.ndarray:
        # de Casteljau, vectorized over x
        x = np.atleast_1d(np.asarray(x, dtype=float))
        b = np.tile(self.coeffs, (len(x), 1))
        for r in range(self.degree):
            b = b[:, :-1] * (1 - x)[:, None] + b[:, 1:] * x[:, None]
        return b[:, 0]

    def derivative(self) -> Bernstein:
        if self.degree == 0:
            return Bernstein([0.0])
        return Bernstein(self.degree * np.diff(self.coeffs))

    def antiderivative(self, value_at_zero: float = 0.0) -> Bernstein:
        """Integral from 0, plus a constant; the basis sums to one so the constant shifts every coefficient."""
        c = np.concatenate([[0.0], np.cumsum(self.coeffs) / (self.degree + 1)])
        return Bernstein(c + value_at_zero)


@dataclass(frozen=True)
class IntervalFunction:
    """Catalogue function on [0, 1]; ``derivative(j)`` is the exact j-th derivative."""
    name: str
    derivative: Callable[[int], Callable[[np.ndarray], np.ndarray]] = dc_field(repr=False, compare=False)


def _quad_derivative(j):
    # 1 - 2x + 3x^2
    table = {0: lambda x: 1 - 2 * x + 3 * x * x, 1: lambda x: -2 + 6 * x, 2: lambda x: 6 + 0 * x}
    return table.get(j, lambda x: 0 * x)


def _sin3_derivative(j):
    return lambda x: 3.0 ** j * np.sin(3 * x + j * np.pi / 2)


INTERVAL_CATALOGUE: dict[str, IntervalFunction] = {
    "exp": IntervalFunction("exp", lambda j: np.exp),
    "quadratic": IntervalFunction("quadratic", _quad_derivative),
    "sin3": IntervalFunction("sin3", _sin3_derivative),
}


def interval_function(name: str) -> IntervalFunction:
    try:
        return INTERVAL_CATALOGUE[name]
    except KeyError:
        raise KeyError(f"unknown interval function {name!r}; choose from {sorted(INTERVAL_CATALOGUE)}") from None


def weierstrass_integrate_approx(f: IntervalFunction, mu: int, N: int) -> Bernstein:
    """Bernstein-approximate f^(mu), then integrate mu times matching f^(j)(0), j < mu."""
    if mu < 0:
        raise ValueError("derivative order must be >= 0")
    p = Bernstein.approximate(f.derivative(mu), N)
    zero = np.array([0.0])
    for j in range(mu - 1, -1, -1):
        p = p.antiderivative(float(f.derivative(j)(zero)[0]))
    return p


def interval_error(f: IntervalFunction, p: Bernstein, k: int, grid: int = 1001) -> ApproxReport:
    x = np.linspace(0.0, 1.0, grid)
    errors = []
    q = p
    for j in range(k + 1):
        errors.append(float(np.max(np.abs(f.derivative(j)(x) - q(x)))))
        q = q.derivative()
    return ApproxReport(f.name, p.degree, tuple(errors), grid, mode="weierstrass")


def weierstrass_ladder(name: str, mu: int, Ns: Sequence[int], k: int | None = None,
                       grid: int = 1001) -> list[ApproxReport]:
    f = interval_function(name)
    k = mu if k is None else k
    out = []
    for N in Ns:
        rep = interval_error(f, weierstrass_integrate_approx(f, mu, N), k, grid)
        out.append(ApproxReport(rep.function, N, rep.errors, grid, mode="weierstrass"))
    return out
