"""Exact desk-scale correlation sums and the appendix numerics.

The central object is the lattice sum of r_Q over values of a binary
form F restricted to a scaled rectangle, a coprimality condition and a
congruence class:

    S(X) = sum_{(x,y) in X*R, gcd(x,y)=1, (x,y)=alpha mod M} r_Q(F(x,y)).

All sums here are exact integers or rationals; floats appear only in
normalized columns, exponent fits, and the absolute values of Hecke
eigenvalue sums (whose squared moduli are formed exactly first).

Convention for nonpositive arguments: a term with F(x,y) <= 0
contributes r_Q(|F|) with the zero value contributing nothing (the
representation-number convention n >= 1); every report records this.

The Eisenstein/cuspidal recombination identity asserts, exactly,

  S(X) = |U|/(2h) * sum_{ordered (q1,q2)} psi_{q1,q2}([Q]) M(X; q1,q2)
       + |U|/h * sum_{ord(psi) >= 3} conj(psi)([Q]) N(X; psi),

which is the finite-sum content of splitting r_Q into lambda_E and
lambda_C.
"""

from __future__ import annotations

import hashlib
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from pathlib import Path

import numpy as np

from .binary_forms import QuadForm, QuarticForm, form_eval
from .class_group import (
    ClassGroupTable,
    Character,
    eisenstein_divisor_sum,
    genus_character_value,
    genus_pairs,
    ideal_class_counts,
    r_Q_lattice,
)
from .cyclotomic import Cyc
from .exact_arith import (
    factorize,
    factorize_with_spf,
    format_rational,
    primes_up_to,
    smallest_prime_factors,
)
from .galois_tools import IntPolynomial, local_root_count


# --- experiment specification ----------------------------------------------


@dataclass(frozen=True)
class ExperimentSpec:
    """A correlation-sum experiment: argument form, quadratic form,
    rectangle, congruence class and X grid."""

    form: tuple[int, ...]
    Q: QuadForm
    region: tuple[Fraction, Fraction, Fraction, Fraction] = (
        Fraction(0),
        Fraction(0),
        Fraction(1),
        Fraction(1),
    )
    modulus: int = 1
    alpha: tuple[int, int] = (0, 0)
    grid: tuple[int, ...] = (32, 64, 128)

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        object.__setattr__(self, "alpha", tuple(a % self.modulus for a in self.alpha))
        x0, y0, x1, y1 = (Fraction(c) for c in self.region)
        if x1 <= x0 or y1 <= y0:
            raise ValueError("region must have positive area")
        object.__setattr__(self, "region", (x0, y0, x1, y1))
        object.__setattr__(self, "form", tuple(int(c) for c in self.form))
        if list(self.grid) != sorted(set(self.grid)):
            raise ValueError("grid must be strictly increasing")

    def canonical_text(self) -> str:
        x0, y0, x1, y1 = self.region
        return "|".join(
            [
                ",".join(str(c) for c in self.form),
                self.Q.to_text(),
                f"{x0};{y0};{x1};{y1}",
                f"{self.modulus};{self.alpha[0]},{self.alpha[1]}",
            ]
        )

    def cache_key(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()[:16]


def lattice_values(spec: ExperimentSpec, X: int) -> Counter:
    """Multiset {F(x,y)} over the constrained lattice points of X*R."""
    x0, y0, x1, y1 = spec.region
    xs_lo, xs_hi = math.ceil(x0 * X), math.floor(x1 * X)
    ys_lo, ys_hi = math.ceil(y0 * X), math.floor(y1 * X)
    M, (a1, a2) = spec.modulus, spec.alpha
    vals: Counter = Counter()
    for x in range(xs_lo, xs_hi + 1):
        if M > 1 and x % M != a1:
            continue
        for y in range(ys_lo, ys_hi + 1):
            if M > 1 and y % M != a2:
                continue
            if gcd(x, y) != 1:
                continue
            vals[form_eval(spec.form, x, y)] += 1
    return vals


def correlation_sum(spec: ExperimentSpec, X: int, rq_cache: dict | None = None) -> int:
    """Exact S(X), the correlation of r_Q with the form values."""
    if X <= 0:
        return 0
    if rq_cache is None:
        rq_cache = {}
    total = 0
    for n, mult in lattice_values(spec, X).items():
        n = abs(n)
        if n == 0:
            continue
        if n not in rq_cache:
            rq_cache[n] = r_Q_lattice(spec.Q, n)
        total += mult * rq_cache[n]
    return total


def eisenstein_sum(spec: ExperimentSpec, X: int, q1: int, q2: int) -> int:
    """M(X; R, alpha mod M; q1, q2) = sum of the genus divisor sums."""
    if X <= 0:
        return 0
    total = 0
    for n, mult in lattice_values(spec, X).items():
        n = abs(n)
        if n == 0:
            continue
        total += mult * eisenstein_divisor_sum(q1, q2, n)
    return total


def cuspidal_sum(
    spec: ExperimentSpec, X: int, psi: Character, table: ClassGroupTable | None = None
) -> Cyc:
    """N(X; R, alpha mod M; psi) = sum over ideals of norm F(x,y)."""
    if table is None:
        table = ClassGroupTable(spec.Q.disc)
    out = Cyc.zero()
    if X <= 0:
        return out
    for n, mult in lattice_values(spec, X).items():
        n = abs(n)
        if n == 0:
            continue
        counts = ideal_class_counts(table, n)
        for i, c in enumerate(counts):
            if c:
                out = out + (mult * c) * psi.value(i)
    return out


def recombination(spec: ExperimentSpec, X: int) -> dict:
    """Exact reassembly of the correlation sum from the Eisenstein and
    cuspidal pieces; 'equal' must be True."""
    table = ClassGroupTable(spec.Q.disc)
    iQ = table.class_index(spec.Q)
    corr = correlation_sum(spec, X)
    eis = Fraction(0)
    for pair in genus_pairs(table.disc):
        psi_val = genus_character_value(pair, table, iQ)
        eis += psi_val * eisenstein_sum(spec, X, pair.q1, pair.q2)
    eis *= Fraction(table.unit_count, 2 * table.h)
    cusp = Cyc.zero()
    for psi in table.characters:
        if psi.order <= 2:
            continue
        cusp = cusp + psi.value(iQ).conjugate() * cuspidal_sum(spec, X, psi, table)
    cusp = Fraction(table.unit_count, table.h) * cusp
    cusp_rat = cusp.as_rational()
    assert cusp_rat is not None, "cuspidal reassembly must be rational"
    return {
        "X": X,
        "correlation": corr,
        "eisenstein_part": eis,
        "cuspidal_part": cusp_rat,
        "equal": Fraction(corr) == eis + cusp_rat,
        "negative_argument_convention": "terms use r_Q(|F|); F = 0 contributes 0",
    }


# --- series and exponent fits ------------------------------------------------


@dataclass
class SeriesResult:
    """A geometric grid of X values with exact sums and fit diagnostics."""

    grid: tuple[int, ...]
    values: tuple
    normalization_power: int
    normalized: tuple[float, ...] = ()
    fitted_beta: float | None = None
    residuals: tuple[float, ...] = ()

    def __post_init__(self):
        if list(self.grid) != sorted(set(self.grid)):
            raise ValueError("grid must be strictly increasing")
        if not self.normalized:
            self.normalized = tuple(
                float(v) / x**self.normalization_power for v, x in zip(self.values, self.grid)
            )


def fit_log_exponent(series: SeriesResult) -> tuple[float, tuple[float, ...]]:
    """Least-squares slope of log(value / X^power) against log log X.

    A diagnostic, not a proof: desk-scale X makes log log X nearly flat,
    so only wide windows and orderings are meaningful.
    """
    if len(series.grid) < 5:
        raise ValueError("need at least 5 grid points")
    if any(v <= 0 for v in series.normalized):
        raise ValueError("normalized values must be positive")
    t = np.log(np.log(np.array(series.grid, dtype=float)))
    y = np.log(np.array(series.normalized, dtype=float))
    slope, intercept = np.polyfit(t, y, 1)
    fit = slope * t + intercept
    residuals = tuple(float(r) for r in (y - fit))
    series.fitted_beta = float(slope)
    series.residuals = residuals
    return float(slope), residuals


def correlation_series(
    spec: ExperimentSpec, cache_dir: Path | None = None, use_cache: bool = True
) -> SeriesResult:
    """Exact correlation sums over the spec's grid, cached to disk so
    grids extend incrementally."""
    cached: dict[str, str] = {}
    path = None
    if cache_dir is not None:
        path = Path(cache_dir) / f"series_{spec.cache_key()}.json"
        if use_cache and path.exists():
            try:
                payload = json.loads(path.read_text())
                if payload.get("spec") != spec.canonical_text():
                    raise CacheCorruption("series cache key collision")
                body = payload.get("values", {})
                digest = hashlib.sha256(
                    json.dumps(body, sort_keys=True).encode()
                ).hexdigest()
                if payload.get("checksum") != digest:
                    raise CacheCorruption("series cache checksum mismatch")
                cached = body
            except (json.JSONDecodeError, KeyError) as exc:
                raise CacheCorruption(str(exc)) from exc
    rq_cache: dict = {}
    values = []
    for X in spec.grid:
        if str(X) in cached:
            values.append(int(cached[str(X)]))
        else:
            val = correlation_sum(spec, X, rq_cache)
            values.append(val)
            cached[str(X)] = str(val)
    if path is not None:
        payload = {
            "spec": spec.canonical_text(),
            "values": cached,
            "checksum": hashlib.sha256(
                json.dumps(cached, sort_keys=True).encode()
            ).hexdigest(),
        }
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, sort_keys=True))
    return SeriesResult(spec.grid, tuple(values), 2)


class CacheCorruption(Exception):
    pass


def series_to_csv(series: SeriesResult) -> str:
    lines = ["X,value,normalized"]
    for X, v, nv in zip(series.grid, series.values, series.normalized):
        vtxt = format_rational(Fraction(v)) if not isinstance(v, float) else repr(v)
        lines.append(f"{X},{vtxt},{nv:.12g}")
    return "\n".join(lines) + "\n"


# --- Hecke eigenvalue L^1 sums ------------------------------------------------


def hecke_eigenvalue(table: ClassGroupTable, xi: Character, m: int,
                     fac=None) -> Cyc:
    """lambda(m) = sum over ideals of norm m of xi, exactly."""
    if m <= 0:
        return Cyc.zero()
    counts = ideal_class_counts(table, m, fac)
    out = Cyc.zero()
    for i, c in enumerate(counts):
        if c:
            out = out + c * xi.value(i)
    return out


def hecke_l1_sum(
    disc: int,
    xi: Character,
    P,
    X: int,
    table: ClassGroupTable | None = None,
) -> float:
    """sum_{n <= X} |lambda(|P(n)|)| for a polynomial P, or the double
    sum over 1 <= x, y <= X when P is a binary form (QuadForm or
    QuarticForm).  Squared moduli are computed exactly; only the final
    square roots are floats."""
    if table is None:
        table = ClassGroupTable(disc)
    if X <= 0:
        return 0.0
    if isinstance(P, (QuadForm, QuarticForm)):
        coeffs = P.coeffs if isinstance(P, QuarticForm) else (P.qa, P.qb, P.qc)
        args = Counter(
            abs(form_eval(coeffs, x, y)) for x in range(1, X + 1) for y in range(1, X + 1)
        )
    else:
        poly = P if isinstance(P, IntPolynomial) else IntPolynomial(tuple(P))
        args = Counter(abs(poly.evaluate(n)) for n in range(1, X + 1))
    vmax = max(args) if args else 0
    spf = smallest_prime_factors(vmax) if 0 < vmax <= 2 * 10**6 else None
    total = 0.0
    abs_cache: dict[int, float] = {}
    for m, mult in args.items():
        if m == 0:
            continue
        if m not in abs_cache:
            fac = factorize_with_spf(m, spf) if spf is not None else factorize(m)
            lam = hecke_eigenvalue(table, xi, m, fac)
            abs_cache[m] = lam.abs_float()
        total += mult * abs_cache[m]
    return total


def hecke_l1_series(disc: int, xi: Character, P, grid) -> SeriesResult:
    table = ClassGroupTable(disc)
    vals = tuple(hecke_l1_sum(disc, xi, P, X, table) for X in grid)
    power = 2 if isinstance(P, (QuadForm, QuarticForm)) else 1
    return SeriesResult(tuple(grid), vals, power)


# --- Nair-type sieve bound ----------------------------------------------------


def nair_rhs(P: IntPolynomial, f_on_primes, X: int) -> float:
    """X * exp(sum_{p <= X} rho(p) (f(p) - 1) / p) with exact rho(p)."""
    if X < 2:
        return float(X)
    s = 0.0
    for p in primes_up_to(X):
        rho = local_root_count(P, p)
        if rho:
            s += rho * (f_on_primes(p) - 1.0) / p
    return X * math.exp(s)


# --- appendix closed-form numerics ---------------------------------------------


def _delta_integrand(y: float) -> float:
    if abs(y) < 1e-9:
        return 0.125  # removable singularity: limit 1/8 at y = 0
    return (1.0 + y / 2.0 - math.sqrt(1.0 + y)) / (y * y)


def delta_inf(grid_points: int = 20001, refinements: int = 60) -> float:
    """inf over [-1, 2] of (1 + y/2 - sqrt(1+y)) / y^2 by grid search
    plus local ternary refinement; approximately 0.067."""
    lo, hi = -1.0, 2.0
    xs = [lo + (hi - lo) * k / (grid_points - 1) for k in range(grid_points)]
    best_k = min(range(grid_points), key=lambda k: _delta_integrand(xs[k]))
    a = xs[max(best_k - 1, 0)]
    b = xs[min(best_k + 1, grid_points - 1)]
    for _ in range(refinements):
        m1 = a + (b - a) / 3
        m2 = b - (b - a) / 3
        if _delta_integrand(m1) < _delta_integrand(m2):
            b = m2
        else:
            a = m1
    return _delta_integrand((a + b) / 2)


_EXACT_ABS_COS = {
    1: {0: Fraction(1)},
    2: {0: Fraction(1), 1: Fraction(1)},
    3: {0: Fraction(1), 1: Fraction(1, 2), 2: Fraction(1, 2)},
    4: {0: Fraction(1), 1: Fraction(0), 2: Fraction(1), 3: Fraction(0)},
    6: {
        0: Fraction(1),
        1: Fraction(1, 2),
        2: Fraction(1, 2),
        3: Fraction(1),
        4: Fraction(1, 2),
        5: Fraction(1, 2),
    },
}


def dihedral_g_exact(n: int) -> Fraction | None:
    """g(n) = (1/n) sum_{a<n} |cos(2 pi a / n)| when every cosine is
    rational (n = 1, 2, 3, 4, 6), else None."""
    table = _EXACT_ABS_COS.get(n)
    if table is None:
        return None
    return sum(table.values(), Fraction(0)) / n


def dihedral_g(n: int) -> float:
    """The dihedral trace average g(n); exact values where they exist."""
    if n < 1:
        raise ValueError("n >= 1 required")
    exact = dihedral_g_exact(n)
    if exact is not None:
        return float(exact)
    a = np.arange(n)
    return float(np.abs(np.cos(2.0 * np.pi * a / n)).sum() / n)


def dihedral_sup_check(N: int) -> dict:
    """max of g over 3 <= n <= N, the 4/5 bound, and the 2/pi limit."""
    if N < 3:
        raise ValueError("N >= 3 required")
    best_n, best = 3, dihedral_g(3)
    for n in range(4, N + 1):
        g = dihedral_g(n)
        if g > best:
            best, best_n = g, n
    return {
        "N": N,
        "max_g": best,
        "argmax": best_n,
        "bound_four_fifths_ok": best <= 0.8,
        "limit_two_over_pi": 2.0 / math.pi,
        "limit_error_at_N": abs(dihedral_g(N) - 2.0 / math.pi),
    }


# --- config files ---------------------------------------------------------------


def parse_experiment_config(text: str) -> dict:
    """Line-oriented key = value experiment description.

    Recognized keys: kind (correlation | eisenstein | cuspidal | hecke),
    form (comma coefficients, any degree), Q (a,b,c), disc, character_order,
    region (x0,y0,x1,y1), modulus, alpha (a1,a2), grid (comma list),
    q1, q2, poly (comma coefficients).
    """
    from .exact_arith import parse_rational

    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key in ("form", "poly", "grid", "alpha", "region", "Q"):
            parts = [p.strip() for p in val.split(",")]
            if key == "region":
                out[key] = tuple(parse_rational(p) for p in parts)
            elif key == "Q":
                out[key] = QuadForm(*(int(p) for p in parts))
            else:
                out[key] = tuple(int(p) for p in parts)
        elif key in ("modulus", "disc", "character_order", "q1", "q2", "X"):
            out[key] = int(val)
        elif key == "kind":
            out[key] = val
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    if "kind" not in out:
        raise ValueError("config must set kind")
    return out


def spec_from_config(cfg: dict) -> ExperimentSpec:
    kwargs = {}
    if "region" in cfg:
        kwargs["region"] = cfg["region"]
    if "modulus" in cfg:
        kwargs["modulus"] = cfg["modulus"]
    if "alpha" in cfg:
        kwargs["alpha"] = cfg["alpha"]
    if "grid" in cfg:
        kwargs["grid"] = cfg["grid"]
    return ExperimentSpec(form=cfg["form"], Q=cfg["Q"], **kwargs)
