"""Integral points on y^2 = x^3 + A x Q(u,v)^2 + B Q(u,v)^3, two ways.

``count_points_bruteforce`` scans the surface directly: (u, v) over the
ellipse Q <= T^2, x over |x| <= T^2, exact perfect-square test for y^2.
``count_points_syzygy`` runs the covariant parameterization: for every
SL2(Z)-class of quartics with invariants (-4A, -4B) it enumerates
admissible lattice pairs m in the compact region cut out by
|H(m)| <= T^2, |T(m)/2| <= T^3, 1 <= F(m) <= T^2, maps each to the point
(-H(m), T(m)/2, F(m)), weights by the representation number r_Q(F(m)),
and divides by #Aut(F).  The two counts agreeing exactly is the
package's strongest end-to-end check: it exercises the syzygy, the
bijection behind the parameterization, the congruence sets R_F, the
automorphism groups, class-set completeness, and r_Q simultaneously.

The lattice region is boxed rigorously: from coprimality of F and its
Hessian, a Bezout identity a*f + b*h = 1 homogenizes to
A(x,y) F(x,y) + B(x,y) H(x,y) = y^7, giving |m|^7 <= C |m|^3 V on the
region (V the value bound), hence |m| <= (C V)^(1/4).  The identity is
verified exactly before use, so the box is a proof, not a heuristic.

Classes whose Mordell coefficients are non-integral can carry admissible
pairs whose images are not integer points; those pairs are skipped (and
tallied in the diagnostics) since they correspond to no integral point.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd, isqrt

from .binary_forms import (
    QuadForm,
    QuarticForm,
    form_eval,
    form_int_scaled,
    hessian,
    invariant_I,
    invariant_J,
    jacobian_covariant,
)
from .class_group import r_Q_lattice
from .exact_arith import int_sqrt
from .quartic_classes import (
    ClassSet,
    ResidueSet,
    admissible_residues,
    automorphism_group,
    enumerate_classes,
)


class CountIntegrityError(AssertionError):
    """An internal counting invariant failed (non-integer weighted total,
    gcd violation, or duplicate point across classes)."""


@dataclass(frozen=True)
class SurfaceSpec:
    """The surface y^2 = x^3 + A x Q^2 + B Q^3 with positive-definite Q."""

    A: Fraction
    B: Fraction
    Q: QuadForm

    def __post_init__(self):
        object.__setattr__(self, "A", Fraction(self.A))
        object.__setattr__(self, "B", Fraction(self.B))
        if 4 * self.A**3 - 27 * self.B**2 == 0:
            raise ValueError("degenerate surface: 4A^3 - 27B^2 = 0")
        if not self.Q.is_positive_definite:
            raise ValueError("Q must be positive definite")

    @property
    def target_invariants(self) -> tuple[Fraction, Fraction]:
        return (-4 * self.A, -4 * self.B)

    def on_curve(self, x, y, n) -> bool:
        return Fraction(y) ** 2 == Fraction(x) ** 3 + self.A * x * n * n + self.B * n**3


@dataclass(frozen=True)
class IntegralPoint:
    x: int
    y: int
    u: int
    v: int
    n: int
    class_index: int | None = None
    m1: int | None = None
    m2: int | None = None

    def key(self):
        return (self.n, self.x, self.y, self.u, self.v)


# --- the covariant map ----------------------------------------------------


def duke_map(
    F: QuarticForm, m1: int, m2: int, residues: ResidueSet | None = None
) -> tuple[int, int, int]:
    """(x, y, n) = (-H_F(m), T_F(m)/2, F(m)) for an admissible pair.

    Raises on an inadmissible pair, non-positive F(m), or a non-integral
    image (the latter signals a convention fault for the forms the
    parameterization applies to).
    """
    if residues is None:
        residues = admissible_residues(F)
    if gcd(m1, m2) != 1 or not residues.contains(m1, m2):
        raise ValueError(f"pair ({m1}, {m2}) is not admissible for {F.pretty()}")
    n = F.evaluate(m1, m2)
    if n <= 0:
        raise ValueError(f"F(m) = {n} is not positive")
    hval = hessian(F).evaluate(m1, m2)
    tval = jacobian_covariant(F).evaluate(m1, m2)
    x = -Fraction(hval)
    y = Fraction(tval) / 2
    if x.denominator != 1 or y.denominator != 1:
        raise ValueError("non-integral image: covariant convention fault")
    x, y = int(x), int(y)
    A = -invariant_I(F) / 4
    B = -invariant_J(F) / 4
    if Fraction(y) ** 2 != x**3 + A * x * n * n + B * n**3:
        raise CountIntegrityError("syzygy image is off the curve")
    if gcd(x, n) != 1:
        raise CountIntegrityError("gcd(x, n) != 1 on a syzygy image")
    return x, y, n


# --- rigorous lattice box -------------------------------------------------


def _poly_trim(c: list[Fraction]) -> list[Fraction]:
    i = 0
    while i < len(c) and c[i] == 0:
        i += 1
    return c[i:]


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = [Fraction(0)] * (n - len(a)) + list(a)
    b = [Fraction(0)] * (n - len(b)) + list(b)
    return _poly_trim([x - y for x, y in zip(a, b)])


def _poly_divmod(a, b):
    q = []
    r = list(a)
    while r and len(r) >= len(b):
        f = r[0] / b[0]
        q.append(f)
        r = _poly_sub(r, _poly_mul([f] + [Fraction(0)] * (len(r) - len(b)), b))
        if len(r) == 0:
            break
    # rebuild quotient length bookkeeping
    return q, r


def _poly_ext_gcd(f, h):
    """(u, v) with u f + v h = 1 for coprime f, h (descending coeffs)."""
    r0, r1 = _poly_trim([Fraction(c) for c in f]), _poly_trim([Fraction(c) for c in h])
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = _full_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1) if s1 else [])
        t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1) if t1 else [])
    assert len(r0) == 1, "forms share a factor: Bezout box unavailable"
    g = r0[0]
    u = [c / g for c in s0]
    v = [c / g for c in t0]
    return u, v


def _full_divmod(a, b):
    """Quotient and remainder of descending-coefficient polynomials."""
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while r and len(r) >= len(b):
        f = r[0] / b[0]
        q[len(q) - (len(r) - len(b)) - 1] = f
        r = _poly_sub(r, [f * c for c in b] + [Fraction(0)] * (len(r) - len(b)))
        r = _poly_trim(r)
        if not any(r):
            r = []
    return _poly_trim(q) or [Fraction(0)], r


def region_box(F: QuarticForm, value_bound: int) -> int:
    """A box |m1|, |m2| <= box containing every integer pair with
    |F(m)| <= value_bound and |H_F(m)| <= value_bound."""
    H = hessian(F)
    best = None
    for direction in (0, 1):
        fc = _poly_trim([Fraction(c) for c in (F.coeffs if direction == 0 else F.coeffs[::-1])])
        hc = _poly_trim([Fraction(c) for c in (H.coeffs if direction == 0 else H.coeffs[::-1])])
        u, v = _poly_ext_gcd(fc, hc)
        # verify u f + v h = 1 exactly before trusting the bound
        lhs = _poly_sub(_poly_mul(u, fc), [-c for c in _poly_mul(v, hc)])
        assert lhs == [Fraction(1)], "Bezout identity failed"
        C = sum(abs(c) for c in u) + sum(abs(c) for c in v)
        bound4 = C * value_bound
        k = isqrt(isqrt(int(ceil(bound4)))) + 1
        best = k if best is None else max(best, k)
    return best


# --- brute-force counter ---------------------------------------------------


def _representation_map(Q: QuadForm, nmax: int) -> dict[int, list[tuple[int, int]]]:
    """n -> all (u, v) with Q(u, v) = n, for 1 <= n <= nmax."""
    reps: dict[int, list[tuple[int, int]]] = {}
    a, D = Q.qa, -Q.disc
    vmax = isqrt(4 * a * nmax // D)
    for v in range(-vmax, vmax + 1):
        # a u^2 + b v u + (c v^2 - n) = 0 for n <= nmax: u range from the ellipse
        # 4a n = (2au + bv)^2/... scan u between the real roots at n = nmax
        disc_max = Q.qb * Q.qb * v * v - 4 * a * (Q.qc * v * v - nmax)
        if disc_max < 0:
            continue
        r = isqrt(disc_max)
        lo = (-Q.qb * v - r - 2 * a) // (2 * a)
        hi = (-Q.qb * v + r + 2 * a) // (2 * a) + 1
        for u in range(lo, hi + 1):
            n = Q.evaluate(u, v)
            if 1 <= n <= nmax:
                reps.setdefault(n, []).append((u, v))
    return reps


def _fiber_solutions(A: Fraction, B: Fraction, n: int, T: int) -> list[tuple[int, int]]:
    """All (x, y) with y^2 = x^3 + A x n^2 + B n^3, gcd(x, n) = 1,
    y != 0, |x| <= T^2, |y| <= T^3."""
    out = []
    xmax = T * T
    ymax = T**3
    n2, n3 = n * n, n**3
    int_mode = A.denominator == 1 and B.denominator == 1
    Ai, Bi = int(A) if int_mode else 0, int(B) if int_mode else 0
    for x in range(-xmax, xmax + 1):
        if gcd(x, n) != 1:
            continue
        if int_mode:
            val = x**3 + Ai * x * n2 + Bi * n3
            if val <= 0:
                continue
        else:
            fval = Fraction(x) ** 3 + A * x * n2 + B * n3
            if fval <= 0 or fval.denominator != 1:
                continue
            val = int(fval)
        y, exact = int_sqrt(val)
        if exact and y and y <= ymax:
            out.append((x, y))
            out.append((x, -y))
    return out


def _fiber_chunk_worker(args):
    A, B, ns, T = args
    return {n: _fiber_solutions(A, B, n, T) for n in ns}


def count_points_bruteforce(
    S: SurfaceSpec, T: int, collect_points: bool = True, threads: int = 1
) -> tuple[int, list[IntegralPoint]]:
    """Direct scan of the surface up to height T; the oracle counter."""
    if T <= 0:
        return 0, []
    reps = _representation_map(S.Q, T * T)
    ns = sorted(reps)
    if threads > 1 and len(ns) > 8:
        chunks = [ns[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(_fiber_chunk_worker, [(S.A, S.B, c, T) for c in chunks]))
        fibers: dict[int, list[tuple[int, int]]] = {}
        for part in partials:
            fibers.update(part)
    else:
        fibers = {n: _fiber_solutions(S.A, S.B, n, T) for n in ns}
    count = 0
    points: list[IntegralPoint] = []
    for n in ns:
        sols = fibers[n]
        if not sols:
            continue
        count += len(sols) * len(reps[n])
        if collect_points:
            for x, y in sols:
                for u, v in reps[n]:
                    points.append(IntegralPoint(x, y, u, v, n))
    points.sort(key=IntegralPoint.key)
    return count, points


# --- syzygy-route counter ---------------------------------------------------


@dataclass
class ClassScanData:
    """Precomputed per-class data for the lattice scan."""

    form: QuarticForm
    residues: ResidueSet
    aut_order: int
    f_coeffs: tuple
    h_num: list[int]
    h_den: int
    t_num: list[int]
    t_den: int


def _class_scan_data(F: QuarticForm) -> ClassScanData:
    h_num, h_den = form_int_scaled(hessian(F).coeffs)
    t_num, t_den = form_int_scaled(jacobian_covariant(F).coeffs)
    return ClassScanData(
        form=F,
        residues=admissible_residues(F),
        aut_order=len(automorphism_group(F)),
        f_coeffs=F.coeffs,
        h_num=h_num,
        h_den=h_den,
        t_num=t_num,
        t_den=t_den,
    )


def _scan_class(
    data: ClassScanData, S: SurfaceSpec, T: int, rq: dict[int, int]
) -> tuple[int, dict[tuple, tuple[int, int]], dict]:
    """Raw (pre-Aut-division) weighted count and point provenance map."""
    box = region_box(data.form, T * T)
    xmax, ymax, nmax = T * T, T**3, T * T
    raw = 0
    prov: dict[tuple, list[tuple[int, int]]] = {}
    skipped_nonintegral = 0
    res = data.residues
    fco = data.f_coeffs
    for m1 in range(-box, box + 1):
        for m2 in range(-box, box + 1):
            if gcd(m1, m2) != 1:
                continue
            if not res.contains(m1, m2):
                continue
            n = form_eval(fco, m1, m2)
            if not 1 <= n <= nmax:
                continue
            tnum = form_eval(data.t_num, m1, m2)
            if tnum == 0:
                continue
            tden2 = 2 * data.t_den
            if tnum % tden2:
                skipped_nonintegral += 1
                continue
            y = tnum // tden2
            if abs(y) > ymax:
                continue
            hnum = form_eval(data.h_num, m1, m2)
            if hnum % data.h_den:
                skipped_nonintegral += 1
                continue
            x = -(hnum // data.h_den)
            if abs(x) > xmax:
                continue
            if gcd(x, n) != 1:
                raise CountIntegrityError(
                    f"gcd(x, n) != 1 at m = ({m1}, {m2}) on {data.form.pretty()}"
                )
            if not S.on_curve(x, y, n):
                raise CountIntegrityError(
                    f"image off the curve at m = ({m1}, {m2}) on {data.form.pretty()}"
                )
            if n not in rq:
                rq[n] = r_Q_lattice(S.Q, n)
            r = rq[n]
            if r == 0:
                continue
            raw += r
            prov.setdefault((x, y, n), []).append((m1, m2))
    aut = data.aut_order
    for key, ms in prov.items():
        if len(ms) != aut:
            raise CountIntegrityError(
                f"point {key} hit {len(ms)} times, expected #Aut = {aut}"
            )
    if raw % aut:
        raise CountIntegrityError("weighted class total is not an integer")
    best_prov = {key: min(ms) for key, ms in prov.items()}
    diag = {"box": box, "skipped_nonintegral": skipped_nonintegral, "aut": aut}
    return raw // aut, best_prov, diag


def count_points_syzygy(
    S: SurfaceSpec,
    T: int,
    classes: ClassSet | None = None,
    coeff_bound: int = 40,
    collect_points: bool = True,
    threads: int = 1,
) -> tuple[int, list[IntegralPoint], dict]:
    """N(T) and the point list via the covariant parameterization."""
    if T <= 0:
        return 0, [], {"classes": 0}
    if classes is None:
        I, J = S.target_invariants
        classes = enumerate_classes(I, J, coeff_bound)
    else:
        I, J = S.target_invariants
        if classes.target_I != I or classes.target_J != J:
            raise ValueError("class set does not match the surface invariants")
    reps = _representation_map(S.Q, T * T)
    rq: dict[int, int] = {}
    total = 0
    seen: dict[tuple, int] = {}
    points: list[IntegralPoint] = []
    diags = []
    for idx, F in enumerate(classes.representatives):
        data = _class_scan_data(F)
        cls_count, prov, diag = _scan_class(data, S, T, rq)
        diags.append(diag)
        total += cls_count
        for (x, y, n), (m1, m2) in prov.items():
            if (x, y, n) in seen:
                raise CountIntegrityError(
                    f"point {(x, y, n)} produced by classes {seen[(x, y, n)]} and {idx}"
                )
            seen[(x, y, n)] = idx
            if collect_points:
                for u, v in reps.get(n, []):
                    points.append(IntegralPoint(x, y, u, v, n, idx, m1, m2))
    if collect_points and len(points) != total:
        raise CountIntegrityError("point list size disagrees with the weighted count")
    points.sort(key=IntegralPoint.key)
    return total, points, {"classes": len(classes.representatives), "per_class": diags}


def v_count(S: SurfaceSpec, classes: ClassSet, n: int, T: int) -> int:
    """Number of curve points (x, y) with y^2 = x^3 + A x n^2 + B n^3,
    gcd(x, n) = 1, y != 0, |x| <= T^2, |y| <= T^3, computed through the
    class-set parameterization (weights 1/#Aut must give an integer)."""
    if T <= 0 or n <= 0:
        return 0
    total = Fraction(0)
    xmax, ymax = T * T, T**3
    for F in classes.representatives:
        data = _class_scan_data(F)
        box = region_box(F, max(n, T * T))
        cls = 0
        for m1 in range(-box, box + 1):
            for m2 in range(-box, box + 1):
                if gcd(m1, m2) != 1 or not data.residues.contains(m1, m2):
                    continue
                if form_eval(data.f_coeffs, m1, m2) != n:
                    continue
                tnum = form_eval(data.t_num, m1, m2)
                if tnum == 0 or tnum % (2 * data.t_den):
                    continue
                y = tnum // (2 * data.t_den)
                hnum = form_eval(data.h_num, m1, m2)
                if hnum % data.h_den:
                    continue
                x = -(hnum // data.h_den)
                if abs(x) > xmax or abs(y) > ymax:
                    continue
                cls += 1
        total += Fraction(cls, data.aut_order)
    if total.denominator != 1:
        raise CountIntegrityError("v(n, T) weighted sum is not an integer")
    return int(total)


def v_count_direct(S: SurfaceSpec, n: int, T: int) -> int:
    """Independent fiber oracle: direct (x, y) scan for a single n."""
    if T <= 0 or n <= 0:
        return 0
    return len(_fiber_solutions(S.A, S.B, n, T))


# --- exports ----------------------------------------------------------------


def points_to_csv(points: list[IntegralPoint]) -> str:
    lines = ["x,y,u,v,n,class_index,m1,m2"]
    for p in sorted(points, key=IntegralPoint.key):
        prov = (
            f"{p.class_index},{p.m1},{p.m2}"
            if p.class_index is not None
            else ",,"
        )
        lines.append(f"{p.x},{p.y},{p.u},{p.v},{p.n},{prov}")
    return "\n".join(lines) + "\n"


def count_record(S: SurfaceSpec, T: int, N: int, method: str) -> dict:
    from .exact_arith import format_rational

    return {
        "A": format_rational(S.A),
        "B": format_rational(S.B),
        "Q": S.Q.to_text(),
        "T": T,
        "N": N,
        "method": method,
    }
