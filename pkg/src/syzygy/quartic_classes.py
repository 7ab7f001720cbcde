"""SL2(Z)-classes of integral binary quartics with prescribed invariants.

``enumerate_classes`` scans the full coefficient box |p_i| <= bound for
integer quartics with the target (I, J), then groups the candidates into
SL2(Z)-orbits.  The box bound is user-settable and completeness is
validated downstream by exact point-count cross-checks, so the evidence
record carries the bound used.

Equivalence testing is a breadth-first search over words in the standard
generators S = [[0,1],[-1,0]] and T = [[1,1],[0,1]], memoized on visited
forms and pruned by the coefficient height sum(|p_i|).  Absence of a
witness at a given depth is reported as "not found", never as proof.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from pathlib import Path

import numpy as np

from .binary_forms import (
    IDENTITY,
    QuarticForm,
    S_GEN,
    T_GEN,
    UnimodularMatrix,
    discriminant,
    form_int_scaled,
    hessian,
    invariant_I,
    invariant_J,
    sl2_act,
)
from .exact_arith import factorize

Tup = tuple[int, int, int, int, int]


# --- fast tuple-level generator moves ------------------------------------


def _apply_S(p: Tup) -> Tup:
    # F(y, -x)
    return (p[4], -p[3], p[2], -p[1], p[0])


def _apply_T(p: Tup) -> Tup:
    # F(x + y, y)
    p0, p1, p2, p3, p4 = p
    return (
        p0,
        4 * p0 + p1,
        6 * p0 + 3 * p1 + p2,
        4 * p0 + 3 * p1 + 2 * p2 + p3,
        p0 + p1 + p2 + p3 + p4,
    )


def _apply_Tinv(p: Tup) -> Tup:
    # F(x - y, y)
    p0, p1, p2, p3, p4 = p
    return (
        p0,
        -4 * p0 + p1,
        6 * p0 - 3 * p1 + p2,
        -4 * p0 + 3 * p1 - 2 * p2 + p3,
        p0 - p1 + p2 - p3 + p4,
    )


_MOVES = (
    (_apply_S, S_GEN),
    (_apply_T, T_GEN),
    (_apply_Tinv, T_GEN.inverse()),
)


def _height(p: Tup) -> int:
    return sum(abs(c) for c in p)


# --- equivalence ----------------------------------------------------------


def are_equivalent(
    F: QuarticForm, G: QuarticForm, depth: int = 12, height_cap: int | None = None
) -> UnimodularMatrix | None:
    """Witness M with sl2_act(M, F) == G, or None if none found.

    The search walks generator words of length <= depth, discarding
    intermediate forms whose height exceeds the cap.  A None answer is
    honest about incompleteness at the given depth.
    """
    start: Tup = tuple(F.coeffs)  # type: ignore[assignment]
    goal: Tup = tuple(G.coeffs)  # type: ignore[assignment]
    if not all(isinstance(c, int) for c in start + goal):
        raise ValueError("equivalence search requires integral forms")
    if height_cap is None:
        height_cap = 4 * max(_height(start), _height(goal)) + 64
    if start == goal:
        return IDENTITY
    seen: dict[Tup, UnimodularMatrix] = {start: IDENTITY}
    frontier = deque([(start, IDENTITY)])
    for _ in range(depth):
        if not frontier:
            break
        next_frontier: deque[tuple[Tup, UnimodularMatrix]] = deque()
        while frontier:
            cur, M = frontier.popleft()
            for move, gen in _MOVES:
                new = move(cur)
                if new in seen:
                    continue
                Mnew = M * gen
                if new == goal:
                    assert sl2_act(Mnew, F) == G
                    return Mnew
                if _height(new) > height_cap:
                    continue
                seen[new] = Mnew
                next_frontier.append((new, Mnew))
        frontier = next_frontier
    return None


def reduce_form(F: QuarticForm, rounds: int = 300) -> QuarticForm:
    """Height-minimizing greedy walk; lands on some orbit-local minimum."""
    cur: Tup = tuple(F.coeffs)  # type: ignore[assignment]
    for _ in range(rounds):
        best = cur
        hbest = _height(cur)
        for move, _gen in _MOVES:
            cand = move(cur)
            h = _height(cand)
            if h < hbest or (h == hbest and cand < best):
                best, hbest = cand, h
        if best == cur:
            break
        cur = best
    return QuarticForm(cur)


# --- automorphisms --------------------------------------------------------


def automorphism_group(F: QuarticForm, depth: int = 6) -> list[UnimodularMatrix]:
    """All M in SL2(Z) with sl2_act(M, F) = F found within an entry box.

    The box grows with depth; the returned set is verified to be closed
    under multiplication and inversion (and is therefore a genuine
    subgroup), extending the box automatically if closure fails.  Aut(F)
    is finite for squarefree F; point-count cross-validation downstream
    guards against a missed large-entry automorphism.
    """
    p = tuple(F.coeffs)
    if not all(isinstance(c, int) for c in p):
        raise ValueError("automorphism search requires an integral form")
    if not any(p):
        raise ValueError("zero form")
    bound = 4 + depth * depth
    for _ in range(4):
        found = _automorphisms_in_box(F, bound)
        if _closed_under_product(found):
            return sorted(found, key=lambda M: M.entries())
        bound *= 2
    raise RuntimeError("automorphism set failed to close; raise depth")


def _automorphisms_in_box(F: QuarticForm, bound: int) -> list[UnimodularMatrix]:
    p0, p4 = F.coeffs[0], F.coeffs[4]
    first_cols = _represents(F, p0, bound)
    second_cols = _represents(F, p4, bound)
    out = []
    for a, c in first_cols:
        for b, d in second_cols:
            if a * d - b * c != 1:
                continue
            M = UnimodularMatrix(a, b, c, d)
            if sl2_act(M, F) == F:
                out.append(M)
    return out


def _represents(F: QuarticForm, value, bound: int) -> list[tuple[int, int]]:
    hits = []
    for a in range(-bound, bound + 1):
        for c in range(-bound, bound + 1):
            if F.evaluate(a, c) == value:
                hits.append((a, c))
    return hits


def _closed_under_product(mats: list[UnimodularMatrix]) -> bool:
    entries = {M.entries() for M in mats}
    if (1, 0, 0, 1) not in entries:
        return False
    for A in mats:
        if A.inverse().entries() not in entries:
            return False
        for B in mats:
            if (A * B).entries() not in entries:
                return False
    return True


# --- admissibility --------------------------------------------------------


@dataclass(frozen=True)
class ResidueSet:
    """Congruence condition R_F: pairs m mod q with (F(m), H(m)) != (0,0)
    at every prime p | q.  Stored per prime; q is their product."""

    modulus: int
    prime_bad: dict[int, frozenset[tuple[int, int]]]

    def contains(self, m1: int, m2: int) -> bool:
        for p, bad in self.prime_bad.items():
            if (m1 % p, m2 % p) in bad:
                return False
        return True

    def residues(self) -> set[tuple[int, int]]:
        """Materialized pair set mod q (use only for small q)."""
        q = self.modulus
        if q > 210:
            raise ValueError("modulus too large to materialize")
        return {
            (r1, r2)
            for r1 in range(q)
            for r2 in range(q)
            if self.contains(r1, r2)
        }


def admissible_residues(F: QuarticForm) -> ResidueSet:
    """The congruence set R_F mod q, q = radical of the integralized
    discriminant data of F."""
    delta = discriminant(F)
    if delta == 0:
        raise ValueError("form must be squarefree (nonzero discriminant)")
    h_int, h_den = form_int_scaled(hessian(F).coeffs)
    f_int, f_den = form_int_scaled(F.coeffs)
    if f_den != 1:
        raise ValueError("admissibility requires an integral form")
    level = abs(delta.numerator) * h_den
    primes = [p for p, _ in factorize(level)]
    prime_bad: dict[int, frozenset[tuple[int, int]]] = {}
    q = 1
    for p in primes:
        bad = set()
        for r1 in range(p):
            for r2 in range(p):
                fv = _eval_mod(f_int, r1, r2, p)
                hv = _eval_mod(h_int, r1, r2, p)
                if fv == 0 and hv == 0:
                    bad.add((r1, r2))
        prime_bad[p] = frozenset(bad)
        q *= p
    return ResidueSet(q, prime_bad)


def _eval_mod(coeffs, m1: int, m2: int, p: int) -> int:
    d = len(coeffs) - 1
    total = 0
    for i, c in enumerate(coeffs):
        if c % p:
            total += c * pow(m1, d - i, p) * pow(m2, i, p)
    return total % p


def is_admissible_pair(F: QuarticForm, m1: int, m2: int, residues: ResidueSet | None = None) -> bool:
    """gcd(m1, m2) = 1 and the pair reduces into R_F."""
    if gcd(m1, m2) != 1:
        return False
    if residues is None:
        residues = admissible_residues(F)
    return residues.contains(m1, m2)


# --- enumeration ----------------------------------------------------------


@dataclass
class ClassSet:
    """SL2(Z)-inequivalent representatives with the target invariants."""

    target_I: Fraction
    target_J: Fraction
    representatives: list[QuarticForm]
    search_bound: int
    completeness_evidence: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.representatives)


def enumerate_classes(I, J, coeff_bound: int = 40, depth: int = 14) -> ClassSet:
    """All integer quartics with invariants (I, J) and |p_i| <= coeff_bound,
    deduplicated into SL2(Z)-classes.

    Degenerate invariant pairs (I^3 = 27 J^2) are rejected.  Forms F and
    -F count as distinct classes whenever both carry the invariants
    (which happens exactly when J = 0); definiteness separates them.
    """
    I, J = Fraction(I), Fraction(J)
    if I**3 - 27 * J * J == 0:
        raise ValueError("degenerate invariants: I^3 - 27 J^2 = 0")
    I12 = 12 * I
    J432 = 432 * J
    candidates: list[Tup] = []
    if I12.denominator == 1 and J432.denominator == 1:
        candidates = _scan_box(int(I12), int(J432), coeff_bound)
    reps, evidence = _dedup_classes(candidates, depth)
    evidence.update(
        {
            "coeff_bound": coeff_bound,
            "candidate_count": len(candidates),
            "bfs_depth": depth,
            "integral_invariants": I12.denominator == 1 and J432.denominator == 1,
        }
    )
    reps_sorted = sorted(reps, key=lambda F: (_height(F.coeffs), F.coeffs))
    out = ClassSet(I, J, reps_sorted, coeff_bound, evidence)
    for F in out.representatives:
        assert invariant_I(F) == I and invariant_J(F) == J
    return out


def _scan_box(I12: int, J432: int, B: int) -> list[Tup]:
    """Integer solutions of the invariant equations in the coefficient box.

    Uses 12 I = 12 p0 p4 - 3 p1 p3 + p2^2 to solve for p4 and
    432 J = 72 p0 p2 p4 + 9 p1 p2 p3 - 27 p1^2 p4 - 27 p0 p3^2 - 2 p2^3
    as the filter; the p0 = 0 slab solves for p4 from the J equation.
    """
    rng = np.arange(-B, B + 1, dtype=np.int64)
    P2, P3 = np.meshgrid(rng, rng, indexing="ij")
    out: list[Tup] = []
    for p0 in range(-B, B + 1):
        for p1 in range(-B, B + 1):
            if p0 == 0:
                if p1 == 0:
                    continue  # p0 = p1 = 0 forces Delta = 0
                ok = (P2 * P2 - 3 * p1 * P3) == I12
                if not ok.any():
                    continue
                p2s, p3s = P2[ok], P3[ok]
                num = 9 * p1 * p2s * p3s - 2 * p2s**3 - J432
                den = 27 * p1 * p1
                good = num % den == 0
                p4s = num[good] // den
                inbox = np.abs(p4s) <= B
                for p2, p3, p4 in zip(p2s[good][inbox], p3s[good][inbox], p4s[inbox]):
                    out.append((0, p1, int(p2), int(p3), int(p4)))
            else:
                num = I12 + 3 * p1 * P3 - P2 * P2
                den = 12 * p0
                good = num % den == 0
                if not good.any():
                    continue
                p2s, p3s = P2[good], P3[good]
                p4s = num[good] // den
                inbox = np.abs(p4s) <= B
                p2s, p3s, p4s = p2s[inbox], p3s[inbox], p4s[inbox]
                jval = (
                    72 * p0 * p2s * p4s
                    + 9 * p1 * p2s * p3s
                    - 27 * p1 * p1 * p4s
                    - 27 * p0 * p3s * p3s
                    - 2 * p2s**3
                )
                hit = jval == J432
                for p2, p3, p4 in zip(p2s[hit], p3s[hit], p4s[hit]):
                    out.append((p0, p1, int(p2), int(p3), int(p4)))
    return out


def _dedup_classes(candidates: list[Tup], depth: int) -> tuple[list[QuarticForm], dict]:
    """Group candidates into SL2(Z)-classes.

    First pass: connected components of the candidate set under single
    generator moves (orbits restricted to the box are usually connected).
    Second pass: BFS equivalence between component representatives to
    merge components joined only through out-of-box forms.
    """
    cand_set = set(candidates)
    unassigned = set(candidates)
    components: list[list[Tup]] = []
    while unassigned:
        seed = unassigned.pop()
        comp = [seed]
        stack = [seed]
        while stack:
            cur = stack.pop()
            for move, _gen in _MOVES:
                new = move(cur)
                if new in unassigned:
                    unassigned.remove(new)
                    comp.append(new)
                    stack.append(new)
        components.append(comp)
    # representative of each component: minimal height, lexicographic tiebreak
    reps = [min(comp, key=lambda t: (_height(t), t)) for comp in components]
    merged: list[QuarticForm] = []
    merges = 0
    for rep in sorted(reps, key=lambda t: (_height(t), t)):
        Frep = QuarticForm(rep)
        dup = False
        for known in merged:
            if are_equivalent(known, Frep, depth=depth) is not None:
                dup = True
                merges += 1
                break
        if not dup:
            merged.append(Frep)
    return merged, {"components": len(components), "component_merges": merges}


# --- cache file format ----------------------------------------------------


def class_set_to_text(cs: ClassSet) -> str:
    from .exact_arith import format_rational

    lines = [f.to_text() for f in cs.representatives]
    body = "\n".join(lines)
    checksum = hashlib.sha256(body.encode()).hexdigest()
    header = (
        "# syzygy quartic class set v1\n"
        f"I = {format_rational(cs.target_I)}\n"
        f"J = {format_rational(cs.target_J)}\n"
        f"bound = {cs.search_bound}\n"
        f"count = {len(cs.representatives)}\n"
        f"checksum = sha256:{checksum}\n"
    )
    return header + body + ("\n" if body else "")


class CacheCorruption(Exception):
    pass


def class_set_from_text(text: str) -> ClassSet:
    from .exact_arith import parse_rational

    lines = text.splitlines()
    if not lines or not lines[0].startswith("# syzygy quartic class set"):
        raise CacheCorruption("missing class-set header")
    meta = {}
    body_start = 1
    for i, line in enumerate(lines[1:], start=1):
        if "=" in line:
            key, _, val = line.partition("=")
            meta[key.strip()] = val.strip()
            body_start = i + 1
        else:
            break
    try:
        I = parse_rational(meta["I"])
        J = parse_rational(meta["J"])
        bound = int(meta["bound"])
        count = int(meta["count"])
        checksum = meta["checksum"]
    except (KeyError, ValueError) as exc:
        raise CacheCorruption(f"bad class-set header: {exc}") from exc
    body_lines = [l for l in lines[body_start:] if l.strip()]
    body = "\n".join(body_lines)
    if checksum != "sha256:" + hashlib.sha256(body.encode()).hexdigest():
        raise CacheCorruption("class-set checksum mismatch")
    if len(body_lines) != count:
        raise CacheCorruption("class-set count mismatch")
    reps = [QuarticForm.from_text(l) for l in body_lines]
    return ClassSet(I, J, reps, bound, {"loaded_from_cache": True})


def cache_key(I: Fraction, J: Fraction, bound: int) -> str:
    from .exact_arith import format_rational

    raw = f"{format_rational(Fraction(I))}_{format_rational(Fraction(J))}_{bound}"
    return "classes_" + raw.replace("/", "over").replace("-", "m")


def load_or_enumerate(
    I, J, coeff_bound: int = 40, cache_dir: Path | None = None, use_cache: bool = True
) -> ClassSet:
    I, J = Fraction(I), Fraction(J)
    path = None
    if cache_dir is not None:
        path = Path(cache_dir) / (cache_key(I, J, coeff_bound) + ".txt")
        if use_cache and path.exists():
            return class_set_from_text(path.read_text())
    cs = enumerate_classes(I, J, coeff_bound)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(class_set_to_text(cs))
    return cs
