"""Linear-algebra model of the space of ribbons P H^0(2K_C - L)^*.

A ribbon with conormal bundle L on C is a nonzero functional e on
H^0(K_C^2 L^{-1}) up to scale.  Its blow-up index is the least degree of an
effective divisor whose span (in the embedding by |2K_C - L|) contains the
point e, i.e. the secant order of e.  With divisors restricted to reduced
sets of rational points, the search is exhaustive at desk scale and the
result is labelled a rational-reduced blow-up index: an upper bound for
the index over the algebraic closure, and equal to it whenever the
witnessing divisor is rational and reduced.

The blow-up along a divisor splits the ribbon iff the restriction of e to
the sections vanishing on the divisor is zero; push-out and pull-back give
the same restriction map, and both entry points are kept so that equality
is an executable assertion rather than a convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ribbonsyz.curves import (
    HyperellipticCurve,
    PlaneCurve,
    SectionSpace,
    evaluation_matrix,
    rational_points,
)
from ribbonsyz.fflinalg import kernel_basis, matmul_mod, rank
from ribbonsyz.ribbon import UnsupportedConormal

__all__ = [
    "StrataError",
    "NotFound",
    "HalvingNotRational",
    "ExtensionClass",
    "DivisorWitness",
    "Restriction",
    "BlowupResult",
    "ambient_space",
    "span_membership",
    "pushout_class",
    "pullback_class",
    "blowup_index_bruteforce",
    "gonality_bounds",
    "EllipticGroup",
    "w4_witnesses_elliptic",
    "wd_containment_check",
    "random_class",
    "class_in_span",
    "blowup_sweep",
]

_EXHAUSTIVE_MAX = 300_000


class StrataError(Exception):
    pass


class NotFound(StrataError):
    """No divisor of the searched degrees has e in its span."""

    def __init__(self, b_max: int, exhaustive: bool):
        self.b_max = b_max
        self.exhaustive = exhaustive
        kind = "exhaustive" if exhaustive else "sampled"
        super().__init__(f"no witness of degree <= {b_max} ({kind} search)")


class HalvingNotRational(StrataError):
    """A ramification divisor has no full rational representative."""


def ambient_space(model, conormal_multiple: int) -> SectionSpace:
    """H^0(2K_C - L) for the supported conormal L = -t * polarization."""
    t = conormal_multiple
    if t < 1:
        raise UnsupportedConormal("conormal bundle must be a negative multiple (t >= 1)")
    if isinstance(model, (PlaneCurve, HyperellipticCurve)):
        return model.sections(2 * model.canonical_tag + t)
    raise UnsupportedConormal(f"unsupported model {model!r}")


@dataclass(frozen=True)
class ExtensionClass:
    """A ribbon as a nonzero functional on H^0(2K_C - L), up to scale."""

    space: SectionSpace
    vec: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vec, dtype=np.int64) % self.space.field.p
        if v.shape != (self.space.dim,):
            raise StrataError(f"functional must have length {self.space.dim}")
        if not np.any(v):
            raise StrataError("the zero functional is not an extension class")
        object.__setattr__(self, "vec", v)

    def proportional_to(self, other: "ExtensionClass") -> bool:
        return bool(rank(np.vstack([self.vec, other.vec]), self.space.field.p) <= 1)


@dataclass(frozen=True)
class DivisorWitness:
    """Distinct rational points with their evaluation functionals as rows."""

    space: SectionSpace
    points: tuple
    rows: np.ndarray

    @property
    def degree(self) -> int:
        return len(self.points)

    def union(self, other: "DivisorWitness") -> "DivisorWitness":
        pts = list(self.points) + [q for q in other.points if q not in self.points]
        return make_witness(self.space, pts)


def make_witness(space: SectionSpace, points) -> DivisorWitness:
    pts = tuple(points)
    if len(set(pts)) != len(pts):
        raise StrataError("witness points must be distinct")
    rows = evaluation_matrix(space, pts)
    for i, pt in enumerate(pts):
        if not np.any(rows[i]):
            raise StrataError(f"point {pt} has zero evaluation vector (base point)")
    return DivisorWitness(space, pts, rows)


def span_membership(e: ExtensionClass, w: DivisorWitness) -> bool:
    """Whether e lies in the projective span of the witness points.

    As functionals: e must lie in the row space of the evaluation matrix,
    decided by comparing ranks.
    """
    p = e.space.field.p
    base = rank(w.rows, p)
    return rank(np.vstack([w.rows, e.vec]), p) == base


@dataclass(frozen=True)
class Restriction:
    """A functional restricted to the sections vanishing on a divisor.

    ``basis`` columns span H^0(2K_C - L - beta) inside the ambient space
    (the canonical kernel basis of the evaluation matrix); ``coords`` are
    the values of the functional on those basis vectors.
    """

    basis: np.ndarray
    coords: np.ndarray

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coords)


def pushout_class(e: ExtensionClass, w: DivisorWitness) -> Restriction:
    """Image of e under the blow-up along the witness divisor (push-out form).

    The blow-up splits iff the restriction is zero.
    """
    p = e.space.field.p
    basis = kernel_basis(w.rows, p)
    coords = matmul_mod(e.vec.reshape(1, -1), basis, p).ravel()
    return Restriction(basis, coords)


def pullback_class(e: ExtensionClass, w: DivisorWitness) -> Restriction:
    """The same restriction reached through the pull-back description.

    Assembles the vanishing conditions in the opposite order; because the
    kernel basis is read off the canonical RREF, the result must be
    identical to ``pushout_class`` -- asserted by the property suite.
    """
    p = e.space.field.p
    basis = kernel_basis(w.rows[::-1], p)
    coords = matmul_mod(e.vec.reshape(1, -1), basis, p).ravel()
    return Restriction(basis, coords)


@dataclass(frozen=True)
class BlowupResult:
    index: int
    bound: str  # "exact" | "upper-only"
    witness: tuple

    def to_json_obj(self) -> dict:
        return {
            "blowup_index": self.index,
            "bound": self.bound,
            "witnesses": [list(map(str, self.witness))],
        }


def _reduce_by_rows(vecs: np.ndarray, basis_rows: np.ndarray, p: int) -> np.ndarray:
    """Eliminate the span of basis_rows from every row of vecs (both reduced)."""
    out = vecs % p
    work = basis_rows % p
    prows = []
    for r in range(work.shape[0]):
        nz = np.nonzero(work[r])[0]
        if nz.size == 0:
            continue
        c = int(nz[0])
        inv = pow(int(work[r, c]), -1, p)
        work[r] = (work[r] * inv) % p
        for r2 in range(work.shape[0]):
            if r2 != r and work[r2, c]:
                work[r2] = (work[r2] - work[r2, c] * work[r]) % p
        prows.append((r, c))
    for r, c in prows:
        hit = np.nonzero(out[:, c])[0]
        if hit.size:
            out[hit] = (out[hit] - np.outer(out[hit, c], work[r])) % p
    return out


def _search_triples(e_vec: np.ndarray, pool_rows: np.ndarray, p: int):
    """First triple of pool indices whose span contains e, scanning pairs
    and matching the third point in the quotient by the pair."""
    n = pool_rows.shape[0]
    for a in range(n):
        for b in range(a + 1, n):
            reduced = _reduce_by_rows(
                np.vstack([e_vec, pool_rows[b + 1 :]]), pool_rows[[a, b]].copy(), p
            )
            ebar = reduced[0]
            nz = np.nonzero(ebar)[0]
            if nz.size == 0:
                continue  # e in the pair span: caught at b = 2 already
            c0 = int(nz[0])
            inv = pow(int(ebar[c0]), -1, p)
            rest = reduced[1:]
            lam = (rest[:, c0] * inv) % p
            matches = np.nonzero((rest == (lam[:, None] * ebar[None, :]) % p).all(axis=1) & (lam > 0))[0]
            if matches.size:
                return (a, b, b + 1 + int(matches[0]))
    return None


def blowup_index_bruteforce(
    e,
    pool,
    space: SectionSpace,
    b_max: int,
    rng=None,
    sample_budget: int = 20000,
) -> BlowupResult:
    """Smallest degree of a reduced rational divisor whose span contains e.

    Exhaustive per degree while the subset count stays at desk scale
    (dedicated scans for degrees <= 3, itertools above), then seeded random
    sampling flagged as an upper bound.  The zero class is split already:
    index 0 by convention.  Raises NotFound when nothing of degree <=
    b_max works.
    """
    p = space.field.p
    vec = np.asarray(e.vec if isinstance(e, ExtensionClass) else e, dtype=np.int64) % p
    if not np.any(vec):
        return BlowupResult(0, "exact", ())
    e_cls = ExtensionClass(space, vec)
    pts = list(pool)
    rows = evaluation_matrix(space, pts)
    n = len(pts)
    exhaustive_so_far = True
    for b in range(1, b_max + 1):
        if b == 1:
            for i in range(n):
                if rank(np.vstack([rows[i], vec]), p) == 1:
                    return BlowupResult(1, "exact", (pts[i],))
            continue
        if b == 2:
            for i in range(n):
                for j in range(i + 1, n):
                    if rank(np.vstack([rows[i], rows[j], vec]), p) == rank(rows[[i, j]], p):
                        return BlowupResult(2, "exact", (pts[i], pts[j]))
            continue
        if b == 3:
            found = _search_triples(vec, rows, p)
            if found is not None:
                witness = tuple(pts[i] for i in found)
                return BlowupResult(3, "exact", witness)
            continue
        if math.comb(n, b) <= _EXHAUSTIVE_MAX:
            for combo in combinations(range(n), b):
                sub = rows[list(combo)]
                if rank(np.vstack([sub, vec]), p) == rank(sub, p):
                    bound = "exact" if exhaustive_so_far else "upper-only"
                    return BlowupResult(b, bound, tuple(pts[i] for i in combo))
            continue
        rng = rng or np.random.default_rng(0)
        for _ in range(sample_budget):
            combo = rng.choice(n, size=b, replace=False)
            sub = rows[combo]
            if rank(np.vstack([sub, vec]), p) == rank(sub, p):
                bound = "exact" if exhaustive_so_far else "upper-only"
                return BlowupResult(b, bound, tuple(pts[int(i)] for i in combo))
        exhaustive_so_far = False
    raise NotFound(b_max, exhaustive_so_far)


def gonality_bounds(b: int, g: int, m: int, p_a: int) -> dict:
    """Gonality bounds from the blow-up index, with hypothesis validity flags.

    upper: d <= min(b + 2m, floor((p_a + 3) / 2)), valid when
    p_a > 2g - 1 + 2m (and a smooth divisor in |-2L| exists, which the
    caller vouches for); lower: d >= b - (2g - 2), unconditional.
    """
    return {
        "upper": min(b + 2 * m, (p_a + 3) // 2),
        "upper_valid": p_a > 2 * g - 1 + 2 * m,
        "lower": b - (2 * g - 2),
        "lower_valid": True,
    }


class EllipticGroup:
    """Group law on y^2 = cubic(x) with the point at infinity as identity.

    Works for any monic cubic (the x^2 term is folded into the chord
    formula).  Halving is by exhaustive search through the rational points:
    at most p + 1 + 2 sqrt(p) of them at desk scale.
    """

    def __init__(self, model: HyperellipticCurve):
        if model.g != 1:
            raise StrataError("group law needs a genus-1 model")
        self.model = model
        self.p = model.field.p
        self.c2 = model.h[2] if len(model.h) > 2 else 0
        self.c1 = model.h[1]
        self.points = rational_points(model)
        self._halvings: dict | None = None

    def neg(self, pt):
        if pt == "inf":
            return "inf"
        x, y = pt
        return (x, (-y) % self.p)

    def add(self, p1, p2):
        p = self.p
        if p1 == "inf":
            return p2
        if p2 == "inf":
            return p1
        x1, y1 = p1
        x2, y2 = p2
        if x1 == x2 and (y1 + y2) % p == 0:
            return "inf"
        if p1 == p2:
            lam = (3 * x1 * x1 + 2 * self.c2 * x1 + self.c1) * pow(2 * y1, -1, p) % p
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
        x3 = (lam * lam - self.c2 - x1 - x2) % p
        y3 = (lam * (x1 - x3) - y1) % p
        return (x3, y3)

    def double(self, pt):
        return self.add(pt, pt)

    def halvings(self, q) -> list:
        """All rational T with [2]T = q."""
        if self._halvings is None:
            table: dict = {}
            for pt in self.points:
                table.setdefault(self.double(pt), []).append(pt)
            self._halvings = table
        return self._halvings.get(q, [])


def w4_witnesses_elliptic(model: HyperellipticCurve, conormal_multiple: int = 6):
    """Ramification-divisor witnesses of the degree-2 maps on a genus-1 curve.

    The degree-2 map attached to the degree-2 class of Q + O ramifies at
    the four halvings of Q in the group law.  Returns (witness list,
    skipped count), skipping translates whose halvings are not all
    rational.  Each witness spans a P^3 (evaluation rank 4), which is
    asserted.
    """
    group = EllipticGroup(model)
    space = ambient_space(model, conormal_multiple)
    p = model.field.p
    witnesses = []
    skipped = 0
    for q in group.points:
        halves = group.halvings(q)
        if len(halves) != 4:
            skipped += 1
            continue
        w = make_witness(space, halves)
        if rank(w.rows, p) != 4:
            raise StrataError(f"ramification witness of {q} does not span a P^3")
        witnesses.append(w)
    return witnesses, skipped


def wd_containment_check(alpha: DivisorWitness, ram: DivisorWitness, e: ExtensionClass) -> bool:
    """Witness-level inclusion: e in span(alpha) implies e in span(alpha + R).

    Must always return True; a False signals a bug in span bookkeeping.
    """
    if not span_membership(e, alpha):
        return True
    return span_membership(e, alpha.union(ram))


def random_class(space: SectionSpace, rng) -> ExtensionClass:
    """Uniform random nonzero functional on the ambient space."""
    p = space.field.p
    while True:
        v = rng.integers(0, p, space.dim)
        if np.any(v):
            return ExtensionClass(space, v)


def class_in_span(space: SectionSpace, points, rng) -> ExtensionClass:
    """Random class supported on the span of the given points' functionals."""
    rows = evaluation_matrix(space, list(points))
    p = space.field.p
    while True:
        coeffs = rng.integers(0, p, rows.shape[0])
        v = matmul_mod(coeffs.reshape(1, -1), rows, p).ravel()
        if np.any(v):
            return ExtensionClass(space, v)


def blowup_sweep(
    model,
    conormal_multiple: int,
    count: int,
    rng,
    span_size: int = 3,
    b_max: int = 3,
) -> dict:
    """Blow-up indices of ``count`` classes drawn in random span_size-point spans.

    This samples the degree-``span_size`` secant stratum: the expected
    index is exactly span_size for almost every draw (a uniform class of
    the full space would instead concentrate above it, since spans of
    rational-reduced divisors cover only a thin slice of the dual space).
    """
    space = ambient_space(model, conormal_multiple)
    pool = rational_points(model)
    histogram: dict[int, int] = {}
    results = []
    for _ in range(count):
        idx_pts = rng.choice(len(pool), size=span_size, replace=False)
        e = class_in_span(space, [pool[int(i)] for i in idx_pts], rng)
        try:
            res = blowup_index_bruteforce(e, pool, space, b_max, rng=rng)
            key = res.index
            results.append({"index": res.index, "bound": res.bound})
        except NotFound:
            key = -1
            results.append({"index": None, "bound": "not-found"})
        histogram[key] = histogram.get(key, 0) + 1
    return {
        "count": count,
        "span_size": span_size,
        "b_max": b_max,
        "pool_size": len(pool),
        "histogram": {str(k): v for k, v in sorted(histogram.items())},
        "results": results,
    }
