"""Concrete smooth-curve models with explicit section-space bases.

Two families cover everything the ribbon computations need:

* ``PlaneCurve``: a smooth plane curve f(x,y,z) = 0 of degree d, with the
  one-parameter bundle family O_C(q).  Bases are the degree-q monomials not
  divisible by the leading monomial of f; multiplication is polynomial
  multiplication followed by reduction mod f.

* ``HyperellipticCurve``: y^2 = h(x) with h squarefree of odd degree
  2g+1, one Weierstrass point at infinity, and the family O(m * Pinf).
  Genus 1 (h cubic) and genus 0 (h linear) are the low degenerations of the
  same model.  Bases are {x^i : 2i <= m} and {x^i y : 2i + 2g+1 <= m},
  ordered by pole order at infinity.

All bases are deterministic, so multiplication tensors and everything
derived from them are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ribbonsyz.fflinalg import PrimeField, matmul_mod, rank

__all__ = [
    "CurveError",
    "NotSmooth",
    "WrongDegree",
    "TargetOverflow",
    "PointNotOnCurve",
    "PlaneCurve",
    "HyperellipticCurve",
    "SectionSpace",
    "MultMap",
    "mult_map",
    "rational_points",
    "evaluation_vector",
    "evaluation_matrix",
    "random_plane_curve",
    "random_hyperelliptic",
    "random_split_cubic",
]

# Lazy section-space construction needs some cap to honour the bounded
# precomputed-range contract; generous for desk scale.
_PLANE_TAG_MAX = 64
_HYP_TAG_MAX = 1024


class CurveError(Exception):
    pass


class NotSmooth(CurveError):
    pass


class WrongDegree(CurveError):
    pass


class TargetOverflow(CurveError):
    """A requested bundle tag exceeds the supported range."""


class PointNotOnCurve(CurveError):
    pass


# ---------------------------------------------------------------------------
# plane-curve polynomial plumbing: dicts {(a,b,c): coeff}, x > y > z lex
# ---------------------------------------------------------------------------


def _monomials(q: int) -> list[tuple[int, int, int]]:
    """Degree-q monomials in descending lex order (x > y > z)."""
    if q < 0:
        return []
    out = []
    for a in range(q, -1, -1):
        for b in range(q - a, -1, -1):
            out.append((a, b, q - a - b))
    return out


def _pmul(f: dict, g: dict, p: int) -> dict:
    out: dict = {}
    for ma, ca in f.items():
        for mb, cb in g.items():
            key = (ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2])
            out[key] = (out.get(key, 0) + ca * cb) % p
    return {m: c for m, c in out.items() if c}


def _divides(m: tuple, lead: tuple) -> bool:
    return m[0] >= lead[0] and m[1] >= lead[1] and m[2] >= lead[2]


def _reduce_mod(f: dict, lead: tuple, lead_inv: int, rel: dict, p: int) -> dict:
    """Normal form of f modulo the single homogeneous relation ``rel``.

    A single polynomial is a Groebner basis of the principal ideal it
    generates, so repeatedly cancelling the lex-largest monomial divisible
    by its leading monomial terminates in the canonical remainder.
    """
    work = dict(f)
    while True:
        target = None
        for m in sorted(work, reverse=True):
            if work[m] and _divides(m, lead):
                target = m
                break
        if target is None:
            break
        factor = (work[target] * lead_inv) % p
        shift = (target[0] - lead[0], target[1] - lead[1], target[2] - lead[2])
        for m, c in rel.items():
            key = (m[0] + shift[0], m[1] + shift[1], m[2] + shift[2])
            work[key] = (work.get(key, 0) - factor * c) % p
    return {m: c for m, c in work.items() if c}


class PlaneCurve:
    """A smooth plane curve of degree d over a prime field.

    The constructor requires a homogeneous f of the stated degree and
    verifies a Nullstellensatz certificate of smoothness: the Jacobian
    ideal (f, f_x, f_y, f_z) must contain every form of some degree
    D <= 3(d-1) - 2 (the Macaulay bound for three variables), which is
    equivalent to the singular locus being empty over the algebraic
    closure.
    """

    family = "plane"

    def __init__(self, field: PrimeField, coeffs: dict, d: int):
        self.field = field
        p = field.p
        f = {tuple(m): c % p for m, c in coeffs.items() if c % p}
        if not f:
            raise WrongDegree("the zero polynomial does not define a curve")
        if any(len(m) != 3 or min(m) < 0 for m in f):
            raise WrongDegree("monomials must be exponent triples")
        if any(sum(m) != d for m in f):
            raise WrongDegree(f"f is not homogeneous of degree {d}")
        if d < 3:
            raise WrongDegree("need degree >= 3 (positive-genus plane models)")
        self.d = d
        self.coeffs = f
        self.lead = max(f)  # lex-leading monomial
        self._lead_inv = field.inv(f[self.lead])
        self.genus = (d - 1) * (d - 2) // 2
        self._sections: dict[int, SectionSpace] = {}
        self._mults: dict[tuple[int, int], MultMap] = {}
        self._check_smooth()

    # gonality of a smooth plane curve of degree d >= 3 is d - 1
    @property
    def gonality(self) -> int:
        return self.d - 1

    @property
    def canonical_tag(self) -> int:
        return self.d - 3

    def _check_smooth(self) -> None:
        p = self.field.p
        partials = [self.coeffs]
        for axis in range(3):
            g: dict = {}
            for m, c in self.coeffs.items():
                if m[axis]:
                    key = list(m)
                    key[axis] -= 1
                    g[tuple(key)] = (g.get(tuple(key), 0) + m[axis] * c) % p
            partials.append({m: c for m, c in g.items() if c})
        gens = [(g, sum(next(iter(g)))) for g in partials if g]
        for big in range(self.d - 1, 3 * (self.d - 1) - 1):
            monos = _monomials(big)
            index = {m: i for i, m in enumerate(monos)}
            rows = []
            for g, deg in gens:
                if deg > big:
                    continue
                for shift in _monomials(big - deg):
                    row = np.zeros(len(monos), dtype=np.int64)
                    for m, c in g.items():
                        row[index[(m[0] + shift[0], m[1] + shift[1], m[2] + shift[2])]] = c
                    rows.append(row)
            if rows and rank(np.array(rows), p) == len(monos):
                return
        raise NotSmooth(
            f"Jacobian ideal certificate failed through degree {3 * (self.d - 1) - 2}"
        )

    def sections(self, tag: int) -> "SectionSpace":
        """H^0(C, O_C(tag)) with the monomial quotient basis."""
        if tag > _PLANE_TAG_MAX:
            raise TargetOverflow(f"plane bundle tag {tag} beyond supported range")
        if tag not in self._sections:
            basis = (
                tuple(m for m in _monomials(tag) if not _divides(m, self.lead))
                if tag >= 0
                else ()
            )
            self._sections[tag] = SectionSpace(self, tag, basis)
        return self._sections[tag]

    def h0(self, tag: int) -> int:
        return self.sections(tag).dim if tag >= 0 else 0

    def _normal_form(self, poly: dict) -> dict:
        return _reduce_mod(poly, self.lead, self._lead_inv, self.coeffs, self.field.p)

    def _mult_tensor(self, ta: int, tb: int) -> np.ndarray:
        sa, sb, sc = self.sections(ta), self.sections(tb), self.sections(ta + tb)
        index = {m: i for i, m in enumerate(sc.basis)}
        t = np.zeros((sa.dim, sb.dim, sc.dim), dtype=np.int64)
        for i, ma in enumerate(sa.basis):
            for j, mb in enumerate(sb.basis):
                prod = self._normal_form({(ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]): 1})
                for m, c in prod.items():
                    t[i, j, index[m]] = c
        return t

    def on_curve(self, point) -> bool:
        x, y, z = point
        p = self.field.p
        if x % p == 0 and y % p == 0 and z % p == 0:
            return False
        v = sum(
            c * pow(x, m[0], p) * pow(y, m[1], p) * pow(z, m[2], p)
            for m, c in self.coeffs.items()
        )
        return v % p == 0

    def __repr__(self) -> str:
        return f"PlaneCurve(d={self.d}, g={self.genus}, p={self.field.p})"


# ---------------------------------------------------------------------------
# hyperelliptic model, y^2 = h(x); univariate coefficient lists, ascending
# ---------------------------------------------------------------------------


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    return _poly_trim(out)


def _poly_deriv(a: list[int], p: int) -> list[int]:
    return _poly_trim([(i * c) % p for i, c in enumerate(a)][1:])


def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    r = _poly_trim([c % p for c in a])
    inv = pow(b[-1], -1, p)
    while r and len(r) >= len(b):
        f = (r[-1] * inv) % p
        shift = len(r) - len(b)
        for i, c in enumerate(b):
            r[i + shift] = (r[i + shift] - f * c) % p
        r = _poly_trim(r)
    return r


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = _poly_trim([c % p for c in a])
    b = _poly_trim([c % p for c in b])
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


class HyperellipticCurve:
    """y^2 = h(x) with h monic squarefree of odd degree 2g+1.

    One point at infinity, which is a Weierstrass point; x has pole order 2
    and y pole order 2g+1 there.  Genus 1 and genus 0 arise from cubic and
    linear h.  Characteristic 2 is rejected.
    """

    family = "hyperelliptic"

    def __init__(self, field: PrimeField, h: list[int]):
        if field.p == 2:
            raise CurveError("hyperelliptic models need odd characteristic")
        self.field = field
        p = field.p
        h = _poly_trim([c % p for c in h])
        if not h or (len(h) - 1) % 2 == 0:
            raise WrongDegree("h must have odd degree 2g+1")
        if h[-1] != 1:
            raise WrongDegree("h must be monic (normal form for determinism)")
        if len(_poly_gcd(h, _poly_deriv(h, p), p)) > 1:
            raise NotSmooth("h is not squarefree")
        self.h = h
        self.g = (len(h) - 2) // 2
        self.genus = self.g
        self._sections: dict[int, SectionSpace] = {}
        self._mults: dict[tuple[int, int], MultMap] = {}

    @property
    def gonality(self) -> int:
        return 2 if self.g >= 1 else 1

    @property
    def canonical_tag(self) -> int:
        return 2 * self.g - 2

    def sections(self, tag: int) -> "SectionSpace":
        """The Riemann-Roch space L(tag * Pinf).

        Basis tokens are (i, 0) for x^i and (i, 1) for x^i y, sorted by pole
        order at infinity (2i, respectively 2i + 2g+1; all distinct).
        """
        if tag > _HYP_TAG_MAX:
            raise TargetOverflow(f"hyperelliptic bundle tag {tag} beyond supported range")
        if tag not in self._sections:
            toks = []
            if tag >= 0:
                toks += [(i, 0) for i in range(tag // 2 + 1)]
                toks += [(i, 1) for i in range((tag - 2 * self.g - 1) // 2 + 1)]
            toks.sort(key=self._pole_order)
            self._sections[tag] = SectionSpace(self, tag, tuple(toks))
        return self._sections[tag]

    def h0(self, tag: int) -> int:
        return self.sections(tag).dim if tag >= 0 else 0

    def _pole_order(self, tok) -> int:
        i, has_y = tok
        return 2 * i + (2 * self.g + 1) * has_y

    def _mult_tensor(self, ta: int, tb: int) -> np.ndarray:
        p = self.field.p
        sa, sb, sc = self.sections(ta), self.sections(tb), self.sections(ta + tb)
        index = {tok: i for i, tok in enumerate(sc.basis)}
        t = np.zeros((sa.dim, sb.dim, sc.dim), dtype=np.int64)
        for i, (ia, ya) in enumerate(sa.basis):
            for j, (ib, yb) in enumerate(sb.basis):
                deg = ia + ib
                if ya and yb:
                    # y*y reduces to h(x)
                    for k, c in enumerate(self.h):
                        if c:
                            t[i, j, index[(deg + k, 0)]] = c
                else:
                    t[i, j, index[(deg, ya or yb)]] = 1
        return t

    def on_curve(self, point) -> bool:
        if point == "inf":
            return True
        x, y = point
        p = self.field.p
        rhs = sum(c * pow(x, k, p) for k, c in enumerate(self.h)) % p
        return (y * y) % p == rhs

    def __repr__(self) -> str:
        return f"HyperellipticCurve(g={self.g}, p={self.field.p})"


# ---------------------------------------------------------------------------
# section spaces and multiplication
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SectionSpace:
    """A basis of H^0 of one bundle in the model's one-parameter family."""

    model: object
    tag: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def field(self) -> PrimeField:
        return self.model.field

    def __repr__(self) -> str:
        return f"SectionSpace({self.model.family}, tag={self.tag}, dim={self.dim})"


@dataclass(frozen=True)
class MultMap:
    """The bilinear multiplication H^0(A) x H^0(B) -> H^0(A tensor B).

    ``tensor[i, j]`` is the coordinate vector of (basis_A[i] * basis_B[j])
    in the target basis.
    """

    source_a: SectionSpace
    source_b: SectionSpace
    target: SectionSpace
    tensor: np.ndarray

    def as_matrix(self) -> np.ndarray:
        """Flatten to a (dim_target, dim_A * dim_B) matrix for rank checks."""
        da, db, dc = self.tensor.shape
        return self.tensor.reshape(da * db, dc).T.copy()

    def apply(self, va: np.ndarray, vb: np.ndarray) -> np.ndarray:
        p = self.source_a.field.p
        da, db, dc = self.tensor.shape
        tmp = matmul_mod(np.reshape(va, (1, da)), self.tensor.reshape(da, db * dc), p)
        return matmul_mod(np.reshape(vb, (1, db)), tmp.reshape(db, dc), p).ravel()

    def action_of(self, i: int) -> np.ndarray:
        """Matrix of multiplication by basis element i of A, as B -> target."""
        return self.tensor[i].T.copy()


def mult_map(sa: SectionSpace, sb: SectionSpace) -> MultMap:
    """Multiplication map between two section spaces on the same model."""
    if sa.model is not sb.model:
        raise CurveError("section spaces live on different models")
    model = sa.model
    key = (sa.tag, sb.tag)
    cached = model._mults.get(key)
    if cached is None:
        tensor = model._mult_tensor(sa.tag, sb.tag)
        cached = MultMap(sa, sb, model.sections(sa.tag + sb.tag), tensor)
        model._mults[key] = cached
    return cached


# ---------------------------------------------------------------------------
# rational points and evaluation
# ---------------------------------------------------------------------------


def rational_points(model, max_count: int | None = None) -> list:
    """Distinct F_p-rational points of the model, in a deterministic order.

    Plane curves: normalized homogeneous triples, charts [1:y:z], [0:1:z],
    [0:0:1] in that order.  Hyperelliptic: the point at infinity first,
    then affine (x, y) sorted by x then y.
    """
    p = model.field.p
    pts: list = []
    if isinstance(model, PlaneCurve):
        for y in range(p):
            for z in range(p):
                if model.on_curve((1, y, z)):
                    pts.append((1, y, z))
                    if max_count and len(pts) >= max_count:
                        return pts
        for z in range(p):
            if model.on_curve((0, 1, z)):
                pts.append((0, 1, z))
                if max_count and len(pts) >= max_count:
                    return pts
        if model.on_curve((0, 0, 1)):
            pts.append((0, 0, 1))
    else:
        pts.append("inf")
        squares: dict[int, list[int]] = {}
        for y in range(p):
            squares.setdefault((y * y) % p, []).append(y)
        for x in range(p):
            rhs = sum(c * pow(x, k, p) for k, c in enumerate(model.h)) % p
            for y in squares.get(rhs, ()):
                pts.append((x, y))
                if max_count and len(pts) >= max_count:
                    return pts
    if max_count:
        return pts[:max_count]
    return pts


def evaluation_vector(space: SectionSpace, point) -> np.ndarray:
    """Values of the basis sections at a point, well-defined up to scale.

    Plane curves: plain monomial evaluation at any homogeneous
    representative.  Hyperelliptic affine points likewise; at infinity the
    local trivialization by t^{-tag} sends the (unique, by parity) basis
    element of pole order exactly ``tag`` to 1 and all others to 0.
    """
    model = space.model
    p = model.field.p
    if not model.on_curve(point):
        raise PointNotOnCurve(f"{point} does not lie on {model}")
    if isinstance(model, PlaneCurve):
        x, y, z = point
        return np.array(
            [
                (pow(x, m[0], p) * pow(y, m[1], p) * pow(z, m[2], p)) % p
                for m in space.basis
            ],
            dtype=np.int64,
        )
    if point == "inf":
        return np.array(
            [1 if model._pole_order(tok) == space.tag else 0 for tok in space.basis],
            dtype=np.int64,
        )
    x, y = point
    out = []
    for i, has_y in space.basis:
        v = pow(x, i, p)
        if has_y:
            v = (v * y) % p
        out.append(v)
    return np.array(out, dtype=np.int64)


def evaluation_matrix(space: SectionSpace, points) -> np.ndarray:
    """Rows are the evaluation vectors of the given points."""
    if not points:
        return np.zeros((0, space.dim), dtype=np.int64)
    return np.vstack([evaluation_vector(space, pt) for pt in points])


# ---------------------------------------------------------------------------
# seeded random models
# ---------------------------------------------------------------------------


def random_plane_curve(field: PrimeField, d: int, rng, max_tries: int = 200) -> PlaneCurve:
    """Random smooth plane curve of degree d: retry until the certificate passes."""
    monos = _monomials(d)
    for _ in range(max_tries):
        coeffs = {m: int(c) for m, c in zip(monos, rng.integers(0, field.p, len(monos)))}
        try:
            return PlaneCurve(field, coeffs, d)
        except (NotSmooth, WrongDegree):
            continue
    raise NotSmooth(f"no smooth degree-{d} curve found in {max_tries} tries")


def random_hyperelliptic(field: PrimeField, g: int, rng, max_tries: int = 200) -> HyperellipticCurve:
    """Random monic squarefree h of degree 2g+1: retry until squarefree."""
    for _ in range(max_tries):
        h = [int(c) for c in rng.integers(0, field.p, 2 * g + 1)] + [1]
        try:
            return HyperellipticCurve(field, h)
        except NotSmooth:
            continue
    raise NotSmooth(f"no squarefree degree-{2 * g + 1} polynomial found")


def random_split_cubic(field: PrimeField, rng) -> HyperellipticCurve:
    """Genus-1 model y^2 = (x-r1)(x-r2)(x-r3) with distinct rational roots.

    Full rational 2-torsion makes every point of 2E(F_p) have all four
    halvings rational, which the W_4 witness enumeration wants.
    """
    p = field.p
    roots = sorted(int(r) for r in rng.choice(p, size=3, replace=False))
    h = [1]
    for r in roots:
        h = _poly_mul(h, [(-r) % p, 1], p)
    return HyperellipticCurve(field, h)
