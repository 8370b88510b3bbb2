"""The canonical ring of a split ribbon, S~ = S (+) epsilon J.

For a split ribbon over a curve C with conormal bundle L (deg L < 0), the
degree-q piece of the canonical ring splits as

    S~_q = H^0(K_C^q L^{-q})  (+)  epsilon H^0(K_C^q L^{-q+1}),

with multiplication (s, ej)(s', ej') = (ss', e(sj' + s'j)) and epsilon^2 = 0.
Both summand families live in the model's one-parameter bundle family, so
the ring is assembled from curve multiplication tables alone.  The basis of
every graded piece puts the S block first, then the epsilon J block, which
makes the subcomplex/quotient-complex structure of the Koszul complex
visible as a block structure.

Supported conormal bundles: L = -t * O_C(1) on a plane model (t >= 1) and
L = -k * Pinf on a hyperelliptic model (k >= 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ribbonsyz.curves import HyperellipticCurve, PlaneCurve, mult_map
from ribbonsyz.graded import GradedAlgebra
from ribbonsyz.koszul import BettiTable, betti_table

__all__ = [
    "RibbonError",
    "UnsupportedConormal",
    "DegreeWindowTooSmall",
    "SplitRibbonRing",
    "build_split_ribbon",
    "check_projective_normality",
    "split_invariants",
    "hypothesis_gate",
]


class RibbonError(Exception):
    pass


class UnsupportedConormal(RibbonError):
    pass


class DegreeWindowTooSmall(RibbonError):
    pass


@dataclass(frozen=True)
class SplitRibbonRing:
    """Assembled canonical ring of a split ribbon, with its invariants."""

    model: object
    conormal_multiple: int
    deg_l: int
    g: int
    gonality_base: int
    p_a: int
    s_dims: tuple[int, ...]
    j_dims: tuple[int, ...]
    algebra: GradedAlgebra

    @property
    def window(self) -> int:
        return self.algebra.window

    def betti(self, q3: str = "structural") -> BettiTable:
        return betti_table(self.algebra, self.p_a, q3=q3)

    def __repr__(self) -> str:
        return (
            f"SplitRibbonRing({self.model.family}, g={self.g}, "
            f"deg L={self.deg_l}, p_a={self.p_a})"
        )


def _family_tags(model, conormal_multiple: int):
    """Per-degree bundle tags for S_q and J_q, plus deg L.

    Plane model, L = -t O_C(1): S_q = O(q(d-3+t)), J_q = O(q(d-3+t) - t).
    Hyperelliptic, L = -k Pinf:  S_q = (q(2g-2+k)) Pinf, J_q = that - k.
    In both families J_1 is exactly the canonical bundle.
    """
    t = conormal_multiple
    if t < 1:
        raise UnsupportedConormal("conormal bundle must be a negative multiple (t >= 1)")
    if isinstance(model, PlaneCurve):
        unit = model.d - 3 + t
        deg_l = -t * model.d
    elif isinstance(model, HyperellipticCurve):
        unit = 2 * model.g - 2 + t
        deg_l = -t
    else:
        raise UnsupportedConormal(f"unsupported model {model!r}")
    return unit, t, deg_l


def build_split_ribbon(model, conormal_multiple: int, window: int = 4) -> SplitRibbonRing:
    """Assemble the split-ribbon canonical ring through the given degree window.

    The default window 4 is what Betti-table computations need (rows live
    in q <= 3; the socle rank looks one degree further).
    """
    if window < 2:
        raise DegreeWindowTooSmall("window must be at least 2")
    unit, t, deg_l = _family_tags(model, conormal_multiple)
    g = model.genus
    p_a = 2 * g - 1 - deg_l
    s_spaces = [model.sections(q * unit) for q in range(window + 1)]
    j_spaces = [model.sections(q * unit - t) for q in range(window + 1)]
    s_dims = tuple(s.dim for s in s_spaces)
    j_dims = tuple(j.dim for j in j_spaces)
    if j_dims[0] != 0:
        raise UnsupportedConormal("conormal bundle must have negative degree")
    if s_dims[1] + j_dims[1] != p_a:
        raise UnsupportedConormal(
            f"dim S~_1 = {s_dims[1] + j_dims[1]} != p_a = {p_a}; "
            "the conormal degree is too small for this model"
        )
    p = model.field.p
    mult = {}
    for a in range(1, window + 1):
        for b in range(a, window + 1 - a):
            sa, ja = s_dims[a], j_dims[a]
            sb, jb = s_dims[b], j_dims[b]
            sc, jc = s_dims[a + b], j_dims[a + b]
            tensor = np.zeros((sa + ja, sb + jb, sc + jc), dtype=np.int64)
            tensor[:sa, :sb, :sc] = mult_map(s_spaces[a], s_spaces[b]).tensor
            if jb:
                tensor[:sa, sb:, sc:] = mult_map(s_spaces[a], j_spaces[b]).tensor
            if ja:
                tensor[sa:, :sb, sc:] = mult_map(j_spaces[a], s_spaces[b]).tensor
            # epsilon J x epsilon J = 0
            mult[(a, b)] = tensor
    dims = [s_dims[q] + j_dims[q] for q in range(window + 1)]
    algebra = GradedAlgebra(model.field, dims, mult)
    return SplitRibbonRing(
        model=model,
        conormal_multiple=t,
        deg_l=deg_l,
        g=g,
        gonality_base=model.gonality,
        p_a=p_a,
        s_dims=s_dims,
        j_dims=j_dims,
        algebra=algebra,
    )


def check_projective_normality(ring: SplitRibbonRing, k_max: int | None = None) -> bool:
    """Whether S~_1 (x) S~_k -> S~_{k+1} surjects for 1 <= k <= k_max."""
    return ring.algebra.degree_one_generates(k_max)


def split_invariants(g: int, m: int, deg_l: int) -> dict:
    """Numerical invariants of the split ribbon over an m-gonal genus-g curve."""
    return {"p_a": 2 * g - 1 - deg_l, "gonality": 2 * m, "lcliff": 2 * m - 2}


def hypothesis_gate(g: int, m: int, p_a: int) -> bool:
    """Whether p_a is large enough for the three-way equivalence to be guaranteed."""
    return p_a >= max(2 * g + 2 * m - 1, 6 * g - 4)
