"""The syzygy module M^p, its Koszul maps, and the split-ribbon equivalences.

For a curve C with a negative-degree bundle L, write W = K_C - L and fix p.
The graded pieces

    M^p_q = K_{p,1}(C, K_C^q, W)

are middle cohomologies of three-term complexes in wedge powers of
U = H^0(W); multiplication by H^0(K_C) on coefficients descends to
cohomology and makes M^p a module over Sym H^0(K_C).  Its Koszul
differentials are the maps Phi_{i,p,q}, and the split-ribbon resolution
Clifford index question reduces to their surjectivity at q = 1 (for
i + j = 2m - 3), equivalently to the vanishing of K_{i,1}(M^j).

Cohomology pieces carry explicit bases: cocycles = coboundaries (+) a
pivot-chosen complement, and the action is computed on complement
representatives and reduced.  Every step that must preserve coboundaries
or cocycles is checked exactly; a failure raises IllDefined (a bug, not a
mathematical state).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ribbonsyz.curves import HyperellipticCurve, PlaneCurve, mult_map
from ribbonsyz.fflinalg import (
    image_basis,
    kernel_basis,
    matmul_mod,
    rank,
    rref,
    solve,
)
from ribbonsyz.graded import GradedModule
from ribbonsyz.koszul import KoszulCalculator, NoNonzero, koszul_differential, rcliff
from ribbonsyz.ribbon import (
    SplitRibbonRing,
    UnsupportedConormal,
    build_split_ribbon,
    hypothesis_gate,
    split_invariants,
)

__all__ = [
    "IllDefined",
    "HypothesisUnmetWarning",
    "SyzygyModule",
    "PhiVerdict",
    "build_syzygy_module",
    "phi_map",
    "module_koszul_vanishing",
    "green_split_report",
    "recompute_consistency",
]


class IllDefined(Exception):
    """An exact well-definedness check failed: implementation bug."""


class HypothesisUnmetWarning(UserWarning):
    """Lemma hypotheses fail; the computed value is returned regardless."""


def _conormal_tags(model, t: int):
    """(canonical tag unit, W tag) for the supported conormal L = -t * polarization."""
    if t < 1:
        raise UnsupportedConormal("conormal bundle must be a negative multiple (t >= 1)")
    if isinstance(model, PlaneCurve):
        return model.canonical_tag, model.canonical_tag + t
    if isinstance(model, HyperellipticCurve):
        return model.canonical_tag, model.canonical_tag + t
    raise UnsupportedConormal(f"unsupported model {model!r}")


@dataclass(frozen=True)
class _Piece:
    """One graded piece M^p_q with its representative bases.

    Everything lives in the ambient space wedge^p U (x) H^0(K^q W):
    ``cocycles`` = ker of the outgoing Koszul map, ``coboundaries`` = image
    of the incoming one, ``complement`` the pivot-chosen complement, and
    ``frame`` = [coboundaries | complement] for coordinate solves.
    """

    dim: int
    cocycles: np.ndarray
    coboundaries: np.ndarray
    complement: np.ndarray
    frame: np.ndarray


@dataclass(frozen=True)
class SyzygyModule:
    """M^p as a module over Sym H^0(K_C), with explicit presentations."""

    model: object
    conormal_multiple: int
    p: int
    g: int
    module: GradedModule
    pieces: tuple[_Piece, ...]
    h1_neg_l: int

    @property
    def dims(self) -> tuple[int, ...]:
        return self.module.pieces


@dataclass(frozen=True)
class PhiVerdict:
    """Surjectivity verdict for Phi_{i,p,q}."""

    i: int
    j: int
    q: int
    matrix: np.ndarray
    src: int
    tgt: int
    rank: int

    @property
    def surjective(self) -> bool:
        return self.rank == self.tgt


def _complement_split(cob: np.ndarray, ker: np.ndarray, p: int):
    """Deterministic complement of the coboundary span inside the cocycles.

    Column-pivots [cob | ker]: the coboundary columns are independent, so
    the extra pivot columns in the kernel block extend them to a basis.
    """
    if ker.shape[1] == 0:
        return ker, cob
    stacked = np.hstack([cob, ker])
    _, pivots = rref(stacked, p)
    comp_cols = [j - cob.shape[1] for j in pivots if j >= cob.shape[1]]
    comp = ker[:, comp_cols]
    return comp, np.hstack([cob, comp])


def build_syzygy_module(model, conormal_multiple: int, p: int, window: int = 2) -> SyzygyModule:
    """Construct M^p with pieces for q = 0..window and a verified action.

    Each piece is the middle cohomology of

      wedge^{p+1} U (x) H^0(K^q)  ->  wedge^p U (x) H^0(K^q W)  ->  wedge^{p-1} U (x) H^0(K^q W^2),

    computed as K_{p,1} of the coefficient module [H^0(K^q), H^0(K^q W),
    H^0(K^q W^2)] over U.  The H^0(K_C) action multiplies coefficients and
    is checked, exactly, to send cocycles to cocycles and coboundaries to
    coboundaries before being reduced to cohomology coordinates.
    """
    k_tag, w_tag = _conormal_tags(model, conormal_multiple)
    prime = model.field.p
    u_space = model.sections(w_tag)
    k_space = model.sections(k_tag)
    g = k_space.dim

    def coefficient_module(q: int) -> GradedModule:
        spaces = [model.sections(q * k_tag + j * w_tag) for j in range(3)]
        action = []
        for j in range(2):
            mm = mult_map(u_space, spaces[j])
            action.append(
                np.ascontiguousarray(np.swapaxes(mm.tensor, 1, 2))
            )
        return GradedModule(model.field, u_space.dim, tuple(s.dim for s in spaces), tuple(action))

    pieces: list[_Piece] = []
    outgoing: list[np.ndarray] = []
    for q in range(window + 1):
        nq = coefficient_module(q)
        d_out = koszul_differential(nq, p, 1)
        d_in = koszul_differential(nq, p + 1, 0)
        ker = kernel_basis(d_out, prime)
        cob = image_basis(d_in, prime)
        if cob.shape[1] and np.any(matmul_mod(d_out, cob, prime)):
            raise IllDefined("coefficient complex is not a complex (d o d != 0)")
        comp, frame = _complement_split(cob, ker, prime)
        pieces.append(
            _Piece(
                dim=comp.shape[1],
                cocycles=ker,
                coboundaries=cob,
                complement=comp,
                frame=frame,
            )
        )
        outgoing.append(d_out)

    # action of H^0(K_C) on cohomology representatives
    action_tensors = []
    for q in range(window):
        src_space = model.sections(q * k_tag + w_tag)
        tgt_space = model.sections((q + 1) * k_tag + w_tag)
        mm = mult_map(k_space, src_space)
        acts = np.zeros((g, pieces[q + 1].dim, pieces[q].dim), dtype=np.int64)
        for k in range(g):
            mk = mm.action_of(k)  # H^0(K^q W) -> H^0(K^{q+1} W)
            lifted = _apply_on_coefficients(pieces[q].complement, mk, src_space.dim, prime)
            if lifted.size and np.any(matmul_mod(outgoing[q + 1], lifted, prime)):
                raise IllDefined("action does not preserve cocycles")
            cob_img = _apply_on_coefficients(pieces[q].coboundaries, mk, src_space.dim, prime)
            if cob_img.shape[1]:
                b_next = pieces[q + 1].coboundaries
                stacked = np.hstack([b_next, cob_img])
                if rank(stacked, prime) != b_next.shape[1]:
                    raise IllDefined("action does not preserve coboundaries")
            if pieces[q].dim:
                coords = solve(pieces[q + 1].frame, lifted, prime)
                acts[k] = coords[pieces[q + 1].coboundaries.shape[1] :, :]
        action_tensors.append(acts)

    module = GradedModule(
        model.field, g, tuple(pc.dim for pc in pieces), tuple(action_tensors)
    )
    module.check_commutativity()
    h1_neg_l = model.h0(k_tag + (k_tag - w_tag))  # h^1(-L) = h^0(K_C + L)
    return SyzygyModule(
        model=model,
        conormal_multiple=conormal_multiple,
        p=p,
        g=g,
        module=module,
        pieces=tuple(pieces),
        h1_neg_l=h1_neg_l,
    )


def _apply_on_coefficients(vectors: np.ndarray, coeff_map: np.ndarray, src_dim: int, p: int) -> np.ndarray:
    """Apply (identity on the wedge factor) (x) coeff_map to stacked columns.

    Columns of ``vectors`` live in wedge^p U (x) Src with index
    wedge_rank * dim(Src) + coefficient_index.
    """
    rows, ncols = vectors.shape
    tgt_dim = coeff_map.shape[0]
    if rows == 0 or ncols == 0 or src_dim == 0:
        wedge = rows // src_dim if src_dim else 0
        return np.zeros((wedge * tgt_dim, ncols), dtype=np.int64)
    wedge = rows // src_dim
    # (wedge*src, ncols) -> (src, wedge*ncols) -> multiply -> back
    blocks = vectors.reshape(wedge, src_dim, ncols).transpose(1, 0, 2).reshape(src_dim, -1)
    hit = matmul_mod(coeff_map, blocks, p)
    return (
        hit.reshape(tgt_dim, wedge, ncols).transpose(1, 0, 2).reshape(wedge * tgt_dim, ncols)
    )


def phi_map(syz: SyzygyModule, i: int, q: int = 1) -> PhiVerdict:
    """The Koszul differential Phi_{i,p,q} of M^p over Sym H^0(K_C).

    Maps wedge^{i+1} H^0(K) (x) M^p_{q-1} -> wedge^i H^0(K) (x) M^p_q;
    surjectivity is decided by rank.
    """
    mat = koszul_differential(syz.module, i + 1, q - 1)
    return PhiVerdict(
        i=i,
        j=syz.p,
        q=q,
        matrix=mat,
        src=mat.shape[1],
        tgt=mat.shape[0],
        rank=rank(mat, syz.model.field.p) if mat.size else 0,
    )


def lemma_hypotheses(syz: SyzygyModule) -> dict:
    """The two hypotheses under which surjectivity <=> vanishing is a theorem."""
    return {
        "h1_neg_l_vanishes": syz.h1_neg_l == 0,
        "p_small_enough": syz.p <= 2 * syz.g - 4,
    }


def module_koszul_vanishing(syz: SyzygyModule, i: int) -> int:
    """dim K_{i,1}(M^p, H^0(K_C)), the middle cohomology of the three-term complex.

    Warns (HypothesisUnmetWarning) when the hypotheses tying this to the
    surjectivity of Phi_{i,p,1} fail; the dimension is returned either way.
    """
    hyp = lemma_hypotheses(syz)
    if not all(hyp.values()):
        warnings.warn(
            f"surjectivity<=>vanishing hypotheses unmet for p={syz.p}: {hyp}",
            HypothesisUnmetWarning,
            stacklevel=2,
        )
    return KoszulCalculator(syz.module).dim(i, 1)


def green_split_report(model, conormal_multiple: int, ring: SplitRibbonRing | None = None) -> dict:
    """All three split-ribbon equivalence conditions, computed independently.

    (1) the resolution Clifford index of the split ribbon equals 2m - 2,
        read off the computed Betti table;
    (2) Phi_{i,j,1} is surjective for all i, j >= 0 with i + j = 2m - 3;
    (3) K_{i,1}(M^j) = 0 for the same pairs.

    The consistency flag asserts exactly what the theory guarantees: under
    the p_a gate, (1) and (2) must agree; where additionally the
    surjectivity<=>vanishing hypotheses hold for a pair, its two verdicts
    must agree.  A False flag signals an implementation bug.
    """
    if ring is None:
        ring = build_split_ribbon(model, conormal_multiple)
    m = model.gonality
    inv = split_invariants(ring.g, m, ring.deg_l)
    gate = hypothesis_gate(ring.g, m, ring.p_a)
    table = ring.betti()
    try:
        rc = rcliff(table)
    except NoNonzero:
        rc = None
    cond1 = rc == inv["lcliff"]

    pairs = [(i, 2 * m - 3 - i) for i in range(2 * m - 2)] if 2 * m - 3 >= 0 else []
    phi_entries = []
    van_entries = []
    syz_cache: dict[int, SyzygyModule] = {}
    for i, j in pairs:
        if j not in syz_cache:
            syz_cache[j] = build_syzygy_module(model, conormal_multiple, j)
        syz = syz_cache[j]
        verdict = phi_map(syz, i, 1)
        phi_entries.append(
            {
                "i": i,
                "j": j,
                "surjective": verdict.surjective,
                "src": verdict.src,
                "tgt": verdict.tgt,
            }
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", HypothesisUnmetWarning)
            dim = module_koszul_vanishing(syz, i)
        hyp = lemma_hypotheses(syz)
        van_entries.append({"i": i, "j": j, "dim": dim, "hypotheses_met": all(hyp.values())})
    report = {
        "family": model.family,
        "g": ring.g,
        "m": m,
        "p_a": ring.p_a,
        "deg_l": ring.deg_l,
        "rcliff": rc,
        "lcliff": inv["lcliff"],
        "gonality": inv["gonality"],
        "gate": gate,
        "phi": phi_entries,
        "m_vanishing": van_entries,
        "betti": table.to_json_obj(),
    }
    return recompute_consistency(report)


def recompute_consistency(report: dict) -> dict:
    """Fill the conditions and consistency flag from a report's raw entries.

    Factored out so fault-injection tests can corrupt an entry and watch
    the inconsistency surface through the same code path.
    """
    cond1 = report["rcliff"] == report["lcliff"]
    cond2 = all(e["surjective"] for e in report["phi"])
    cond3 = all(e["dim"] == 0 for e in report["m_vanishing"])
    consistent = True
    if report["gate"] and cond1 != cond2:
        consistent = False
    for phi_e, van_e in zip(report["phi"], report["m_vanishing"]):
        if van_e["hypotheses_met"] and phi_e["surjective"] != (van_e["dim"] == 0):
            consistent = False
    report["conditions"] = {
        "rcliff_equals_lcliff": cond1,
        "phi_surjective": cond2,
        "vanishing": cond3,
    }
    report["consistent"] = consistent
    return report
