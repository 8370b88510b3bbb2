"""Graded algebras and graded modules as finite-dimensional pieces plus matrices.

This is the abstraction boundary between geometry and homological algebra:
``curves`` produces section spaces and multiplication tensors, everything
downstream (Koszul differentials, Betti tables, syzygy modules) consumes
only the data held here -- per-degree dimensions and explicit action
matrices.  Pieces of a module may equally well be cohomology subquotients;
nothing in this module assumes they are section spaces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ribbonsyz.curves import SectionSpace, mult_map
from ribbonsyz.fflinalg import PrimeField, matmul_mod, rank

__all__ = [
    "GradedError",
    "InconsistentDims",
    "NotASubspace",
    "GradedModule",
    "GradedAlgebra",
    "algebra_from_sections",
    "module_restrict_action",
]


class GradedError(Exception):
    pass


class InconsistentDims(GradedError):
    pass


class NotASubspace(GradedError):
    pass


@dataclass(frozen=True)
class GradedModule:
    """Graded pieces M_0..M_w acted on by a fixed n-dimensional space V.

    ``action[q]`` has shape (n, dim M_{q+1}, dim M_q): the matrix of the
    k-th distinguished basis vector of V is ``action[q][k]``.  The action
    must commute: x.(y.m) = y.(x.m).
    """

    field: PrimeField
    n: int
    pieces: tuple[int, ...]
    action: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.action) != len(self.pieces) - 1:
            raise InconsistentDims("need one action tensor per consecutive degree pair")
        for q, a in enumerate(self.action):
            want = (self.n, self.pieces[q + 1], self.pieces[q])
            if a.shape != want:
                raise InconsistentDims(f"action[{q}] has shape {a.shape}, expected {want}")

    @property
    def window(self) -> int:
        return len(self.pieces) - 1

    def check_commutativity(self, rng=None, samples: int = 40) -> None:
        """Verify pairwise commutation of the action, exhaustively for n <= 10.

        Above that, seeded random pairs.  Raises GradedError on failure.
        """
        p = self.field.p
        if self.n <= 10:
            pairs = [(k, l) for k in range(self.n) for l in range(k + 1, self.n)]
        else:
            rng = rng or np.random.default_rng(0)
            pairs = [
                tuple(sorted(rng.choice(self.n, size=2, replace=False)))
                for _ in range(samples)
            ]
        for q in range(self.window - 1):
            a_q, a_q1 = self.action[q], self.action[q + 1]
            for k, l in pairs:
                lhs = matmul_mod(a_q1[k], a_q[l], p)
                rhs = matmul_mod(a_q1[l], a_q[k], p)
                if not np.array_equal(lhs, rhs):
                    raise GradedError(
                        f"action does not commute at degree {q} for basis pair ({k},{l})"
                    )


class GradedAlgebra:
    """A graded commutative algebra with unit, given by multiplication tensors.

    ``mult[(a, b)]`` (for 1 <= a <= b, a + b <= window) has shape
    (dims[a], dims[b], dims[a+b]).  Degree 0 is one-dimensional with the
    basis vector acting as the unit; multiplication by degree 0 is
    structural and not stored.
    """

    def __init__(self, field: PrimeField, dims, mult: dict, validate: bool = True):
        self.field = field
        self.dims = tuple(int(d) for d in dims)
        if not self.dims or self.dims[0] != 1:
            raise InconsistentDims("dims[0] must be 1 (the unit)")
        self.mult = {}
        for (a, b), t in mult.items():
            if a > b:
                a, b, t = b, a, np.swapaxes(t, 0, 1)
            want = (self.dims[a], self.dims[b], self.dims[a + b])
            if t.shape != want:
                raise InconsistentDims(f"mult[{(a, b)}] has shape {t.shape}, expected {want}")
            self.mult[(a, b)] = np.asarray(t, dtype=np.int64) % field.p
        if validate:
            self._validate()

    @property
    def window(self) -> int:
        return len(self.dims) - 1

    def tensor(self, a: int, b: int) -> np.ndarray:
        """Multiplication tensor for degrees (a, b), swapping as needed."""
        if a == 0:
            da = self.dims[b]
            return np.eye(da, dtype=np.int64).reshape(1, da, da)
        if b == 0:
            return np.eye(self.dims[a], dtype=np.int64).reshape(self.dims[a], 1, self.dims[a])
        if (a, b) in self.mult:
            return self.mult[(a, b)]
        if (b, a) in self.mult:
            return np.swapaxes(self.mult[(b, a)], 0, 1)
        raise InconsistentDims(f"no multiplication tensor for degrees {(a, b)}")

    def multiply(self, a: int, va, b: int, vb) -> np.ndarray:
        p = self.field.p
        t = self.tensor(a, b)
        da, db, dc = t.shape
        tmp = matmul_mod(np.reshape(va, (1, da)), t.reshape(da, db * dc), p)
        return matmul_mod(np.reshape(vb, (1, db)), tmp.reshape(db, dc), p).ravel()

    def _validate(self) -> None:
        p = self.field.p
        rng = np.random.default_rng(0)
        # commutativity where both orders live in the table
        for (a, b), t in self.mult.items():
            if a == b and not np.array_equal(t, np.swapaxes(t, 0, 1)):
                raise GradedError(f"mult[{(a, a)}] is not symmetric")
        # associativity on seeded random triples for every composable split
        for a in range(1, self.window + 1):
            for b in range(1, self.window + 1 - a):
                for c in range(1, self.window + 1 - a - b):
                    for _ in range(5):
                        va = rng.integers(0, p, self.dims[a])
                        vb = rng.integers(0, p, self.dims[b])
                        vc = rng.integers(0, p, self.dims[c])
                        left = self.multiply(a + b, self.multiply(a, va, b, vb), c, vc)
                        right = self.multiply(a, va, b + c, self.multiply(b, vb, c, vc))
                        if not np.array_equal(left, right):
                            raise GradedError(f"associativity fails on degrees ({a},{b},{c})")

    def as_module(self) -> GradedModule:
        """The algebra as a module over itself, acted on by V = degree 1."""
        action = []
        for q in range(self.window):
            t = self.tensor(1, q)
            action.append(np.ascontiguousarray(np.swapaxes(t, 1, 2)))
        return GradedModule(self.field, self.dims[1], self.dims, tuple(action))

    def degree_one_generates(self, k_max: int | None = None) -> bool:
        """Whether multiplication A_1 x A_k -> A_{k+1} surjects for 1 <= k <= k_max."""
        if k_max is None:
            k_max = self.window - 1
        p = self.field.p
        for k in range(1, k_max + 1):
            t = self.tensor(1, k)
            mat = t.reshape(self.dims[1] * self.dims[k], self.dims[k + 1]).T
            if rank(mat, p) < self.dims[k + 1]:
                return False
        return True


def algebra_from_sections(spaces: list[SectionSpace], validate: bool = True) -> GradedAlgebra:
    """Assemble a graded algebra whose degree-q piece is spaces[q].

    The spaces must live on one model and have arithmetically consistent
    tags (tag_a + tag_b = tag_{a+b}), so polynomial multiplication realises
    the ring structure.  The unit law is verified against the model's
    degree-0 space.
    """
    if not spaces:
        raise InconsistentDims("need at least the degree-0 space")
    model = spaces[0].model
    field = model.field
    if spaces[0].dim != 1:
        raise InconsistentDims("degree-0 space must be one-dimensional")
    tags = [s.tag for s in spaces]
    for q, s in enumerate(spaces):
        if s.model is not model:
            raise InconsistentDims("all spaces must live on one model")
        if q and tags[q] != q * tags[1] + tags[0]:
            raise InconsistentDims("tags must grow linearly with the degree")
    window = len(spaces) - 1
    mult = {}
    for a in range(1, window + 1):
        for b in range(a, window + 1 - a):
            mult[(a, b)] = mult_map(spaces[a], spaces[b]).tensor
    # unit law from the actual model multiplication
    for q in range(1, window + 1):
        t = mult_map(spaces[0], spaces[q]).tensor
        if not np.array_equal(t[0], np.eye(spaces[q].dim, dtype=np.int64)):
            raise GradedError(f"degree-0 section does not act as identity on degree {q}")
    dims = [s.dim for s in spaces]
    return GradedAlgebra(field, dims, mult, validate=validate)


def module_restrict_action(module: GradedModule, subspace: np.ndarray) -> GradedModule:
    """Same pieces, action restricted to a subspace of V given by basis columns."""
    p = module.field.p
    b = np.asarray(subspace, dtype=np.int64) % p
    if b.ndim != 2 or b.shape[0] != module.n:
        raise NotASubspace(f"basis matrix must have {module.n} rows")
    k = b.shape[1]
    if k and rank(b, p) != k:
        raise NotASubspace("basis columns are dependent")
    action = []
    for q in range(module.window):
        old = module.action[q]
        new = np.zeros((k, module.pieces[q + 1], module.pieces[q]), dtype=np.int64)
        for j in range(k):
            acc = np.zeros_like(new[j])
            for i in range(module.n):
                if b[i, j]:
                    acc = (acc + int(b[i, j]) * old[i]) % p
            new[j] = acc
        action.append(new)
    return GradedModule(module.field, k, module.pieces, tuple(action))
