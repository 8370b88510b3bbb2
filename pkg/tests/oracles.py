"""Independent brute-force oracles used across the test suite.

Everything here is deliberately naive and self-contained (pure-python
integers, no numpy tricks, no imports from the package's fast paths) so the
production code can be checked against an implementation that shares
nothing with it beyond the problem statement.
"""

from __future__ import annotations

import math
from fractions import Fraction


def naive_rank(rows: list[list[int]], p: int) -> int:
    """Rank over Z/p by fraction-free Gaussian elimination on python ints."""
    mat = [[x % p for x in row] for row in rows]
    n = len(mat)
    m = len(mat[0]) if n else 0
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if mat[i][c] % p != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        for i in range(n):
            if i != r and mat[i][c] % p != 0:
                f = mat[i][c]
                g = mat[r][c]
                mat[i] = [(g * mat[i][j] - f * mat[r][j]) % p for j in range(m)]
        r += 1
        if r == n:
            break
    return r


def naive_solve(rows: list[list[int]], rhs: list[int], p: int):
    """One solution of A x = rhs over Z/p, or None if inconsistent."""
    n = len(rows)
    m = len(rows[0]) if n else 0
    aug = [[rows[i][j] % p for j in range(m)] + [rhs[i] % p] for i in range(n)]
    pivots = []
    r = 0
    for c in range(m + 1):
        piv = next((i for i in range(r, n) if aug[i][c]), None)
        if piv is None:
            continue
        if c == m:
            return None
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [(v * inv) % p for v in aug[r]]
        for i in range(n):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(aug[i][j] - f * aug[r][j]) % p for j in range(m + 1)]
        pivots.append(c)
        r += 1
    x = [0] * m
    for i, c in enumerate(pivots):
        x[c] = aug[i][m]
    return x


def rational_rank(rows: list[list[int]]) -> int:
    """Rank over Q (exact, Fractions) for characteristic-free cross-checks."""
    mat = [[Fraction(x) for x in row] for row in rows]
    n = len(mat)
    m = len(mat[0]) if n else 0
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        for i in range(n):
            if i != r and mat[i][c] != 0:
                f = mat[i][c] / mat[r][c]
                mat[i] = [mat[i][j] - f * mat[r][j] for j in range(m)]
        r += 1
        if r == n:
            break
    return r


def three_term_cohomology_dim(d_in, d_out, middle_dim: int, p: int) -> int:
    """dim of middle cohomology of  A --d_in--> B --d_out--> C  over Z/p.

    d_in, d_out are row-lists (possibly empty).  dim = dim ker(d_out) -
    rank(d_in); the caller guarantees d_out @ d_in = 0.
    """
    rank_out = naive_rank(d_out, p) if d_out and d_out[0] else 0
    rank_in = naive_rank(d_in, p) if d_in and d_in[0] else 0
    return middle_dim - rank_out - rank_in


def eagon_northcott_b_p1(n: int, p: int) -> int:
    """Linear-strand Betti number b_{p,1} of the degree-n rational normal curve."""
    return p * math.comb(n, p + 1)


def oracle_koszul_matrix(n: int, p: int, dim_src: int, dim_tgt: int, action, prime: int):
    """Koszul differential wedge^p V (x) M_q -> wedge^{p-1} V (x) M_{q+1}, naive build.

    Independent conventions on purpose: subsets enumerated in lexicographic
    order via itertools, basis index = m_index * num_subsets + subset_rank,
    signs (-1)^j with j zero-based.  ``action[k]`` is the matrix (list of
    lists, dim_tgt x dim_src) of the k-th basis vector of V.
    """
    from itertools import combinations

    src_subsets = list(combinations(range(n), p))
    tgt_subsets = list(combinations(range(n), p - 1)) if p >= 1 else []
    tgt_index = {s: i for i, s in enumerate(tgt_subsets)}
    rows = len(tgt_subsets) * dim_tgt
    cols = len(src_subsets) * dim_src
    mat = [[0] * cols for _ in range(rows)]
    for si, s in enumerate(src_subsets):
        for j, sj in enumerate(s):
            ti = tgt_index[s[:j] + s[j + 1 :]]
            sign = 1 if j % 2 == 0 else -1
            for a in range(dim_tgt):
                for b in range(dim_src):
                    v = sign * action[sj][a][b]
                    if v:
                        row = a * len(tgt_subsets) + ti
                        col = b * len(src_subsets) + si
                        mat[row][col] = (mat[row][col] + v) % prime
    return mat


def oracle_koszul_dim(n: int, pieces, actions, i: int, q: int, prime: int) -> int:
    """dim K_{i,q} of a graded module by naive three-term ranks.

    ``pieces`` are dims per degree, ``actions[q][k]`` python matrices.
    Requires degrees q-1, q, q+1 in window (q-1 treated as zero when q=0).
    """
    d_out = oracle_koszul_matrix(n, i, pieces[q], pieces[q + 1], actions[q], prime)
    rank_out = naive_rank(d_out, prime) if d_out and d_out[0] else 0
    if q >= 1:
        d_in = oracle_koszul_matrix(n, i + 1, pieces[q - 1], pieces[q], actions[q - 1], prime)
        rank_in = naive_rank(d_in, prime) if d_in and d_in[0] else 0
    else:
        rank_in = 0
    middle = math.comb(n, i) * pieces[q]
    return middle - rank_out - rank_in


def plane_points_exhaustive(coeffs: dict[tuple[int, int, int], int], p: int):
    """All projective F_p-points of a plane curve by scanning P^2 normal forms."""
    pts = []

    def f(x, y, z):
        return sum(c * pow(x, a, p) * pow(y, b, p) * pow(z, g, p) for (a, b, g), c in coeffs.items()) % p

    for y in range(p):
        for z in range(p):
            if f(1, y, z) == 0:
                pts.append((1, y, z))
    for z in range(p):
        if f(0, 1, z) == 0:
            pts.append((0, 1, z))
    if f(0, 0, 1) == 0:
        pts.append((0, 0, 1))
    return pts
