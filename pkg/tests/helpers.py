"""Seeded generators and brute-force oracles shared by the test modules."""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import numpy as np

from syncwalk.chain import TransitionMatrix, from_rows, is_ergodic, is_irreducible
from syncwalk.mapping import MappingLaw, make_law

EX_ROWS = [["0", "0", "1"], ["1/2", "0", "1/2"], ["1/2", "1/2", "0"]]
# Example maps, 0-based images
SIGMA1 = (2, 0, 0)
SIGMA2 = (2, 2, 1)
SIGMA3 = (2, 2, 0)
SIGMA4 = (2, 0, 1)


def example_chain() -> TransitionMatrix:
    return from_rows(EX_ROWS)


def example_family(p: Fraction) -> MappingLaw:
    pairs = [(SIGMA1, p), (SIGMA2, p), (SIGMA3, Fraction(1, 2) - p), (SIGMA4, Fraction(1, 2) - p)]
    pairs = [(m, w) for m, w in pairs if w > 0]
    return make_law("123", [m for m, _ in pairs], [w for _, w in pairs])


def random_row(rng: random.Random, n: int, max_out: int, denom: int = 12) -> list[Fraction]:
    k = rng.randint(1, min(max_out, n))
    cols = rng.sample(range(n), k)
    cuts = sorted(rng.sample(range(1, denom), k - 1)) if k > 1 else []
    parts = [b - a for a, b in zip([0] + cuts, cuts + [denom])]
    row = [Fraction(0)] * n
    for c, w in zip(cols, parts):
        row[c] = Fraction(w, denom)
    return row


def random_chain(rng: random.Random, n: int, max_out: int = 3, denom: int = 12) -> TransitionMatrix:
    return from_rows([random_row(rng, n, max_out, denom) for _ in range(n)])


def random_irreducible(rng: random.Random, n: int, max_out: int = 3, denom: int = 12):
    while True:
        Q = random_chain(rng, n, max_out, denom)
        if is_irreducible(Q):
            return Q


def random_ergodic(rng: random.Random, n: int, max_out: int = 3, denom: int = 12):
    while True:
        Q = random_chain(rng, n, max_out, denom)
        if is_ergodic(Q):
            return Q


def random_p_uniform(rng: random.Random, n: int, k: int, denom: int = 12):
    """Ergodic chain whose rows all rearrange one random k-point law (k >= 2 unless n == 1)."""
    if k < 2 and n > 1:
        raise ValueError("permutation chains with n > 1 are never ergodic")
    while True:
        cuts = sorted(rng.sample(range(1, denom), k - 1)) if k > 1 else []
        parts = [Fraction(b - a, denom) for a, b in zip([0] + cuts, cuts + [denom])]
        nu = parts + [Fraction(0)] * (n - k)
        rows = []
        for _ in range(n):
            perm = list(range(n))
            rng.shuffle(perm)
            rows.append([nu[perm[y]] for y in range(n)])
        Q = from_rows(rows)
        if is_ergodic(Q):
            return Q


def random_law(rng: random.Random, n: int, d: int, denom: int = 8) -> MappingLaw:
    d = min(d, n**n)
    maps: list[tuple[int, ...]] = []
    while len(maps) < d:
        m = tuple(rng.randrange(n) for _ in range(n))
        if m not in maps:
            maps.append(m)
    cuts = sorted(rng.sample(range(1, denom * d), d - 1)) if d > 1 else []
    probs = [Fraction(b - a, denom * d) for a, b in zip([0] + cuts, cuts + [denom * d])]
    return make_law([str(i + 1) for i in range(n)], maps, probs)


# --- independent oracles ---------------------------------------------------


def closure_strongly_connected(Q: TransitionMatrix) -> bool:
    """Warshall transitive closure."""
    n = Q.n
    r = [[Q.rows[i][j] > 0 for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            if r[i][k]:
                for j in range(n):
                    r[i][j] = r[i][j] or r[k][j]
    return all(all(row) for row in r)


def period_by_powers(Q: TransitionMatrix, x: int) -> int | None:
    """gcd of k <= 3n with (Q^k)_{xx} > 0."""
    a = (np.asarray([[float(q > 0) for q in row] for row in Q.rows]) > 0).astype(int)
    p = np.eye(Q.n, dtype=int)
    g = 0
    for k in range(1, 3 * Q.n + 1):
        p = (p @ a > 0).astype(int)
        if p[x, x]:
            g = math.gcd(g, k)
    return g or None


def stationary_float(Q: TransitionMatrix) -> np.ndarray:
    """Left Perron eigenvector by numpy."""
    a = np.asarray([[float(q) for q in row] for row in Q.rows])
    w, v = np.linalg.eig(a.T)
    vec = np.real(v[:, np.argmin(np.abs(w - 1))])
    return vec / vec.sum()


def entropy_formula(Q: TransitionMatrix, lam) -> float:
    total = 0.0
    for x in range(Q.n):
        for q in Q.rows[x]:
            if q > 0:
                total -= float(lam[x]) * float(q) * math.log2(float(q))
    return total


def edge_consistent_maps(Q: TransitionMatrix) -> list[tuple[int, ...]]:
    return list(itertools.product(*[Q.successors(x) for x in range(Q.n)]))


def brute_vertices(Q: TransitionMatrix) -> list[dict[tuple[int, ...], Fraction]]:
    """Every subset of edge-consistent maps of size <= rank, solved exactly.

    Keeps the positive, unique solutions.  Uses numpy ranks for independence and
    Fraction solves only on candidates; exponential, so only for tiny chains.
    """
    from syncwalk._exact import solve_unique

    maps = edge_consistent_maps(Q)
    edges = sorted((x, y) for x in range(Q.n) for y in Q.successors(x))
    rank = len(edges) - Q.n + 1
    cols = [[Fraction(int(m[x] == y)) for x, y in edges] for m in maps]
    b = [Q.rows[x][y] for x, y in edges]
    out = []
    for k in range(1, rank + 1):
        for subset in itertools.combinations(range(len(maps)), k):
            a = [[cols[j][i] for j in subset] for i in range(len(edges))]
            sol = solve_unique(a, b)
            if sol is not None and all(v > 0 for v in sol):
                out.append({maps[j]: v for j, v in zip(subset, sol)})
    return out


def law_entropy_float(probs) -> float:
    return -sum(float(p) * math.log2(float(p)) for p in probs if p > 0)


def max_entropy_cvx(Q: TransitionMatrix) -> float:
    """Maximum entropy over the mapping-law polytope by convex optimisation."""
    import cvxpy as cp

    maps = edge_consistent_maps(Q)
    mu = cp.Variable(len(maps), nonneg=True)
    cons = []
    for x in range(Q.n):
        for y in Q.successors(x):
            idx = [j for j, m in enumerate(maps) if m[x] == y]
            cons.append(cp.sum(mu[idx]) == float(Q.rows[x][y]))
    prob = cp.Problem(cp.Maximize(cp.sum(cp.entr(mu))), cons)
    prob.solve()
    return prob.value / math.log(2)


def shortest_sync_length(maps) -> int | None:
    """Level-by-level search over image sets held as frozensets."""
    n = len(maps[0])
    level = {frozenset(range(n))}
    seen = set(level)
    length = 0
    while level:
        if any(len(s) == 1 for s in level):
            return max(length, 1)
        length += 1
        level = {frozenset(m[x] for x in s) for s in level for m in maps} - seen
        seen |= level
    return None


def collapsing_words(maps, length: int):
    """All words of exactly this length whose composite is constant."""
    n = len(maps[0])
    for word in itertools.product(range(len(maps)), repeat=length):
        image = set(range(n))
        for i in word:
            image = {maps[i][x] for x in image}
        if len(image) == 1:
            yield word


EX_ROAD_TABLE = [
    ("a^(1,1)", 1, 3),
    ("a^(2,1)", 2, 3),
    ("a^(3,1)", 3, 1),
    ("a^(1,2)", 1, 3),
    ("a^(2,2)", 2, 1),
    ("a^(3,2)", 3, 2),
]


def random_out_regular(rng: random.Random, n: int, d: int):
    """Multigraph with d roads leaving every site, targets uniform."""
    from syncwalk.road import make_graph

    roads = [(f"e{x}_{k}", x, rng.randrange(n)) for x in range(n) for k in range(d)]
    return make_graph([str(i + 1) for i in range(n)], roads)


def closure_aperiodic(g) -> bool:
    """Strongly connected with a positive power of the 0/1 adjacency matrix."""
    a = np.zeros((g.n, g.n), dtype=int)
    for r in g.roads:
        a[r.source, r.target] = 1
    p = np.eye(g.n, dtype=int)
    for _ in range((g.n - 1) ** 2 + 1):
        p = (p @ a > 0).astype(int)
    return bool(p.all())
