"""Entropy of mapping laws, relative redundancy, and its attainable range."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._exact import solve_unique
from .chain import TransitionMatrix, edge_set, entropy_rate, is_ergodic, is_irreducible
from .errors import (
    DeterministicChain,
    NotAMappingLaw,
    NotErgodic,
    NotIrreducible,
    SupportTooLarge,
    TargetOutOfRange,
    ToleranceNotReached,
)
from .mapping import (
    STRATEGIES,
    Mapping,
    MappingLaw,
    decompose,
    law_from_pairs,
    make_law,
    verify_mapping_law,
)
from .sync import construct_sync_law, is_sync

DEFAULT_CAP = 10**6
_TOL = 1e-9


def _entropy(probs) -> float:
    return -sum(p * math.log2(p) for p in map(float, probs) if p > 0)


def law_entropy(law: MappingLaw) -> float:
    """Shannon entropy of the law in bits."""
    return _entropy(law.probs)


def redundancy(law: MappingLaw, Q: TransitionMatrix) -> float:
    """Relative extra entropy ``(h(law) - h(Q)) / h(law)`` of realizing Q by ``law``."""
    if not verify_mapping_law(law, Q):
        raise NotAMappingLaw("law does not reproduce the transition matrix")
    h_mu = law_entropy(law)
    if h_mu == 0:
        raise DeterministicChain("redundancy is undefined for a deterministic chain")
    return (h_mu - entropy_rate(Q)) / h_mu


def _edge_consistent_maps(Q: TransitionMatrix, cap: int) -> list[Mapping]:
    succ = [Q.successors(x) for x in range(Q.n)]
    count = math.prod(len(s) for s in succ)
    if count > cap:
        raise SupportTooLarge(f"{count} edge-consistent mappings exceed the cap of {cap}")
    return list(itertools.product(*succ))


def product_law(Q: TransitionMatrix, cap: int = DEFAULT_CAP) -> MappingLaw:
    """Each state picks its successor independently from its own row.

    This law has the largest entropy among all mapping laws for Q, namely the
    sum of the row entropies.
    """
    maps = _edge_consistent_maps(Q, cap)
    probs = [math.prod((Q.rows[x][m[x]] for x in range(Q.n)), start=Fraction(1)) for m in maps]
    return make_law(Q.states, maps, probs)


def heuristic_min_law(Q: TransitionMatrix, restarts: int = 32, seed: int = 0) -> MappingLaw:
    """Lowest-entropy law among the deterministic strategies and seeded random peels."""
    candidates = [decompose(Q, s) for s in STRATEGIES]
    rng = random.Random(seed)
    candidates += [decompose(Q, "random", rng) for _ in range(restarts)]
    return min(candidates, key=law_entropy)


def vertex_laws(Q: TransitionMatrix, cap: int = DEFAULT_CAP) -> list[MappingLaw]:
    """All vertices of the polytope of mapping laws for Q.

    Vertices are the laws whose support columns (edge-indicator vectors over
    E(Q)) are linearly independent.  The search grows a support one column at
    a time while keeping every column reduced against the chosen ones.  While
    the right-hand side still has a nonzero reduced coordinate, some column of
    the target support must be nonzero there: branch over those columns
    (fewest-candidates coordinate first), excluding earlier siblings so each
    support is produced once.  When the residual vanishes the support is final
    and its exact rational solution decides whether it is a vertex.

    Reductions run in floating point; every reported vertex is re-solved and
    checked with exact rationals.  ``cap`` bounds the number of search nodes.
    """
    maps = _edge_consistent_maps(Q, cap)
    edges = sorted(edge_set(Q))
    eidx = {e: i for i, e in enumerate(edges)}
    n_maps, n_edges = len(maps), len(edges)
    rank_bound = n_edges - Q.n + 1
    cols = np.zeros((n_maps, n_edges))
    for j, m in enumerate(maps):
        for x in range(Q.n):
            cols[j, eidx[(x, m[x])]] = 1.0
    b_exact = [Q.rows[x][y] for x, y in edges]
    b = np.array([float(v) for v in b_exact])

    found: list[dict[int, Fraction]] = []
    nodes = 0

    def exact_solution(chosen: list[int]) -> list[Fraction] | None:
        a = [[Fraction(int(cols[j, i])) for j in chosen] for i in range(n_edges)]
        return solve_unique(a, b_exact)

    def visit(red: np.ndarray, w: np.ndarray, chosen: list[int], excluded: np.ndarray) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > cap:
            raise SupportTooLarge(f"vertex search exceeded {cap} nodes")
        live = np.abs(w) > _TOL
        if not live.any():
            coef = np.linalg.lstsq(cols[chosen].T, b, rcond=None)[0]
            if (coef <= _TOL).any():
                return
            sol = exact_solution(chosen)
            if sol is not None and all(v > 0 for v in sol):
                found.append(dict(zip(chosen, sol)))
            return
        if len(chosen) == rank_bound:
            return
        usable = (np.abs(red) > _TOL) & ~excluded[:, None]
        counts = np.where(live, usable.sum(axis=0), n_maps + 1)
        coord = int(np.argmin(counts))
        if counts[coord] == 0:
            return
        siblings = excluded.copy()
        for c in np.flatnonzero(usable[:, coord]):
            vec = red[c]
            piv = int(np.argmax(np.abs(vec)))
            child = red - np.outer(red[:, piv] / vec[piv], vec)
            child_w = w - (w[piv] / vec[piv]) * vec
            visit(child, child_w, chosen + [int(c)], siblings.copy())
            siblings[c] = True

    visit(cols.copy(), b.copy(), [], np.zeros(n_maps, dtype=bool))
    laws = []
    for v in found:
        idx = sorted(v)
        laws.append(make_law(Q.states, [maps[j] for j in idx], [v[j] for j in idx]))
    laws.sort(key=lambda law: law.support)
    return laws


@dataclass(frozen=True)
class RedundancyBounds:
    r_min: float
    r_max: float
    r_min_method: str  # "exact" or "heuristic"
    r_max_method: str  # "closed-form"
    h_y: float
    min_law: MappingLaw
    max_law: MappingLaw
    minimizers: tuple[MappingLaw, ...] = field(default=(), repr=False)


def _check_bounds_input(Q: TransitionMatrix) -> None:
    if not is_irreducible(Q):
        raise NotIrreducible("redundancy bounds need an irreducible chain")
    if Q.is_deterministic():
        raise DeterministicChain("redundancy is undefined for a deterministic chain")


def redundancy_bounds(
    Q: TransitionMatrix,
    exact_min: bool = False,
    *,
    restarts: int = 32,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
) -> RedundancyBounds:
    """Smallest and largest redundancy over all mapping laws for Q.

    The maximum comes from :func:`product_law`.  The minimum sits at a vertex
    of the law polytope because entropy is concave; ``exact_min`` enumerates the
    vertices, otherwise the best of several peeling runs gives an upper bound
    on the true minimum (tagged ``"heuristic"``).
    """
    _check_bounds_input(Q)
    h_y = entropy_rate(Q)
    hi = product_law(Q, cap)
    if exact_min:
        vertices = vertex_laws(Q, cap)
        h_min = min(law_entropy(v) for v in vertices)
        minimizers = tuple(v for v in vertices if law_entropy(v) <= h_min + 1e-12)
        lo, method = minimizers[0], "exact"
    else:
        lo, method = heuristic_min_law(Q, restarts, seed), "heuristic"
        minimizers = (lo,)
    h_lo, h_hi = law_entropy(lo), law_entropy(hi)
    return RedundancyBounds(
        r_min=(h_lo - h_y) / h_lo,
        r_max=(h_hi - h_y) / h_hi,
        r_min_method=method,
        r_max_method="closed-form",
        h_y=h_y,
        min_law=lo,
        max_law=hi,
        minimizers=minimizers,
    )


def _sig(x: float | None) -> float | None:
    return None if x is None else float(f"{x:.12g}")


@dataclass(frozen=True)
class RedundancyReport:
    h_y: float
    h_mu: float | None
    r_mu: float | None
    bounds: tuple[float, float] | None
    methods: dict[str, str]

    def to_json(self) -> dict:
        return {
            "h_Y": _sig(self.h_y),
            "h_mu": _sig(self.h_mu),
            "r_mu": _sig(self.r_mu),
            "bounds": (
                None
                if self.bounds is None
                else {
                    "r_min": _sig(self.bounds[0]),
                    "R_max": _sig(self.bounds[1]),
                }
            ),
            "methods": dict(self.methods),
        }


def redundancy_report(
    Q: TransitionMatrix, law: MappingLaw | None = None, exact_min: bool = False, **kwargs
) -> RedundancyReport:
    """Bounds plus, when a law is given, its entropy and redundancy."""
    h_y = entropy_rate(Q)
    h_mu = r_mu = None
    if law is not None:
        h_mu = law_entropy(law)
        r_mu = redundancy(law, Q)
    if Q.is_deterministic():
        return RedundancyReport(h_y, h_mu, r_mu, None, {"r_min": "undefined", "R_max": "undefined"})
    b = redundancy_bounds(Q, exact_min, **kwargs)
    return RedundancyReport(
        h_y, h_mu, r_mu, (b.r_min, b.r_max), {"r_min": b.r_min_method, "R_max": b.r_max_method}
    )


class _Segment:
    """Float entropy of ``(1-e)(t lo + (1-t) hi) + e extra`` over the union of supports."""

    def __init__(self, lo: MappingLaw, hi: MappingLaw, extra: MappingLaw | None) -> None:
        keys: dict[Mapping, int] = {}
        for law in (lo, hi, extra):
            if law is not None:
                for m in law.support:
                    keys.setdefault(m, len(keys))
        self.keys = list(keys)
        self.lo, self.hi, self.extra = (
            [float(law.prob(m)) if law is not None else 0.0 for m in self.keys]
            for law in (lo, hi, extra)
        )

    def entropy(self, t: float, e: float = 0.0) -> float:
        return _entropy(
            (1 - e) * (t * a + (1 - t) * b) + e * c for a, b, c in zip(self.lo, self.hi, self.extra)
        )


def target_redundancy_law(
    Q: TransitionMatrix,
    r_target: float,
    tol: float = 1e-6,
    require_sync: bool = False,
    *,
    exact_min: bool | None = None,
    max_iter: int = 200,
    seed: int = 0,
    bounds: RedundancyBounds | None = None,
) -> MappingLaw:
    """A mapping law for Q whose redundancy is within ``tol`` of ``r_target``.

    Mixes a minimum-redundancy law with the product law and bisects on the
    mixing weight.  With ``require_sync`` a sync law from
    :func:`construct_sync_law` is blended in with a small weight first, halved
    until the target is still bracketed; the target must then lie strictly
    inside the attainable range.

    ``exact_min=None`` tries vertex enumeration and falls back to the heuristic
    minimum when the polytope is too large.
    """
    if require_sync and not is_ergodic(Q):
        raise NotErgodic("sync laws exist only for ergodic chains")
    if bounds is None:
        if exact_min is None:
            try:
                bounds = redundancy_bounds(Q, True)
            except SupportTooLarge:
                bounds = redundancy_bounds(Q, False, seed=seed)
        else:
            bounds = redundancy_bounds(Q, exact_min, seed=seed)
    r_lo, r_hi = bounds.r_min, bounds.r_max
    if require_sync:
        if not r_lo < r_target < r_hi:
            raise TargetOutOfRange(
                f"sync target {r_target} must lie strictly inside ({r_lo:.12g}, {r_hi:.12g})"
            )
    elif not r_lo - tol <= r_target <= r_hi + tol:
        raise TargetOutOfRange(f"target {r_target} outside [{r_lo:.12g}, {r_hi:.12g}]")

    h_y = bounds.h_y
    lo, hi = bounds.min_law, bounds.max_law
    extra = construct_sync_law(Q).law if require_sync else None
    seg = _Segment(lo, hi, extra)

    def r_at(t: float, e: float) -> float:
        h = seg.entropy(t, e)
        return (h - h_y) / h

    e = 0.0
    if require_sync:
        e = 0.5
        for _ in range(max_iter):
            if r_at(1.0, e) < r_target < r_at(0.0, e):
                break
            e /= 2
        else:
            raise ToleranceNotReached("could not bracket the target with a sync component")

    # r_at(0) is the high end, r_at(1) the low end; keep that orientation.
    a, b = 0.0, 1.0
    t = None
    for endpoint in (a, b):
        if abs(r_at(endpoint, e) - r_target) <= tol / 4:
            t = endpoint
    for _ in range(max_iter):
        if t is not None:
            break
        mid = (a + b) / 2
        r_mid = r_at(mid, e)
        if abs(r_mid - r_target) <= tol / 4:
            t = mid
        elif r_mid > r_target:
            a = mid
        else:
            b = mid
    if t is None:
        raise ToleranceNotReached(f"bisection did not reach tolerance {tol} in {max_iter} steps")

    t_q, e_q = Fraction(t), Fraction(e)
    pairs = []
    for law, w in ((lo, (1 - e_q) * t_q), (hi, (1 - e_q) * (1 - t_q)), (extra, e_q)):
        if law is not None and w:
            pairs += [(m, w * p) for m, p in law.items()]

    result = law_from_pairs(Q.states, pairs)
    if abs(redundancy(result, Q) - r_target) > tol:
        raise ToleranceNotReached("exact law misses the target after rounding")
    if require_sync and not is_sync(result):
        raise ToleranceNotReached("blended law lost synchronization")
    return result
