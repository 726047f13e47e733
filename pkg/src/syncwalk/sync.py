"""Synchronizing words and synchronizing mapping laws."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .chain import TransitionMatrix, edge_set, is_ergodic, primitivity_index, validate_chain
from .errors import NotErgodic, StateSpaceTooLarge
from .mapping import (
    Mapping,
    MappingLaw,
    compose_word,
    decompose,
    induced_chain,
    law_from_pairs,
    mix,
)

MAX_SUBSET_STATES = 12


@dataclass(frozen=True)
class SyncWord:
    """Support positions (0-based, applied left to right) collapsing V onto ``target``."""

    indices: tuple[int, ...]
    target: int

    def __len__(self) -> int:
        return len(self.indices)

    def mappings(self, maps) -> list[Mapping]:
        maps = _maps(maps)
        return [maps[i] for i in self.indices]


def _maps(obj) -> list[Mapping]:
    if isinstance(obj, MappingLaw):
        return list(obj.support)
    return [tuple(m) for m in obj]


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def is_sync(law) -> bool:
    """True iff some word over the support collapses V to one point.

    Equivalent to: every pair of states can be merged by some word.  Decided by
    backward search on the pair graph.
    """
    maps = _maps(law)
    n = len(maps[0])
    if n == 1:
        return True
    preimages: dict[tuple[int, int], list[tuple[int, int]]] = {}
    good: set[tuple[int, int]] = set()
    queue: deque[tuple[int, int]] = deque()
    for u in range(n):
        for v in range(u + 1, n):
            for m in maps:
                a, b = m[u], m[v]
                if a == b:
                    if (u, v) not in good:
                        good.add((u, v))
                        queue.append((u, v))
                else:
                    preimages.setdefault(_pair(a, b), []).append((u, v))
    while queue:
        p = queue.popleft()
        for q in preimages.get(p, ()):
            if q not in good:
                good.add(q)
                queue.append(q)
    return len(good) == n * (n - 1) // 2


def _merge_word(maps: list[Mapping], u: int, v: int) -> list[int] | None:
    """Shortest word sending u and v to the same state (BFS on pairs)."""
    start = _pair(u, v)
    parent: dict[tuple[int, int], tuple[tuple[int, int], int] | None] = {start: None}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for i, m in enumerate(maps):
            a, b = m[p[0]], m[p[1]]
            if a == b:
                word = [i]
                while parent[p] is not None:
                    p, j = parent[p]
                    word.append(j)
                return word[::-1]
            q = _pair(a, b)
            if q not in parent:
                parent[q] = (p, i)
                queue.append(q)
    return None


def find_sync_word(law) -> SyncWord | None:
    """A synchronizing word built by merging the current image two states at a time.

    Length is at most ``(n-1) * n(n-1)/2``.  Returns None if the law is not sync.
    """
    maps = _maps(law)
    n = len(maps[0])
    if n == 1:
        return SyncWord((0,), 0)
    image = sorted(set(range(n)))
    word: list[int] = []
    while len(image) > 1:
        piece = _merge_word(maps, image[0], image[1])
        if piece is None:
            return None
        word.extend(piece)
        for i in piece:
            image = sorted({maps[i][s] for s in image})
    return SyncWord(tuple(word), image[0])


def shortest_sync_word(law, max_len: int | None = None) -> SyncWord | None:
    """Minimum-length synchronizing word by BFS over image subsets.

    Exponential in n; refuses more than MAX_SUBSET_STATES states.
    """
    maps = _maps(law)
    n = len(maps[0])
    if n > MAX_SUBSET_STATES:
        raise StateSpaceTooLarge(f"subset search limited to {MAX_SUBSET_STATES} states, got {n}")
    if n == 1:
        return SyncWord((0,), 0) if max_len is None or max_len >= 1 else None
    full = (1 << n) - 1
    parent: dict[int, tuple[int, int] | None] = {full: None}
    frontier = [full]
    depth = 0
    while frontier and (max_len is None or depth < max_len):
        depth += 1
        nxt = []
        for s in frontier:
            members = [x for x in range(n) if s >> x & 1]
            for i, m in enumerate(maps):
                t = 0
                for x in members:
                    t |= 1 << m[x]
                if t in parent:
                    continue
                parent[t] = (s, i)
                if t & (t - 1) == 0:
                    word = []
                    cur = t
                    while parent[cur] is not None:
                        cur, j = parent[cur]
                        word.append(j)
                    return SyncWord(tuple(word[::-1]), t.bit_length() - 1)
                nxt.append(t)
        frontier = nxt
    return None


def check_sync_word(law, word: SyncWord) -> bool:
    maps = _maps(law)
    if not word.indices or any(not 0 <= i < len(maps) for i in word.indices):
        return False
    image = set(compose_word(word.mappings(maps)))
    return image == {word.target}


@dataclass(frozen=True)
class SyncConstruction:
    law: MappingLaw
    word: SyncWord
    r: int
    eps: Fraction
    backward_sets: tuple[frozenset[int], ...]  # backward_sets[k] is V_k, k = 0..r
    chain_words: tuple[Mapping, ...]  # sigma_1 .. sigma_r
    residual: TransitionMatrix | None  # Q2, absent when eps == 1


def construct_sync_law(Q: TransitionMatrix, x0: int | str | None = None) -> SyncConstruction:
    """Sync mapping law for an ergodic chain.

    With r the primitivity index, the backward sets ``V_r = {x0}``,
    ``V_{k-1} = pred(V_k)`` reach ``V_0 = V``.  Maps ``sigma_k`` send
    ``V_{k-1}`` into ``V_k`` along edges of Q, so ``sigma_r o ... o sigma_1``
    is constant at x0.  The uniform law on them is mixed with weight
    ``eps = min positive entry`` against a decomposition of the residual
    ``(Q - eps Q1) / (1 - eps)``.
    """
    if not is_ergodic(Q):
        raise NotErgodic("a sync mapping law exists only for ergodic chains")
    if x0 is None:
        x0 = 0
    elif isinstance(x0, str):
        x0 = Q.index(x0)
    n = Q.n
    r = primitivity_index(Q)
    succ = [Q.successors(x) for x in range(n)]

    sets: list[frozenset[int]] = [frozenset()] * (r + 1)
    sets[r] = frozenset({x0})
    for k in range(r, 0, -1):
        sets[k - 1] = frozenset(x for x in range(n) if any(y in sets[k] for y in succ[x]))
    assert sets[0] == frozenset(range(n))

    sigmas: list[Mapping] = []
    for k in range(1, r + 1):
        sigma = []
        for x in range(n):
            if x in sets[k - 1]:
                sigma.append(min(y for y in succ[x] if y in sets[k]))
            else:
                sigma.append(succ[x][0])
        sigmas.append(tuple(sigma))

    uniform = law_from_pairs(Q.states, [(s, Fraction(1, r)) for s in sigmas])
    q1 = induced_chain(uniform)
    edges = edge_set(Q)
    eps = min(Q.rows[x][y] for x, y in edges)

    residual = None
    if eps == 1:
        law = uniform
    else:
        residual = validate_chain(
            Q.states,
            [
                [(Q.rows[x][y] - eps * q1.rows[x][y]) / (1 - eps) for y in range(n)]
                for x in range(n)
            ],
        )
        law = mix([(eps, uniform), (1 - eps, decompose(residual))])

    word = SyncWord(tuple(law.support.index(s) for s in sigmas), x0)
    return SyncConstruction(law, word, r, eps, tuple(sets), tuple(sigmas), residual)
