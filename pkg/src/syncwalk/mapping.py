"""Self-maps of a finite state set and probability laws over them.

A mapping is a plain tuple of 0-based images: ``m[x]`` is where state ``x`` goes.
A word ``(s1, ..., sp)`` acts left to right, ``s1`` first.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Sequence

from ._exact import to_fraction
from .chain import ProbabilityVector, TransitionMatrix, is_irreducible, stationary_law
from .errors import InvalidMatrix, NotAMappingLaw, NotIrreducible, SizeMismatch

Mapping = tuple[int, ...]
Strategy = Literal["min-eps", "max-eps", "lexicographic"]
STRATEGIES: tuple[str, ...] = ("min-eps", "max-eps", "lexicographic")


@dataclass(frozen=True)
class MappingLaw:
    """Finitely supported law on self-maps; ``probs[i]`` is the mass of ``support[i]``."""

    states: tuple[str, ...]
    support: tuple[Mapping, ...]
    probs: tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.states)

    def __len__(self) -> int:
        return len(self.support)

    def items(self):
        return zip(self.support, self.probs)

    def prob(self, m: Mapping) -> Fraction:
        try:
            return self.probs[self.support.index(tuple(m))]
        except ValueError:
            return Fraction(0)


def make_law(states: Sequence, support: Iterable[Sequence[int]], probs: Iterable) -> MappingLaw:
    """Validated constructor: distinct in-range mappings, positive masses summing to 1."""
    states = tuple(str(s) for s in states)
    n = len(states)
    sup = tuple(tuple(int(v) for v in m) for m in support)
    ps = tuple(to_fraction(p) for p in probs)
    if len(sup) != len(ps):
        raise NotAMappingLaw("support and probs differ in length")
    if not sup:
        raise NotAMappingLaw("empty support")
    for m in sup:
        if len(m) != n or any(not 0 <= v < n for v in m):
            raise NotAMappingLaw(f"mapping {m} is not a total self-map of {n} states")
    if len(set(sup)) != len(sup):
        raise NotAMappingLaw("support mappings are not distinct")
    if any(p <= 0 for p in ps):
        raise NotAMappingLaw("probabilities must be positive")
    if sum(ps) != 1:
        raise NotAMappingLaw(f"probabilities sum to {sum(ps)}, not 1")
    return MappingLaw(states, sup, ps)


def law_from_pairs(states: Sequence[str], pairs: Iterable[tuple[Mapping, Fraction]]) -> MappingLaw:
    """Build a law from (mapping, mass) pairs, merging repeats and dropping zeros."""
    acc: dict[Mapping, Fraction] = {}
    for m, p in pairs:
        if p:
            acc[tuple(m)] = acc.get(tuple(m), Fraction(0)) + p
    return make_law(states, acc.keys(), acc.values())


def mix(components: Sequence[tuple[Fraction, MappingLaw]]) -> MappingLaw:
    """Convex combination ``sum w_i * law_i``; weights must sum to 1."""
    states = components[0][1].states
    pairs = [(m, Fraction(w) * p) for w, law in components for m, p in law.items()]
    return law_from_pairs(states, pairs)


def dirac(states: Sequence[str], m: Sequence[int]) -> MappingLaw:
    return make_law(states, [m], [1])


def compose_word(word: Sequence[Sequence[int]]) -> Mapping:
    """Composite ``s_p o ... o s_1`` of a nonempty word, ``s_1`` applied first."""
    if not word:
        raise SizeMismatch("empty word")
    n = len(word[0])
    result = tuple(range(n))
    for m in word:
        if len(m) != n:
            raise SizeMismatch("mappings in a word must share one state set")
        result = tuple(m[v] for v in result)
    return result


def image_size(m: Sequence[int]) -> int:
    return len(set(m))


def is_constant(m: Sequence[int]) -> bool:
    return image_size(m) == 1


def mapping_matrix(m: Sequence[int]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(m)
    return tuple(tuple(Fraction(int(m[x] == y)) for y in range(n)) for x in range(n))


def induced_chain(law: MappingLaw) -> TransitionMatrix:
    """Transition matrix ``q(x,y) = law{m : m(x) = y}``."""
    n = law.n
    rows = [[Fraction(0)] * n for _ in range(n)]
    for m, p in law.items():
        for x in range(n):
            rows[x][m[x]] += p
    return TransitionMatrix(law.states, tuple(tuple(r) for r in rows))


def verify_mapping_law(law: MappingLaw, Q: TransitionMatrix) -> bool:
    return law.n == Q.n and induced_chain(law).rows == Q.rows


def _pick(Q_rows, strategy: str, rng: random.Random | None):
    """Choose (mapping, eps) for one peeling step on a non-deterministic matrix."""
    n = len(Q_rows)
    succ = [[y for y in range(n) if Q_rows[x][y] > 0] for x in range(n)]
    if strategy == "max-eps":
        sigma = tuple(max(succ[x], key=lambda y: (Q_rows[x][y], -y)) for x in range(n))
        return sigma, min(Q_rows[x][sigma[x]] for x in range(n))
    if strategy == "random":
        sigma = tuple(rng.choice(succ[x]) for x in range(n))
        return sigma, min(Q_rows[x][sigma[x]] for x in range(n))
    eps = min(Q_rows[x][y] for x in range(n) for y in succ[x])
    xs, ys = next((x, y) for x in range(n) for y in succ[x] if Q_rows[x][y] == eps)
    if strategy == "min-eps":
        # prefer small entries elsewhere too, so several edges may vanish at once
        sigma = [min(succ[x], key=lambda y: (Q_rows[x][y], y)) for x in range(n)]
    elif strategy == "lexicographic":
        sigma = [succ[x][0] for x in range(n)]
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    sigma[xs] = ys
    return tuple(sigma), eps


def decompose(
    Q: TransitionMatrix, strategy: str = "min-eps", rng: random.Random | None = None
) -> MappingLaw:
    """Peel a transition matrix into a mapping law.

    Each step picks an edge-consistent mapping ``sigma`` whose smallest entry
    ``eps`` is attained at some positive entry, subtracts ``eps`` along
    ``sigma`` and renormalises by ``1 - eps``.  That entry drops to zero, so at
    most ``#E(Q) - n`` steps precede the final Dirac step.

    ``strategy="random"`` draws ``sigma`` uniformly among edge-consistent maps
    using ``rng``; it is used for randomized restarts.
    """
    if strategy == "random" and rng is None:
        raise ValueError("random strategy needs an rng")
    rows = [list(r) for r in Q.rows]
    n = len(rows)
    if any(sum(r) != 1 or any(q < 0 for q in r) for r in rows) or len(Q.states) != n:
        raise InvalidMatrix("decompose needs a valid transition matrix")
    survival = Fraction(1)
    pairs: list[tuple[Mapping, Fraction]] = []
    while not all(sum(1 for q in r if q > 0) == 1 for r in rows):
        sigma, eps = _pick(rows, strategy, rng)
        pairs.append((sigma, survival * eps))
        survival *= 1 - eps
        scale = 1 / (1 - eps)
        for x in range(n):
            rows[x][sigma[x]] -= eps
            rows[x] = [q * scale for q in rows[x]]
    final = tuple(next(y for y, q in enumerate(r) if q > 0) for r in rows)
    pairs.append((final, survival))
    return law_from_pairs(Q.states, pairs)


def lift_chain(law: MappingLaw) -> tuple[TransitionMatrix, ProbabilityVector]:
    """Chain of pairs (site, last mapping) and its stationary law.

    States are ordered site-major: ``(x, k)`` sits at ``x * d + k`` where
    ``d = len(law)``, labelled ``"<site>|<k+1>"``.  Transitions are
    ``law(s_j) * [y == s_j(x)]`` and the stationary mass of ``(x, k)`` is
    ``law(s_k) * lam(s_k^{-1}(x))``.
    """
    base = induced_chain(law)
    if not is_irreducible(base):
        raise NotIrreducible("lifted stationary law needs an irreducible induced chain")
    lam = stationary_law(base)
    n, d = law.n, len(law)
    size = n * d
    rows = [[Fraction(0)] * size for _ in range(size)]
    for x in range(n):
        for k in range(d):
            for j, (m, p) in enumerate(law.items()):
                rows[x * d + k][m[x] * d + j] = p
    lifted_lam = [Fraction(0)] * size
    for k, (m, p) in enumerate(law.items()):
        for w in range(n):
            lifted_lam[m[w] * d + k] += p * lam[w]
    labels = tuple(f"{s}|{k + 1}" for s in law.states for k in range(d))
    return TransitionMatrix(labels, tuple(tuple(r) for r in rows)), tuple(lifted_lam)
