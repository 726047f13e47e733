"""Finite Markov chains with exact rational transition probabilities."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import _graph
from ._exact import solve_unique, to_fraction
from .errors import (
    DuplicateLabel,
    EmptyStateSpace,
    InvalidMatrix,
    NegativeEntry,
    NoCycleThroughState,
    NotIrreducible,
    NotPrimitive,
    RowSumNotOne,
)

ProbabilityVector = tuple[Fraction, ...]
EdgeSet = frozenset[tuple[int, int]]


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic matrix over labelled states.

    Construct through :func:`validate_chain`; the constructor itself does not
    check anything.
    """

    states: tuple[str, ...]
    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.states)

    def index(self, label: str) -> int:
        try:
            return self.states.index(str(label))
        except ValueError:
            raise InvalidMatrix(f"unknown state {label!r}") from None

    def __getitem__(self, xy: tuple[int, int]) -> Fraction:
        x, y = xy
        return self.rows[x][y]

    def successors(self, x: int) -> list[int]:
        return [y for y, q in enumerate(self.rows[x]) if q > 0]

    def adjacency(self) -> list[list[int]]:
        return [self.successors(x) for x in range(self.n)]

    def is_deterministic(self) -> bool:
        return all(sum(1 for q in row if q > 0) == 1 for row in self.rows)


def validate_chain(labels: Iterable, rows: Iterable[Iterable]) -> TransitionMatrix:
    """Parse and validate a transition matrix.

    Raises EmptyStateSpace, DuplicateLabel, NegativeEntry, RowSumNotOne, or
    InvalidMatrix for shape problems.
    """
    states = tuple(str(s) for s in labels)
    parsed = tuple(tuple(to_fraction(v) for v in row) for row in rows)
    if not states:
        raise EmptyStateSpace()
    seen: set[str] = set()
    for s in states:
        if s in seen:
            raise DuplicateLabel(s)
        seen.add(s)
    n = len(states)
    if len(parsed) != n:
        raise InvalidMatrix(f"expected {n} rows, got {len(parsed)}")
    for x, row in enumerate(parsed):
        if len(row) != n:
            raise InvalidMatrix(f"row {x + 1} has {len(row)} entries, expected {n}")
        for y, q in enumerate(row):
            if q < 0:
                raise NegativeEntry(x, y, q)
        total = sum(row, Fraction(0))
        if total != 1:
            raise RowSumNotOne(x, total)
    return TransitionMatrix(states, parsed)


def from_rows(rows: Sequence[Sequence], labels: Sequence | None = None) -> TransitionMatrix:
    """Shorthand for :func:`validate_chain` with labels ``"1".."n"`` by default."""
    if labels is None:
        labels = [str(i + 1) for i in range(len(rows))]
    return validate_chain(labels, rows)


def edge_set(Q: TransitionMatrix) -> EdgeSet:
    return frozenset((x, y) for x in range(Q.n) for y in range(Q.n) if Q.rows[x][y] > 0)


def is_irreducible(Q: TransitionMatrix) -> bool:
    return _graph.is_strongly_connected(Q.adjacency())


def period(Q: TransitionMatrix, x: int) -> int:
    d = _graph.period(Q.adjacency(), x)
    if d is None:
        raise NoCycleThroughState(f"no cycle passes through state {Q.states[x]!r}")
    return d


def is_aperiodic(Q: TransitionMatrix) -> bool:
    adj = Q.adjacency()
    return all(_graph.period(adj, x) == 1 for x in range(Q.n))


def is_ergodic(Q: TransitionMatrix) -> bool:
    return is_irreducible(Q) and is_aperiodic(Q)


def stationary_law(Q: TransitionMatrix) -> ProbabilityVector:
    """Unique solution of ``lam Q = lam`` with ``sum(lam) = 1``, solved exactly."""
    if not is_irreducible(Q):
        raise NotIrreducible("stationary law is only unique for irreducible chains")
    lam = solve_stationary(Q)
    assert lam is not None
    return lam


def solve_stationary(Q: TransitionMatrix) -> ProbabilityVector | None:
    """Exact invariant law if it is unique (e.g. one closed class), else None."""
    n = Q.n
    a = [[Q.rows[x][y] - (1 if x == y else 0) for x in range(n)] for y in range(n)]
    a.append([Fraction(1)] * n)
    b = [Fraction(0)] * n + [Fraction(1)]
    lam = solve_unique(a, b)
    return None if lam is None else tuple(lam)


def _bool_matmul(a: list[list[bool]], b: list[list[bool]]) -> list[list[bool]]:
    n = len(a)
    cols = [[b[k][j] for k in range(n)] for j in range(n)]
    return [[any(ai and bk for ai, bk in zip(a[i], cols[j])) for j in range(n)] for i in range(n)]


def primitivity_index(Q: TransitionMatrix) -> int:
    """Smallest r with every entry of ``Q**r`` positive.

    The search stops at the Wielandt bound ``(n-1)**2 + 1``; going past it
    means Q is not primitive.
    """
    n = Q.n
    base = [[q > 0 for q in row] for row in Q.rows]
    power = base
    for r in range(1, (n - 1) ** 2 + 2):
        if all(all(row) for row in power):
            return r
        power = _bool_matmul(power, base)
    raise NotPrimitive("no power of Q is entrywise positive; chain is not ergodic")


def _xlogx(p: float) -> float:
    return p * math.log2(p) if p > 0 else 0.0


def entropy_rate(Q: TransitionMatrix, stationary: Sequence | None = None) -> float:
    """Entropy rate in bits: ``-sum lam(x) q(x,y) log2 q(x,y)``.

    ``stationary`` overrides the law computed by :func:`stationary_law`, which
    is needed for reducible chains such as lifted chains.
    """
    lam = stationary_law(Q) if stationary is None else stationary
    return -sum(float(lam[x]) * sum(_xlogx(float(q)) for q in Q.rows[x]) for x in range(Q.n))


@dataclass(frozen=True)
class PUniformWitness:
    """``q[x][y] == nu[tau[x][y]]`` for all x, y (indices 0-based)."""

    nu: ProbabilityVector
    tau: tuple[tuple[int, ...], ...]


def is_p_uniform(Q: TransitionMatrix) -> PUniformWitness | None:
    """Return a witness if every row is a rearrangement of one multiset, else None.

    ``nu`` is the common multiset in descending order; ``tau[x]`` sends each
    column of row x to its position in that order (ties broken by column).
    """
    nu = tuple(sorted(Q.rows[0], reverse=True))
    taus = []
    for row in Q.rows:
        if tuple(sorted(row, reverse=True)) != nu:
            return None
        order = sorted(range(Q.n), key=lambda y: (-row[y], y))
        tau = [0] * Q.n
        for pos, y in enumerate(order):
            tau[y] = pos
        taus.append(tuple(tau))
    return PUniformWitness(nu, tuple(taus))
