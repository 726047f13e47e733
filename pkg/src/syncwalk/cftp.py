"""Exact stationary sampling by coupling from the past."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Literal, Sequence

import numpy as np

from .chain import solve_stationary
from .errors import DepthCap, NotSync, ValidationError
from .mapping import MappingLaw, induced_chain
from .sync import SyncWord, check_sync_word, is_sync

Mode = Literal["collapse", "pattern"]
DEFAULT_DEPTH_CAP = 10**8
_CHUNK = 32


@dataclass(frozen=True)
class RngSpec:
    seed: int
    stream: int = 0


@dataclass(frozen=True)
class CftpSample:
    state: int
    depth: int
    mode: str
    draws: tuple[int, ...] | None = None  # support indices of phi_0, phi_-1, ...


def _cdf(law: MappingLaw) -> np.ndarray:
    acc, out = Fraction(0), []
    for p in law.probs:
        acc += p
        out.append(float(acc))
    out[-1] = 1.0
    return np.asarray(out)


def draw_indices(cdf: np.ndarray, rng: RngSpec) -> Iterator[int]:
    """Endless IID support indices for one (seed, stream), by inverse CDF in support order."""
    gen = np.random.default_rng(np.random.SeedSequence(rng.seed, spawn_key=(rng.stream,)))
    last = len(cdf) - 1
    while True:
        chunk = np.searchsorted(cdf, gen.random(_CHUNK), side="right")
        yield from np.minimum(chunk, last).tolist()


class _Composer:
    """Memoised backward step ``comp -> comp o m`` with a constancy flag."""

    def __init__(self, law: MappingLaw) -> None:
        self.maps = law.support
        self.cdf = _cdf(law)
        self.cache: dict[tuple[tuple[int, ...], int], tuple[tuple[int, ...], bool]] = {}

    def step(self, comp: tuple[int, ...], i: int) -> tuple[tuple[int, ...], bool]:
        key = (comp, i)
        hit = self.cache.get(key)
        if hit is None:
            new = tuple(comp[v] for v in self.maps[i])
            hit = self.cache[key] = (new, len(set(new)) == 1)
        return hit


def _run(
    law: MappingLaw,
    word: SyncWord | None,
    mode: str,
    rng: RngSpec,
    cap: int,
    record: bool,
    composer: _Composer | None = None,
) -> CftpSample:
    composer = composer or _Composer(law)
    comp = tuple(range(law.n))  # phi_0 o phi_-1 o ... o phi_k
    log: list[int] = []
    pattern = () if word is None else word.indices
    p = len(pattern)
    depth = 0
    for i in draw_indices(composer.cdf, rng):
        depth += 1
        if depth > cap:
            msg = f"no coalescence within {cap} backward draws"
            if mode == "pattern":
                hit = math.prod(float(law.probs[j]) for j in pattern)
                msg += f" (pattern hit probability {hit:.3g} per position)"
            raise DepthCap(msg)
        comp, constant = composer.step(comp, i)
        if record or mode == "pattern":
            log.append(i)
        if mode == "collapse":
            if constant:
                break
        elif depth >= p and all(log[depth - 1 - a] == pattern[a] for a in range(p)):
            # phi_k, ..., phi_{k+p-1} spell s_1, ..., s_p
            if not constant:
                raise AssertionError("sync word suffix did not collapse the composition")
            break
    return CftpSample(comp[0], depth, mode, tuple(log) if record else None)


def cftp_sample(
    law: MappingLaw,
    word: SyncWord | None = None,
    mode: Mode = "collapse",
    rng: RngSpec = RngSpec(0),
    *,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    record: bool = False,
) -> CftpSample:
    """One exact draw from the stationary law of ``induced_chain(law)``.

    ``collapse`` stops at the first backward time where the running
    composition ``phi_0 o ... o phi_k`` is constant.  ``pattern`` stops at the
    latest time the word occurs in the backward draws, reading
    ``phi_{k+p-1}, ..., phi_k`` against ``s_p, ..., s_1``.
    """
    _check(law, word, mode)
    return _run(law, word, mode, rng, depth_cap, record)


def _check(law: MappingLaw, word: SyncWord | None, mode: str) -> None:
    if mode not in ("collapse", "pattern"):
        raise ValidationError(f"unknown mode {mode!r}")
    if not is_sync(law):
        raise NotSync("coupling from the past needs a synchronizing law")
    if mode == "pattern":
        if word is None:
            raise ValidationError("pattern mode needs a sync word")
        if not check_sync_word(law, word):
            raise ValidationError("word does not collapse the state set")


@dataclass(frozen=True)
class SampleSummary:
    counts: tuple[int, ...]
    depth_mean: float
    depth_max: int
    mode: str
    seed: int

    @property
    def n(self) -> int:
        return sum(self.counts)

    def frequencies(self) -> np.ndarray:
        total = self.n
        return np.asarray(self.counts, float) / total if total else np.zeros(len(self.counts))


def _batch(args) -> tuple[list[int], int, int]:
    law, word, mode, seed, streams, cap = args
    counts = [0] * law.n
    depth_sum = depth_max = 0
    composer = _Composer(law)
    for s in streams:
        sample = _run(law, word, mode, RngSpec(seed, s), cap, False, composer)
        counts[sample.state] += 1
        depth_sum += sample.depth
        depth_max = max(depth_max, sample.depth)
    return counts, depth_sum, depth_max


def sample_many(
    law: MappingLaw,
    word: SyncWord | None = None,
    mode: Mode = "collapse",
    n: int = 1000,
    seed: int = 0,
    *,
    jobs: int = 1,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> SampleSummary:
    """``n`` independent samples on streams ``0..n-1``; identical for a fixed seed."""
    _check(law, word, mode)
    if n < 0:
        raise ValidationError("sample count must be nonnegative")
    if jobs <= 1 or n < 2 * jobs:
        parts = [_batch((law, word, mode, seed, range(n), depth_cap))]
    else:
        step = -(-n // jobs)
        tasks = [
            (law, word, mode, seed, range(i, min(i + step, n)), depth_cap)
            for i in range(0, n, step)
        ]
        with ProcessPoolExecutor(jobs) as pool:
            parts = list(pool.map(_batch, tasks))
    counts = [sum(c[x] for c, _, _ in parts) for x in range(law.n)]
    depth_sum = sum(d for _, d, _ in parts)
    depth_max = max((m for _, _, m in parts), default=0)
    return SampleSummary(tuple(counts), depth_sum / n if n else 0.0, depth_max, mode, seed)


def stationary_of(law: MappingLaw) -> tuple[Fraction, ...] | None:
    return solve_stationary(induced_chain(law))


def tv_distance(freq: Sequence[float], target: Sequence) -> float:
    return 0.5 * sum(abs(float(a) - float(b)) for a, b in zip(freq, target))


def summary_json(law: MappingLaw, summary: SampleSummary) -> dict:
    lam = stationary_of(law)
    return {
        "counts": {s: c for s, c in zip(law.states, summary.counts)},
        "tv_to_stationary": (
            None if lam is None or summary.n == 0 else tv_distance(summary.frequencies(), lam)
        ),
        "depth": {"mean": summary.depth_mean, "max": summary.depth_max},
        "mode": summary.mode,
        "seed": summary.seed,
        "n": summary.n,
    }


def forward_simulate(law: MappingLaw, start: int, steps: int, seed: int = 0) -> list[int]:
    """Forward orbit ``X_k = phi_k(X_{k-1})``; a diagnostic, not an exact sampler."""
    path = [start]
    if steps <= 0:
        return path
    gen = np.random.default_rng(seed)
    idx = np.minimum(np.searchsorted(_cdf(law), gen.random(steps), side="right"), len(law) - 1)
    maps = law.support
    x = start
    for i in idx:
        x = maps[i][x]
        path.append(x)
    return path
