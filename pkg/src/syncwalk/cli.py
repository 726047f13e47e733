"""Command-line front end: ``syncwalk <command> ...``.

Exit codes: 0 success, 2 invalid input, 3 unmet chain precondition (e.g. not
ergodic), 4 law not synchronizing, 5 resource cap hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from . import chain as ch
from ._exact import format_fraction
from .cftp import sample_many, summary_json
from .errors import NotErgodic, NotSync, SyncWalkError, ValidationError
from .formats import (
    chain_from_json,
    chain_to_json,
    graph_from_json,
    graph_to_json,
    law_from_json,
    law_to_json,
    read_json,
)
from .mapping import STRATEGIES, decompose, lift_chain, verify_mapping_law
from .redundancy import law_entropy, redundancy_report, target_redundancy_law
from .road import (
    brute_force_sync_coloring,
    export_dot,
    from_mapping_law,
    graph_properties,
    is_sync_coloring,
)
from .sync import construct_sync_law, find_sync_word, is_sync, shortest_sync_word


def _emit(args: argparse.Namespace, payload: Any) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2) + "\n"
    if getattr(args, "out", None) and args.out != "-":
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _seed(args: argparse.Namespace) -> int:
    if args.seed is None:
        if args.strict:
            raise ValidationError("--strict requires an explicit --seed")
        return 0
    return args.seed


def _law_or_graph(path: str):
    data = read_json(path)
    if isinstance(data, dict) and "support" in data:
        law, _ = law_from_json(data)
        g, C, _ = from_mapping_law(law)
        return g, C, law
    g, C = graph_from_json(data)
    return g, C, None


def cmd_analyze(args: argparse.Namespace) -> dict:
    Q = chain_from_json(read_json(args.chain))
    seed = _seed(args)
    irreducible = ch.is_irreducible(Q)
    aperiodic = ch.is_aperiodic(Q)
    report: dict[str, Any] = {
        "states": list(Q.states),
        "irreducible": irreducible,
        "aperiodic": aperiodic,
        "ergodic": irreducible and aperiodic,
        "stationary": None,
        "entropy_rate": None,
        "primitivity_index": ch.primitivity_index(Q) if irreducible and aperiodic else None,
        "p_uniform": None,
        "redundancy": None,
        "seed": seed,
    }
    witness = ch.is_p_uniform(Q)
    if witness is not None:
        report["p_uniform"] = {
            "nu": [format_fraction(v) for v in witness.nu],
            "tau": {s: [t + 1 for t in tau] for s, tau in zip(Q.states, witness.tau)},
        }
    if irreducible:
        lam = ch.stationary_law(Q)
        report["stationary"] = {s: format_fraction(v) for s, v in zip(Q.states, lam)}
        report["entropy_rate"] = float(f"{ch.entropy_rate(Q):.12g}")
        if Q.is_deterministic():
            report["redundancy"] = {"bounds": None, "reason": "deterministic chain: h(mu) = 0"}
        else:
            rep = redundancy_report(Q, exact_min=args.exact_min, restarts=args.restarts, seed=seed)
            report["redundancy"] = rep.to_json()
    return report


def cmd_decompose(args: argparse.Namespace) -> dict:
    Q = chain_from_json(read_json(args.chain))
    law = decompose(Q, args.strategy)
    assert verify_mapping_law(law, Q)
    return law_to_json(law)


def cmd_synclaw(args: argparse.Namespace) -> dict:
    Q = chain_from_json(read_json(args.chain))
    if not ch.is_ergodic(Q):
        raise NotErgodic("synclaw needs an ergodic chain")
    built = construct_sync_law(Q, args.x0)
    if not (verify_mapping_law(built.law, Q) and is_sync(built.law)):
        raise AssertionError("constructed law failed its own checks")
    return law_to_json(built.law, built.word)


def cmd_checksync(args: argparse.Namespace) -> dict:
    law, word = law_from_json(read_json(args.law))
    sync = is_sync(law)
    out: dict[str, Any] = {"sync": sync, "states": list(law.states)}
    if word is not None:
        out["stored_word_valid"] = True
    found = find_sync_word(law)
    if found is not None:
        out["sync_word"] = [i + 1 for i in found.indices]
        out["target"] = law.states[found.target]
        if law.n <= args.max_subset_states:
            short = shortest_sync_word(law)
            out["shortest_length"] = len(short)
    if not sync:
        _emit(args, out)
        raise NotSync("law is not synchronizing")
    return out


def cmd_target(args: argparse.Namespace) -> dict:
    Q = chain_from_json(read_json(args.chain))
    law = target_redundancy_law(
        Q,
        args.r,
        tol=args.tol,
        require_sync=args.require_sync,
        exact_min=args.exact_min,
        seed=_seed(args),
    )
    word = find_sync_word(law) if args.require_sync else None
    return law_to_json(law, word)


def cmd_sample(args: argparse.Namespace) -> dict:
    law, word = law_from_json(read_json(args.law))
    seed = _seed(args)
    if args.mode == "pattern" and word is None:
        raise ValidationError("pattern mode needs a law file with a sync_word block")
    summary = sample_many(law, word, args.mode, args.n, seed, jobs=args.jobs)
    return summary_json(law, summary)


def cmd_lift(args: argparse.Namespace) -> dict:
    law, _ = law_from_json(read_json(args.law))
    lifted, lam = lift_chain(law)
    out = chain_to_json(lifted)
    out["stationary"] = [format_fraction(v) for v in lam]
    out["entropy_rate"] = float(f"{ch.entropy_rate(lifted, lam):.12g}")
    out["law_entropy"] = float(f"{law_entropy(law):.12g}")
    return out


def cmd_graph(args: argparse.Namespace) -> dict:
    g, C, law = _law_or_graph(args.input)
    if args.search_coloring:
        C = brute_force_sync_coloring(g, args.cap)
    out = graph_to_json(g, C)
    if law is not None:
        out["probs"] = [format_fraction(p) for p in law.probs]
    out["properties"] = graph_properties(g)
    if C is not None:
        word = is_sync_coloring(g, C)
        out["sync_word"] = None if word is None else [k + 1 for k in word]
    return out


def cmd_export_dot(args: argparse.Namespace) -> str:
    g, C, _ = _law_or_graph(args.input)
    return export_dot(g, C)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="syncwalk", description="Markov chains as random walks under sync mapping laws."
    )
    parser.add_argument("--strict", action="store_true", help="require --seed for random commands")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help: str, inputs: tuple[str, ...] = ()) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        for arg in inputs:
            p.add_argument(arg, help="JSON file, or - for stdin")
        p.add_argument("--out", help="write here instead of stdout")
        p.set_defaults(func=func)
        return p

    p = add("analyze", cmd_analyze, "ergodicity, stationary law, entropy, bounds", ("chain",))
    p.add_argument("--exact-min", action="store_true", help="exact minimum by vertex enumeration")
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=int)

    p = add("decompose", cmd_decompose, "mapping law for a chain", ("chain",))
    p.add_argument("--strategy", choices=STRATEGIES, default="min-eps")

    p = add("synclaw", cmd_synclaw, "sync mapping law with its sync word", ("chain",))
    p.add_argument("--x0", help="label of the collapse target state")

    p = add("checksync", cmd_checksync, "is a law synchronizing", ("law",))
    p.add_argument("--max-subset-states", type=int, default=12)

    p = add("target-redundancy", cmd_target, "law hitting a redundancy value", ("chain",))
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--require-sync", action="store_true")
    p.add_argument("--exact-min", dest="exact_min", action="store_true", default=None)
    p.add_argument("--heuristic-min", dest="exact_min", action="store_false")
    p.add_argument("--seed", type=int)

    p = add("sample", cmd_sample, "exact stationary samples by CFTP", ("law",))
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--mode", choices=("collapse", "pattern"), default="collapse")
    p.add_argument("--jobs", type=int, default=1)

    add("lift", cmd_lift, "chain of (site, last mapping) pairs", ("law",))

    p = add("graph", cmd_graph, "road graph of a law, or coloring search", ("input",))
    p.add_argument("--search-coloring", action="store_true")
    p.add_argument("--cap", type=int, default=10**6)

    add("export-dot", cmd_export_dot, "Graphviz DOT of a law or graph", ("input",))
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _emit(args, args.func(args))
    except SyncWalkError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
