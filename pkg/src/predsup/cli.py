"""``predsup`` command line.

Exit codes: 0 success or property satisfied, 1 violation or no solution,
2 usage or configuration error, 3 node cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .automaton import Automaton, ModelError, load_automaton
from .export import arena_to_dict, dumps, load_structure, structure_to_dict, to_dot
from .infostate import format_infostate
from .prediction import format_vector, load_property
from .synthesis import NodeCapExceeded, synthesize
from .verify import AllEnabling, UndefinedDecision, check_property

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_decision(G: Automaton, text: str) -> frozenset:
    """Accept ``Σ∖{a,b}`` (also ``Sigma\\{a,b}`` or ``-a,b``) for "all but",
    or ``{a,b}`` / ``a,b`` for an explicit enabled set."""
    t = text.strip()
    complement = False
    for prefix in ("Σ∖", "Σ\\", "Sigma\\", "Sigma-", "-"):
        if t.startswith(prefix):
            complement, t = True, t[len(prefix):]
            break
    if t in ("Σ", "Sigma"):
        return G.alphabet
    t = t.strip().removeprefix("{").removesuffix("}")
    names = frozenset(n.strip() for n in t.split(",") if n.strip())
    unknown = names - G.alphabet
    if unknown:
        raise UsageError(f"unknown events in decision: {', '.join(sorted(unknown))}")
    decision = G.alphabet - names if complement else names
    if not G.is_valid_decision(decision):
        raise UsageError(f"decision {text!r} disables uncontrollable events")
    return decision


def _load(args):
    try:
        G = load_automaton(args.model)
    except OSError as exc:
        raise UsageError(f"cannot read model: {exc}") from None
    except ModelError as exc:
        raise UsageError(f"{args.model}: {exc}") from None
    if args.property is None:
        return G, None
    try:
        spec = load_property(G, args.property, args.horizon)
    except OSError as exc:
        raise UsageError(f"cannot read property: {exc}") from None
    except (ValueError, KeyError) as exc:
        raise UsageError(f"{args.property}: {exc}") from None
    return G, spec


def _structure(G, path):
    try:
        return load_structure(G, path)
    except OSError as exc:
        raise UsageError(f"cannot read supervisor: {exc}") from None
    except (ValueError, KeyError) as exc:
        raise UsageError(f"{path}: malformed structure ({exc})") from None


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------


def cmd_synthesize(args) -> int:
    G, spec = _load(args)
    prefer = parse_decision(G, args.prefer_decision) if args.prefer_decision else None
    try:
        result = synthesize(G, spec, node_cap=args.node_cap, prefer=prefer)
    except NodeCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    summary = result.summary()
    summary["seed"] = args.seed
    if result.pruned.initials:
        root = result.structure.initial
        summary["root_decisions_available"] = [
            G.format_decision(d) for d in result.pruned.decisions_at(root)
        ]
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        data = structure_to_dict(G, result.structure, spec.horizon)
        _write(os.path.join(args.out, "structure.json"), dumps(data))
        _write(os.path.join(args.out, "structure.dot"), to_dot(G, data, "structure"))
        arena = arena_to_dict(G, result.pruned, spec.horizon)
        _write(os.path.join(args.out, "pruned_arena.json"), dumps(arena))
        _write(os.path.join(args.out, "summary.json"), dumps(summary))

    if not result.solved:
        print("no solution exists")
        return EXIT_FAIL
    s = result.structure
    print(f"solution found: {len(s.choice)} decision nodes, {len(s.successors)} observation nodes")
    print(f"arena: {summary['arena']['decision_nodes']} decision / "
          f"{summary['arena']['observation_nodes']} observation nodes before pruning, "
          f"{summary['pruned_arena']['decision_nodes']} / "
          f"{summary['pruned_arena']['observation_nodes']} after")
    print("root decisions available: " + ", ".join(summary["root_decisions_available"]))
    print(f"root decision chosen: {summary['root_decision']}")
    for node, p in s.choice.items():
        moves = ", ".join(f"{ev} -> {format_infostate(G, t)}" for ev, t in s.successors[p].items())
        print(f"  {format_infostate(G, node)}  {G.format_decision(p.decision)}" + (f"  [{moves}]" if moves else ""))
    return EXIT_OK


def cmd_verify(args) -> int:
    G, spec = _load(args)
    if args.uncontrolled == bool(args.supervisor):
        raise UsageError("give exactly one of --supervisor or --uncontrolled")
    if args.uncontrolled:
        sup = AllEnabling(G)
    else:
        sup = _structure(G, args.supervisor)
        if sup is None:
            raise UsageError(f"{args.supervisor}: empty structure (no solution) cannot be verified")
    try:
        verdict = check_property(G, sup, spec, args.depth)
    except UndefinedDecision as exc:
        raise UsageError(str(exc)) from None
    print(verdict.report())
    if args.out:
        _write(args.out, verdict.to_json())
    return EXIT_OK if verdict.satisfied else EXIT_FAIL


def cmd_replay(args) -> int:
    G, _ = _load(args)
    s = _structure(G, args.supervisor)
    if s is None:
        raise UsageError(f"{args.supervisor}: empty structure (no solution)")
    events = args.events.replace(",", " ").split()
    unknown = [e for e in events if e not in G.alphabet]
    if unknown:
        raise UsageError(f"unknown events: {', '.join(unknown)}")

    def show(node):
        vs = ", ".join(sorted(format_vector(v) for v in node.vectors()))
        print(f"  node {format_infostate(G, node)}")
        print(f"  states {{{', '.join(G.name(x) for x in sorted(node.states()))}}}  vectors {{{vs}}}")
        print(f"  decision {G.format_decision(s.decision(node))}")

    x, node, obs = G.initial, s.initial, []
    print(f"start at {G.name(x)}")
    show(node)
    for ev in events:
        gamma = s.decision(node)
        y = G.step(x, ev)
        if y is None:
            print(f"{ev} undefined at plant state {G.name(x)}")
            return EXIT_FAIL
        if ev not in gamma:
            print(f"{ev} disabled by {G.format_decision(gamma)}")
            return EXIT_FAIL
        x = y
        if ev in G.observable:
            obs.append(ev)
            node = s.step(node, ev)
            print(f"{ev} observed -> plant {G.name(x)}, observation {' '.join(obs)}")
            show(node)
        else:
            print(f"{ev} unobserved -> plant {G.name(x)}")
    return EXIT_OK


def cmd_export_dot(args) -> int:
    try:
        with open(args.structure, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read structure: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.structure}: {exc}") from None
    try:
        G = load_automaton(args.model)
    except (OSError, ModelError) as exc:
        raise UsageError(f"cannot load model: {exc}") from None
    text = to_dot(G, data, data.get("kind"))
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="predsup", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("--seed", type=int, default=0, help="recorded in reports")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_property=True):
        p.add_argument("--model", required=True, help="plant model (JSON)")
        p.add_argument("--property", required=need_property, help="property spec (JSON)")
        p.add_argument("--horizon", type=int, help="override the horizon in the property file")

    p = sub.add_parser("synthesize", help="build a supervisor")
    common(p)
    p.add_argument("--node-cap", type=int, default=200000)
    p.add_argument("--prefer-decision", help="root decision to pick, e.g. 'Σ∖{a}' or '-a'")
    p.add_argument("--out", help="output directory for structure.json/.dot, pruned_arena.json, summary.json")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("verify", help="check a supervisor against the property")
    common(p)
    p.add_argument("--supervisor", help="control structure JSON")
    p.add_argument("--uncontrolled", action="store_true", help="verify the plant without control")
    p.add_argument("--depth", type=int, default=4, help="observation length kept in the report table")
    p.add_argument("--out", help="write the verdict as JSON")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("replay", help="run a plant event sequence through a supervisor")
    common(p, need_property=False)
    p.add_argument("--supervisor", required=True)
    p.add_argument("--events", default="", help="space or comma separated plant events")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("export-dot", help="render a structure or arena JSON as DOT")
    p.add_argument("--model", required=True)
    p.add_argument("--structure", required=True)
    p.add_argument("--out", help="DOT file (default: stdout)")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
