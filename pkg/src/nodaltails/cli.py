"""Command line interface.

Every command reads a graph document (``--graph FILE``, ``-`` for stdin)
and prints a human-readable report, or the canonical JSON report with
``--json``.  Exit status: 0 on success, 1 when the mathematical check
fails, 2 on usage or input errors.

``--base B`` swaps components 1 and ``B`` before computing and swaps the
results back, so the marked component becomes ``C_B`` while all component
numbers in the output keep their original meaning.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Sequence, TextIO

from . import __version__
from .abel_neron import abel_neron_multidegree, reduction_agreement
from .curve_graph import DualGraph, Subcurve, relabel_swap
from .errors import GuardExceededError, NodalTailsError
from .graph_io import DocumentError, canonical_json, load_graph, parse_graph_document
from .stability import Multidegree, enumerate_quasistable_deg0, is_quasistable, twist_multidegree
from .tails import enumerate_tails, nested_tails, twist_coefficients
from .verify.generate import DEFAULT_SEED, GenParams
from .verify.lemmas import lemma_suite
from .verify.oracles import neron_component_check
from .verify.runner import run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# relabelling for --base
# ---------------------------------------------------------------------------

class Frame:
    """Graph seen with ``C_base`` moved to position 1."""

    def __init__(self, graph: DualGraph, base: int) -> None:
        if not 1 <= base <= graph.p:
            raise UsageError(f"--base {base} outside 1..{graph.p}")
        self.original = graph
        self.base = base
        self.graph = graph if base == 1 else relabel_swap(graph, base)

    def to_inner(self, l: int) -> int:
        return {1: self.base, self.base: 1}.get(l, l)

    to_outer = to_inner

    def members(self, z: Subcurve | None) -> list[int] | None:
        if z is None:
            return None
        return sorted(self.to_outer(l) for l in z.members)

    def vector(self, values: Sequence[int]) -> list[int]:
        out = [0] * len(values)
        for idx, v in enumerate(values):
            out[self.to_outer(idx + 1) - 1] = int(v)
        return out

    def inner_vector(self, values: Sequence[int]) -> list[int]:
        out = [0] * len(values)
        for idx, v in enumerate(values):
            out[self.to_inner(idx + 1) - 1] = int(v)
        return out

    def subcurve(self, comps: Sequence[int]) -> Subcurve:
        return Subcurve.of(self.graph, [self.to_inner(l) for l in comps])


def _fmt_set(members: list[int] | None) -> str:
    return "-" if members is None else "{" + ",".join(map(str, members)) + "}"


def _fmt_vec(values: Sequence[int]) -> str:
    return "(" + ",".join(map(str, values)) + ")"


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _interval(text: str) -> tuple[int, int]:
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            return int(lo), int(hi)
        v = int(text)
        return v, v
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected N or MIN:MAX, got {text!r}") from exc


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected a rational number, got {text!r}") from exc


# ---------------------------------------------------------------------------
# commands: each returns (exit code, report dict, text lines)
# ---------------------------------------------------------------------------

def _tail_sets(frame: Frame, tails) -> dict:
    return {
        "t1_i": [frame.members(w) for w in tails.t1_i],
        "t1_j": [frame.members(w) for w in tails.t1_j],
        "t2": [frame.members(w) for w in tails.t2],
        "t3": [frame.members(w) for w in tails.t3],
    }


def _sorted_sets(sets: list[list[int]]) -> list[list[int]]:
    return sorted(sets, key=lambda s: sum(1 << (l - 1) for l in s))


def cmd_tails(args, frame: Frame):
    found = enumerate_tails(frame.graph, args.k)
    sets = _sorted_sets([frame.members(z) for z in found])
    ks = {tuple(frame.members(z)): z.k for z in found}
    rows = [{"subcurve": s, "k": ks[tuple(s)]} for s in sets]
    lines = [f"{len(rows)} tail(s)" + ("" if args.k is None else f" with k = {args.k}")]
    lines += [f"  {_fmt_set(r['subcurve'])}  k={r['k']}" for r in rows]
    return EXIT_OK, {"k": args.k, "tails": rows}, lines


def _pair(args, frame: Frame) -> tuple[int, int]:
    p = frame.graph.p
    for name in ("i", "j"):
        v = getattr(args, name)
        if v is None:
            raise UsageError(f"--{name} is required")
        if not 1 <= v <= p:
            raise UsageError(f"--{name} {v} outside 1..{p}")
    return frame.to_inner(args.i), frame.to_inner(args.j)


def cmd_nested_tails(args, frame: Frame):
    i, j = _pair(args, frame)
    tails = nested_tails(frame.graph, i, j)
    sets = _tail_sets(frame, tails)
    lines = [f"nested tails for (i,j) = ({args.i},{args.j})"]
    for key, label in (("t1_i", "1-tails at i"), ("t1_j", "1-tails at j"), ("t2", "2-tails"), ("t3", "3-tails")):
        lines.append(f"  {label}: " + (" ".join(_fmt_set(s) for s in sets[key]) or "none"))
    return EXIT_OK, {"pair": [args.i, args.j], "tails": sets}, lines


def cmd_twist(args, frame: Frame):
    if args.subcurve is not None:
        w = frame.subcurve(_int_list(args.subcurve))
        d = frame.vector(twist_multidegree(w).values)
        report = {"subcurve": frame.members(w), "multidegree": d}
        return EXIT_OK, report, [f"twist by O(-{_fmt_set(frame.members(w))}): {_fmt_vec(d)}"]
    i, j = _pair(args, frame)
    tails = nested_tails(frame.graph, i, j)
    coeff = frame.vector(twist_coefficients(tails))
    total = Multidegree.zero(frame.graph)
    for w in tails.members:
        total = total + twist_multidegree(w)
    twist = frame.vector(total.values)
    report = {"pair": [args.i, args.j], "coefficients": coeff, "multidegree": twist}
    lines = [f"coefficients a = {_fmt_vec(coeff)}", f"twist multidegree = {_fmt_vec(twist)}"]
    return EXIT_OK, report, lines


def _abel_neron_entry(frame: Frame, i: int, j: int) -> dict:
    res = abel_neron_multidegree(frame.graph, frame.to_inner(i), frame.to_inner(j))
    reduced, _ = reduction_agreement(frame.graph, frame.to_inner(i), frame.to_inner(j))
    return {
        "pair": [i, j],
        "tails": _tail_sets(frame, res.tails),
        "coefficients": frame.vector(res.coefficients),
        "multidegree": frame.vector(res.multidegree.values),
        "quasistable": res.quasistable,
        "reduced_quasistable": reduced,
        "witness": frame.members(res.witness),
    }


def cmd_abel_neron(args, frame: Frame):
    p = frame.graph.p
    if args.all_pairs:
        pairs = [(i, j) for i in range(1, p + 1) for j in range(1, p + 1)]
    else:
        _pair(args, frame)
        pairs = [(args.i, args.j)]
    entries = [_abel_neron_entry(frame, i, j) for i, j in pairs]
    ok = all(e["quasistable"] for e in entries)
    lines = []
    for e in entries:
        verdict = "quasistable" if e["quasistable"] else f"NOT quasistable at {_fmt_set(e['witness'])}"
        lines.append(
            f"({e['pair'][0]},{e['pair'][1]})  a={_fmt_vec(e['coefficients'])}  "
            f"L={_fmt_vec(e['multidegree'])}  {verdict}"
        )
    report = {"base": frame.base, "results": entries if args.all_pairs else entries[0], "all_quasistable": ok}
    return (EXIT_OK if ok else EXIT_FAIL), report, lines


def cmd_check(args, frame: Frame):
    values = _int_list(args.multidegree)
    if len(values) != frame.graph.p:
        raise UsageError(f"multidegree has {len(values)} entries, graph has {frame.graph.p}")
    d = Multidegree.of(frame.graph, frame.inner_vector(values))
    ok, witness = is_quasistable(d, 1)
    report = {"base": frame.base, "multidegree": values, "quasistable": ok, "witness": frame.members(witness)}
    line = f"C{frame.base}-quasistable" if ok else f"not C{frame.base}-quasistable, witness {_fmt_set(frame.members(witness))}"
    return (EXIT_OK if ok else EXIT_FAIL), report, [line]


def cmd_enumerate(args, frame: Frame):
    found = enumerate_quasistable_deg0(frame.graph, 1, window=args.window)
    rows = sorted(frame.vector(d.values) for d in found)
    lines = [f"{len(rows)} degree-0 C{frame.base}-quasistable multidegree(s)"] + [f"  {_fmt_vec(r)}" for r in rows]
    return EXIT_OK, {"base": frame.base, "count": len(rows), "multidegrees": rows}, lines


def cmd_neron_check(args, frame: Frame):
    ok, found, trees = neron_component_check(frame.graph, 1)
    report = {"base": frame.base, "quasistable_count": found, "spanning_trees": trees, "agree": ok}
    line = f"quasistable multidegrees: {found}, spanning trees: {trees} -> {'agree' if ok else 'MISMATCH'}"
    return (EXIT_OK if ok else EXIT_FAIL), report, [line]


def _suite_lines(report) -> list[str]:
    lines = [f"trials: {report.trials}, counterexamples: {report.counterexamples}"]
    for name, items in report.tallies.items():
        nonvac = sum(t.nonvacuous for t in items.values())
        fails = sum(t.failures for t in items.values())
        lines.append(f"  {report.status(name):8s} {name}  nonvacuous={nonvac} failures={fails}")
    return lines


def cmd_verify(args, graph: DualGraph | None):
    if graph is not None:
        report = lemma_suite(graph)
        out = {"params": None, "suite": report.to_dict()}
    else:
        try:
            params = GenParams(
                p_range=(args.p_min, args.p_max),
                extra_edges=args.extra_edges,
                loop_probability=args.loops,
                master_seed=args.seed,
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        report = run_suite(params, args.trials)
        out = {"params": params.to_dict(), "suite": report.to_dict()}
    code = EXIT_OK if report.counterexamples == 0 else EXIT_FAIL
    return code, out, _suite_lines(report)


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nodaltails",
        description="Nested tails, twists and quasistability on dual graphs of nodal curves.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_cmd(name: str, help_text: str, single: bool = True) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_text, description=help_text)
        sp.add_argument("--graph", required=single, help="graph document, '-' for stdin")
        sp.add_argument("--json", action="store_true", help="emit the canonical JSON report")
        if single:
            sp.add_argument("--base", type=int, default=1, help="marked component (default 1)")
        return sp

    sp = graph_cmd("tails", "list tails, optionally with a given number of terminal points")
    sp.add_argument("--k", type=int, default=None)
    sp = graph_cmd("nested-tails", "nested tail sets for a pair (i, j)")
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--j", type=int, required=True)
    sp = graph_cmd("twist", "twist by O(-W) for a subcurve, or by the nested tails of (i, j)")
    sp.add_argument("--subcurve", help="comma-separated components of W")
    sp.add_argument("--i", type=int)
    sp.add_argument("--j", type=int)
    sp = graph_cmd("abel-neron", "twisted multidegree of O(2P - Q - Q') and its quasistability")
    sp.add_argument("--i", type=int)
    sp.add_argument("--j", type=int)
    sp.add_argument("--all-pairs", action="store_true")
    sp = graph_cmd("check", "test a multidegree for quasistability")
    sp.add_argument("--multidegree", required=True, help="comma-separated degrees, e.g. 1,-1")
    sp = graph_cmd("enumerate-quasistable", "all degree-0 quasistable multidegrees")
    sp.add_argument("--window", type=int, default=None, help="search |d_l| <= WINDOW instead of the default box")
    graph_cmd("neron-check", "compare the quasistable count with the spanning-tree count")
    sp = graph_cmd("verify", "run the lemma suite on one graph or on a random corpus", single=False)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--p-min", type=int, default=2)
    sp.add_argument("--p-max", type=int, default=8)
    sp.add_argument("--extra-edges", type=_interval, default=(0, 6), help="N or MIN:MAX")
    sp.add_argument("--loops", type=_fraction, default=Fraction(1, 10), help="loop probability, e.g. 1/10")
    return parser


COMMANDS = {
    "tails": cmd_tails,
    "nested-tails": cmd_nested_tails,
    "twist": cmd_twist,
    "abel-neron": cmd_abel_neron,
    "check": cmd_check,
    "enumerate-quasistable": cmd_enumerate,
    "neron-check": cmd_neron_check,
}


def _read_graph(path: str, stdin: TextIO) -> DualGraph:
    if path == "-":
        return parse_graph_document(stdin.buffer.read() if hasattr(stdin, "buffer") else stdin.read())
    return load_graph(path)


def run_command(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        graph = None if args.graph is None else _read_graph(args.graph, sys.stdin)
        if args.command == "verify":
            code, report, lines = cmd_verify(args, graph)
        else:
            code, report, lines = COMMANDS[args.command](args, Frame(graph, args.base))
    except (DocumentError, UsageError, GuardExceededError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except NodalTailsError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_FAIL
    if args.json:
        body = {"tool": "nodaltails", "version": __version__, "command": args.command}
        body.update(report)
        print(canonical_json(body), file=out)
    else:
        print("\n".join(lines), file=out)
    return code


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
