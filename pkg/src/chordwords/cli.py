"""Command-line front end.

Exit codes: 0 for a conclusive answer or a plain computation, 2 when the
answer only holds up to the requested depth, 1 on errors.
"""
from __future__ import annotations

import argparse
import contextlib
import os
import shlex
import sys
from typing import Iterable

from .concrete import Expr, compile_concrete
from .families import (
    DEFAULT_DEPTH,
    LevelError,
    StarElement,
    WordFamily,
    bounded_check,
    eq_up_to,
    is_reduced_up_to,
    is_star_coherent_up_to,
    star_of,
    unbounded_element,
)
from .graphs import GraphError, TreeLevels, builtin, end_threads, is_topological_tree_up_to
from .parsing import ParseError, parse_graph, parse_word
from .pi1 import (
    DEFAULT_RADIUS,
    DEFAULT_THRESHOLD,
    TraceWord,
    adjacent_cancellation_certificate,
    classify,
    empty_trace,
    homotopic_up_to,
    ladder_loop_trace,
    monotone_trace,
    realizability_scan,
    t2_loop_trace,
)
from .verdict import Verdict
from .words import WordError, permanent_positions, reduce, render

NAMED_TRACES = {"@ladder_loop": ladder_loop_trace, "@t2_loop": t2_loop_trace, "@monotone": monotone_trace}


class UsageError(Exception):
    pass


def _family(word) -> WordFamily:
    if isinstance(word, Expr):
        return compile_concrete(word)
    return WordFamily.constant(word, tag=render(word))


def _star(text: str) -> StarElement:
    return star_of(_family(parse_word(text)))


def _graph(spec: str | None, depth: int):
    if spec is None:
        raise UsageError("this command needs --graph")
    text = spec
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
    return parse_graph(text, validate_depth=depth)


def _trace(text: str, tree: TreeLevels) -> TraceWord:
    if text in NAMED_TRACES:
        return NAMED_TRACES[text](tree.graph, tree)
    return TraceWord(_family(parse_word(text)), tree)


def _verdict_exit(v: Verdict) -> int:
    return 0 if v.conclusive else 2


# -- commands: each returns (records, exit code) ------------------------------------


def cmd_reduce(a):
    word = parse_word(a.word)
    if isinstance(word, Expr):
        fam = compile_concrete(word)
        recs = [
            {"verdict": "reduced_word", "level": n, "word": render(reduce(fam.level(n)))}
            for n in range(a.depth + 1)
        ]
        return recs, 0
    return [{"verdict": "reduced_word", "word": render(reduce(word))}], 0


def cmd_eq(a):
    v = eq_up_to(_star(a.left), _star(a.right), a.depth)
    return [v.record()], _verdict_exit(v)


def cmd_permanent(a):
    word = parse_word(a.word)
    if isinstance(word, Expr):
        v = is_reduced_up_to(compile_concrete(word), a.depth)
        return [v.record()], _verdict_exit(v)
    perm = sorted(permanent_positions(word))
    verdict = "reduced" if len(perm) == len(word) else "not_reduced"
    return [{"verdict": verdict, "positions": ",".join(map(str, perm)) or "-", "count": len(perm)}], 0


def cmd_ends(a):
    g = _graph(a.graph, a.depth)
    threads = end_threads(g, a.depth)
    exact = g.final_level is not None and a.depth > g.final_level
    v = Verdict("EndsUpTo", depth=a.depth, count=len(threads), exact=exact)
    recs = [v.record()]
    recs += [{"thread": i, "components": ",".join(map(str, th.ids))} for i, th in enumerate(threads)]
    return recs, _verdict_exit(v)


def cmd_tree(a):
    g = _graph(a.graph, a.depth)
    v = is_topological_tree_up_to(TreeLevels(g), g, a.depth)
    if v.kind == "TreeUpTo" and g.final_level is not None and a.depth >= g.final_level:
        v = Verdict("TreeUpTo", depth=a.depth, exact=True)
    return [v.record()], _verdict_exit(v)


def cmd_chords(a):
    g = _graph(a.graph, a.depth)
    table = TreeLevels(g).chord_table(a.depth)
    recs = [{"verdict": "chords", "depth": a.depth, "count": len(table)}]
    recs += [
        {"chord": f"e{c.index}", "edge": c.edge, "tail": c.tail, "head": c.head, "level": c.level}
        for c in table
    ]
    return recs, 0


def cmd_classify(a):
    g = _graph(a.graph, a.depth)
    rep = classify(g, TreeLevels(g), a.depth)
    recs = [rep.record()]
    for th, v in rep.ends:
        recs.append({"end": th.ids[-1], "verdict": v.kind, **({"level": v.level} if v.level is not None else {})})
    return recs, 2 if rep.verdict == "Inconclusive" else 0


def _need_radius(a) -> None:
    if a.radius >= a.depth:
        raise UsageError(f"--radius {a.radius} must be below --depth {a.depth}")


def cmd_realizable(a):
    _need_radius(a)
    g = _graph(a.graph, a.depth)
    w = _trace(a.word, TreeLevels(g))
    v = realizability_scan(w, a.depth, a.radius, a.threshold)
    rec = v.record()
    rec["trajectory"] = ",".join(map(str, v.detail.get("trajectory", ())))
    return [rec], _verdict_exit(v)


def cmd_homotopic(a):
    g = _graph(a.graph, a.depth)
    t = TreeLevels(g)
    u = _trace(a.left, t)
    w = empty_trace(t) if a.right is None else _trace(a.right, t)
    v = homotopic_up_to(u, w, a.depth)
    return [v.record()], _verdict_exit(v)


def cmd_demo(a):
    recs = []
    d = a.depth
    recs.append({"demo": "reduce", "input": "e0 E0 e0", "word": render(reduce(parse_word("e0 E0 e0")))})

    g = builtin("ladder")
    lad = ladder_loop_trace(g)
    recs.append({"demo": "ladder_loop", **homotopic_up_to(lad, empty_trace(lad.tree), d).record()})

    t2 = t2_loop_trace(builtin("t2_doubled_tree"))
    k = min(d, 8)
    recs.append({"demo": "t2_loop", "length": len(t2.level(k)), **homotopic_up_to(t2, empty_trace(t2.tree), k).record()})
    recs.append({"demo": "t2_adjacent", **adjacent_cancellation_certificate(t2, k).record()})

    u = unbounded_element()
    recs.append({"demo": "unbounded", **bounded_check(u, 0, 3, 6).record(), "coherent": is_star_coherent_up_to(u, 6).kind})

    for name in ("ladder", "K4", "double_ladder", "ray"):
        recs.append({"demo": "classify", "graph": name, **classify(builtin(name), depth=min(d, 10)).record()})

    dl = builtin("double_ladder")
    if d > 2:
        recs.append({"demo": "alternating", **realizability_scan(monotone_trace(dl), d, 2, a.threshold, trajectory=False).record()})
    return recs, 0


COMMANDS = {
    "reduce": cmd_reduce,
    "eq": cmd_eq,
    "permanent": cmd_permanent,
    "ends": cmd_ends,
    "tree": cmd_tree,
    "chords": cmd_chords,
    "classify": cmd_classify,
    "realizable": cmd_realizable,
    "homotopic": cmd_homotopic,
    "demo": cmd_demo,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    common.add_argument("--radius", type=int, default=DEFAULT_RADIUS)
    common.add_argument("--threshold", type=int, default=DEFAULT_THRESHOLD)
    common.add_argument("--format", choices=("human", "lines"), default="human")

    p = argparse.ArgumentParser(prog="chordwords", description="Infinite words, graph ends and loop traces.")
    sub = p.add_subparsers(dest="command", required=True)
    graph_help = "graph spec text (';' separates lines) or a file holding it"

    s = sub.add_parser("reduce", parents=[common], help="reduce a word")
    s.add_argument("word")
    s = sub.add_parser("eq", parents=[common], help="compare two words in F*")
    s.add_argument("left")
    s.add_argument("right")
    s = sub.add_parser("permanent", parents=[common], help="permanent positions / reducedness")
    s.add_argument("word")
    for name, hlp in (("ends", "approximate the ends"), ("tree", "check the spanning tree"),
                      ("chords", "list the chord table"), ("classify", "classify the fundamental group")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--graph", required=True, help=graph_help)
    s = sub.add_parser("realizable", parents=[common], help="look for a non-convergent monotonic subword")
    s.add_argument("word", help="word, or one of " + ", ".join(NAMED_TRACES))
    s.add_argument("--graph", required=True, help=graph_help)
    s = sub.add_parser("homotopic", parents=[common], help="compare two loop traces")
    s.add_argument("left")
    s.add_argument("right", nargs="?", help="defaults to the constant loop")
    s.add_argument("--graph", required=True, help=graph_help)
    sub.add_parser("demo", parents=[common], help="run the worked examples")
    return p


def _fmt_value(v) -> str:
    s = str(v)
    return shlex.quote(s) if s == "" or any(c.isspace() or c in "'\"" for c in s) else s


def format_records(records: Iterable[dict], style: str) -> str:
    lines = []
    for rec in records:
        if style == "lines":
            lines.append(" ".join(f"{k}={_fmt_value(v)}" for k, v in rec.items()))
        else:
            items = list(rec.items())
            (hk, hv), rest = items[0], items[1:]
            tail = ", ".join(f"{k}: {v}" for k, v in rest)
            head = str(hv) if hk == "verdict" else f"  {hk} {hv}"
            lines.append(head + (f"  ({tail})" if tail else ""))
    return "\n".join(lines)


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(err), contextlib.redirect_stdout(out):
            a = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    if a.depth < 0:
        print("error: --depth must be >= 0", file=err)
        return 1
    if a.radius < 0 or a.threshold < 1:
        print("error: --radius must be >= 0 and --threshold >= 1", file=err)
        return 1
    try:
        records, code = COMMANDS[a.command](a)
    except (ParseError, WordError, GraphError, UsageError, LevelError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    print(format_records(records, a.format), file=out)
    return code


def main() -> None:
    sys.exit(run())
