"""Command-line interface: ``tf <command> ...``.

Every command prints line-oriented ``key=value`` output.  Exit codes: 0 on
success, 1 when a check or verification fails, 2 on unreadable or invalid
input.  Commands that take several input files process them in a process pool
of at most ``TF_THREADS`` workers and print results in input order.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from .census import CensusConfig, CensusError, run_census
from .invariants import (
    ZLiftError,
    build_complex,
    check_differential,
    euler_check,
    homology,
    normalize_ring,
    two_factor_polynomial,
)
from .moduli import analyze_flips, classify_all_index2, cover_check, dual_poset_check, decorated_faces, face_of
from .moduli import realization_report, verify_six_cycles
from .plane_graph import GraphError, apply_flip, load_graph, validate, write_graph
from .resolution import in_family_G, scan_faces
from .webs import PDError, flatten_split, flatten_web, flattening_state, load_pd, zero_state_audit

OK, FAIL, BAD_INPUT = 0, 1, 2
SUITES = ("faces", "moduli", "euler", "cover", "all")


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    ring: str = "Z2"
    seed: int = 0
    threads: int = 1
    output: str | None = None


@dataclass
class Outcome:
    code: int
    lines: list[str]


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("TF_THREADS", "1")))
    except ValueError:
        return 1


def _load(path: str):
    """Read and validate a graph file; raises GraphError or OSError."""
    g = load_graph(path)
    rep = validate(g)
    if not rep.ok:
        raise GraphError("; ".join(rep.violations))
    return g


def _guarded(fn: Callable[..., Outcome], path: str, *args) -> Outcome:
    try:
        return fn(path, *args)
    except (OSError, GraphError, PDError) as exc:
        return Outcome(BAD_INPUT, [f"error input={path} {type(exc).__name__}: {exc}"])


def _map(fn: Callable[..., Outcome], paths: Sequence[str], *args) -> list[Outcome]:
    n = min(_threads(), len(paths))
    if n <= 1:
        return [_guarded(fn, p, *args) for p in paths]
    with ProcessPoolExecutor(max_workers=n) as pool:
        futs = [pool.submit(_guarded, fn, p, *args) for p in paths]
        return [f.result() for f in futs]


# ----- per-file commands ---------------------------------------------------------------------


def do_check(path: str) -> Outcome:
    g = _load(path)
    mem = in_family_G(g)
    if mem.faces == 0:
        return Outcome(OK, [f"graph={g.name} member of G (no 2-faces)"])
    if mem.member:
        return Outcome(OK, [f"graph={g.name} member of G (faces={mem.faces})"])
    return Outcome(FAIL, [
        f"graph={g.name} not a member of G (faces={mem.faces} bad={mem.bad_faces})",
        f"witness {mem.witness.line()}",
    ])


def do_poly(path: str) -> Outcome:
    g = _load(path)
    return Outcome(OK, [str(two_factor_polynomial(g))])


def do_hom(path: str, ring: str) -> Outcome:
    g = _load(path)
    try:
        H = homology(build_complex(g, ring))
    except ZLiftError as exc:
        return Outcome(FAIL, [f"graph={g.name} {exc}"])
    return Outcome(OK, H.lines())


def do_cells(path: str, ring: str, d0: int) -> Outcome:
    g = _load(path)
    try:
        rep = realization_report(g, ring, d0)
    except ZLiftError as exc:
        return Outcome(FAIL, [f"graph={g.name} {exc}"])
    return Outcome(OK if rep.ok else FAIL, rep.lines())


def _suite_faces(g) -> tuple[bool, list[str]]:
    mem = in_family_G(g)
    lines = [r.line() for r in scan_faces(g) if r.bad]
    lines.append(f"faces total={mem.faces} bad={mem.bad_faces} member={int(mem.member)}")
    idx = classify_all_index2(g)
    return idx.ok, lines + idx.lines()


def _suite_moduli(g, wrong: bool) -> tuple[bool, list[str]]:
    six = verify_six_cycles(g, wrong=wrong)
    lines = six.lines()
    dual_fail = []
    for index in (1, 2, 3):
        for cube, P in decorated_faces(g, index):
            face = face_of(cube, P)
            if not dual_poset_check(g, face):
                dual_fail.append(face.describe())
    lines += [f"dual failure {d}" for d in dual_fail]
    lines.append(f"dual failures={len(dual_fail)} pass={int(not dual_fail)}")
    flips = analyze_flips(g)
    lines += flips.lines()
    return six.ok and not dual_fail, lines


def _suite_euler(g) -> tuple[bool, list[str]]:
    ok, lines = True, []
    rings = ["Z2"] + (["Z"] if in_family_G(g).member else [])
    for ring in rings:
        rep = euler_check(g, ring)
        probs = check_differential(build_complex(g, ring))
        lines += rep.lines()
        lines += [f"differential ring={ring} {p}" for p in probs]
        lines.append(f"check=dd_zero ring={ring} pass={int(not probs)}")
        ok = ok and rep.ok and not probs
    return ok, lines


def _suite_cover(g) -> tuple[bool, list[str]]:
    rep = cover_check(g)
    return rep.ok, rep.lines()


def do_verify(path: str, suite: str, wrong: bool) -> Outcome:
    g = _load(path)
    chosen = SUITES[:-1] if suite == "all" else (suite,)
    ok, lines = True, []
    for s in chosen:
        if s == "moduli":
            passed, out = _suite_moduli(g, wrong)
        else:
            passed, out = {"faces": _suite_faces, "euler": _suite_euler, "cover": _suite_cover}[s](g)
        lines += out
        lines.append(f"suite={s} pass={int(passed)}")
        ok = ok and passed
    if suite == "all":
        for ring in ["Z2"] + (["Z"] if in_family_G(g).member else []):
            rep = realization_report(g, ring)
            lines.append(f"suite=cells ring={ring} pass={int(rep.ok)}")
            ok = ok and rep.ok
    lines.append(f"verify graph={g.name} pass={int(ok)}")
    return Outcome(OK if ok else FAIL, lines)


# ----- commands with other shapes ---------------------------------------------------------------


def do_flip(path: str, disk: str, out: str | None) -> Outcome:
    g = _load(path)
    h = apply_flip(g, [v for v in disk.split(",") if v])
    text = write_graph(h)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        return Outcome(OK, [f"wrote {out}"])
    return Outcome(OK, text.splitlines())


def do_weave(path: str, state: str, model: str, out_dir: str | None) -> Outcome:
    link = load_pd(path)
    try:
        f = flattening_state(link, state)
    except ValueError as exc:
        raise PDError(str(exc)) from exc
    bits = "".join(map(str, f))
    if model == "web":
        fl = flatten_web(link, f)
        parts, loops = fl.parts, fl.free_loops
    else:
        parts, loops = [flatten_split(link, f)], 0
    if not parts:
        return Outcome(BAD_INPUT, [f"error link={link.name} state={bits} no matching edges: every crossing is smoothed"])
    lines = [f"weave link={link.name} state={bits} model={model} components={len(parts)} free_loops={loops}"]
    target = Path(out_dir) if out_dir else None
    for k, g in enumerate(parts):
        audit = zero_state_audit(g)
        suffix = "" if len(parts) == 1 else f".{k}"
        name = f"{link.name}-{bits}{suffix}.tfg"
        lines.append(f"graph file={name} vertices={len(g.vertices)} edges={len(g.edges)} "
                     f"matching={g.n} all_m={int(audit.all_m)} orientable={int(audit.orientable)}")
        if target is not None:
            target.mkdir(parents=True, exist_ok=True)
            (target / name).write_text(write_graph(g), encoding="utf-8")
    return Outcome(OK, lines)


def do_census(m: int, mode: str, seed: int, count: int) -> Outcome:
    try:
        rep = run_census(CensusConfig(m, mode, seed, count))
    except CensusError as exc:
        return Outcome(BAD_INPUT, [f"error {exc}"])
    return Outcome(OK, rep.lines())


# ----- argument parsing ------------------------------------------------------------------------


def _ring(text: str) -> str:
    try:
        return normalize_ring(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tf", description="2-factor homology of matched plane trivalent graphs")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="membership in G with a bad-face witness")
    s.add_argument("graphs", nargs="+")

    s = sub.add_parser("poly", help="2-factor polynomial")
    s.add_argument("graphs", nargs="+")

    s = sub.add_parser("hom", help="bigraded homology table")
    s.add_argument("graphs", nargs="+")
    s.add_argument("--ring", type=_ring, default="Z2")

    s = sub.add_parser("flip", help="apply a flip move to a vertex set")
    s.add_argument("graph")
    s.add_argument("--disk", required=True, help="comma-separated vertex ids")
    s.add_argument("--out")

    s = sub.add_parser("verify", help="run verification suites")
    s.add_argument("graphs", nargs="+")
    s.add_argument("--suite", choices=SUITES, default="all")
    s.add_argument("--wrong-pairing", action="store_true",
                   help="match every butterfly through the other run pair (negative control)")

    s = sub.add_parser("weave", help="flatten a PD-code link diagram into matched graphs")
    s.add_argument("pd")
    s.add_argument("--state", default="of", help="bit string, 'of' or 'dof'")
    s.add_argument("--model", choices=("web", "split"), default="web")
    s.add_argument("--out-dir")

    s = sub.add_parser("cells", help="cell table and cochain comparison")
    s.add_argument("graphs", nargs="+")
    s.add_argument("--ring", type=_ring, default="Z2")
    s.add_argument("--d0", type=int, default=1)

    s = sub.add_parser("census", help="fraction of small matched graphs in G")
    s.add_argument("--m", type=int, default=3)
    s.add_argument("--mode", choices=("exhaustive", "sample"), default="exhaustive")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=1000)
    return p


def run(argv: Sequence[str] | None = None) -> Outcome:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return Outcome(BAD_INPUT if exc.code else OK, [])
    cmd = args.command
    if cmd == "check":
        results = _map(do_check, args.graphs)
    elif cmd == "poly":
        results = _map(do_poly, args.graphs)
    elif cmd == "hom":
        results = _map(do_hom, args.graphs, args.ring)
    elif cmd == "cells":
        results = _map(do_cells, args.graphs, args.ring, args.d0)
    elif cmd == "verify":
        results = _map(do_verify, args.graphs, args.suite, args.wrong_pairing)
    elif cmd == "flip":
        results = [_guarded(do_flip, args.graph, args.disk, args.out)]
    elif cmd == "weave":
        results = [_guarded(do_weave, args.pd, args.state, args.model, args.out_dir)]
    else:
        results = [do_census(args.m, args.mode, args.seed, args.count)]
    lines = [line for r in results for line in r.lines]
    return Outcome(max(r.code for r in results), lines)


def main(argv: Sequence[str] | None = None) -> int:
    out = run(argv)
    stream = sys.stdout if out.code != BAD_INPUT else sys.stderr
    for line in out.lines:
        print(line, file=stream)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
