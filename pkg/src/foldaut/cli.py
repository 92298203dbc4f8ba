"""Command-line front end.

Exit codes: 0 success, 1 bad input, 2 not an automorphism (certify: not
injective), 3 injective but not surjective, 70 internal self-check failure.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from typing import Sequence

from .branding import BrandedGraph
from .folding import (Decomposition, InternalError, NotAutomorphism, NotInjective,
                      NotSurjective, decompose, initial_branding, recompose)
from .free_group import EndoMap, Permutation, TypeTwo, reduce
from .subgroups import (Report, catalog_gens, product, random_word, verify_identity_bank,
                        verify_relators_matrix, verify_fix_decomposition, whitehead_to_nielsen)

EXIT_OK, EXIT_INPUT, EXIT_NOT_AUT, EXIT_NOT_SURJ, EXIT_INTERNAL = 0, 1, 2, 3, 70

_TOKEN = re.compile(r"x(\d+)(\^-1)?")


class ParseError(ValueError):
    pass


def parse_word(text: str, n: int) -> tuple:
    """Read ``x1 x2^-1`` tokens or compact letters (``aB``; uppercase inverts).

    ``""`` and ``"1"`` give the empty word.  The result is freely reduced.
    """
    text = text.strip()
    if text in ("", "1"):
        return ()
    tokens = text.split()
    if all(_TOKEN.fullmatch(t) for t in tokens):
        letters = []
        for t in tokens:
            m = _TOKEN.fullmatch(t)
            k = int(m.group(1))
            if not 1 <= k <= n:
                raise ParseError(f"generator x{k} outside rank {n}")
            letters.append(-k if m.group(2) else k)
        return reduce(letters)
    if n <= 26 and re.fullmatch(r"[A-Za-z]+", text):
        letters = []
        for ch in text:
            k = ord(ch.lower()) - ord("a") + 1
            if k > n:
                raise ParseError(f"letter {ch!r} outside rank {n}")
            letters.append(-k if ch.isupper() else k)
        return reduce(letters)
    bad = next((t for t in tokens if not _TOKEN.fullmatch(t)), text)
    raise ParseError(f"unknown token {bad!r}")


def parse_map(images: Sequence[str]) -> EndoMap:
    n = len(images)
    if n == 0:
        raise ParseError("no images given")
    return EndoMap(tuple(parse_word(s, n) for s in images))


# --- rendering ---------------------------------------------------------------

def factor_str(W: TypeTwo | Permutation) -> str:
    return str(W)


def nielsen_str(W: TypeTwo | Permutation, n: int, m: int) -> str:
    word = whitehead_to_nielsen(W, n, m)
    return " ".join(map(str, word)) if word else "identity"


def factor_json(W: TypeTwo | Permutation) -> dict:
    if isinstance(W, Permutation):
        return {"sigma": list(W.sigma), "signs": list(W.signs)}
    return {"A": sorted(W.A, key=lambda x: (abs(x), x < 0)), "a": W.a}


def graph_json(B: BrandedGraph) -> dict:
    G = B.graph
    return {
        "vertices": list(G.vertices),
        "basepoint": B.basepoint,
        "edges": [[e, s, t, l] for e, s, t, l in G.edge_list()],
        "complement": list(B.complement),
    }


def trace_json(f: EndoMap, d: Decomposition, fixc: int | None) -> dict:
    steps = []
    for rec in d.trace:
        c = rec.candidate
        steps.append({
            "step": rec.step,
            "fold": {"vertex": c.vertex, "e1": c.e1, "e2": c.e2, "type": c.fold_type,
                     "label": rec.before.graph.label[c.e1]},
            "substitutions": [{"index": s.index, "removed": s.removed, "added": s.added,
                               "factor": factor_json(s.factor)} for s in rec.substitutions],
            "fold_factor": None if rec.fold_factor is None else factor_json(rec.fold_factor),
            "graph": graph_json(rec.after),
        })
    initial = graph_json(d.trace[0].before) if d.trace else None
    return {
        "schema": 1,
        "rank": f.rank,
        "fixc": fixc,
        "input": [list(w) for w in f.images],
        "initial": initial,
        "steps": steps,
        "factors": [factor_json(W) for W in d.factors],
        "head": factor_json(d.head),
        "verified": True,
    }


def to_dot(B: BrandedGraph, name: str) -> str:
    """One digraph; tree edges bold, complement edges dashed and tagged e_i."""
    G = B.graph
    lines = [f"digraph {name} {{"]
    for v in G.vertices:
        shape = "doublecircle" if v == B.basepoint else "circle"
        lines.append(f'  v{v} [label="{v}", shape={shape}];')
    tree = B.tree.edges
    for e, s, t, l in G.edge_list():
        if l < 0:
            e, s, t, l = G.inv[e], t, s, -l
        label = f"x{l}"
        idx = B.index_of(e)
        if e in tree:
            style = "bold"
        else:
            style = "dashed"
            label += f" (e{abs(idx)}{'' if idx > 0 else '^-1'})"
        lines.append(f'  v{s} -> v{t} [label="{label}", style={style}];')
    lines.append("}")
    return "\n".join(lines)


def dot_stages(d: Decomposition, f: EndoMap, fixc: int | None) -> str:
    stages = [initial_branding(f, fixc)] + [rec.after for rec in d.trace]
    return "\n".join(to_dot(B, f"stage{k}") for k, B in enumerate(stages)) + "\n"


# --- commands ----------------------------------------------------------------

def _fail(msg: str, code: int) -> int:
    print(msg, file=sys.stderr)
    return code


def cmd_decompose(args) -> int:
    f = parse_map(args.images)
    n = f.rank
    try:
        d = decompose(f, fixc=args.fixc, trace=bool(args.trace or args.dot))
    except NotAutomorphism as exc:
        return _fail(str(exc), EXIT_NOT_AUT)
    except ValueError as exc:
        return _fail(str(exc), EXIT_INPUT)
    if recompose(d) != f:
        return _fail("internal error: recomposition does not reproduce the input", EXIT_INTERNAL)
    m = args.fixc or 0
    show = (lambda W: nielsen_str(W, n, m)) if args.nielsen else factor_str
    head = show(d.head)
    if d.factors:
        print(f"head: {head}; factors: {len(d.factors)} (in order of application)")
        for k, W in enumerate(d.factors, 1):
            print(f"  W{k} = {show(W)}")
    else:
        print(f"head: {head}; factors: (none)")
    print(f"steps: {d.steps}")
    print("verified: yes")
    if args.trace:
        with open(args.trace, "w") as fh:
            json.dump(trace_json(f, d, args.fixc), fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(dot_stages(d, f, args.fixc))
    return EXIT_OK


def cmd_certify(args) -> int:
    f = parse_map(args.images)
    try:
        d = decompose(f)
    except NotInjective as exc:
        return _fail(str(exc), EXIT_NOT_AUT)
    except NotSurjective as exc:
        G = exc.branded.graph
        rank = G.num_geometric_edges() - len(G.vertices) + 1
        print(f"injective, not surjective: immersed graph has {len(G.vertices)} vertices, "
              f"{G.num_geometric_edges()} edges, rank {rank}")
        return EXIT_NOT_SURJ
    if recompose(d) != f:
        return _fail("internal error: recomposition does not reproduce the input", EXIT_INTERNAL)
    print(f"automorphism: yes; immersed graph is the rose R_{f.rank}; "
          f"{len(d.factors)} factors; head: {d.head}")
    return EXIT_OK


def _fix_reports(n: int, m: int, seed: int, count: int) -> list[Report]:
    rng = random.Random(seed)
    out = []
    for kind in ("B", "A"):
        gens = catalog_gens(kind, m, n)
        for k in range(count):
            f = product(random_word(gens, rng.randint(0, 20), rng), n) if gens \
                else EndoMap.identity(n)
            r = verify_fix_decomposition(f, m)
            r.title = f"{kind}_{m} product #{k}: {f}"
            out.append(r)
    return out


def cmd_verify(args) -> int:
    reports: list[Report] = []
    suite = "fix" if args.suite == "theorem41" else args.suite
    suites = ["relators", "identities", "fix"] if suite == "all" else [suite]
    if not 0 <= args.m <= args.n:
        return _fail(f"need 0 <= m <= n, got m={args.m}, n={args.n}", EXIT_INPUT)
    for suite in suites:
        if suite == "relators":
            if args.m < 1:
                return _fail("relator bank needs m >= 1", EXIT_INPUT)
            reports.append(verify_relators_matrix(args.m, args.n, loose=args.loose))
        elif suite == "identities":
            reports.append(verify_identity_bank(args.n))
        else:
            reports.extend(_fix_reports(args.n, args.m, args.seed, args.count))
    failed = 0
    for r in reports:
        if not r.ok:
            failed += 1
            print(r.summary())
            for c in r.failures:
                print("  " + c.line())
        elif args.verbose:
            print(r.summary())
    checks = sum(len(r.checks) for r in reports)
    bad = sum(len(r.failures) for r in reports)
    print(f"{len(reports) - failed}/{len(reports)} reports passed, {checks - bad}/{checks} checks")
    return EXIT_OK if failed == 0 else EXIT_NOT_AUT


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="foldaut", description="Whitehead decompositions of free group "
                                            "automorphisms by folding graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("decompose", help="write an automorphism as Whitehead factors")
    d.add_argument("images", nargs="+", help="image of x1, x2, ... (e.g. 'x1 x2' or 'ab')")
    d.add_argument("--fixc", type=int, metavar="M",
                   help="x_{M+1}..x_n map to conjugates of themselves")
    d.add_argument("--nielsen", action="store_true", help="print factors as rho/K/S products")
    d.add_argument("--trace", metavar="FILE", help="write the fold sequence as JSON")
    d.add_argument("--dot", metavar="FILE", help="write one DOT digraph per stage")
    d.set_defaults(run=cmd_decompose)

    c = sub.add_parser("certify", help="decide whether a map is an automorphism")
    c.add_argument("images", nargs="+")
    c.set_defaults(run=cmd_certify)

    v = sub.add_parser("verify", help="run the generator and relator checks")
    v.add_argument("--suite", choices=["relators", "identities", "fix", "theorem41", "all"],
                   default="all", help="'fix' decomposes random Fix_c/Fix products "
                                       "('theorem41' is an alias)")
    v.add_argument("--n", type=int, default=4)
    v.add_argument("--m", type=int, default=2)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--count", type=int, default=50, help="random products per catalog")
    v.add_argument("--loose", action="store_true",
                   help="use the uncorrected index ranges for two relator families")
    v.add_argument("-v", "--verbose", action="store_true")
    v.set_defaults(run=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except ParseError as exc:
        return _fail(f"parse error: {exc}", EXIT_INPUT)
    except InternalError as exc:
        return _fail(f"internal error: {exc}", EXIT_INTERNAL)
    except ValueError as exc:
        return _fail(str(exc), EXIT_INPUT)


if __name__ == "__main__":
    sys.exit(main())
