"""``kterm`` command line: a thin client over the operations in ``service``."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import service as sv
from .errors import KTermError
from .semigroup import load_semigroup


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kterm", description="omega-terms over local groups")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("canon", help="canonical form of a term")
    c.add_argument("term")
    c.add_argument("--stage", choices=["semi", "full"], default="full")
    c.add_argument("--trace", action="store_true", help="print the derivation after a --- line")
    c.add_argument("--flatten", action="store_true", help="expand derived rules in the trace")
    c.add_argument("--stages", action="store_true", help="print every pipeline snapshot")

    d = sub.add_parser("decide", help="decide LG |= lhs = rhs")
    d.add_argument("lhs")
    d.add_argument("eq", metavar="=")
    d.add_argument("rhs")
    d.add_argument("--method", choices=["canon", "root", "both"], default="canon")
    d.add_argument("--oracle", action="store_true", help="also check the identity on the battery")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--porcelain", action="store_true")

    for name in ("outline", "root"):
        o = sub.add_parser(name, help=f"q-{name} of a canonical or semi-canonical term")
        o.add_argument("term")
        o.add_argument("--q", type=int, default=None)

    e = sub.add_parser("eval", help="evaluate a term in a finite semigroup")
    e.add_argument("term")
    e.add_argument("--sg", required=True, help="semigroup table file")
    e.add_argument("--assign", required=True, help="letter=element pairs, comma separated")

    s = sub.add_parser("check-sg", help="inspect a semigroup table file")
    s.add_argument("file")

    t = sub.add_parser("trace", help="replay a derivation file")
    t.add_argument("file")
    t.add_argument("--verify", action="store_true")

    st = sub.add_parser("selftest", help="cross-check both decision paths on random pairs")
    st.add_argument("--n", type=int, default=100)
    st.add_argument("--seed", type=int, default=1)
    return p


def _assignment(text: str) -> dict[str, int]:
    out = {}
    for part in text.split(","):
        k, sep, v = part.partition("=")
        k = k.strip()
        if not sep or len(k) != 1 or not k.isalpha():
            raise KTermError(f"bad assignment {part!r}; expected letter=element")
        try:
            out[k] = int(v)
        except ValueError:
            raise KTermError(f"bad element in {part!r}") from None
    return out


def _run(args: argparse.Namespace) -> tuple[int, list[str]]:
    match args.command:
        case "canon":
            r = sv.canon(sv.CanonRequest(term=args.term, stage=args.stage, trace=args.trace,
                                         flatten=args.flatten))
            lines = [f"{s.name} {s.term}" for s in r.stages] if args.stages else [r.output]
            if args.trace:
                lines += ["---", r.derivation.rstrip("\n")]
            return 0, lines
        case "decide":
            if args.eq != "=":
                raise KTermError("usage: decide <lhs> = <rhs>")
            r = sv.decide_terms(sv.DecideRequest(lhs=args.lhs, rhs=args.rhs, method=args.method,
                                                 oracle=args.oracle, seed=args.seed))
            head = "EQUAL" if r.equal else "UNEQUAL"
            if args.porcelain:
                return (0 if r.equal else 1), [head, *r.canonical, *r.roots]
            lines = [head, f"lhs {r.canonical[0]}", f"rhs {r.canonical[1]}"]
            if args.method != "canon":
                lines += [f"lhs-root {r.roots[0]}", f"rhs-root {r.roots[1]}"]
            if not r.equal:
                if r.witness:
                    asg = ",".join(f"{k}={v}" for k, v in sorted(r.witness.assignment.items()))
                    lines.append(f"witness {r.witness.semigroup} {asg}")
                else:
                    lines.append("witness none (unequal by canonical forms; no small witness found)")
            if r.oracle_holds is not None:
                lines.append("oracle " + ("holds" if r.oracle_holds else "fails"))
            return (0 if r.equal else 1), lines
        case "outline" | "root":
            fn = sv.outline if args.command == "outline" else sv.root
            return 0, [fn(sv.OutlineRequest(term=args.term, q=args.q)).word]
        case "eval":
            S = load_semigroup(args.sg)
            r = sv.eval_term(sv.EvalRequest(term=args.term, table=S.table.tolist(),
                                            assignment=_assignment(args.assign)))
            return 0, [str(r.element)]
        case "check-sg":
            S = load_semigroup(args.file)
            r = sv.check_semigroup(sv.SemigroupRequest(table=S.table.tolist()))
            return 0, [f"order {r.order}", "idempotents " + " ".join(map(str, r.idempotents)),
                       f"local-group {str(r.local_group).lower()}"]
        case "trace":
            with open(args.file, encoding="utf-8") as fh:
                r = sv.trace(sv.TraceRequest(derivation=fh.read()))
            if args.verify:
                return (0, [f"valid {r.steps} steps"]) if r.valid else (1, ["invalid"])
            if not r.valid:
                return 1, ["invalid"]
            return 0, [r.source, *r.terms]
        case "selftest":
            r = sv.selftest(sv.SelftestRequest(n=args.n, seed=args.seed))
            lines = [f"pairs {r.pairs}", f"equal {r.equal_pairs}", f"failures {len(r.failures)}"]
            return (1 if r.failures else 0), lines + [f"FAIL {f}" for f in r.failures]
    raise AssertionError(args.command)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        code, lines = _run(args)
    except (KTermError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write("".join(line + "\n" for line in lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
