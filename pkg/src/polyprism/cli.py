"""Command line interface: `verify` runs face checks, `audit` resolves signs.

Exit codes: 0 all requested faces pass, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys

from .conventions import ConventionTable
from .errors import NoConsistentAssignment, PolyprismError
from .verifier import FACES, reports_to_json, reports_to_text, run_faces, sign_audit


def _parse_weights(text: str) -> set[int]:
    out = set()
    for part in text.split(","):
        w = int(part)
        if w not in (2, 3):
            raise argparse.ArgumentTypeError("weights must be 2 and/or 3")
        out.add(w)
    return out


def _select_faces(args) -> list[str]:
    if args.faces and args.faces != "all":
        ids = [f.strip() for f in args.faces.split(",") if f.strip()]
        unknown = [f for f in ids if f not in FACES]
        if unknown:
            raise SystemExit(f"unknown face ids: {', '.join(unknown)} (exit 2)")
        return ids
    weights = args.weight if args.weight else {2, 3}
    return [fid for fid, spec in FACES.items() if spec.weight in weights]


def _load_table(path: str | None) -> ConventionTable:
    if not path:
        return ConventionTable()
    with open(path, "r", encoding="utf-8") as fh:
        return ConventionTable.from_json(fh.read())


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polyprism", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check prism faces")
    v.add_argument("--weight", type=_parse_weights, default=None, help="2, 3 or 2,3")
    v.add_argument("--faces", default="all", help="comma-separated face ids or 'all'")
    v.add_argument("--backend", choices=("formal", "exact", "numeric", "all"), default="all")
    v.add_argument("--trials", type=int, default=50)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tolerance", type=float, default=1e-8)
    v.add_argument("--convention", default=None, help="path to a convention table JSON")
    v.add_argument("--report", choices=("text", "json"), default="text")
    v.add_argument("--out", default=None)

    a = sub.add_parser("audit", help="search the sign-convention space")
    a.add_argument("--weight", type=_parse_weights, default=None, help="restrict audited faces")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--report", choices=("text", "json"), default="json")
    a.add_argument("--out", default=None)

    f = sub.add_parser("faces", help="list registered faces")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "faces":
        for fid, spec in FACES.items():
            print(f"{fid:9s} weight {spec.weight}   {spec.claim}")
        return 0

    if args.command == "audit":
        ids = None
        if args.weight:
            ids = [
                fid
                for fid, spec in FACES.items()
                if spec.weight in args.weight and spec.exact_kind == "struct"
            ]
        try:
            tables = sign_audit(ids, seed=args.seed)
        except NoConsistentAssignment as ex:
            print(f"audit failed: {ex}", file=sys.stderr)
            return 1
        if args.report == "json":
            import json

            _emit(json.dumps([t.to_dict() for t in tables], indent=2), args.out)
        else:
            _emit("\n".join(str(t.to_dict()) for t in tables), args.out)
        return 0 if tables else 1

    # verify
    table = _load_table(args.convention)
    ids = _select_faces(args)
    try:
        reports = run_faces(
            ids,
            backend=args.backend,
            trials=args.trials,
            seed=args.seed,
            table=table,
            tolerance=args.tolerance,
        )
    except PolyprismError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 1
    if args.report == "json":
        _emit(reports_to_json(reports, args.seed, table), args.out)
    else:
        _emit(reports_to_text(reports), args.out)
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    raise SystemExit(main())
