"""Command-line entry point.

    gcmate classify FILE
    gcmate mate FILE
    gcmate verify FILE_G FILE_H
    gcmate census --n N --samples K --seed S --workers W --out PATH
    gcmate probe RECORDS

FILE holds graph6 records (one per line) or an adjacency-matrix text block;
``-`` reads stdin. Results are JSON, one object per line. Exit status is 0
on success, 1 when some graph was unclassifiable, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .census import append_csv, census_run, conjecture_probe, read_records, summary_path
from .errors import Graph6Error
from .graphs import Graph, read_graphs, write_graph6
from .matefinder import MateVerdict, find_mate
from .verify import certify_mate, certify_pair
from .walkmatrix import Verdict, classify

EXIT_OK, EXIT_UNCLASSIFIABLE, EXIT_USAGE = 0, 1, 2


def _load(path: str) -> list[Graph]:
    if path == "-":
        data = sys.stdin.buffer.read()
    else:
        with open(path, "rb") as fh:
            data = fh.read()
    return read_graphs(data)


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def cmd_classify(args) -> int:
    status = EXIT_OK
    for g in _load(args.file):
        cls = classify(g)
        if cls.verdict is Verdict.UNCLASSIFIABLE:
            status = EXIT_UNCLASSIFIABLE
        _emit({"graph6": write_graph6(g).decode(), **cls.to_json()})
    return status


def _mate_report(g: Graph) -> tuple[dict, bool]:
    cls = classify(g)
    out = {"graph6": write_graph6(g).decode(), "classification": cls.verdict.value}
    if cls.verdict is Verdict.ODD_SQUARE_FREE_DGS:
        out["verdict"] = "dgs"
        out["reason"] = "2^{-floor(n/2)} det W is odd and square-free"
    elif cls.verdict is Verdict.UNCLASSIFIABLE:
        out["verdict"] = "unclassifiable"
    elif cls.verdict is not Verdict.FAMILY_FN:
        out["verdict"] = "undetermined"
        out["reason"] = "graph is outside the family handled by the mate search"
    else:
        res = find_mate(g, cls)
        out.update(
            verdict=res.verdict.value,
            p=cls.p,
            kernel_vector=list(res.kernel),
            rep_census=[res.rep_census.get(k, 0) for k in range(1, cls.p)],
        )
        if res.verdict is MateVerdict.MATE:
            out["mate_graph6"] = write_graph6(res.mate).decode()
            out["qhat"] = res.q.qhat.tolist()
            out["certificate"] = certify_mate(g, res).to_json()
    return out, cls.verdict is Verdict.UNCLASSIFIABLE


def cmd_mate(args) -> int:
    status = EXIT_OK
    for g in _load(args.file):
        out, unclassifiable = _mate_report(g)
        if unclassifiable:
            status = EXIT_UNCLASSIFIABLE
        _emit(out)
    return status


def cmd_verify(args) -> int:
    gs, hs = _load(args.file_g), _load(args.file_h)
    if len(gs) != 1 or len(hs) != 1:
        raise Graph6Error("verify expects exactly one graph per file")
    g, h = gs[0], hs[0]
    if g.n != h.n:
        raise Graph6Error(f"graphs have different orders ({g.n} and {h.n})")
    cert = certify_pair(g, h)
    _emit({"graph6_g": write_graph6(g).decode(), "graph6_h": write_graph6(h).decode(),
           "certificate": cert.to_json()})
    return EXIT_OK


def cmd_census(args) -> int:
    summary = census_run(args.n, args.samples, args.seed, args.workers, args.out)
    if args.csv:
        append_csv(summary, args.csv)
    out = summary.to_json()
    out["summary_file"] = str(summary_path(args.out))
    _emit(out)
    return EXIT_OK


def cmd_probe(args) -> int:
    _emit(conjecture_probe(read_records(args.records)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gcmate",
        description="Generalized-spectrum classification and cospectral mate search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify graphs against the family")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("mate", help="decide DGS and construct the mate if one exists")
    p.add_argument("file")
    p.set_defaults(func=cmd_mate)

    p = sub.add_parser("verify", help="certify that FILE_H is a generalized cospectral mate of FILE_G")
    p.add_argument("file_g")
    p.add_argument("file_h")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("census", help="classify random graphs and record the outcomes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="JSON-lines record file")
    p.add_argument("--csv", help="append the summary row to this CSV file")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("probe", help="cross-tabulate census records by kernel support")
    p.add_argument("records")
    p.set_defaults(func=cmd_probe)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "census" and (args.samples < 1 or args.n < 1 or args.workers < 1):
        parser.error("--n, --samples and --workers must be positive")
    try:
        return args.func(args)
    except Graph6Error as exc:
        print(f"gcmate: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"gcmate: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
