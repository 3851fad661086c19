"""Random-graph census: how many graphs land in the family, and how many have mates."""

from __future__ import annotations

import csv
import hashlib
import json
import time
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .factor import factor_budget
from .graphs import is_isomorphic, parse_graph6, random_graph, write_graph6
from .matefinder import find_mate
from .verify import certify_mate
from .walkmatrix import Verdict, classify

MODEL = {
    "random_model": "uniform labeled graph, each pair an edge with probability 1/2",
    "rng": "random.Random (MT19937) per sample, seeded from blake2b(seed, index)",
    "deduplicated": False,
    "mate_search": "exhaustive over k = 1..p-1",
}


def sample_seed(seed: int, index: int) -> int:
    digest = hashlib.blake2b(f"{seed}:{index}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def analyze(g6: bytes | str, *, index: int | None = None, seed: int | None = None) -> dict:
    """Full record for one graph; everything in it follows from the graph6 string."""
    g = parse_graph6(g6)
    cls = classify(g)
    rec = {
        "index": index,
        "seed": seed,
        "n": g.n,
        "graph6": write_graph6(g).decode(),
        "verdict": cls.verdict.value,
        "outcome": None,
        "p": None,
        "b": None,
        "dn_factorization": None,
        "rep_census": None,
        "nonzero_support": None,
        "kernel_gate": None,
        "mate_graph6": None,
        "certified": None,
    }
    if cls.verdict is Verdict.UNCLASSIFIABLE:
        rec["partial_factorization"] = cls.odd_factorization.to_json()
    if cls.verdict is not Verdict.FAMILY_FN:
        return rec
    res = find_mate(g, cls, exhaustive=True)
    rec.update(
        outcome=res.verdict.value,
        p=cls.p,
        b=cls.b,
        dn_factorization=[[q, e] for q, e in cls.dn_factorization.factors],
        rep_census={str(k): c for k, c in res.rep_census.items()},
        nonzero_support=res.support,
        kernel_gate=res.gate_passed,
    )
    if res.mate is not None:
        rec["mate_graph6"] = write_graph6(res.mate).decode()
        rec["certified"] = certify_mate(g, res).passed
    return rec


def _work(args: tuple[int, int, int]) -> str:
    n, seed, index = args
    s = sample_seed(seed, index)
    rec = analyze(write_graph6(random_graph(n, s)), index=index, seed=seed)
    rec["sample_seed"] = s
    return json.dumps(rec, sort_keys=True)


@dataclass
class CensusSummary:
    n: int
    samples: int
    seed: int
    count_fn: int = 0
    count_non_dgs: int = 0
    count_unclassifiable: int = 0
    count_fn_distinct: int = 0
    count_non_dgs_distinct: int = 0
    by_verdict: dict[str, int] = field(default_factory=dict)
    elapsed: float = 0.0
    factor_budget: int = 0
    model: dict = field(default_factory=lambda: dict(MODEL))

    @property
    def fraction_fn(self) -> float:
        return self.count_fn / self.samples

    @property
    def fraction_non_dgs(self) -> float:
        return self.count_non_dgs / self.count_fn if self.count_fn else 0.0

    def to_json(self) -> dict:
        return asdict(self)


def _distinct(g6s: list[str]) -> int:
    """Number of isomorphism classes among the given graphs."""
    groups: dict[tuple, list] = defaultdict(list)
    for s in g6s:
        g = parse_graph6(s)
        groups[(g.edge_count(), tuple(sorted(g.degrees())))].append(g)
    count = 0
    for gs in groups.values():
        reps = []
        for g in gs:
            if not any(is_isomorphic(g, r)[0] for r in reps):
                reps.append(g)
        count += len(reps)
    return count


def iter_records(n: int, samples: int, seed: int, workers: int = 1) -> Iterator[dict]:
    jobs = ((n, seed, i) for i in range(samples))
    if workers <= 1:
        for job in jobs:
            yield json.loads(_work(job))
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for line in pool.map(_work, jobs, chunksize=64):
            yield json.loads(line)


def census_run(
    n: int, samples: int, seed: int, workers: int = 1, out: str | Path | None = None
) -> CensusSummary:
    """Classify ``samples`` random graphs on ``n`` vertices.

    Records go to ``out`` as JSON lines in sample order; the summary is also
    written next to it as ``<out>.summary.json``. Output depends only on
    (n, samples, seed), never on ``workers``.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if n < 1:
        raise ValueError("n must be at least 1")
    start = time.perf_counter()
    summary = CensusSummary(n, samples, seed, factor_budget=factor_budget())
    verdicts: Counter[str] = Counter()
    fn_g6, mate_g6 = [], []
    fh = open(out, "w", encoding="utf-8") if out is not None else None
    try:
        for rec in iter_records(n, samples, seed, workers):
            verdicts[rec["verdict"]] += 1
            if rec["verdict"] == Verdict.FAMILY_FN.value:
                fn_g6.append(rec["graph6"])
                if rec["outcome"] == "mate":
                    mate_g6.append(rec["graph6"])
            if fh is not None:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
    finally:
        if fh is not None:
            fh.close()
    summary.by_verdict = dict(sorted(verdicts.items()))
    summary.count_fn = len(fn_g6)
    summary.count_non_dgs = len(mate_g6)
    summary.count_unclassifiable = verdicts[Verdict.UNCLASSIFIABLE.value]
    summary.count_fn_distinct = _distinct(fn_g6)
    summary.count_non_dgs_distinct = _distinct(mate_g6)
    summary.elapsed = round(time.perf_counter() - start, 3)
    if out is not None:
        summary_path(out).write_text(json.dumps(summary.to_json(), indent=2) + "\n")
    return summary


def summary_path(out: str | Path) -> Path:
    out = Path(out)
    return out.with_name(out.stem + ".summary.json")


def read_records(path: str | Path) -> Iterator[dict]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                yield json.loads(line)


CSV_FIELDS = ("n", "samples", "seed", "count_fn", "count_non_dgs", "count_unclassifiable",
              "count_fn_distinct", "count_non_dgs_distinct", "elapsed")


def append_csv(summary: CensusSummary, path: str | Path) -> None:
    path = Path(path)
    new = not path.exists() or path.stat().st_size == 0
    with open(path, "a", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_FIELDS, extrasaction="ignore")
        if new:
            w.writeheader()
        w.writerow(summary.to_json())


def conjecture_probe(records: Iterable[dict]) -> dict:
    """Cross-tabulate kernel support m against the mate outcome, per prime p.

    Flags family members where the enumeration ran (v^T v = 0 mod p) and
    either m <= 8 yet no mate was found, or m >= 2p + 1 yet a mate exists.
    """
    table: Counter[tuple[int, int, str]] = Counter()
    flagged = []
    examined = 0
    for rec in records:
        if rec.get("verdict") != Verdict.FAMILY_FN.value:
            continue
        examined += 1
        p, m = rec["p"], rec["nonzero_support"]
        if not rec["kernel_gate"]:
            outcome = "dgs_gate"
        elif rec["outcome"] == "mate":
            outcome = "mate"
        else:
            outcome = "dgs_enumeration"
        table[(p, m, outcome)] += 1
        if outcome == "dgs_enumeration" and m <= 8:
            flagged.append({"index": rec.get("index"), "graph6": rec["graph6"], "p": p, "m": m,
                            "part": "i", "reason": "m <= 8 but no primitive matrix"})
        if outcome == "mate" and m >= 2 * p + 1:
            flagged.append({"index": rec.get("index"), "graph6": rec["graph6"], "p": p, "m": m,
                            "part": "ii", "reason": "m >= 2p+1 but a mate exists"})
    rows = [{"p": p, "m": m, "outcome": o, "count": c} for (p, m, o), c in sorted(table.items())]
    return {"examined": examined, "rows": rows, "counterexamples": flagged}
