"""Resistance, degree-tail, diameter and exact-verification suites on a standard graph set."""
import argparse
import json
import sys

from ustlocal.harness.config import ExperimentConfig
from ustlocal.harness.experiments import run

PLAN = [
    ("foster", "k101", {}),
    ("foster", "random_regular:n=200,d=10", {}),
    ("foster", "hypercube:dim=7", {}),
    ("tail", "k500", {"samples": 50}),
    ("tail", "star_of_cliques:d=20", {"samples": 200}),
    ("diameter", "chained_cliques:m=4,d=10", {"samples": 20}),
    ("verify", "k4", {"samples": 100_000}),
    ("verify", "petersen", {"samples": 100_000}),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="suites.json")
    a = ap.parse_args()
    reports, ok = [], True
    for kind, graph, extra in PLAN:
        rep = run(ExperimentConfig(graph, kind=kind, seed=a.seed, **extra))
        ok &= rep.passed
        print(f"{kind:9s} {rep.graph:36s} {'PASS' if rep.passed else 'FAIL'}  {rep.wall_clock:.1f}s")
        reports.append(rep.to_dict())
    with open(a.out, "w") as fh:
        json.dump(reports, fh, indent=1)
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
