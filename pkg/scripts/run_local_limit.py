"""Local-limit census on one graph; writes the report and a shape histogram."""
import argparse
import sys

from ustlocal.harness.config import ExperimentConfig, write_rows
from ustlocal.harness.experiments import run


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graph", default="random_regular:n=2000,d=50")
    ap.add_argument("--r", type=int, default=2)
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", default="local_limit.json")
    ap.add_argument("--hist", default="local_limit_hist.csv")
    a = ap.parse_args()
    cfg = ExperimentConfig(a.graph, radius=a.r, samples=a.samples, seed=a.seed, threads=a.threads)
    rep = run(cfg)
    rep.write(a.out)
    write_rows(a.hist, rep.data.get("histogram", []))
    for r in rep.records:
        print(f"{r.name:28s} {r.observed:12.6g} {r.predicted:12.6g} {'ok' if r.passed else 'FAIL'}")
    sys.exit(0 if rep.passed else 1)


if __name__ == "__main__":
    main()
