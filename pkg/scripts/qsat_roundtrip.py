"""Compare generated hard instances with brute-force QBF evaluation.

    python scripts/qsat_roundtrip.py qsat2            # every formula, p,q <= 2, r <= 3
    python scripts/qsat_roundtrip.py qsat3 --sample 60 --seed 1
    python scripts/qsat_roundtrip.py qsat3 --stay-chooser E

Prints one line per disagreement and a summary.
"""
import argparse
import random
import time

from mpcore.decisions import core_nonempty, dominated
from mpcore.geometry import ResourceError
from mpcore.reductions import (enumerate_qbf2, enumerate_qbf3, gen_qsat2_dominated,
                               gen_qsat3_nonemptiness, qbf_eval)


def qsat2_formulas(max_vars=2, max_clauses=3):
    for p in range(max_vars + 1):
        for q in range(max_vars + 1):
            if p + q:
                yield from enumerate_qbf2(p, q, max_clauses)


def qsat3_formulas(max_vars=2, max_clauses=2):
    for p in range(1, max_vars + 1):
        for q in range(1, max_vars + 1):
            for t in range(1, max_vars + 1):
                yield from enumerate_qbf3(p, q, t, max_clauses)


def decide(kind, f, stay_chooser="A"):
    if kind == "qsat2":
        g, s, x = gen_qsat2_dominated(f)
        return dominated(g, s, x).answer
    return core_nonempty(gen_qsat3_nonemptiness(f, stay_chooser)).answer


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("kind", choices=["qsat2", "qsat3"])
    ap.add_argument("--sample", type=int, help="check a random subset of this size")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--stay-chooser", choices=["A", "E"], default="A")
    a = ap.parse_args()
    fs = list(qsat2_formulas() if a.kind == "qsat2" else qsat3_formulas())
    if a.sample:
        fs = random.Random(a.seed).sample(fs, min(a.sample, len(fs)))
    t0 = time.time()
    tally = {"agree": 0, "false_yes": 0, "false_no": 0, "resource": 0}
    for i, f in enumerate(fs):
        truth = qbf_eval(f)
        try:
            got = decide(a.kind, f, a.stay_chooser)
        except ResourceError as e:
            tally["resource"] += 1
            print(f"[{i}] resource limit: {e}", flush=True)
            continue
        if got == truth:
            tally["agree"] += 1
        else:
            tally["false_yes" if got else "false_no"] += 1
            print(f"[{i}] formula {'true' if truth else 'false'}, instance says {'yes' if got else 'no'}:")
            print("    " + str(f).strip().replace("\n", "\n    "), flush=True)
    print(f"{a.kind}: {len(fs)} formulas, {tally}, {time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
