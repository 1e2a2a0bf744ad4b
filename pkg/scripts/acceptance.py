#!/usr/bin/env python3
"""Run the corpus checks end to end and print a timing table.

Kleinian A and D series, S_n on (C^2)^n against the partition oracle, the
age and ramification lemmas on the symplectic corpus, and the mu_4
counterexample.
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))
from lib import corpus, partitions
from lib.group import enumerate_group
from lib.invariants import check_rg_lemma, compute_rg, conjecture_probe
from lib.mckay import predict_homology
from lib.polyval import discrepancy_X
from lib.weights import check_age_lemma, classify

SYMPLECTIC = (
    [f"cyclic({r})" for r in range(2, 13)]
    + [f"binary_dihedral({m})" for m in range(2, 7)]
    + [f"symmetric_pairs({n})" for n in range(2, 6)]
    + ["cyclic_wreath(2,2)", "cyclic_wreath(2,3)"]
)
RG_CAP = 200


def check_entry(name):
    e = corpus.entry(name)
    G = enumerate_group(e.spec)
    classes = classify(G)
    ages = [0] * len(e.age_counts)
    for c in classes:
        ages[int(c.age)] += 1
    problems = []
    if len(G) != e.order:
        problems.append(f"order {len(G)} != {e.order}")
    if len(classes) != e.class_count:
        problems.append(f"{len(classes)} classes != {e.class_count}")
    if ages != e.age_counts:
        problems.append(f"ages {ages} != {e.age_counts}")
    homology = predict_homology(G, classes)
    if sum(homology.values()) != len(classes) or homology.get(2 * G.dim) != 1:
        problems.append(f"homology {homology}")
    for c in classes:
        if discrepancy_X(c.representative) != c.age - 1:
            problems.append(f"class {c.index}: discrepancy")
    if e.symplectic:
        if not all(check_age_lemma(g) for g in G.elements):
            problems.append("age lemma")
        if len(G) <= RG_CAP:
            for c in classes:
                if check_rg_lemma(G, c.representative) is not True:
                    problems.append(f"class {c.index}: r_g != r")
    return problems


def check_counterexample():
    G = enumerate_group(corpus.mu4_counterexample())
    g = next(x for i, x in enumerate(G.elements) if G.orders[i] == 2)
    cert = compute_rg(G, g)
    probe = conjecture_probe(G, g)
    problems = []
    if not (cert.exact and cert.rg_bound == 4 and cert.r == 2):
        problems.append(f"certificate {cert.to_dict()}")
    if probe.found:
        problems.append("probe found a witness")
    return problems


def main():
    failures = 0
    for name in SYMPLECTIC + ["mu4_counterexample"]:
        start = time.perf_counter()
        problems = check_entry(name)
        if name == "mu4_counterexample":
            problems += check_counterexample()
        elapsed = time.perf_counter() - start
        status = "ok" if not problems else "FAIL " + "; ".join(problems)
        failures += bool(problems)
        print(f"  {name:24s} {elapsed:7.2f}s  {status}")
    for n in range(2, 7):
        if partitions.goettsche_betti(n) != partitions.symmetric_age_counts(n):
            print(f"  goettsche({n}) disagrees with the partition count")
            failures += 1
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()
