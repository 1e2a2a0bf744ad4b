"""McKay correspondence predictions and the full report.

A class of age a is predicted to contribute one basis element of the
Borel-Moore homology of a crepant resolution Y, in degree 2(n - a)
(equivalently H_c^(n+k)(Y) with k = n - 2a).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PreconditionError
from .group import ClassRecord, FiniteGroup, check_symplectic, group_summary
from .invariants import compute_rg
from .strata import build_strata, maximal_cycle_prediction, semismall_table, stratum_of_class
from .weights import age_counts, classify

logger = logging.getLogger(__name__)


def _integer_ages(classes: list[ClassRecord]):
    for c in classes:
        if c.age.denominator != 1:
            raise PreconditionError(
                f"class {c.index} has non-integer age {c.age}: homology predictions need G in SL"
            )


def predict_homology(
    G: FiniteGroup, classes: list[ClassRecord] | None = None
) -> dict[int, int]:
    """Borel-Moore degree -> predicted dimension."""
    classes = classify(G) if classes is None else classes
    _integer_ages(classes)
    if not check_symplectic(G):
        logger.warning("group is not symplectic: homology prediction is conjectural only")
    homology: dict[int, int] = {}
    for c in classes:
        d = 2 * (G.dim - int(c.age))
        homology[d] = homology.get(d, 0) + 1
    return dict(sorted(homology.items(), reverse=True))


def poincare_polynomial(
    G: FiniteGroup, classes: list[ClassRecord] | None = None
) -> list[int]:
    """Coefficient of t^a is the number of classes of age a."""
    classes = classify(G) if classes is None else classes
    _integer_ages(classes)
    return age_counts(classes)


def compactly_supported(homology: dict[int, int], n: int) -> dict[int, int]:
    """Re-index Borel-Moore degrees 2(n - a) as H_c^(n+k), k = n - 2a."""
    return {d - n: dim for d, dim in homology.items()}


@dataclass
class ReportOptions:
    degree_bound: int | None = None
    threads: int | None = None
    rg: bool = True
    localize: bool = True


@dataclass
class McKayReport:
    group: dict
    classes: list[dict]
    homology_bm: dict[int, int]
    age_counts: list[int]
    conjectural: bool = False
    strata: list[dict] = field(default_factory=list)
    semismall: list[dict] = field(default_factory=list)


def _age_json(q: Fraction):
    return int(q) if q.denominator == 1 else str(q)


def full_report(G: FiniteGroup, options: ReportOptions | None = None) -> McKayReport:
    options = options or ReportOptions()
    classes = classify(G, threads=options.threads)
    symplectic = check_symplectic(G)
    homology = predict_homology(G, classes)
    poset = build_strata(G, classes, options.threads)
    rows = []
    for c in classes:
        row = {
            "order": c.r,
            "size": c.size,
            "weights": [list(p) for p in c.weights],
            "age": _age_json(c.age),
            "fixed_dim": c.fixed_dim,
            "stratum_dim": stratum_of_class(poset, c).dim,
        }
        if options.rg:
            try:
                cert = compute_rg(
                    G, c.representative, options.degree_bound, options.threads, options.localize
                )
                row["rg"] = cert.to_dict()
            except PreconditionError as e:
                logger.warning("class %d: %s", c.index, e)
                row["rg"] = {"r": c.r, "status": "inconclusive", "note": str(e)}
        if symplectic:
            row["prediction"] = maximal_cycle_prediction(c).to_dict()
        rows.append(row)
    if not symplectic:
        logger.warning("report for a non-symplectic group: predictions are conjectural only")
    return McKayReport(
        group=group_summary(G),
        classes=rows,
        homology_bm=homology,
        age_counts=age_counts(classes),
        conjectural=not symplectic,
        strata=[node.to_dict() for node in poset.nodes],
        semismall=[row.to_dict() for row in semismall_table(G, poset, classes)],
    )


def report_to_json(report: McKayReport) -> dict:
    return {
        "group": report.group,
        "classes": report.classes,
        "homology_bm": {str(d): n for d, n in report.homology_bm.items()},
        "age_counts": report.age_counts,
        "conjectural": report.conjectural,
        "strata": report.strata,
        "semismall": report.semismall,
    }


def report_from_json(data: dict) -> McKayReport:
    return McKayReport(
        group=data["group"],
        classes=data["classes"],
        homology_bm={int(d): n for d, n in data["homology_bm"].items()},
        age_counts=data["age_counts"],
        conjectural=data.get("conjectural", False),
        strata=data.get("strata", []),
        semismall=data.get("semismall", []),
    )
