from fractions import Fraction

import pytest

from conftest import element_of_order, random_poly
from lib.errors import PreconditionError
from lib.invariants import (
    RamificationCertificate,
    check_rg_lemma,
    compute_rg,
    conjecture_probe,
    invariant_basis,
    invariants_of_degree,
    local_group,
    reynolds,
    value_witnesses,
)
from lib.polyval import SparsePoly, act, from_element, v_eval
from lib.weights import classify


def x(i, n, order):
    return SparsePoly.variable(i, n, order)


# ── Averaging ─────────────────────────────────────────────


def test_reynolds_examples(a1, s2):
    x1, x2 = x(0, 2, 2), x(1, 2, 2)
    assert reynolds(a1, x1).is_zero()
    assert reynolds(a1, x1 * x2) == x1 * x2
    y1, y3 = x(0, 4, 2), x(2, 4, 2)
    assert reynolds(s2, y1) == (y1 + y3).scale(Fraction(1, 2))


def test_reynolds_is_invariant_and_idempotent(q8, rng):
    for _ in range(3):
        f = random_poly(rng, 2, q8.order)
        avg = reynolds(q8, f)
        assert reynolds(q8, avg) == avg
        assert all(act(g, avg) == avg for g in q8.elements)


def test_invariant_basis_sizes(trivial, a1, mu4):
    basis = invariant_basis(trivial, 1)
    assert len(basis.elements) == 3
    assert len(invariants_of_degree(a1, 2)) == 3
    assert invariants_of_degree(a1, 1) == []
    assert invariant_basis(mu4, 3).elements == [SparsePoly.constant(1, 4, 4)]
    assert len(invariants_of_degree(mu4, 4)) == 35
    with pytest.raises(PreconditionError):
        invariant_basis(a1, 0)


def test_invariant_values_divisible_by_order(q8, s3):
    for G in (q8, s3):
        for c in classify(G):
            if c.r == 1:
                continue
            v = from_element(c.representative)
            for d in (1, 2, 3, 4):
                for f in invariants_of_degree(G, d):
                    assert v_eval(v, f) % c.r == 0


def test_value_witnesses_attain_values(q8):
    g = element_of_order(q8, 4)
    v = from_element(g)
    found = value_witnesses(v, invariants_of_degree(q8, 4))
    assert found
    for value, f in found.items():
        assert v_eval(v, f) == value


# ── Ramification index ────────────────────────────────────


def test_rg_identity(q8):
    cert = compute_rg(q8, q8[q8.identity])
    assert (cert.r, cert.rg, cert.status) == (1, 1, "exact")


def test_rg_minus_identity(a1):
    cert = compute_rg(a1, element_of_order(a1, 2))
    assert cert.exact
    assert cert.rg == 2 == cert.r
    assert cert.lower_bound == 2


def test_rg_mu4(mu4):
    cert = compute_rg(mu4, element_of_order(mu4, 2))
    assert cert.r == 2
    assert cert.rg == 4
    assert cert.status == "exact"
    assert cert.lower_bound == 4
    assert 4 in cert.values


def test_rg_certificate_dict(mu4):
    cert = compute_rg(mu4, element_of_order(mu4, 2))
    data = cert.to_dict()
    assert data["rg"] == 4 and data["note"] == "r_g = 4 (r = 2)"
    again = RamificationCertificate.from_dict(data)
    assert (again.rg_bound, again.status, again.scope) == (4, "exact", cert.scope)


def test_rg_lemma_on_symplectic_groups(q8, s3, wreath22):
    for G in (q8, s3, wreath22):
        for c in classify(G):
            assert check_rg_lemma(G, c.representative) is True


def test_rg_lemma_needs_symplectic(mu4):
    with pytest.raises(PreconditionError):
        check_rg_lemma(mu4, element_of_order(mu4, 2))


def test_rg_is_localized(s3):
    g = element_of_order(s3, 2)
    H = local_group(s3, g)
    assert len(H) == 2
    cert = compute_rg(s3, g)
    assert cert.scope == "local"
    assert cert.rg == 2
    assert compute_rg(s3, g, localize=False).rg == 2


def test_small_degree_bound_is_inconclusive(q8):
    g = element_of_order(q8, 4)
    with pytest.raises(PreconditionError, match="degree bound too small"):
        compute_rg(q8, g, degree_bound=1)


def test_divisor_chain(q8, cyclic5, s3):
    for G in (q8, cyclic5, s3):
        for c in classify(G):
            cert = compute_rg(G, c.representative)
            assert cert.lower_bound % cert.r == 0
            assert cert.rg_bound % cert.lower_bound == 0


# ── Probe ─────────────────────────────────────────────────


def test_probe_minus_identity(a1):
    report = conjecture_probe(a1, element_of_order(a1, 2))
    assert report.found
    assert report.witness_values == (2, 0)
    f, h = report.witness
    v = from_element(element_of_order(a1, 2))
    assert v_eval(v, f) - v_eval(v, h) == 2


def test_probe_mu4_finds_nothing(mu4):
    report = conjecture_probe(mu4, element_of_order(mu4, 2))
    assert not report.found
    assert report.difference_gcd == 4
    assert report.to_dict()["difference_gcd"] == 4


def test_probe_identity(trivial):
    report = conjecture_probe(trivial, trivial[0])
    assert report.found and report.r == 1
    assert "witness" in report.to_dict()
