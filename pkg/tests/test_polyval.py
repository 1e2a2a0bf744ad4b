import pytest

from conftest import element_of_order, random_poly
from lib import polyval
from lib.cyclo import root_of_unity
from lib.errors import PreconditionError, ValidationError
from lib.linalg import ExactMatrix
from lib.polyval import (
    DiffForm,
    MonomialValuation,
    SparsePoly,
    act,
    check_adic_minimal,
    differential,
    discrepancy_V,
    discrepancy_X,
    from_element,
    substitute_linear,
    torus_root,
    v_eval,
    v_eval_form,
    v_eval_rational,
    wedge,
    weight_components,
)
from lib.weights import weight_data


def x(i, n, order):
    return SparsePoly.variable(i, n, order)


def kleinian(r=5):
    return ExactMatrix.diagonal([root_of_unity(1, r), root_of_unity(-1, r)])


# ── Polynomials ───────────────────────────────────────────


def test_arithmetic():
    x1, x2 = x(0, 2, 1), x(1, 2, 1)
    f = (x1 + x2) ** 2
    assert f == x1 * x1 + x2 * x2 + 2 * x1 * x2
    assert f.degree() == 2
    assert (f - f).is_zero()
    assert (f + 3).constant_term() == 3
    assert f.derivative(0) == 2 * x1 + 2 * x2
    assert (f + x1).homogeneous_part(1) == x1


def test_text_round_trip(rng):
    for _ in range(20):
        f = random_poly(rng, 3, 6)
        assert SparsePoly.from_text(f.to_text(), 3, 6) == f
    g = SparsePoly.from_text("x1^4 + z*x2^4 - 3", 2, 4)
    assert g.constant_term() == -3
    assert g.to_text() == "(1/1) * x1^4 + ((1/1)*z^1) * x2^4 + (-3/1)"
    assert SparsePoly.from_text("0", 2, 4).is_zero()


def test_text_errors():
    with pytest.raises(ValidationError):
        SparsePoly.from_text("x1 +", 2, 1)
    with pytest.raises(ValidationError):
        SparsePoly(2, 1, {(1, 0, 0): 1})
    with pytest.raises(ValidationError):
        x(0, 2, 1) + x(0, 3, 1)


@pytest.mark.parametrize(
    "text",
    [
        "x1^2 + (",
        "x1.foo",
        "x3 + x1",
        "x0",
        "1.5*x1",
        "x1 x2",
        "x1/x2",
        "",
        "y1 + x1",
        "x1 + __import__",
    ],
)
def test_text_rejects(text):
    with pytest.raises(ValidationError):
        SparsePoly.from_text(text, 2, 4)


def test_text_never_evaluates_python(tmp_path):
    marker = tmp_path / "marker"
    text = f"(__import__('pathlib').Path({str(marker)!r}).write_text('x'), x1)[1]"
    with pytest.raises(ValidationError):
        SparsePoly.from_text(text, 2, 4)
    assert not marker.exists()


# ── Group action ──────────────────────────────────────────


def test_act_examples():
    g = kleinian(4)
    x1, x2 = x(0, 2, 4), x(1, 2, 4)
    assert act(g, x1) == x1.scale(root_of_unity(-1, 4))
    assert act(g, x2) == x2.scale(root_of_unity(1, 4))
    assert act(g, x1 * x2) == x1 * x2
    swap = ExactMatrix([[0, 1], [1, 0]], 4)
    assert act(swap, x1 + 2 * x2) == x2 + 2 * x1


def test_act_is_a_left_action(q8, rng):
    for _ in range(5):
        f = random_poly(rng, 2, q8.order)
        g, h = q8[rng.randrange(len(q8))], q8[rng.randrange(len(q8))]
        assert act(g, act(h, f)) == act(g @ h, f)


def test_substitute_non_monomial():
    shear = ExactMatrix([[1, 1], [0, 1]])
    x1, x2 = x(0, 2, 1), x(1, 2, 1)
    assert substitute_linear(x1 * x1, shear) == (x1 + x2) ** 2


# ── Valuations ────────────────────────────────────────────


def test_from_element():
    v = from_element(ExactMatrix.scalar(2, root_of_unity(1, 2)))
    assert (v.r, v.weights) == (2, (1, 1))
    assert v.weight_gcd == 1
    v = from_element(kleinian())
    assert (v.r, v.weights) == (5, (1, 4))
    assert v.is_surjective()
    assert MonomialValuation.from_weights((2, 2), r=4).weight_gcd == 2
    assert MonomialValuation.from_weights((0, 3), r=6).weight_gcd == 3


def test_to_eigen_cache(q8, monkeypatch, rng):
    plain = MonomialValuation.from_weights((1, 2), r=3)
    f = random_poly(rng, 2, 1)
    assert plain.to_eigen(f) is f
    assert not plain._cache

    monkeypatch.setattr(polyval, "EIGEN_CACHE_SIZE", 3)
    v = from_element(element_of_order(q8, 4))
    polys = [random_poly(rng, 2, q8.order) for _ in range(6)]
    values = [v_eval(v, p) for p in polys]
    assert len(v._cache) <= 3
    assert [v_eval(v, p) for p in polys] == values



def test_v_eval_examples():
    v = from_element(ExactMatrix.scalar(4, root_of_unity(3, 4)))
    assert v.weights == (1, 1, 1, 1)
    quartic = SparsePoly.from_text("x1^4 + x2^4", 4, 4)
    assert v_eval(v, quartic) == 4

    g = kleinian()
    v = from_element(g)
    x1, x2 = x(0, 2, 5), x(1, 2, 5)
    assert v_eval(v, x1) == 4
    assert v_eval(v, x2) == 1
    assert v_eval(v, x1 * x2) == 5
    assert v_eval(v, x1 + x2) == 1
    assert v_eval(v, SparsePoly.constant(7, 2, 5)) == 0
    assert v_eval_rational(v, x1, x2) == 3
    with pytest.raises(ValidationError, match="zero"):
        v_eval(v, SparsePoly.zero(2, 5))
    with pytest.raises(ValidationError):
        v_eval_rational(v, x1, SparsePoly.zero(2, 5))


def test_weight_components():
    g = kleinian()
    x1, x2 = x(0, 2, 5), x(1, 2, 5)
    assert weight_components(g, x1 + x2) == {4: x1, 1: x2}
    assert weight_components(g, x1 * x2 + 1) == {0: x1 * x2 + 1}


def test_weight_component_properties(q8, rng):
    for i, g in enumerate(q8.elements):
        r = q8.orders[i]
        if r == 1:
            continue
        v = from_element(g)
        f = random_poly(rng, 2, q8.order)
        comps = weight_components(g, f)
        total = SparsePoly.zero(2, q8.order)
        for a, fa in comps.items():
            total = total + fa
            assert act(g, fa) == fa.scale(root_of_unity(a * (q8.order // r), q8.order))
            assert v_eval(v, fa) % r == a
        assert total == f


def _valuation_axioms(v, rng, rounds):
    for _ in range(rounds):
        f = random_poly(rng, v.nvars, v.order)
        h = random_poly(rng, v.nvars, v.order)
        assert v_eval(v, f * h) == v_eval(v, f) + v_eval(v, h)
        if f + h:
            assert v_eval(v, f + h) >= min(v_eval(v, f), v_eval(v, h))


def test_valuation_axioms(q8, rng):
    v = from_element(element_of_order(q8, 4))
    _valuation_axioms(v, rng, 25)


@pytest.mark.slow
def test_valuation_axioms_long(q8, rng):
    v = from_element(element_of_order(q8, 4))
    _valuation_axioms(v, rng, 10_000)


def test_differential_preserves_value(cyclic5, rng):
    v = from_element(element_of_order(cyclic5, 5))
    for _ in range(20):
        f = random_poly(rng, 2, 5)
        f = f - f.constant_term()
        if not f:
            continue
        assert v_eval_form(v, differential(f)) == v_eval(v, f, eigen=True)


def test_forms(rng):
    f = random_poly(rng, 3, 3)
    assert differential(differential(f)).is_zero()
    a = DiffForm.from_poly(random_poly(rng, 3, 3), (0,))
    b = DiffForm.from_poly(random_poly(rng, 3, 3), (1,))
    assert wedge(a, b) == -wedge(b, a)
    assert wedge(a, a).is_zero()
    vol = DiffForm.volume(3, 3)
    assert vol == wedge(wedge(DiffForm.dx(0, 3, 3), DiffForm.dx(1, 3, 3)), DiffForm.dx(2, 3, 3))


def test_discrepancies(s3, trivial):
    assert discrepancy_V(MonomialValuation.from_weights([1, 1, 1])) == 2
    assert discrepancy_V(MonomialValuation.from_weights([1, 1])) == 1
    assert discrepancy_V(MonomialValuation.from_weights([2, 3, 4, 3])) == 11
    assert discrepancy_X(trivial[0]) == -1
    assert discrepancy_X(element_of_order(s3, 2)) == 0
    assert discrepancy_X(element_of_order(s3, 3)) == 1


def test_discrepancy_matches_age(q8, wreath22, mu4):
    for G in (q8, wreath22, mu4):
        for g in G.elements:
            assert discrepancy_X(g) == weight_data(g).age - 1


def test_discrepancy_needs_sl():
    g = ExactMatrix([[-1, 0], [0, 1]], 2)
    with pytest.raises(PreconditionError):
        discrepancy_X(g)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_ones_minimize_discrepancy(n):
    assert check_adic_minimal(n)


def test_torus_root_recovers_element(q8, wreath22):
    for G in (q8, wreath22):
        for i, g in enumerate(G.elements):
            v = from_element(g)
            assert torus_root(v, G.orders[i]) == g


def test_torus_element_errors(q8):
    v = from_element(element_of_order(q8, 4))
    with pytest.raises(PreconditionError):
        torus_root(v, 3)
    with pytest.raises(ValidationError):
        MonomialValuation.from_weights([1, -1])
