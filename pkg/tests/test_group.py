import pytest

from lib import corpus
from lib.errors import PreconditionError, ResourceCapError, ValidationError
from lib.group import (
    GroupSpec,
    check_sl,
    check_symplectic,
    conjugacy_classes,
    enumerate_group,
    group_summary,
    pointwise_stabilizer,
    setwise_stabilizer,
    standard_form,
    validate_spec,
)
from lib.linalg import ExactMatrix, fixed_space


def test_orders(trivial, a1, cyclic5, q8, s3, mu4, wreath22):
    assert [len(G) for G in (trivial, a1, cyclic5, q8, s3, mu4, wreath22)] == [1, 2, 5, 8, 6, 4, 8]


def test_q8_classes(q8):
    classes = conjugacy_classes(q8)
    assert sorted(c.size for c in classes) == [1, 1, 2, 2, 2]
    assert sum(c.size for c in classes) == len(q8)
    for c in classes:
        assert c.rep_index == min(c.members)
        assert all(q8.orders[m] == c.r for m in c.members)


def test_session_order_is_raised(s3, s2):
    assert s3.order == 6
    assert s2.order == 2
    assert all(g.order == 6 for g in s3.elements)
    assert s3.exponent == 6


def test_membership(trivial, a1, q8, s2, mu4):
    for G in (trivial, a1, q8, s2):
        assert check_sl(G) and check_symplectic(G)
    assert check_sl(mu4)
    assert not check_symplectic(mu4)


def test_not_sl():
    spec = GroupSpec(dim=2, order=2, generators=[ExactMatrix([[-1, 0], [0, 1]], 2)])
    G = enumerate_group(spec)
    assert len(G) == 2
    assert not check_sl(spec)
    assert not check_symplectic(G)


def test_cap_and_infinite_generators():
    with pytest.raises(ResourceCapError):
        enumerate_group(corpus.cyclic(12), cap=5)
    shear = GroupSpec(dim=2, order=1, generators=[ExactMatrix([[1, 1], [0, 1]])])
    with pytest.raises(ResourceCapError, match="too large or infinite"):
        enumerate_group(shear, cap=50)


def test_invalid_specs():
    singular = GroupSpec(dim=2, order=1, generators=[ExactMatrix([[1, 1], [1, 1]])])
    with pytest.raises(ValidationError, match="singular"):
        enumerate_group(singular)
    assert validate_spec(GroupSpec(dim=2, order=1, generators=[]))
    wrong_dim = GroupSpec(dim=3, order=1, generators=[ExactMatrix.identity(2, 1)])
    assert any("dimension" in e for e in validate_spec(wrong_dim))
    bad_form = GroupSpec(
        dim=2, order=1, generators=[ExactMatrix.identity(2, 1)],
        symplectic_form=ExactMatrix([[0, 1], [1, 0]]),
    )
    assert any("antisymmetric" in e for e in validate_spec(bad_form))
    with pytest.raises(PreconditionError):
        standard_form(3, 1)


def test_group_axioms(q8, wreath22):
    for G in (q8, wreath22):
        for i in range(len(G)):
            assert G.multiply(i, G.inverse(i)) == G.identity
            assert len(G) % G.element_order(i) == 0
        assert G.contains(G[0] @ G[len(G) - 1])


def test_enumeration_is_thread_independent():
    spec = corpus.cyclic_wreath(2, 2)
    one = enumerate_group(spec, threads=1)
    four = enumerate_group(spec, threads=4)
    assert [g.key() for g in one.elements] == [g.key() for g in four.elements]
    assert [c.members for c in conjugacy_classes(one, threads=1)] == [
        c.members for c in conjugacy_classes(four, threads=4)
    ]


def test_classes_via_generators(monkeypatch, q8):
    monkeypatch.setenv("MCKAY_ORBIT_THRESHOLD", "1")
    classes = conjugacy_classes(q8)
    assert sorted(c.size for c in classes) == [1, 1, 2, 2, 2]


def test_stabilizers(s3):
    transposition = next(
        g for i, g in enumerate(s3.elements) if s3.orders[i] == 2
    )
    u = fixed_space(transposition)
    assert u.dim == 4
    point = pointwise_stabilizer(s3, u)
    assert len(point) == 2
    assert len(setwise_stabilizer(s3, u)) == 2
    H = s3.subgroup(point)
    assert len(H) == 2


def test_subgroup_rejects_non_subgroup(q8):
    non_identity = [i for i in range(len(q8)) if i != q8.identity][:2]
    with pytest.raises(ValidationError):
        q8.subgroup(non_identity)


def test_index_of_unknown(a1):
    with pytest.raises(ValidationError):
        a1.index_of(ExactMatrix([[0, 1], [1, 0]], 2))


def test_summary(q8):
    summary = group_summary(q8)
    assert summary["order"] == 8
    assert summary["cyclotomic_order"] == 4
    assert summary["sl"] and summary["symplectic"]


@pytest.mark.parametrize("name", ["trivial", "a1", "cyclic5", "q8", "s3", "mu4", "wreath22"])
def test_class_sizes_and_inverse_closure(name, request):
    G = request.getfixturevalue(name)
    classes = conjugacy_classes(G)
    class_of = {m: i for i, c in enumerate(classes) for m in c.members}
    assert len(class_of) == len(G)
    for c in classes:
        assert len(G) % c.size == 0
        assert c.size == len(c.members)
        assert len({class_of[G.inverse(m)] for m in c.members}) == 1
