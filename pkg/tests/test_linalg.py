import pytest

from lib.cyclo import CycNum, root_of_unity
from lib.errors import PreconditionError, ValidationError
from lib.linalg import (
    ExactMatrix,
    Subspace,
    det,
    eigenspace,
    eigenvalue,
    fixed_space,
    is_symplectic_subspace,
    kernel,
    rref,
    weight_multiplicities,
    weight_multiplicity,
)
from lib.group import standard_form

SWAP4 = [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]


def test_matmul_and_identity():
    a = ExactMatrix([[1, 2], [3, 4]])
    b = ExactMatrix([[0, 1], [1, 0]])
    assert a @ b == ExactMatrix([[2, 1], [4, 3]])
    assert a @ ExactMatrix.identity(2, 1) == a
    assert (b @ b).is_identity()
    assert b.is_monomial() and not a.is_monomial()


def test_det():
    assert det(ExactMatrix([[2, 0, 1], [1, 3, 2], [1, 1, 2]])) == 6
    assert det(ExactMatrix([[0, 1], [1, 0]])) == -1
    assert det(ExactMatrix([[1, 2], [2, 4]])) == 0
    zeta = root_of_unity(1, 5)
    assert ExactMatrix.diagonal([zeta, zeta.inverse()]).det() == 1


def test_inverse():
    m = ExactMatrix([[2, 0, 1], [1, 3, 2], [1, 1, 2]])
    assert (m @ m.inverse()).is_identity()
    i = root_of_unity(1, 4)
    g = ExactMatrix([[i, 1], [0, -i]])
    assert (g.inverse() @ g).is_identity()
    assert g.power(-1) == g.inverse()
    with pytest.raises(ValidationError, match="singular"):
        ExactMatrix([[1, 2], [2, 4]]).inverse()


def test_shape_and_order_checks():
    with pytest.raises(ValidationError):
        ExactMatrix([[1, 2]])
    with pytest.raises(ValidationError):
        ExactMatrix.identity(2, 1) @ ExactMatrix.identity(3, 1)
    with pytest.raises(ValidationError):
        ExactMatrix.identity(2, 3) @ ExactMatrix.identity(2, 4)
    with pytest.raises(ValidationError):
        ExactMatrix.from_json([[1, 0], [0, 1]], 1, n=3)


def test_kernel_of_swap():
    swap = ExactMatrix(SWAP4)
    k = kernel(swap - ExactMatrix.identity(4, 1))
    assert k == Subspace.span([[1, 0, 1, 0], [0, 1, 0, 1]], 4, 1)
    assert k == fixed_space(swap)
    assert k.dim == 2


def test_rref_canonical():
    rows = rref(ExactMatrix([[2, 4, 0], [1, 2, 1], [3, 6, 1]]).rows, 1)
    assert [[int(e.to_fraction()) for e in r] for r in rows] == [[1, 2, 0], [0, 0, 1]]


def test_eigenspace_needs_session_order():
    swap = ExactMatrix(SWAP4)
    with pytest.raises(PreconditionError):
        eigenspace(swap, 2, 1)
    minus = eigenspace(swap.rescale(2), 2, 1)
    assert minus == Subspace.span([[1, 0, -1, 0], [0, 1, 0, -1]], 4, 2)


def test_weight_multiplicities():
    zeta = root_of_unity(1, 4)
    scalar = ExactMatrix.scalar(4, zeta)
    assert weight_multiplicity(scalar, 4, 3) == 4
    assert weight_multiplicities(scalar, 4) == [0, 0, 0, 4]
    g = ExactMatrix.diagonal([root_of_unity(1, 5), root_of_unity(4, 5)])
    assert weight_multiplicities(g, 5) == [0, 1, 0, 0, 1]
    with pytest.raises(PreconditionError):
        weight_multiplicities(g, 3)


def test_subspace_operations():
    u = Subspace.span([[1, 0, 0, 0], [0, 1, 0, 0]], 4, 1)
    w = Subspace.span([[0, 1, 0, 0], [0, 0, 1, 0]], 4, 1)
    meet = u.intersect(w)
    assert meet == Subspace.span([[0, 1, 0, 0]], 4, 1)
    assert u.contains_subspace(meet) and w.contains_subspace(meet)
    assert not u.contains_subspace(w)
    assert u.contains([1, 1, 0, 0]) and not u.contains([0, 0, 0, 1])
    assert u.annihilator() == Subspace.span([[0, 0, 1, 0], [0, 0, 0, 1]], 4, 1)
    assert Subspace.full(4, 1).intersect(u) == u
    assert u.apply(ExactMatrix(SWAP4)) == Subspace.span([[0, 0, 1, 0], [0, 0, 0, 1]], 4, 1)
    assert Subspace.zero(4, 1).dim == 0


def test_symplectic_subspaces():
    form = standard_form(4, 1)
    diagonal = Subspace.span([[1, 0, 1, 0], [0, 1, 0, 1]], 4, 1)
    assert is_symplectic_subspace(diagonal, form)
    assert not is_symplectic_subspace(Subspace.span([[1, 0, 0, 0], [0, 0, 1, 0]], 4, 1), form)
    assert is_symplectic_subspace(Subspace.zero(4, 1), form)
    assert is_symplectic_subspace(Subspace.full(4, 1), form)


def test_json_round_trip():
    i = root_of_unity(1, 4)
    g = ExactMatrix([[i, CycNum.one(4)], [0, -i]])
    assert ExactMatrix.from_json(g.to_json(), 4, 2) == g


@pytest.mark.parametrize("name", ["a1", "cyclic5", "q8", "s3", "mu4", "wreath22"])
def test_weight_spaces_over_group(name, request):
    G = request.getfixturevalue(name)
    for g, r in zip(G.elements, G.orders):
        mults = weight_multiplicities(g, r)
        assert sum(mults) == g.n
        expected_det = CycNum.one(g.order)
        for a, m in enumerate(mults):
            assert weight_multiplicity(g, r, a) == eigenspace(g, r, a).dim == m
            expected_det = expected_det * eigenvalue(r, a, g.order) ** m
        assert g.det() == expected_det
