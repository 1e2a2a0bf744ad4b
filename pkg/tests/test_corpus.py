import pytest

from lib import corpus
from lib.errors import ValidationError
from lib.group import check_symplectic, enumerate_group
from lib.linalg import ExactMatrix
from lib.weights import age_counts, classify


@pytest.mark.parametrize(
    "name",
    [
        "trivial(2)",
        "cyclic(1)",
        "cyclic(6)",
        "binary_dihedral(2)",
        "binary_dihedral(3)",
        "symmetric_pairs(4)",
        "cyclic_wreath(3,2)",
        "cyclic_wreath(2,3)",
        "mu4_counterexample",
    ],
)
def test_expected_facts(name):
    e = corpus.entry(name)
    G = enumerate_group(e.spec)
    classes = classify(G)
    assert len(G) == e.order
    assert len(classes) == e.class_count
    assert age_counts(classes) == e.age_counts
    assert check_symplectic(G) == e.symplectic


def test_parse_name():
    assert corpus.parse_name("cyclic_wreath(2, 3)") == ("cyclic_wreath", (2, 3))
    assert corpus.parse_name("mu4_counterexample") == ("mu4_counterexample", ())
    assert corpus.parse_name("trivial") == ("trivial", ())


@pytest.mark.parametrize(
    "name", ["foo(2)", "cyclic()", "cyclic(0)", "cyclic(1,2)", "binary_dihedral(1)", "cyclic(x)"]
)
def test_parse_name_rejects(name):
    with pytest.raises(ValidationError):
        corpus.parse_name(name)


def test_block_permutation():
    swap = corpus.block_permutation([1, 0], 1)
    assert swap == ExactMatrix([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
    cycle = corpus.block_permutation([1, 2, 0], 1)
    assert cycle.power(3).is_identity()


def test_entries():
    names = [e.name for e in corpus.entries()]
    assert names == corpus.DEFAULTS
    assert corpus.entry("cyclic(5)").description.startswith("Z/r")
