import json
from pathlib import Path

import pytest

from lib import corpus, groupfile
from lib.errors import ValidationError
from lib.group import check_sl, check_symplectic, enumerate_group

GROUPS = Path(__file__).resolve().parent.parent / "groups"


def test_bundled_json_groups():
    a1 = groupfile.parse_group_file(GROUPS / "a1.json")
    assert (a1.name, a1.dim, a1.order) == ("A1", 2, 2)
    assert len(enumerate_group(a1)) == 2

    q8 = groupfile.parse_group_file(GROUPS / "q8.json")
    assert len(enumerate_group(q8)) == 8
    assert check_symplectic(q8)

    mu4 = groupfile.parse_group_file(GROUPS / "mu4_counterexample.json")
    assert check_sl(mu4) and not check_symplectic(mu4)

    not_sl = groupfile.parse_group_file(GROUPS / "not_sl.json")
    assert not check_sl(not_sl)


def test_bundled_yaml_group():
    pytest.importorskip("yaml")
    spec = groupfile.parse_group_file(GROUPS / "s2_pairs.yaml")
    assert spec.symplectic_form is not None
    G = enumerate_group(spec)
    assert len(G) == 2 and check_symplectic(G)


def test_corpus_round_trip(tmp_path):
    spec = corpus.cyclic_wreath(2, 2)
    path = tmp_path / "w22.json"
    groupfile.save(spec, path)
    back = groupfile.parse_group_file(path)
    assert back.generators == spec.generators
    assert back.name == spec.name
    assert json.loads(path.read_text())["cyclotomic_order"] == 2


def test_yaml_save(tmp_path):
    pytest.importorskip("yaml")
    spec = corpus.binary_dihedral(3)
    path = tmp_path / "bd3.yaml"
    groupfile.save(spec, path)
    assert groupfile.parse_group_file(path).generators == spec.generators


def test_stdin(monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(groupfile.dumps(corpus.cyclic(4))))
    spec = groupfile.parse_group_file("-")
    assert spec.name == "cyclic(4)"


def _raw(**changes):
    raw = {"name": "t", "cyclotomic_order": 2, "dim": 2, "generators": [[[-1, 0], [0, -1]]]}
    raw.update(changes)
    return {k: v for k, v in raw.items() if v is not None}


@pytest.mark.parametrize(
    "raw, message",
    [
        (_raw(extra=1), "unknown fields"),
        (_raw(dim=None), "missing field"),
        (_raw(dim=0), "positive integer"),
        (_raw(cyclotomic_order=True), "positive integer"),
        (_raw(generators=[]), "non-empty"),
        (_raw(generators=[[[1, 0, 0], [0, 1, 0], [0, 0, 1]]]), "generator 0"),
        (_raw(generators=[[[1, 1], [1, 1]]]), "singular"),
        (_raw(generators=[[[[[1, 0]], 0], [0, 1]]]), "generator 0"),
        (_raw(symplectic_form=[[0, 1], [1, 0]]), "antisymmetric"),
        ([1, 2], "mapping"),
    ],
)
def test_rejects(raw, message):
    with pytest.raises(ValidationError, match=message):
        groupfile.from_data(raw)


def test_malformed_text(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ValidationError, match="malformed JSON"):
        groupfile.parse_group_file(bad)
    with pytest.raises(ValidationError):
        groupfile.parse_group_file(tmp_path / "missing.json")
