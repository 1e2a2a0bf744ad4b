"""Group file format: parse, validate, and serialize GroupSpec definitions.

JSON is canonical; YAML with the same fields is accepted when pyyaml is
installed. A path of "-" reads stdin, so corpus output can be piped in.

    {
      "name": "A1",
      "cyclotomic_order": 2,
      "dim": 2,
      "generators": [
        [[[[-1, 1]], [[0, 1]]],
         [[[0, 1]], [[-1, 1]]]]
      ],
      "symplectic_form": null
    }

Matrix entries are CycNum literals: [N, [[p, q], ...]], the bare pair list
[[p, q], ...] with N implied, or a plain integer.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from .errors import ValidationError
from .group import GroupSpec, validate_spec
from .linalg import ExactMatrix

try:
    import yaml

    HAS_YAML = True
except ImportError:
    HAS_YAML = False

FIELDS = {"name", "cyclotomic_order", "dim", "generators", "symplectic_form"}


def _require_yaml():
    if not HAS_YAML:
        print("Error: pyyaml required. Install: uv pip install pyyaml", file=sys.stderr)
        sys.exit(1)


def _is_yaml(path: str | Path) -> bool:
    return Path(path).suffix.lower() in (".yaml", ".yml")


def parse_text(text: str, fmt: str = "json", name: str = "") -> GroupSpec:
    if fmt == "yaml":
        _require_yaml()
        try:
            raw = yaml.safe_load(text)
        except yaml.YAMLError as e:
            raise ValidationError(f"malformed YAML: {e}") from e
    else:
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValidationError(f"malformed JSON: {e}") from e
    return from_data(raw, name)


def parse_group_file(path: str | Path) -> GroupSpec:
    """Load a GroupSpec from a JSON/YAML file, or from stdin when path is "-"."""
    if str(path) == "-":
        text = sys.stdin.read()
        fmt = "json" if text.lstrip().startswith("{") else "yaml"
        return parse_text(text, fmt)
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e.strerror}") from e
    return parse_text(text, "yaml" if _is_yaml(path) else "json", path.stem)


def from_data(raw, name: str = "") -> GroupSpec:
    if not isinstance(raw, dict):
        raise ValidationError(f"expected a mapping, got {type(raw).__name__}")
    unknown = set(raw) - FIELDS
    if unknown:
        raise ValidationError(f"unknown fields: {', '.join(sorted(unknown))}")
    for key in ("cyclotomic_order", "dim", "generators"):
        if key not in raw:
            raise ValidationError(f"missing field: {key}")
    order, dim = raw["cyclotomic_order"], raw["dim"]
    for key, value in (("cyclotomic_order", order), ("dim", dim)):
        if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
            raise ValidationError(f"{key} must be a positive integer, got {value!r}")
    if not isinstance(raw["generators"], list) or not raw["generators"]:
        raise ValidationError("generators must be a non-empty list of matrices")

    generators = []
    for i, m in enumerate(raw["generators"]):
        try:
            generators.append(ExactMatrix.from_json(m, order, dim))
        except ValidationError as e:
            raise ValidationError(f"generator {i}: {e}") from e
    form = None
    if raw.get("symplectic_form") is not None:
        try:
            form = ExactMatrix.from_json(raw["symplectic_form"], order, dim)
        except ValidationError as e:
            raise ValidationError(f"symplectic_form: {e}") from e

    spec = GroupSpec(
        dim=dim,
        order=order,
        generators=generators,
        symplectic_form=form,
        name=str(raw.get("name") or name),
    )
    errors = validate(spec)
    if errors:
        raise ValidationError("; ".join(errors))
    return spec


def validate(spec: GroupSpec) -> list[str]:
    return validate_spec(spec)


def to_data(spec: GroupSpec) -> dict:
    data = {
        "name": spec.name,
        "cyclotomic_order": spec.order,
        "dim": spec.dim,
        "generators": [g.to_json() for g in spec.generators],
    }
    if spec.symplectic_form is not None:
        data["symplectic_form"] = spec.symplectic_form.to_json()
    return data


def dumps(spec: GroupSpec) -> str:
    return json.dumps(to_data(spec), indent=2)


def save(spec: GroupSpec, path: str | Path):
    """Write a GroupSpec as JSON, or YAML for a .yaml/.yml path."""
    path = Path(path)
    if _is_yaml(path):
        _require_yaml()
        with open(path, "w") as f:
            yaml.dump(to_data(spec), f, default_flow_style=None, sort_keys=False)
    else:
        path.write_text(dumps(spec) + "\n")
