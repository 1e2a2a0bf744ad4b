"""mckay-cli: McKay correspondence predictions for finite matrix groups.

Reads a group (generators over a cyclotomic field) from a JSON/YAML file or
stdin, enumerates it exactly, and reports conjugacy classes, ages, monomial
valuations, ramification indices, the fixed-subspace stratification, and the
predicted Borel-Moore homology of a crepant resolution.
"""

import json
import logging
import os
import sys
from pathlib import Path

from . import corpus, groupfile
from .errors import McKayError, PreconditionError, ValidationError
from .group import check_sl, check_symplectic, enumerate_group, group_summary
from .weights import classify


def _load(args):
    """Group from the first positional argument, or stdin when it is absent or '-'."""
    path = args[0] if args else "-"
    if path != "-" and not Path(path).is_file():
        raise ValidationError(f"File not found: {path}")
    spec = groupfile.parse_group_file(path)
    return spec, enumerate_group(spec)


def _class_row(c):
    return {
        "index": c.index,
        "order": c.r,
        "size": c.size,
        "weights": [list(p) for p in c.weights],
        "age": int(c.age) if c.age.denominator == 1 else str(c.age),
        "fixed_dim": c.fixed_dim,
    }


def _print(result):
    print(json.dumps(result, indent=2))


# ── Group commands ────────────────────────────────────────

def cmd_check(args):
    spec, G = _load(args)
    result = group_summary(G)
    _print(result)
    if not result["sl"]:
        raise PreconditionError("group is not contained in SL(V)")


def cmd_validate(args):
    """Validate a group file without enumerating it."""
    filepath = _require_arg(args, 0, "validate <group.json|group.yaml>")
    if not Path(filepath).is_file():
        raise ValidationError(f"File not found: {filepath}")
    spec = groupfile.parse_group_file(filepath)
    print(f"OK: '{spec.name}' (dim {spec.dim}, cyclotomic order {spec.order})")
    print(f"  {len(spec.generators)} generators, sl={check_sl(spec)}, symplectic={check_symplectic(spec)}")


def cmd_classes(args):
    _, G = _load(args)
    _print([_class_row(c) for c in classify(G)])


def cmd_betti(args):
    from .mckay import predict_homology

    _, G = _load(args)
    result = {str(d): n for d, n in predict_homology(G).items()}
    if not check_symplectic(G):
        result["conjectural"] = True
    _print(result)


def cmd_valuation(args):
    from .polyval import SparsePoly, from_element, v_eval

    element, args = _pop_flag(args, "--element", int)
    poly_path, args = _pop_flag(args, "--poly", str)
    eigen, args = _pop_switch(args, "--eigen")
    if element is None or poly_path is None:
        _die("valuation [group] --element <class> --poly <file> [--eigen]")
    _, G = _load(args)
    classes = classify(G)
    if not 0 <= element < len(classes):
        raise ValidationError(f"class index {element} out of range 0..{len(classes) - 1}")
    text = Path(poly_path).read_text() if Path(poly_path).is_file() else None
    if text is None:
        raise ValidationError(f"File not found: {poly_path}")
    f = SparsePoly.from_text(text, G.dim, G.order)
    c = classes[element]
    v = from_element(c.representative)
    _print({
        "class": element,
        "r": v.r,
        "weights": list(v.weights),
        "poly": f.to_text(),
        "value": v_eval(v, f, eigen=eigen),
    })


def cmd_strata(args):
    from .strata import build_strata

    _, G = _load(args)
    poset = build_strata(G)
    _print({
        "nodes": [node.to_dict() for node in poset.nodes],
        "order": sorted([list(p) for p in poset.order]),
    })


def cmd_semismall(args):
    from .strata import semismall_table

    _, G = _load(args)
    _print([row.to_dict() for row in semismall_table(G)])


def cmd_rg(args):
    from .invariants import compute_rg

    bound, args = _pop_flag(args, "--degree-bound", int)
    only, args = _pop_flag(args, "--class", int)
    _, G = _load(args)
    rows = []
    for c in classify(G):
        if only is not None and c.index != only:
            continue
        cert = compute_rg(G, c.representative, bound)
        rows.append({"class": c.index, **cert.to_dict()})
    _print(rows)


def cmd_probe(args):
    from .invariants import conjecture_probe

    bound, args = _pop_flag(args, "--degree-bound", int)
    only, args = _pop_flag(args, "--class", int)
    _, G = _load(args)
    rows = []
    for c in classify(G):
        if only is not None and c.index != only:
            continue
        report = conjecture_probe(G, c.representative, bound)
        rows.append({"class": c.index, **report.to_dict()})
    _print(rows)


def cmd_report(args):
    from .mckay import ReportOptions, full_report, report_to_json

    output, args = _pop_flag(args, "--json", str)
    bound, args = _pop_flag(args, "--degree-bound", int)
    _, G = _load(args)
    data = report_to_json(full_report(G, ReportOptions(degree_bound=bound)))
    if output:
        Path(output).write_text(json.dumps(data, indent=2) + "\n")
        print(f"Report written to {output}")
    else:
        _print(data)


# ── Corpus ────────────────────────────────────────────────

def cmd_corpus(args):
    output, args = _pop_flag(args, "--output", str)
    name = _require_arg(args, 0, "corpus <name>|list [--output file]")
    if name == "list":
        for e in corpus.entries():
            kind = "symplectic" if e.symplectic else "SL only"
            print(f"  {e.name:24s} order {e.order:<6d} {e.class_count} classes  ({kind})")
        return
    spec = corpus.build(name)
    if output:
        groupfile.save(spec, output)
        print(f"Saved {spec.name} to {output}")
    else:
        print(groupfile.dumps(spec))


# ── Helpers ───────────────────────────────────────────────

def _require_arg(args, index, usage_hint):
    if index >= len(args):
        _die(usage_hint)
    return args[index]


def _die(usage_hint):
    print(f"Usage: mckay-cli {usage_hint}", file=sys.stderr)
    sys.exit(1)


def _pop_flag(args, flag, cast):
    """Remove `flag value` from args; return (value or None, remaining args)."""
    if flag not in args:
        return None, args
    i = args.index(flag)
    if i + 1 >= len(args):
        _die(f"... {flag} <value>")
    try:
        value = cast(args[i + 1])
    except ValueError:
        _die(f"... {flag} <{cast.__name__}>")
    return value, args[:i] + args[i + 2:]


def _pop_switch(args, flag):
    if flag not in args:
        return False, args
    return True, [a for a in args if a != flag]


def _setup(args):
    """Strip global flags (-v, -vv, --threads N) and configure logging."""
    level = os.environ.get("MCKAY_LOG_LEVEL", "WARNING").upper()
    rest = []
    i = 0
    while i < len(args):
        a = args[i]
        if a == "-v":
            level = "INFO"
        elif a == "-vv":
            level = "DEBUG"
        elif a == "--threads":
            if i + 1 >= len(args) or not args[i + 1].isdigit():
                _die("--threads <n> <command> [args]")
            os.environ["MCKAY_THREADS"] = args[i + 1]
            i += 1
        else:
            rest.append(a)
        i += 1
    logging.basicConfig(format="%(name)s:%(levelname)s:%(message)s", level=level)
    return rest


# ── Dispatch ──────────────────────────────────────────────

COMMANDS = {
    # Group
    "check": cmd_check,
    "validate": cmd_validate,
    "classes": cmd_classes,
    # Predictions
    "betti": cmd_betti,
    "strata": cmd_strata,
    "semismall": cmd_semismall,
    "report": cmd_report,
    # Valuations
    "valuation": cmd_valuation,
    "rg": cmd_rg,
    "probe": cmd_probe,
    # Corpus
    "corpus": cmd_corpus,
}

USAGE = """\
Usage: mckay-cli [-v|-vv] [--threads N] <command> [args]

[group] is a JSON or YAML group file; omit it or pass '-' to read stdin.

GROUP:
  check [group]             SL / symplectic membership and group summary (exit 3 if not in SL)
  validate <group>          Validate a group file without enumerating it
  classes [group]           Conjugacy classes: order, size, weights, age, fixed_dim

PREDICTIONS:
  betti [group]             Predicted Borel-Moore homology {degree: dim};
                            "conjectural": true when the group is not symplectic
  strata [group]            Fixed-subspace strata and their inclusion order
  semismall [group]         Per-stratum semismall bounds and attached classes
  report [group] [--json out] [--degree-bound D]
                            Full report (classes, r_g, strata, homology)

VALUATIONS:
  valuation [group] --element <class> --poly <file> [--eigen]
                            Monomial valuation v_g of a polynomial
  rg [group] [--degree-bound D] [--class i]
                            Ramification index r_g per class, with certificate
  probe [group] [--degree-bound D] [--class i]
                            Search invariants f, h with v_g(f) - v_g(h) = r

CORPUS:
  corpus list               List built-in groups
  corpus <name> [--output file.json|file.yaml]
                            Emit a built-in group: trivial(n), cyclic(r),
                            binary_dihedral(m), symmetric_pairs(n),
                            cyclic_wreath(r,n), mu4_counterexample

EXIT CODES:
  0 success, 1 usage, 2 invalid input, 3 precondition failed,
  4 group cap exceeded, 70 internal invariant violated

ENVIRONMENT:
  MCKAY_GROUP_CAP        Enumeration element cap        (default: 1000000)
  MCKAY_THREADS          Worker threads                 (default: 1)
  MCKAY_LOG_LEVEL        Logging level                  (default: WARNING)
  MCKAY_ORBIT_THRESHOLD  Group order above which orbits use generators only
                                                        (default: 10000)"""


def main():
    args = _setup(sys.argv[1:])

    if not args or args[0] in ("-h", "--help", "help"):
        print(USAGE)
        sys.exit(0)

    command = args[0]
    rest = args[1:]

    handler = COMMANDS.get(command)
    if handler is None:
        print(f"Unknown command: {command}", file=sys.stderr)
        print("Run 'mckay-cli --help' for usage.", file=sys.stderr)
        sys.exit(1)

    try:
        handler(rest)
    except McKayError as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(e.exit_code)
