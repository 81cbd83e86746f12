"""JSON formats for predicates, instances, reports and certificates.

Key order is fixed and floats are written with ``repr`` precision, so one
write-read-write cycle reproduces the file byte for byte.
"""

from __future__ import annotations

import json
import os
from typing import Any, Optional

from .csp import Constraint, CspInstance
from .errors import CspError, FormatError
from .hardness import LowerBoundCertificate
from .predicates import KaryPredicate
from .sparsifier import SparsifierReport

PREDICATE_KEYS = ("arity", "domains", "support")
INSTANCE_KEYS = ("variables", "domains", "predicate", "constraints")
REPORT_KEYS = ("epsilon", "seed", "retained", "new_weights", "verified", "oversampling_rounds")


def _check_keys(obj: Any, required, optional=(), what="object") -> None:
    if not isinstance(obj, dict):
        raise FormatError(f"{what} must be a JSON object")
    missing = [k for k in required if k not in obj]
    if missing:
        raise FormatError(f"{what} is missing {', '.join(missing)}")
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        raise FormatError(f"{what} has unknown fields: {', '.join(unknown)}")


def _int_list(value, what) -> list[int]:
    if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
        raise FormatError(f"{what} must be a list of integers")
    return value


def predicate_to_dict(pred: KaryPredicate) -> dict:
    return {"arity": pred.arity, "domains": list(pred.domains), "support": [list(t) for t in pred.sorted_support()]}


def predicate_from_dict(obj: Any) -> KaryPredicate:
    _check_keys(obj, PREDICATE_KEYS, what="predicate")
    if not isinstance(obj["support"], list):
        raise FormatError("predicate support must be a list of tuples")
    support = [tuple(_int_list(t, "support tuple")) for t in obj["support"]]
    if len(set(support)) != len(support):
        raise FormatError("predicate support lists a tuple twice")
    domains = _int_list(obj["domains"], "predicate domains")
    if not isinstance(obj["arity"], int) or isinstance(obj["arity"], bool):
        raise FormatError(f"predicate arity must be an integer, got {obj['arity']!r}")
    try:
        return KaryPredicate(domains, support, arity=obj["arity"])
    except CspError as exc:
        raise FormatError(str(exc)) from exc


def instance_to_dict(inst: CspInstance, report: Optional[SparsifierReport] = None) -> dict:
    out = {
        "variables": list(inst.variables),
        "domains": list(inst.domains),
        "predicate": predicate_to_dict(inst.predicate),
        "constraints": [{"scope": [inst.variables[v] for v in c.scope], "weight": c.weight}
                        for c in inst.constraints],
    }
    if report is not None:
        out["report"] = report_to_dict(report)
    return out


def instance_from_dict(obj: Any, base_dir: str = ".") -> tuple[CspInstance, Optional[SparsifierReport]]:
    """Parse an instance; ``predicate`` may be inline or a path relative to ``base_dir``."""
    _check_keys(obj, INSTANCE_KEYS, ("report",), what="instance")
    variables = obj["variables"]
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise FormatError("variables must be a list of strings")
    pred_obj = obj["predicate"]
    if isinstance(pred_obj, str):
        pred = read_predicate(os.path.join(base_dir, pred_obj))
    else:
        pred = predicate_from_dict(pred_obj)
    index = {name: i for i, name in enumerate(variables)}
    constraints = []
    if not isinstance(obj["constraints"], list):
        raise FormatError("constraints must be a list")
    for c in obj["constraints"]:
        _check_keys(c, ("scope", "weight"), what="constraint")
        if not isinstance(c["scope"], list) or any(name not in index for name in c["scope"]):
            raise FormatError(f"constraint scope {c['scope']} names unknown variables")
        if not isinstance(c["weight"], (int, float)) or isinstance(c["weight"], bool):
            raise FormatError(f"constraint weight {c['weight']!r} is not a number")
        constraints.append(Constraint(tuple(index[name] for name in c["scope"]), c["weight"]))
    try:
        inst = CspInstance(tuple(variables), tuple(_int_list(obj["domains"], "domains")), pred, tuple(constraints))
    except CspError as exc:
        raise FormatError(str(exc)) from exc
    report = report_from_dict(obj["report"]) if "report" in obj else None
    return inst, report


def report_to_dict(report: SparsifierReport) -> dict:
    return {
        "epsilon": report.epsilon,
        "seed": report.seed,
        "retained": list(report.retained),
        "new_weights": list(report.new_weights),
        "verified": report.verified,
        "oversampling_rounds": report.oversampling_rounds,
    }


def report_from_dict(obj: Any) -> SparsifierReport:
    _check_keys(obj, REPORT_KEYS, what="report")
    try:
        return SparsifierReport(float(obj["epsilon"]), int(obj["seed"]), _int_list(obj["retained"], "retained"),
                                [float(w) for w in obj["new_weights"]], str(obj["verified"]),
                                int(obj["oversampling_rounds"]))
    except (TypeError, ValueError) as exc:
        raise FormatError(f"malformed report: {exc}") from exc


def certificate_to_dict(cert: LowerBoundCertificate) -> dict:
    return {
        "bound": cert.bound,
        "exact": cert.exact,
        "assignment_family": [list(a) for a in cert.assignment_family],
        "support_sets": [list(s) for s in cert.support_sets],
    }


def _format(obj: Any, depth: int) -> str:
    pad = "  " * (depth + 1)
    if isinstance(obj, dict) and obj:
        items = [f"{pad}{json.dumps(k)}: {_format(v, depth + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * depth + "}"
    if isinstance(obj, list) and any(isinstance(x, (list, dict)) for x in obj):
        items = [pad + _format(x, depth + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * depth + "]"
    # scalars and flat lists stay on one line
    return json.dumps(obj, allow_nan=False)


def dumps(obj: Any) -> str:
    return _format(obj, 0) + "\n"


def load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def write_json(path: str, obj: Any) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(obj))


def read_predicate(path: str) -> KaryPredicate:
    return predicate_from_dict(load_json(path))


def read_instance(path: str) -> tuple[CspInstance, Optional[SparsifierReport]]:
    return instance_from_dict(load_json(path), os.path.dirname(os.path.abspath(path)))
