"""File formats: algebra files, subspace files, audit reports.

Everything is JSON with integers only; subspaces travel as generator lists
and are canonicalized on load.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .algebras import Algebra
from .subspaces import Subspace

SCHEMA_VERSION = 1


class ParseError(ValueError):
    pass


def algebra_to_dict(a: Algebra, aid=None):
    out = {
        "schema_version": SCHEMA_VERSION,
        "kind": "ringlab-algebra",
        "id": aid or a.aid or a.fingerprint,
        "p": a.p,
        "dim": a.dim,
        "table": [[[int(x) for x in a.table[i, j]] for j in range(a.dim)] for i in range(a.dim)],
        "unit": None if a.unit is None else a.unit.to_list(),
        "basis_names": a.basis_names,
    }
    return out


def algebra_from_dict(data) -> Algebra:
    try:
        p = int(data["p"])
        dim = int(data["dim"])
        table = np.asarray(data["table"], dtype=np.int64)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed algebra file: {exc}") from exc
    if table.shape != (dim, dim, dim):
        raise ParseError(f"table shape {table.shape} does not match dim {dim}")
    if ((table < 0) | (table >= p)).any():
        raise ParseError("table entries must be residues in [0, p)")
    unit = data.get("unit")
    names = data.get("basis_names")
    try:
        return Algebra(p, table, unit=unit, basis_names=names, aid=data.get("id"))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def save_algebra(a: Algebra, path, aid=None):
    Path(path).write_text(json.dumps(algebra_to_dict(a, aid), indent=2, sort_keys=True) + "\n")


def load_algebra(path) -> Algebra:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read algebra file {path}: {exc}") from exc
    return algebra_from_dict(data)


def subspace_to_dict(v: Subspace, algebra_id=None):
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "ringlab-subspace",
        "algebra_id": algebra_id or v.algebra.aid or v.algebra.fingerprint,
        "generators": v.generators(),
    }


def subspace_from_dict(data, algebra: Algebra) -> Subspace:
    try:
        gens = data["generators"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed subspace file: {exc}") from exc
    if not gens:
        return Subspace(algebra)
    arr = np.asarray(gens, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != algebra.dim:
        raise ParseError("generator lengths must match the algebra dimension")
    return Subspace(algebra, arr)


def save_subspace(v: Subspace, path, algebra_id=None):
    Path(path).write_text(
        json.dumps(subspace_to_dict(v, algebra_id), indent=2, sort_keys=True) + "\n"
    )


def load_subspace(path, algebra: Algebra) -> Subspace:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read subspace file {path}: {exc}") from exc
    return subspace_from_dict(data, algebra)


def report_schema():
    with resources.files("ringlab.schemas").joinpath("report.schema.json").open() as fh:
        return json.load(fh)


def report_to_json(report_dict) -> str:
    return json.dumps(report_dict, indent=2, sort_keys=True) + "\n"


def save_report(report_dict, path):
    Path(path).write_text(report_to_json(report_dict))


def strip_timing(report_dict):
    """Copy of a report dict with all timing fields removed (for
    byte-determinism comparisons)."""
    out = json.loads(json.dumps(report_dict))
    out.pop("timing", None)
    for v in out.get("verdicts", []):
        v.pop("wall_ms", None)
    return out
