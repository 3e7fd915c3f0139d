"""Flat-file interchange formats.

Channel document (JSON, UTF-8)::

    {
      "format_version": "1",
      "n": 2,
      "pairs": [{"F": <matrix>, "R": <matrix>}, ...],
      "metadata": {"name": "..."}          # optional string map
    }

where ``<matrix>`` is an n x n array of two-element ``[re, im]`` arrays.
Floats are emitted with ``repr`` precision, so parse(emit(form)) restores
bit-identical numbers.

Auxiliary formats: stochastic matrix files ``{"r": ..., "entries": [[...]]}``
(row-major real entries), state files ``{"n": ..., "rho": <matrix>}`` and
Kraus files ``{"n": ..., "operators": [<matrix>, ...]}``.
"""

from __future__ import annotations

import json

import numpy as np

from .channel import HolevoForm, make_holevo_form, require_density
from .errors import DocumentSyntaxError, ValidationError
from .linalg import DEFAULT_TOL, Tolerances

FORMAT_VERSION = "1"


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _inline_list(lst) -> bool:
    # keep [re, im] pairs and numeric rows on one line
    if all(_is_number(x) for x in lst):
        return True
    return all(isinstance(x, list) and all(_is_number(y) for y in x) for x in lst)


def _render_json(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(k)}: {_render_json(v, indent + 1)}'
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if _inline_list(obj):
            return "[" + ", ".join(json.dumps(x) if _is_number(x) else _render_json(x)
                                   for x in obj) + "]"
        items = [f"{pad}  {_render_json(x, indent + 1)}" for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(obj)


def matrix_to_literal(arr):
    """n x m complex array -> nested lists of [re, im] pairs."""
    a = np.asarray(arr, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def literal_to_matrix(lit, where: str):
    """Nested [re, im] lists -> complex array, with located failures."""
    if not isinstance(lit, list) or not lit:
        raise ValidationError(f"{where}: expected a nonempty list of rows")
    rows = []
    width = None
    for i, row in enumerate(lit):
        if not isinstance(row, list) or not row:
            raise ValidationError(f"{where}: row {i} is not a nonempty list")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ValidationError(f"{where}: row {i} has {len(row)} entries, expected {width}")
        entries = []
        for j, cell in enumerate(row):
            if (not isinstance(cell, list) or len(cell) != 2
                    or not all(isinstance(x, (int, float)) and not isinstance(x, bool)
                               for x in cell)):
                raise ValidationError(f"{where}: entry ({i},{j}) is not a [re, im] pair")
            entries.append(complex(cell[0], cell[1]))
        rows.append(entries)
    return np.array(rows, dtype=np.complex128)


def _loads(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"{what} is not valid JSON at offset {exc.pos}: {exc.msg}",
                                  offset=exc.pos) from exc


def form_to_document(form: HolevoForm, metadata=None) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "n": form.n,
        "pairs": [{"F": matrix_to_literal(f), "R": matrix_to_literal(r)}
                  for f, r in form.pairs()],
    }
    if metadata:
        doc["metadata"] = dict(metadata)
    return doc


def emit_channel_document(form: HolevoForm, metadata=None) -> str:
    return _render_json(form_to_document(form, metadata)) + "\n"


def document_to_form(doc, tol: Tolerances = DEFAULT_TOL) -> HolevoForm:
    if not isinstance(doc, dict):
        raise ValidationError("channel document must be a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ValidationError(f"unsupported format_version {version!r}, "
                              f"expected {FORMAT_VERSION!r}")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValidationError(f"'n' must be a positive integer, got {n!r}")
    pairs_field = doc.get("pairs")
    if not isinstance(pairs_field, list) or not pairs_field:
        raise ValidationError("'pairs' must be a nonempty list")
    metadata = doc.get("metadata")
    if metadata is not None and (not isinstance(metadata, dict) or
                                 not all(isinstance(k, str) and isinstance(v, str)
                                         for k, v in metadata.items())):
        raise ValidationError("'metadata' must map strings to strings")

    pairs = []
    for k, item in enumerate(pairs_field):
        if not isinstance(item, dict) or "F" not in item or "R" not in item:
            raise ValidationError(f"pairs[{k}] must be an object with 'F' and 'R'",
                                  pair_index=k)
        f = literal_to_matrix(item["F"], f"pairs[{k}].F")
        r = literal_to_matrix(item["R"], f"pairs[{k}].R")
        for name, mat in (("F", f), ("R", r)):
            if mat.shape != (n, n):
                raise ValidationError(
                    f"pairs[{k}].{name} has shape {mat.shape}, expected ({n}, {n})",
                    pair_index=k)
        pairs.append((f, r))
    return make_holevo_form(n, pairs, tol)


def parse_channel_document(text: str, tol: Tolerances = DEFAULT_TOL) -> HolevoForm:
    """Parse and fully validate a channel document.

    Syntax problems raise DocumentSyntaxError carrying the parser offset;
    semantic problems raise the matching validation error, with the
    offending pair index attached when one exists.
    """
    return document_to_form(_loads(text, "channel document"), tol)


def document_metadata(text: str):
    doc = _loads(text, "channel document")
    return doc.get("metadata") if isinstance(doc, dict) else None


def parse_stochastic_file(text: str):
    """Read ``{"r": ..., "entries": [[...], ...]}`` into a float array (unvalidated)."""
    doc = _loads(text, "stochastic matrix file")
    if not isinstance(doc, dict):
        raise ValidationError("stochastic matrix file must be a JSON object")
    r = doc.get("r")
    if not isinstance(r, int) or isinstance(r, bool) or r < 1:
        raise ValidationError(f"'r' must be a positive integer, got {r!r}")
    entries = doc.get("entries")
    if (not isinstance(entries, list) or len(entries) != r
            or any(not isinstance(row, list) or len(row) != r for row in entries)):
        raise ValidationError(f"'entries' must be an {r} x {r} array of arrays")
    try:
        return np.array(entries, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"'entries' must hold real numbers: {exc}") from exc


def stochastic_to_file(s) -> str:
    arr = np.asarray(s, dtype=np.float64)
    return _render_json({"r": arr.shape[0],
                         "entries": [list(map(float, row)) for row in arr]}) + "\n"


def parse_state_file(text: str, tol: Tolerances = DEFAULT_TOL):
    """Read and validate ``{"n": ..., "rho": <matrix>}``; returns the density matrix."""
    doc = _loads(text, "state file")
    if not isinstance(doc, dict):
        raise ValidationError("state file must be a JSON object")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValidationError(f"'n' must be a positive integer, got {n!r}")
    rho = literal_to_matrix(doc.get("rho"), "rho")
    return require_density(rho, n, tol, name="rho")


def state_to_file(rho) -> str:
    arr = np.asarray(rho, dtype=np.complex128)
    return _render_json({"n": arr.shape[0], "rho": matrix_to_literal(arr)}) + "\n"


def parse_kraus_file(text: str):
    """Read ``{"n": ..., "operators": [<matrix>, ...]}`` into a list of arrays."""
    doc = _loads(text, "Kraus file")
    if not isinstance(doc, dict):
        raise ValidationError("Kraus file must be a JSON object")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValidationError(f"'n' must be a positive integer, got {n!r}")
    ops_field = doc.get("operators")
    if not isinstance(ops_field, list) or not ops_field:
        raise ValidationError("'operators' must be a nonempty list of matrix literals")
    ops = []
    for k, lit in enumerate(ops_field):
        op = literal_to_matrix(lit, f"operators[{k}]")
        if op.shape != (n, n):
            raise ValidationError(f"operators[{k}] has shape {op.shape}, expected ({n}, {n})",
                                  pair_index=k)
        ops.append(op)
    return ops
