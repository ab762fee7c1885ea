"""JSON-facing encoding and decoding.

Exact rationals travel as strings ("3/4", "-2"), never as floats: reports
must round-trip without losing the arithmetic they certify. Every report is
wrapped in an envelope carrying the tool version and a hash of the input
document, so results can be traced to what produced them.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from fractions import Fraction

import numpy as np

from .ifs_core import AffineSystem
from .linalg_exact import Matrix, frac


def frac_str(f: Fraction) -> str:
    f = Fraction(f)
    return str(f.numerator) if f.denominator == 1 else "%d/%d" % (
        f.numerator,
        f.denominator,
    )


def parse_frac(s) -> Fraction:
    return frac(s)


def parse_vec(xs) -> tuple:
    return tuple(frac(x) for x in xs)


def to_jsonable(x):
    """Recursively convert package objects to plain JSON values."""
    if isinstance(x, Fraction):
        return frac_str(x)
    if isinstance(x, Matrix):
        return [[frac_str(e) for e in row] for row in x.rows]
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return [to_jsonable(v) for v in x.tolist()]
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        out = {"type": type(x).__name__}
        for f in dataclasses.fields(x):
            out[f.name] = to_jsonable(getattr(x, f.name))
        return out
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return [to_jsonable(v) for v in sorted(x)]
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    raise TypeError("cannot serialise %r" % type(x))


def system_from_dict(doc: dict) -> AffineSystem:
    matrix = Matrix([[frac(e) for e in row] for row in doc["matrix"]])
    return AffineSystem(
        R=matrix,
        digits=tuple(parse_vec(b) for b in doc["digits"]),
        weights=tuple(frac(w) for w in doc.get("weights", ())),
        name=doc.get("name", ""),
    )


def frequencies_from_dict(doc: dict):
    freqs = doc.get("frequencies")
    return None if freqs is None else tuple(parse_vec(l) for l in freqs)


def system_to_dict(sys: AffineSystem, frequencies=None) -> dict:
    doc = {
        "name": sys.name,
        "matrix": [[frac_str(e) for e in row] for row in sys.R.rows],
        "digits": [[frac_str(c) for c in b] for b in sys.digits],
    }
    if not sys.uniform:
        doc["weights"] = [frac_str(w) for w in sys.weights]
    if frequencies is not None:
        doc["frequencies"] = [[frac_str(c) for c in l] for l in frequencies]
    return doc


def input_hash(doc) -> str:
    blob = json.dumps(to_jsonable(doc), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def report_envelope(command: str, input_doc, payload: dict) -> dict:
    from . import __version__

    return {
        "tool": "aifs",
        "version": __version__,
        "command": command,
        "input_sha256": input_hash(input_doc) if input_doc is not None else None,
        **to_jsonable(payload),
    }
