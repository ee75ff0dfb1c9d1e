"""Machine-readable report documents emitted by the CLI.

Documents are byte-stable for fixed inputs and seed: no timestamps, keys
sorted, floats serialized by the shortest round-trip repr.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .scalars import ExactComplex

SCHEMA_VERSION = "1.0"


def encode_scalar(v):
    """JSON shape for a scalar: exact values keep their rational parts as
    numerator/denominator strings, floats keep full double precision."""
    if isinstance(v, ExactComplex):
        return {
            "kind": "exact",
            "re": f"{v.re.numerator}/{v.re.denominator}",
            "im": f"{v.im.numerator}/{v.im.denominator}",
        }
    if isinstance(v, (int, Fraction)):
        return encode_scalar(ExactComplex(v))
    z = complex(v)
    return {"kind": "float", "re": z.real, "im": z.imag}


def encode_scalars(values):
    return [encode_scalar(v) for v in values]


def build_document(command: str, inputs: dict, results, findings=None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "results": results,
        "findings": findings if findings is not None else [],
    }


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def sig_digits(x: float, digits: int = 12) -> str:
    """Table rendering: round to 12 significant digits."""
    return format(x, f".{digits}g")
