"""Stable JSON formats for tensors and certificates.

Tensor files are sparse and 1-based:

    {"m": 2, "n": 2, "entries": [{"i": 1, "j": 1, "k": 1, "l": 1, "v": "1"}, ...]}

omitted entries are zero. Certificates are dense per term:

    {"m": 2, "n": 2, "terms": [{"weight": "1/2", "W": [["1", "0"], ["0", "-1"]]}]}

Rationals are serialized as decimal-integer strings "p/q" (plain "p" for
integers); floats never appear in these files. Serialization is canonical
(sorted keys, sorted entry order) so identical inputs produce identical
bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .core import (
    BilinearForm,
    BiquadraticTensor,
    SOSCertificate,
)

__all__ = [
    "rational_to_str",
    "parse_rational",
    "tensor_to_dict",
    "tensor_from_dict",
    "certificate_to_dict",
    "certificate_from_dict",
    "load_tensor",
    "save_tensor",
    "load_certificate",
    "save_certificate",
    "dumps_canonical",
]


def rational_to_str(v: Fraction) -> str:
    return str(Fraction(v))


def parse_rational(s) -> Fraction:
    """Parse "p/q" or "p" (Fraction's syntax) into an exact rational."""
    if isinstance(s, (str, int)):
        return Fraction(s)
    raise ValueError(f"expected a rational string, got {type(s).__name__}: {s!r}")


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def tensor_to_dict(t: BiquadraticTensor) -> dict:
    entries = []
    for i in range(t.m):
        for j in range(t.n):
            for k in range(t.m):
                for l in range(t.n):
                    v = t.entries[i, j, k, l]
                    if v != 0:
                        entries.append({"i": i + 1, "j": j + 1, "k": k + 1, "l": l + 1,
                                        "v": rational_to_str(v)})
    return {"m": t.m, "n": t.n, "entries": entries}


def _dims(d: dict) -> tuple[int, int]:
    try:
        m, n = int(d["m"]), int(d["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"missing or malformed dimensions: {exc}") from exc
    if m < 1 or n < 1:
        raise ValueError(f"dimensions must be >= 1, got m={m}, n={n}")
    return m, n


def tensor_from_dict(d: dict) -> BiquadraticTensor:
    m, n = _dims(d)
    arr = np.empty((m, n, m, n), dtype=object)
    arr[...] = Fraction(0)
    seen = set()
    for entry in d.get("entries", []):
        try:
            i, j, k, l = (int(entry[key]) for key in ("i", "j", "k", "l"))
            v = parse_rational(entry["v"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed tensor entry {entry!r}: {exc}") from exc
        if not (1 <= i <= m and 1 <= k <= m and 1 <= j <= n and 1 <= l <= n):
            raise ValueError(f"tensor entry index ({i},{j},{k},{l}) out of range for ({m},{n})")
        if (i, j, k, l) in seen:
            raise ValueError(f"duplicate tensor entry at ({i},{j},{k},{l})")
        seen.add((i, j, k, l))
        arr[i - 1, j - 1, k - 1, l - 1] = v
    return BiquadraticTensor(m, n, arr)


def certificate_to_dict(c: SOSCertificate) -> dict:
    terms = []
    for w, form in c.terms:
        terms.append({
            "weight": rational_to_str(w),
            "W": [[rational_to_str(form.W[i, j]) for j in range(c.n)] for i in range(c.m)],
        })
    return {"m": c.m, "n": c.n, "terms": terms}


def certificate_from_dict(d: dict) -> SOSCertificate:
    m, n = _dims(d)
    terms = []
    for td in d.get("terms", []):
        try:
            w = parse_rational(td["weight"])
            rows = td["W"]
            W = [[parse_rational(rows[i][j]) for j in range(n)] for i in range(m)]
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise ValueError(f"malformed certificate term: {exc}") from exc
        terms.append((w, BilinearForm.from_entries(m, n, W)))
    return SOSCertificate(m, n, tuple(terms))


def _load_json(path) -> dict:
    text = Path(path).read_text()
    data = json.loads(text)  # json.JSONDecodeError carries line/column
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a JSON object at top level")
    return data


def load_tensor(path) -> BiquadraticTensor:
    return tensor_from_dict(_load_json(path))


def save_tensor(t: BiquadraticTensor, path) -> None:
    Path(path).write_text(dumps_canonical(tensor_to_dict(t)))


def load_certificate(path) -> SOSCertificate:
    return certificate_from_dict(_load_json(path))


def save_certificate(c: SOSCertificate, path) -> None:
    Path(path).write_text(dumps_canonical(certificate_to_dict(c)))
