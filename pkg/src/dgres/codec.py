"""JSON-ready encodings of algebra elements, matrices and perfect objects."""
from __future__ import annotations

import hashlib
import json

from .errors import UnknownReference
from .fields import format_scalar
from .perf import PerfObject


def encode_elem(A, v):
    """[[basis name, scalar literal], ...] in basis order."""
    F = A.field
    return [[A.names[i], format_scalar(F, v[i])] for i in sorted(v) if not F.is_zero(v[i])]


def decode_elem(A, pairs, where=None):
    F = A.field
    out = {}
    for name, lit in pairs:
        if name not in A.index:
            raise UnknownReference(name, where)
        c = F.add(out.get(A.index[name], F.zero), F.coerce(str(lit)))
        out[A.index[name]] = c
    return {i: c for i, c in out.items() if not F.is_zero(c)}


def encode_matrix(A, m):
    """[[row, col, element], ...] sorted by position."""
    return [[i, j, encode_elem(A, m[(i, j)])] for (i, j) in sorted(m) if m[(i, j)]]


def decode_matrix(A, rows, where=None):
    out = {}
    for i, j, pairs in rows:
        v = decode_elem(A, pairs, where)
        if v:
            out[(int(i), int(j))] = v
    return out


def encode_perf(x, algebra_name):
    d = {"algebra": algebra_name, "cells": list(x.cells), "twist": encode_matrix(x.algebra, x.twist)}
    if x.idempotent is not None:
        d["idempotent"] = encode_matrix(x.algebra, x.idempotent)
    return d


def decode_perf(A, d, where=None):
    idem = d.get("idempotent")
    return PerfObject(A, d["cells"], decode_matrix(A, d.get("twist", []), where),
                      None if idem is None else decode_matrix(A, idem, where))


def canonical_json(obj):
    return json.dumps(obj, sort_keys=False, separators=(",", ":"), ensure_ascii=False)


def digest(obj):
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()
