"""The workspace document: parsing, printing and task construction.

A document is JSON with top-level keys ``fields``, ``extensions``,
``algebras``, ``modules``, ``bimodules``, ``complexes``, ``certificates`` and
``tasks``.  Names are unique across all sections.  Any algebra, module,
bimodule or complex entry may instead be ``{"extend": name, "along": ext}``.
"""
from __future__ import annotations

import json

from .basechange import ExtensionMap, extend
from .checkers import Cone, GenerationCertificate, Shift, Sum, Summand, Task
from .codec import decode_elem, decode_matrix, encode_elem, encode_matrix
from .dg import DGAlgebra, DGBimodule, DGModule, validate_algebra, validate_bimodule, validate_module
from .errors import DocumentSyntaxError, UnknownReference
from .fields import FieldTower, format_scalar, make_extension
from .perf import PerfObject, free

SECTIONS = ("fields", "extensions", "algebras", "modules", "bimodules", "complexes", "certificates")


def _no_duplicates(pairs):
    seen = {}
    for k, v in pairs:
        if k in seen:
            raise DocumentSyntaxError(f"duplicate key {k!r}")
        seen[k] = v
    return seen


def load_json(text):
    try:
        return json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno) from None


def _require(d, key, where):
    if not isinstance(d, dict) or key not in d:
        raise DocumentSyntaxError(f"{where}: missing key {key!r}")
    return d[key]


def _basis(spec, where):
    out = []
    for k, b in enumerate(_require(spec, "basis", where)):
        if not isinstance(b, dict) or "name" not in b:
            raise DocumentSyntaxError(f"{where}.basis[{k}]: expected {{\"name\", \"deg\"}}")
        out.append((str(b["name"]), int(b.get("deg", 0))))
    return out


def _named_vec(F, names, pairs, where):
    out = {}
    for name, lit in pairs:
        if name not in names:
            raise UnknownReference(name, where)
        try:
            out[name] = F.add(out.get(name, F.zero), F.coerce(str(lit)))
        except Exception as exc:
            raise DocumentSyntaxError(f"{where}: {exc}") from None
    return {n: c for n, c in out.items() if not F.is_zero(c)}


class Workspace:
    """Named, validated entities plus the raw task list."""

    def __init__(self, doc):
        if not isinstance(doc, dict):
            raise DocumentSyntaxError("document must be a JSON object")
        unknown = set(doc) - set(SECTIONS) - {"tasks"}
        if unknown:
            raise DocumentSyntaxError(f"unknown top-level keys {sorted(unknown)}")
        self.raw = {s: dict(doc.get(s, {})) for s in SECTIONS}
        self.tasks = list(doc.get("tasks", []))
        self.section_of = {}
        for s in SECTIONS:
            for name in self.raw[s]:
                if name in self.section_of:
                    raise DocumentSyntaxError(f"name {name!r} defined twice")
                self.section_of[name] = s
        self.entities = {}
        self._building = set()
        for s in SECTIONS:
            for name in self.raw[s]:
                self.get(s, name)
        for k, t in enumerate(self.tasks):
            self.task(t, f"tasks[{k}]")

    @classmethod
    def from_entities(cls, entities, tasks=()):
        """A workspace around already-built objects, given as ``{name: object}`` in dependency order."""
        kinds = [(FieldTower, "fields"), (ExtensionMap, "extensions"), (DGAlgebra, "algebras"),
                 (DGModule, "modules"), (DGBimodule, "bimodules"), (PerfObject, "complexes"),
                 (GenerationCertificate, "certificates")]
        ws = cls.__new__(cls)
        ws.raw = {s: {} for s in SECTIONS}
        ws.section_of, ws.entities, ws._building = {}, {}, set()
        ws.tasks = list(tasks)
        for name, obj in entities.items():
            section = next(s for k, s in kinds if isinstance(obj, k))
            ws.raw[section][name] = {}
            ws.section_of[name] = section
            ws.entities[name] = obj
        return ws

    # -- lookup -----------------------------------------------------------------------
    def get(self, section, name, where=None):
        if self.section_of.get(name) != section:
            raise UnknownReference(name, where or section)
        if name in self.entities:
            return self.entities[name]
        if name in self._building:
            raise DocumentSyntaxError(f"cyclic definition involving {name!r}")
        self._building.add(name)
        spec = self.raw[section][name]
        where = f"{section}.{name}"
        if isinstance(spec, dict) and "extend" in spec and section not in ("fields", "extensions",
                                                                           "certificates"):
            src = self.get(section, spec["extend"], where)
            obj = extend(src, self.get("extensions", _require(spec, "along", where), where))
        else:
            obj = getattr(self, "_build_" + section)(spec, where)
        self._building.discard(name)
        self.entities[name] = obj
        return obj

    def any(self, name, sections, where):
        for s in sections:
            if self.section_of.get(name) == s:
                return self.get(s, name, where)
        raise UnknownReference(name, where)

    def name_of(self, obj, section):
        for name in self.raw[section]:
            if self.entities.get(name) is obj:
                return name
        return None

    # -- builders -------------------------------------------------------------------
    def _build_fields(self, spec, where):
        if "over" in spec:
            base = self.get("fields", spec["over"], where)
            coeffs = [base.coerce(str(c)) for c in _require(spec, "minpoly", where)]
            return make_extension(base, coeffs, _require(spec, "generator", where))
        return FieldTower(int(spec.get("characteristic", 0)))

    def _build_extensions(self, spec, where):
        return ExtensionMap(self.get("fields", _require(spec, "from", where), where),
                            self.get("fields", _require(spec, "to", where), where))

    def _build_algebras(self, spec, where):
        F = self.get("fields", _require(spec, "field", where), where)
        basis = _basis(spec, where)
        names = {n for n, _ in basis}
        unit = _require(spec, "unit", where)
        if isinstance(unit, str):
            if unit not in names:
                raise UnknownReference(unit, where + ".unit")
        else:
            unit = _named_vec(F, names, unit, where + ".unit")
        mul = {}
        for k, entry in enumerate(spec.get("mul", [])):
            x, y, out = entry
            for n in (x, y):
                if n not in names:
                    raise UnknownReference(n, f"{where}.mul[{k}]")
            mul[(x, y)] = _named_vec(F, names, out, f"{where}.mul[{k}]")
        diff = {}
        for k, (x, out) in enumerate(spec.get("diff", [])):
            if x not in names:
                raise UnknownReference(x, f"{where}.diff[{k}]")
            diff[x] = _named_vec(F, names, out, f"{where}.diff[{k}]")
        A = DGAlgebra.build(F, basis, unit, mul, diff)
        validate_algebra(A).raise_for(where)
        if "idempotents" in spec:
            A.idempotents = [decode_elem(A, e, where + ".idempotents") for e in spec["idempotents"]]
        return A

    def _build_modules(self, spec, where):
        A = self.get("algebras", _require(spec, "algebra", where), where)
        F = A.field
        basis = _basis(spec, where)
        names = {n for n, _ in basis}
        action = {}
        for k, (m, a, out) in enumerate(spec.get("action", [])):
            if m not in names:
                raise UnknownReference(m, f"{where}.action[{k}]")
            if a not in A.index:
                raise UnknownReference(a, f"{where}.action[{k}]")
            action[(m, a)] = _named_vec(F, names, out, f"{where}.action[{k}]")
        diff = self._diff(F, names, spec, where)
        M = DGModule.build(A, basis, action, diff)
        validate_module(M).raise_for(where)
        return M

    def _diff(self, F, names, spec, where):
        diff = {}
        for k, (x, out) in enumerate(spec.get("diff", [])):
            if x not in names:
                raise UnknownReference(x, f"{where}.diff[{k}]")
            diff[x] = _named_vec(F, names, out, f"{where}.diff[{k}]")
        return diff

    def _build_bimodules(self, spec, where):
        L = self.get("algebras", _require(spec, "left", where), where)
        R = self.get("algebras", _require(spec, "right", where), where)
        F = L.field
        basis = _basis(spec, where)
        names = {n for n, _ in basis}
        left, right = {}, {}
        for k, (a, t, out) in enumerate(spec.get("left_action", [])):
            if a not in L.index or t not in names:
                raise UnknownReference(a if a not in L.index else t, f"{where}.left_action[{k}]")
            left[(a, t)] = _named_vec(F, names, out, f"{where}.left_action[{k}]")
        for k, (t, b, out) in enumerate(spec.get("right_action", [])):
            if b not in R.index or t not in names:
                raise UnknownReference(b if b not in R.index else t, f"{where}.right_action[{k}]")
            right[(t, b)] = _named_vec(F, names, out, f"{where}.right_action[{k}]")
        T = DGBimodule.build(L, R, basis, left, right, self._diff(F, names, spec, where))
        validate_bimodule(T).raise_for(where)
        return T

    def _build_complexes(self, spec, where):
        A = self.get("algebras", _require(spec, "algebra", where), where)
        idem = spec.get("idempotent")
        return PerfObject(A, _require(spec, "cells", where),
                          decode_matrix(A, spec.get("twist", []), where + ".twist"),
                          None if idem is None else decode_matrix(A, idem, where + ".idempotent"))

    def _build_certificates(self, spec, where):
        A = self.get("algebras", _require(spec, "algebra", where), where)
        starts = [(n, self.get("complexes", n, where + ".starts")) for n in _require(spec, "starts", where)]
        steps = []
        for k, s in enumerate(spec.get("steps", [])):
            op = s.get("op") if isinstance(s, dict) else None
            w = f"{where}.steps[{k}]"
            if op == "shift":
                steps.append(Shift(_require(s, "of", w), _require(s, "n", w)))
            elif op == "sum":
                steps.append(Sum(_require(s, "a", w), _require(s, "b", w)))
            elif op == "cone":
                steps.append(Cone(_require(s, "source", w), _require(s, "target", w),
                                  decode_matrix(A, _require(s, "entries", w), w)))
            elif op == "summand":
                steps.append(Summand(_require(s, "of", w), decode_matrix(A, _require(s, "idempotent", w), w)))
            else:
                raise DocumentSyntaxError(f"{w}: unknown op {op!r}")
        target = spec.get("target", "free")
        target = free(A) if target == "free" else self.get("complexes", target, where + ".target")
        claim = _require(spec, "claim", where)
        return GenerationCertificate(A, starts, steps, target, _require(claim, "source", where + ".claim"),
                                     decode_matrix(A, _require(claim, "entries", where + ".claim"),
                                                   where + ".claim"))

    # -- tasks --------------------------------------------------------------------------
    def task(self, t, where, order="given", window=None):
        """A :class:`Task` from a raw task entry; ``window`` is the default when the task has none."""
        kind = _require(t, "task", where)
        if kind not in Task.KINDS:
            raise DocumentSyntaxError(f"{where}: unknown task {kind!r}")
        args = dict(t.get("args", {}))
        out = {}
        w = where + ".args"
        alg, perf_or_mod = ("algebras",), ("complexes", "modules")
        table = {
            "a": alg, "b": alg, "t": ("bimodules",), "certificate": ("certificates",),
            "witness": ("modules",), "x": perf_or_mod, "f": ("modules",),
            "extension": ("extensions",), "object": ("algebras", "modules", "bimodules", "complexes"),
        }
        for key, v in args.items():
            if key == "window":
                out["window"] = tuple(int(n) for n in v)
            elif key == "objects":
                objs = [self.get("complexes", n, w) for n in v]
                out["objects"] = objs[::-1] if order == "reversed" else objs
            elif key == "task":
                out["task"] = self.task(v, w, order, window)
            elif key in table:
                out[key] = self.any(v, table[key], w)
                if key == "certificate":
                    out["certificate_name"] = v
            else:
                raise DocumentSyntaxError(f"{w}: unknown argument {key!r}")
        if window is not None and "window" not in out and kind in ("check-exc", "check-full-exc",
                                                                   "check-hom-bc", "check-adjunction"):
            out["window"] = window
        return Task(kind, **out)


def parse_document(text):
    return Workspace(load_json(text))


# -- printing ----------------------------------------------------------------------------------

def _basis_out(names, degrees):
    return [{"name": n, "deg": d} for n, d in zip(names, degrees)]


def _vec_out(F, names, v):
    return [[names[i], format_scalar(F, v[i])] for i in sorted(v) if not F.is_zero(v[i])]


def _diff_out(F, names, diff):
    return [[names[i], _vec_out(F, names, v)] for i, v in enumerate(diff) if v]


def document(ws):
    """The workspace as a JSON-ready dict (canonical field order)."""
    out = {}
    for s in SECTIONS:
        sec = {}
        for name, spec in ws.raw[s].items():
            obj = ws.entities[name]
            if isinstance(spec, dict) and "extend" in spec and s not in ("fields", "extensions", "certificates"):
                sec[name] = {"extend": spec["extend"], "along": spec["along"]}
            else:
                sec[name] = getattr(_Printer(ws), s)(obj, spec)
        if sec:
            out[s] = sec
    out["tasks"] = ws.tasks
    return out


class _Printer:
    def __init__(self, ws):
        self.ws = ws

    def _name(self, obj, section):
        for n, o in self.ws.entities.items():
            if self.ws.section_of.get(n) == section and (o is obj or o == obj):
                return n
        raise UnknownReference(repr(obj), section)

    def fields(self, F, spec):
        if F.height:
            base = self._name(F.parent, "fields")
            return {"over": base, "generator": F.generator_name,
                    "minpoly": [format_scalar(F.parent, c) for c in F.minpoly]}
        return {"characteristic": F.characteristic}

    def extensions(self, e, spec):
        return {"from": self._name(e.source, "fields"), "to": self._name(e.target, "fields")}

    def algebras(self, A, spec):
        F = A.field
        d = {"field": self._name(F, "fields"), "basis": _basis_out(A.names, A.degrees)}
        d["unit"] = A.unit if A.unit is not None else _vec_out(F, A.names, A.unit_vector)
        d["mul"] = [[A.names[x], A.names[y], _vec_out(F, A.names, v)] for (x, y), v in sorted(A.mul.items())]
        diff = _diff_out(F, A.names, A.diff)
        if diff:
            d["diff"] = diff
        if getattr(A, "idempotents", None):
            d["idempotents"] = [encode_elem(A, e) for e in A.idempotents]
        return d

    def modules(self, M, spec):
        A, F = M.algebra, M.field
        action = []
        for i in range(M.dim):
            for a in range(A.dim):
                if M.act[a][i]:
                    action.append([M.names[i], A.names[a], _vec_out(F, M.names, M.act[a][i])])
        d = {"algebra": self._name(A, "algebras"), "basis": _basis_out(M.names, M.degrees), "action": action}
        diff = _diff_out(F, M.names, M.diff)
        if diff:
            d["diff"] = diff
        return d

    def bimodules(self, T, spec):
        F = T.field
        la, ra = [], []
        for t in range(T.dim):
            for a in range(T.left.dim):
                if T.lact[a][t]:
                    la.append([T.left.names[a], T.names[t], _vec_out(F, T.names, T.lact[a][t])])
            for b in range(T.right.dim):
                if T.ract[b][t]:
                    ra.append([T.names[t], T.right.names[b], _vec_out(F, T.names, T.ract[b][t])])
        d = {"left": self._name(T.left, "algebras"), "right": self._name(T.right, "algebras"),
             "basis": _basis_out(T.names, T.degrees), "left_action": la, "right_action": ra}
        diff = _diff_out(F, T.names, T.diff)
        if diff:
            d["diff"] = diff
        return d

    def complexes(self, x, spec):
        d = {"algebra": self._name(x.algebra, "algebras"), "cells": list(x.cells),
             "twist": encode_matrix(x.algebra, x.twist)}
        if x.idempotent is not None:
            d["idempotent"] = encode_matrix(x.algebra, x.idempotent)
        return d

    def certificates(self, c, spec):
        A = c.algebra
        d = c.to_dict(self._name(A, "algebras"))
        d["starts"] = [n for n, _ in c.starts]
        d["target"] = "free" if c.target == free(A) else self._name(c.target, "complexes")
        return d


def dumps(obj, width=96):
    """JSON with nesting shown by indentation; anything that fits on one line stays on one line."""
    def go(x, pad):
        flat = json.dumps(x, ensure_ascii=False)
        if len(flat) + len(pad) <= width or not isinstance(x, (dict, list)) or not x:
            return flat
        inner = pad + "  "
        if isinstance(x, dict):
            body = ",\n".join(f"{inner}{json.dumps(k)}: {go(v, inner)}" for k, v in x.items())
            return "{\n" + body + "\n" + pad + "}"
        body = ",\n".join(inner + go(v, inner) for v in x)
        return "[\n" + body + "\n" + pad + "]"
    return go(obj, "") + "\n"


def print_document(ws):
    return dumps(document(ws))
