"""Verdicts: resolution triples, Morita criterion, exceptional collections, transport.

Every check returns a :class:`CheckReport`.  Leaf reports carry the numbers
their verdict rests on, and :func:`rederive` recomputes a verdict from those
numbers alone; that is what ``dgres verify`` relies on.
"""
from __future__ import annotations

from .basechange import check_adjunction_dims, check_hom_base_change, extend
from .codec import digest, encode_matrix, encode_perf
from .dg import DGAlgebra, DGBimodule, DGModule
from .errors import (
    DGResError,
    MalformedStep,
    NotClosed,
    SizeBoundExceeded,
    WindowNotGuaranteed,
)
from .perf import (
    Morphism,
    PerfObject,
    acyclicity,
    cone,
    direct_sum,
    free,
    hom_complex,
    hom_to_module,
    shift,
    summand,
)
from .resolve import (
    DEFAULT_DEPTH,
    DEFAULT_SIZE,
    Finite,
    Periodic,
    action_quasi_iso_check,
    compress,
    minimal_resolution,
    smoothness_probe,
)
from .structure import find_module_iso

PASS, FAIL, UNDETERMINED = "Pass", "Fail", "Undetermined"


def combine(verdicts):
    verdicts = list(verdicts)
    if FAIL in verdicts:
        return FAIL
    if UNDETERMINED in verdicts:
        return UNDETERMINED
    return PASS


def _pairs(dims):
    return [[int(i), int(d)] for i, d in sorted(dims.items()) if d]


class CheckReport:
    def __init__(self, check, verdict, reason="", witness=None, evidence=None, children=None,
                 certificates=None):
        self.check = check
        self.verdict = verdict
        self.reason = reason
        self.witness = witness
        self.evidence = evidence or {}
        self.children = list(children or [])
        self.certificates = dict(certificates or {})

    @classmethod
    def composite(cls, check, children, evidence=None, certificates=None):
        v = combine(c.verdict for c in children)
        reason = "; ".join(f"{c.check}: {c.reason or c.verdict}" for c in children if c.verdict == v and v != PASS)
        certs = dict(certificates or {})
        for c in children:
            certs.update(c.certificates)
        return cls(check, v, reason, None, evidence, children, certs)

    def __bool__(self):
        return self.verdict == PASS

    def __repr__(self):
        tail = f", {self.reason}" if self.reason else ""
        return f"CheckReport({self.check}: {self.verdict}{tail})"

    def child(self, check):
        for c in self.children:
            if c.check == check:
                return c
        raise KeyError(check)

    def to_dict(self):
        d = {"check": self.check, "verdict": self.verdict}
        if self.reason:
            d["reason"] = self.reason
        if self.witness is not None:
            d["witness"] = self.witness
        if self.evidence:
            d["evidence"] = self.evidence
        if self.certificates:
            d["certificates"] = dict(sorted(self.certificates.items()))
        if self.children:
            d["children"] = [c.to_dict() for c in self.children]
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(d["check"], d["verdict"], d.get("reason", ""), d.get("witness"),
                   d.get("evidence"), [cls.from_dict(c) for c in d.get("children", [])],
                   d.get("certificates"))

    def summary(self, indent=0):
        pad = "  " * indent
        line = f"{pad}{self.check}: {self.verdict}"
        if self.reason and not self.children:
            line += f" ({self.reason})"
        lines = [line]
        for c in self.children:
            lines.append(c.summary(indent + 1))
        return "\n".join(lines)


# -- generation certificates -------------------------------------------------------------

class Shift:
    def __init__(self, of, n):
        self.of, self.n = of, int(n)

    def refs(self):
        return [self.of]


class Sum:
    def __init__(self, a, b):
        self.a, self.b = a, b

    def refs(self):
        return [self.a, self.b]


class Cone:
    """Cone of an explicit degree-0 morphism; entries index (target cell, source cell)."""

    def __init__(self, source, target, entries):
        self.source, self.target, self.entries = source, target, entries

    def refs(self):
        return [self.source, self.target]


class Summand:
    def __init__(self, of, idempotent):
        self.of, self.idempotent = of, idempotent

    def refs(self):
        return [self.of]


class GenerationCertificate:
    """Starts, replayable steps, and a claimed homotopy iso from a built object to ``target``.

    References are start names or ``#k`` for the result of step k.
    """

    def __init__(self, algebra, starts, steps, target, claim_source, claim):
        self.algebra = algebra
        self.starts = list(starts)
        self.steps = list(steps)
        self.target = target
        self.claim_source = claim_source
        self.claim = claim

    def lookup(self, built, ref, index):
        if isinstance(ref, str) and ref.startswith("#"):
            try:
                k = int(ref[1:])
            except ValueError:
                raise MalformedStep(index, f"bad reference {ref!r}")
            if not 0 <= k < len(built) - len(self.starts):
                raise MalformedStep(index, f"{ref} does not name an earlier step")
            return built[len(self.starts) + k]
        names = [n for n, _ in self.starts]
        if ref not in names:
            raise MalformedStep(index, f"unknown object {ref!r}")
        return built[names.index(ref)]

    def replay(self):
        """All objects built (starts first), then the claimed morphism."""
        A = self.algebra
        built = []
        for k, (name, x) in enumerate(self.starts):
            if x.algebra != A:
                raise MalformedStep(-1, f"start {name!r} lives over another algebra")
            built.append(x)
        for k, step in enumerate(self.steps):
            try:
                if isinstance(step, Shift):
                    out = shift(self.lookup(built, step.of, k), step.n)
                elif isinstance(step, Sum):
                    out = direct_sum(self.lookup(built, step.a, k), self.lookup(built, step.b, k))
                elif isinstance(step, Cone):
                    f = Morphism(self.lookup(built, step.source, k), self.lookup(built, step.target, k),
                                 step.entries, 0)
                    if not f.is_closed():
                        raise NotClosed("cone of a morphism that is not closed")
                    out = cone(f)
                elif isinstance(step, Summand):
                    out = summand(self.lookup(built, step.of, k), step.idempotent)
                else:
                    raise MalformedStep(k, f"unknown step {type(step).__name__}")
            except MalformedStep:
                raise
            except DGResError as exc:
                raise MalformedStep(k, str(exc))
            built.append(out)
        k = len(self.steps)
        src = self.lookup(built, self.claim_source, k)
        try:
            f = Morphism(src, self.target, self.claim, 0)
        except DGResError as exc:
            raise MalformedStep(k, f"claim: {exc}")
        if not f.is_closed():
            raise MalformedStep(k, "claim: morphism is not closed")
        return built, f

    def extend(self, e):
        starts = [(n, extend(x, e)) for n, x in self.starts]
        steps = []
        for s in self.steps:
            if isinstance(s, Cone):
                steps.append(Cone(s.source, s.target, {k: e.vector(v) for k, v in s.entries.items()}))
            elif isinstance(s, Summand):
                steps.append(Summand(s.of, {k: e.vector(v) for k, v in s.idempotent.items()}))
            else:
                steps.append(s)
        return GenerationCertificate(extend(self.algebra, e), starts, steps, extend(self.target, e),
                                     self.claim_source, {k: e.vector(v) for k, v in self.claim.items()})

    def to_dict(self, algebra_name="B"):
        A = self.algebra
        steps = []
        for s in self.steps:
            if isinstance(s, Shift):
                steps.append({"op": "shift", "of": s.of, "n": s.n})
            elif isinstance(s, Sum):
                steps.append({"op": "sum", "a": s.a, "b": s.b})
            elif isinstance(s, Cone):
                steps.append({"op": "cone", "source": s.source, "target": s.target,
                              "entries": encode_matrix(A, s.entries)})
            else:
                steps.append({"op": "summand", "of": s.of, "idempotent": encode_matrix(A, s.idempotent)})
        return {
            "algebra": algebra_name,
            "starts": [[n, encode_perf(x, algebra_name)] for n, x in self.starts],
            "steps": steps,
            "target": encode_perf(self.target, algebra_name),
            "claim": {"source": self.claim_source, "entries": encode_matrix(A, self.claim)},
        }

    def digest(self):
        return digest(self.to_dict())


def verify_generation_certificate(cert, name="certificate"):
    """Replays the certificate; Pass iff the claimed morphism is a homotopy iso.

    Raises MalformedStep when a step (or the claim) is ill-formed.
    """
    _, f = cert.replay()
    dims = acyclicity(cone(f))
    ev = {"rule": "certificate", "cone_cohomology": _pairs(dims), "steps": len(cert.steps), "starts": [n for n, _ in cert.starts]}
    certs = {name: cert.digest()}
    if dims:
        return CheckReport("generation-certificate", FAIL, "claimed morphism is not a homotopy iso",
                           {"cone_cohomology": _pairs(dims)}, ev, certificates=certs)
    return CheckReport("generation-certificate", PASS, "", None, ev, certificates=certs)


def _certificate_report(cert, name):
    try:
        return verify_generation_certificate(cert, name)
    except MalformedStep as exc:
        return CheckReport("generation-certificate", FAIL, f"MalformedStep at {exc.index}: {exc.reason}",
                           {"step": exc.index}, {"rule": "certificate", "malformed": exc.index},
                           certificates={name: cert.digest()})


# -- shared sub-checks -------------------------------------------------------------------------

def _status_report(check, res):
    s = res.status
    kind = type(s).__name__
    ev = {"rule": "status", "status": str(s), "kind": kind, "minimal": bool(res.minimal)}
    if isinstance(s, Finite):
        ev["length"] = s.length
        return CheckReport(check, PASS, "", None, ev)
    if isinstance(s, Periodic):
        ev["period"] = s.period
        ev["syzygy"] = s.syzygy
        return CheckReport(check, FAIL, f"infinite resolution, {s}", {"status": str(s)}, ev)
    return CheckReport(check, UNDETERMINED, f"no verdict within bounds, {s}", None, ev)


def _resolve_safely(M, depth_bound, size_bound):
    try:
        return minimal_resolution(M, depth_bound, size_bound), None
    except SizeBoundExceeded as exc:
        return None, str(exc)


def smoothness_report(B, depth_bound=DEFAULT_DEPTH, size_bound=DEFAULT_SIZE):
    try:
        probe = smoothness_probe(B, depth_bound, size_bound)
    except SizeBoundExceeded as exc:
        return CheckReport("smoothness", UNDETERMINED, str(exc), None, {"kind": "SizeBound"})
    rep = _status_report("smoothness", probe.result)
    if isinstance(probe.result.status, Periodic):
        rep.evidence["periodicity_verified"] = bool(probe.result.verify_periodicity())
        if not rep.evidence["periodicity_verified"]:
            rep.verdict, rep.reason = UNDETERMINED, "periodicity certificate did not verify"
    return rep


def _action_report(A, T, res):
    check = "action-quasi-iso"
    if res is None or not isinstance(res.status, Finite):
        return CheckReport(check, UNDETERMINED, "T has no finite model within bounds", None,
                           {"status": None if res is None else str(res.status)})
    q = action_quasi_iso_check(A, T, resolution=res)
    ev = {"rule": "quasi-iso", "source": _pairs(q.source_dims), "target": _pairs(q.target_dims),
          "ranks": _pairs(q.ranks)}
    if q.ok:
        return CheckReport(check, PASS, "", None, ev)
    return CheckReport(check, FAIL, q.reason, {"source": ev["source"], "target": ev["target"]}, ev)


def _hom_to_free_report(B, res):
    check = "hom-to-free"
    if res is None or not isinstance(res.status, Finite):
        return CheckReport(check, UNDETERMINED, "T has no finite model within bounds", None,
                           {"status": None if res is None else str(res.status)})
    dims = hom_complex(res.model, free(B)).dims()
    ev = {"rule": "hom-total", "dims": _pairs(dims), "total": sum(dims.values()), "exact_support": True}
    return CheckReport(check, PASS, "", None, ev)


def _right(T):
    return T.right_module()


def check_resolution_triple(a, b, t, depth_bound=DEFAULT_DEPTH, size_bound=DEFAULT_SIZE):
    """Smoothness of b, then conditions (1) H(a) = Hom(t, t[*]), (2) t compact, (3) Hom(t, b[*]) finite."""
    smooth = smoothness_report(b, depth_bound, size_bound)
    res, err = _resolve_safely(_right(t), depth_bound, size_bound)
    if res is None:
        compact = CheckReport("compactness", UNDETERMINED, err, None, {"kind": "SizeBound"})
    else:
        compact = _status_report("compactness", res)
    c1 = _action_report(a, t, res)
    c3 = _hom_to_free_report(b, res)
    c1.check, compact.check, c3.check = "condition-1", "condition-2", "condition-3"
    return CheckReport.composite("check-triple", [smooth, c1, compact, c3])


def _starts_are_t(cert, T):
    """Each start object's underlying module is strictly isomorphic to T as a right module."""
    N = _right(T)
    for _, x in cert.starts:
        X, _, _ = compress(x.underlying_module(), x.projector())
        if find_module_iso(X, N) is None:
            return False
    return bool(cert.starts)


def _witness_report(t, res, N):
    check = "generation"
    H = N.cohomology().dims()
    if not H:
        return CheckReport(check, UNDETERMINED, "witness has zero cohomology", None,
                           {"witness_cohomology": []})
    if res is None or not isinstance(res.status, Finite):
        return CheckReport(check, UNDETERMINED, "T has no finite model, so Ext(T, N) is not exhaustive",
                           None, {"witness_cohomology": _pairs(H)})
    ext = hom_complex_to_module_dims(res.model, N)
    ev = {"rule": "witness", "witness_cohomology": _pairs(H), "ext": _pairs(ext), "exhaustive": True}
    if ext:
        return CheckReport(check, UNDETERMINED, "witness has nonzero Ext from T", None, ev)
    return CheckReport(check, FAIL, "T does not generate: nonzero N with Ext(T, N) = 0",
                       {"module": list(N.names), "witness_cohomology": _pairs(H)}, ev)


def hom_complex_to_module_dims(x, N):
    return hom_to_module(x, N).dims()


def check_morita(a, b, t, certificate=None, witness=None, depth_bound=DEFAULT_DEPTH,
                 size_bound=DEFAULT_SIZE, certificate_name="certificate"):
    res, err = _resolve_safely(_right(t), depth_bound, size_bound)
    if res is None:
        compact = CheckReport("compactness", UNDETERMINED, err, None, {"kind": "SizeBound"})
    else:
        compact = _status_report("compactness", res)
    compact.check = "condition-1"
    c3 = _action_report(a, t, res)
    c3.check = "condition-3"
    if certificate is not None:
        # a failed or ill-formed certificate proves nothing about generation
        gen = _certificate_report(certificate, certificate_name)
        gen.evidence["starts_are_t"] = _starts_are_t(certificate, t)
        gen.evidence["conclusive"] = "pass-only"
        if gen.verdict == FAIL:
            gen.verdict = UNDETERMINED
        elif not gen.evidence["starts_are_t"]:
            gen.verdict, gen.reason = UNDETERMINED, "certificate does not start from T"
    elif witness is not None:
        gen = _witness_report(t, res, witness)
    else:
        gen = CheckReport("generation", UNDETERMINED, "no certificate or witness supplied")
    gen.check = "condition-2"
    return CheckReport.composite("check-morita", [compact, gen, c3])


# -- exceptional collections -----------------------------------------------------------------

def _in_window(dims, window):
    lo, hi = window
    return {i: d for i, d in dims.items() if lo <= i <= hi}


def check_exceptional_collection(b, objects, window=(-10, 10)):
    pairs = []
    for i, x in enumerate(objects):
        for j, y in enumerate(objects):
            if j < i:
                continue
            if j == i:
                dims = hom_complex(x, x).dims()
                w = _in_window(dims, window)
                ok = w == {0: 1}
                rep = CheckReport("exceptional-pair", PASS if ok else FAIL,
                                  "" if ok else f"End(E{i}) is not the field",
                                  None if ok else {"pair": [i, i], "dims": _pairs(w)},
                                  {"rule": "pair", "pair": [i, i], "dims": _pairs(w), "support": _pairs(dims),
                                   "window": list(window)})
            else:
                dims = hom_complex(y, x).dims()
                w = _in_window(dims, window)
                ok = not w
                wit = None
                if not ok:
                    deg = min(w)
                    wit = {"pair": [j, i], "degree": deg, "dim": w[deg]}
                rep = CheckReport("exceptional-pair", PASS if ok else FAIL,
                                  "" if ok else f"Hom(E{j}, E{i}[{min(w)}]) has dimension {w[min(w)]}",
                                  wit, {"rule": "pair", "pair": [j, i], "dims": _pairs(w), "support": _pairs(dims),
                                        "window": list(window)})
            pairs.append(rep)
    return CheckReport.composite("check-exc", pairs)


def _matches_listed(x, objects):
    for y in objects:
        if x.algebra == y.algebra and x.twist == y.twist and x.idempotent == y.idempotent \
                and len(x.cells) == len(y.cells):
            d = {a - b for a, b in zip(x.cells, y.cells)}
            if len(d) <= 1 and (not d or shift(y, next(iter(d))) == x):
                return True
    return False


def check_full_exceptional_collection(b, objects, cert, window=(-10, 10), certificate_name="certificate"):
    exc = check_exceptional_collection(b, objects, window)
    gen = _certificate_report(cert, certificate_name)
    listed = [_matches_listed(x, objects) for _, x in cert.starts]
    target_ok = cert.target == free(b)
    starts = CheckReport("certificate-starts", PASS if all(listed) and target_ok else FAIL,
                         "" if all(listed) and target_ok else "certificate starts or target do not match",
                         None, {"rule": "starts", "listed": listed, "target_is_free": target_ok})
    return CheckReport.composite("check-full-exc", [exc, starts, gen])


# -- base change tasks -------------------------------------------------------------------------

def _comparison_report(check, rep):
    ev = {"rule": "comparison", "window": list(rep.window), "source": _pairs(rep.source), "target": _pairs(rep.target)}
    if rep.ok:
        return CheckReport(check, PASS, "", None, ev)
    return CheckReport(check, FAIL, "dimensions differ across the extension", None, ev)


def _guarded(check, fn):
    try:
        return fn()
    except WindowNotGuaranteed as exc:
        return CheckReport(check, UNDETERMINED, str(exc), None, {})
    except SizeBoundExceeded as exc:
        return CheckReport(check, UNDETERMINED, str(exc), None, {})


def check_hom_bc_report(x, f, e, window=(-10, 10), depth_bound=DEFAULT_DEPTH, size_bound=DEFAULT_SIZE):
    return _guarded("check-hom-bc", lambda: _comparison_report(
        "check-hom-bc", check_hom_base_change(x, f, e, window, depth_bound, size_bound)))


def check_adjunction_report(x, f, e, window=(0, 6), depth_bound=DEFAULT_DEPTH, size_bound=DEFAULT_SIZE):
    return _guarded("check-adjunction", lambda: _comparison_report(
        "check-adjunction", check_adjunction_dims(x, f, e, window, depth_bound, size_bound)))


def base_change_report(obj, e):
    try:
        out = extend(obj, e)
    except DGResError as exc:
        return CheckReport("base-change", FAIL, str(exc)), None
    return CheckReport("base-change", PASS, "", None, {"object": type(obj).__name__,
                                                     "degree": e.degree}), out


# -- tasks and transport -----------------------------------------------------------------------

class Task:
    """A checker task: ``kind`` plus keyword arguments holding the actual objects."""

    KINDS = ("check-triple", "check-morita", "check-exc", "check-full-exc", "check-hom-bc",
             "check-adjunction", "base-change", "smoothness", "transport")

    def __init__(self, kind, **args):
        if kind not in self.KINDS:
            raise ValueError(f"unknown task kind {kind!r}")
        self.kind = kind
        self.args = args

    def __repr__(self):
        return f"Task({self.kind})"

    def run(self, depth_bound=DEFAULT_DEPTH, size_bound=DEFAULT_SIZE):
        a = self.args
        k = self.kind
        bounds = dict(depth_bound=depth_bound, size_bound=size_bound)
        if k == "check-triple":
            return check_resolution_triple(a["a"], a["b"], a["t"], **bounds)
        if k == "check-morita":
            return check_morita(a["a"], a["b"], a["t"], a.get("certificate"), a.get("witness"),
                                certificate_name=a.get("certificate_name", "certificate"), **bounds)
        if k == "check-exc":
            return check_exceptional_collection(a["b"], a["objects"], a.get("window", (-10, 10)))
        if k == "check-full-exc":
            return check_full_exceptional_collection(a["b"], a["objects"], a["certificate"],
                                                     a.get("window", (-10, 10)),
                                                     a.get("certificate_name", "certificate"))
        if k == "check-hom-bc":
            return check_hom_bc_report(a["x"], a["f"], a["extension"], a.get("window", (-10, 10)), **bounds)
        if k == "check-adjunction":
            return check_adjunction_report(a["x"], a["f"], a["extension"], a.get("window", (0, 6)), **bounds)
        if k == "base-change":
            return base_change_report(a["object"], a["extension"])[0]
        if k == "smoothness":
            return smoothness_report(a["b"], **bounds)
        return transport_and_recheck(a["task"], a["extension"], **bounds)

    def extend(self, e):
        args = {}
        for key, v in self.args.items():
            args[key] = _extend_arg(v, e)
        return Task(self.kind, **args)


_EXTENDABLE = (DGAlgebra, DGModule, DGBimodule, PerfObject, Morphism, GenerationCertificate)


def _extend_arg(v, e):
    if isinstance(v, _EXTENDABLE):
        return extend(v, e)
    if isinstance(v, list):
        return [_extend_arg(x, e) for x in v]
    return v


def transport_and_recheck(task, e, depth_bound=DEFAULT_DEPTH, size_bound=DEFAULT_SIZE):
    """Run ``task`` over k and its extension over k'; a Pass -> Fail transition is an anomaly."""
    if task.kind in ("check-hom-bc", "check-adjunction", "base-change", "transport"):
        raise ValueError(f"{task.kind} tasks are already about base change")
    low = task.run(depth_bound, size_bound)
    high = task.extend(e).run(depth_bound, size_bound)
    low.check, high.check = "over-base", "over-extension"
    anomaly = low.verdict == PASS and high.verdict == FAIL
    rep = CheckReport.composite("transport", [low, high],
                                {"kind": task.kind, "degree": e.degree, "anomaly": anomaly,
                                 "transition": f"{low.verdict}->{high.verdict}"})
    if anomaly:
        rep.reason = "Pass over the base but Fail over the extension"
    return rep


# -- re-derivation from evidence -------------------------------------------------------------

def _dims(pairs):
    return {int(i): int(d) for i, d in pairs}


def rederive(d):
    """The verdict implied by a report dictionary's own evidence (no recomputation)."""
    kids = d.get("children", [])
    if kids:
        return combine(rederive(c) for c in kids)
    ev = d.get("evidence", {})
    rule = ev.get("rule")
    if rule == "status":
        if ev["kind"] == "Finite":
            return PASS
        if ev["kind"] == "Periodic" and ev.get("periodicity_verified", True):
            return FAIL
        return UNDETERMINED
    if rule == "quasi-iso":
        s, t, r = _dims(ev["source"]), _dims(ev["target"]), _dims(ev["ranks"])
        ok = all(s.get(i, 0) == t.get(i, 0) == r.get(i, 0) for i in set(s) | set(t) | set(r))
        return PASS if ok else FAIL
    if rule == "hom-total":
        ok = ev["total"] == sum(_dims(ev["dims"]).values()) and ev.get("exact_support")
        return PASS if ok else UNDETERMINED
    if rule == "witness":
        if ev["witness_cohomology"] and ev.get("exhaustive") and not ev.get("ext"):
            return FAIL
        return UNDETERMINED
    if rule == "certificate":
        good = "malformed" not in ev and not ev.get("cone_cohomology")
        if ev.get("conclusive") == "pass-only":
            return PASS if good and ev.get("starts_are_t") else UNDETERMINED
        return PASS if good else FAIL
    if rule == "pair":
        i, j = ev["pair"]
        w = {k: v for k, v in _dims(ev["dims"]).items() if v}
        return PASS if (w == {0: 1} if i == j else not w) else FAIL
    if rule == "starts":
        return PASS if all(ev["listed"]) and ev["target_is_free"] else FAIL
    if rule == "comparison":
        return PASS if _dims(ev["source"]) == _dims(ev["target"]) else FAIL
    return d["verdict"]
