"""Scalar extension along a prefix of a field tower, restriction, and the comparison checks."""
from __future__ import annotations

from dataclasses import dataclass

from .dg import DGAlgebra, DGBimodule, DGModule, validate_algebra, validate_bimodule, validate_module
from .errors import NotAPrefixTower, TowerMismatch
from .perf import Morphism, PerfObject
from .resolve import DEFAULT_DEPTH, DEFAULT_SIZE, ext_dims


class ExtensionMap:
    def __init__(self, source, target):
        if not source.is_prefix_of(target) or source.height > target.height:
            raise NotAPrefixTower(f"{source} is not a prefix of {target}")
        self.source = source
        self.target = target
        self.degree = target.degree_over(source)
        self._alg = {}

    def __repr__(self):
        return f"ExtensionMap({self.source} -> {self.target}, degree {self.degree})"

    def __eq__(self, other):
        return isinstance(other, ExtensionMap) and (self.source, self.target) == (other.source, other.target)

    def scalar(self, c):
        return self.target.embed(c, self.source)

    def vector(self, v):
        emb = self.target.embed
        src = self.source
        return {k: emb(c, src) for k, c in v.items()}

    def compose(self, other):
        """self followed by other (k -> k' -> k'')."""
        if self.target != other.source:
            raise NotAPrefixTower("extensions do not compose")
        return ExtensionMap(self.source, other.target)


def _check_source(field, e):
    if field != e.source:
        raise NotAPrefixTower(f"object lives over {field}, extension starts at {e.source}")


def extend(obj, e, check=True):
    """Base change of an algebra, module, bimodule, perfect object or morphism.

    Bases and names are kept; only scalars are embedded.  Objects with an
    ``extend`` method (certificates) handle themselves.
    """
    if hasattr(obj, "extend") and not isinstance(obj, (DGAlgebra, DGModule, DGBimodule, PerfObject, Morphism)):
        return obj.extend(e)
    if isinstance(obj, DGAlgebra):
        return _extend_algebra(obj, e, check)
    if isinstance(obj, DGModule):
        _check_source(obj.field, e)
        A = _extend_algebra(obj.algebra, e, check)
        M = DGModule(A, obj.names, obj.degrees,
                     [[e.vector(c) for c in cols] for cols in obj.act],
                     [e.vector(c) for c in obj.diff])
        if check:
            validate_module(M).raise_for("extended module")
        return M
    if isinstance(obj, DGBimodule):
        _check_source(obj.field, e)
        L = _extend_algebra(obj.left, e, check)
        R = _extend_algebra(obj.right, e, check)
        T = DGBimodule(L, R, obj.names, obj.degrees,
                       [[e.vector(c) for c in cols] for cols in obj.lact],
                       [[e.vector(c) for c in cols] for cols in obj.ract],
                       [e.vector(c) for c in obj.diff])
        if check:
            validate_bimodule(T).raise_for("extended bimodule")
        return T
    if isinstance(obj, PerfObject):
        _check_source(obj.field, e)
        A = _extend_algebra(obj.algebra, e, check)
        idem = None if obj.idempotent is None else {k: e.vector(v) for k, v in obj.idempotent.items()}
        return PerfObject(A, obj.cells, {k: e.vector(v) for k, v in obj.twist.items()}, idem, check=check)
    if isinstance(obj, Morphism):
        return Morphism(extend(obj.source, e, check), extend(obj.target, e, check),
                        {k: e.vector(v) for k, v in obj.entries.items()}, obj.degree, check=False)
    raise TypeError(f"cannot extend {type(obj).__name__}")


def _extend_algebra(A, e, check=True):
    _check_source(A.field, e)
    key = id(A)
    hit = e._alg.get(key)
    if hit is not None and hit[0] is A:
        return hit[1]
    B = DGAlgebra(e.target, A.names, A.degrees, e.vector(A.unit_vector),
                  {k: e.vector(v) for k, v in A.mul.items()}, [e.vector(v) for v in A.diff])
    if A.factors is not None:
        B.factors = tuple(_extend_algebra(X, e, check) for X in A.factors)
    if getattr(A, "idempotents", None):
        B.idempotents = [e.vector(v) for v in A.idempotents]
    if check:
        validate_algebra(B).raise_for("extended algebra")
    e._alg[key] = (A, B)
    return B


def descend_algebra(A, e):
    """The algebra over e.source whose extension is A, if its constants lie in e.source."""
    F, k = e.target, e.source

    def down(v):
        out = {}
        for i, c in v.items():
            cs = F.coords(c, k)
            if any(not k.is_zero(x) for x in cs[1:]):
                raise TowerMismatch("structure constants do not descend")
            out[i] = cs[0]
        return out

    return DGAlgebra(k, A.names, A.degrees, down(A.unit_vector),
                     {key: down(v) for key, v in A.mul.items()}, [down(v) for v in A.diff])


def restrict(M, e, A=None):
    """The forgetful image of a module over A_{k'}: basis m*w for w in a k-basis of k'."""
    if M.field != e.target:
        raise NotAPrefixTower(f"module lives over {M.field}, extension ends at {e.target}")
    F, k = e.target, e.source
    A = A if A is not None else descend_algebra(M.algebra, e)
    omegas = F.basis_over(k)
    m = len(omegas)

    def down(v):
        """k'-vector in M -> k-vector in restrict(M)."""
        out = {}
        for i, c in v.items():
            for s, x in enumerate(F.coords(c, k)):
                if not k.is_zero(x):
                    out[i * m + s] = x
        return out

    def times(v, w):
        return {i: F.mul(c, w) for i, c in v.items()}

    names, degrees = [], []
    for i, name in enumerate(M.names):
        for s in range(m):
            names.append(f"{name}*w{s}" if m > 1 else name)
            degrees.append(M.degrees[i])
    act = []
    for a in range(A.dim):
        cols = []
        for i in range(M.dim):
            for w in omegas:
                cols.append(down(times(M.act[a][i], w)))
        act.append(cols)
    diff = []
    for i in range(M.dim):
        for w in omegas:
            diff.append(down(times(M.diff[i], w)))
    return DGModule(A, names, degrees, act, diff)


@dataclass
class ComparisonReport:
    ok: bool
    window: tuple
    source: dict
    target: dict
    note: str = ""

    def __bool__(self):
        return self.ok


def check_hom_base_change(x, f, e, window=(-10, 10), depth_bound=DEFAULT_DEPTH, size_bound=DEFAULT_SIZE):
    """dim_k' Ext^i(x_k', f_k') = dim_k Ext^i(x, f) for every i in the window."""
    lhs = dict(ext_dims(x, f, window, depth_bound, size_bound))
    rhs = dict(ext_dims(extend(x, e), extend(f, e), window, depth_bound, size_bound))
    return ComparisonReport(lhs == rhs, window, lhs, rhs)


def check_adjunction_dims(x, f, e, window=(0, 6), depth_bound=DEFAULT_DEPTH, size_bound=DEFAULT_SIZE):
    """[k':k] dim_k' Ext^i(x_k', f) = dim_k Ext^i(x, restrict(f)) for i in the window."""
    xe = extend(x, e)
    over_big = ext_dims(xe, f, window, depth_bound, size_bound)
    lhs = {i: e.degree * d for i, d in over_big.items()}
    base_alg = x.algebra
    rhs = dict(ext_dims(x, restrict(f, e, base_alg), window, depth_bound, size_bound))
    return ComparisonReport(lhs == rhs, window, lhs, rhs)
