"""Strict perfect objects: one-sided twisted complexes with optional idempotents.

A twisted complex over A has cells ``A[n_1], ..., A[n_r]``.  The generator
``e_j`` of cell j sits in degree ``-n_j`` and

    d(e_j) = sum_i e_i delta[i, j],     delta[i, j] = 0 unless i > j,

with ``delta[i, j]`` homogeneous of degree ``n_i - n_j + 1``.  Right
linearity and the Leibniz rule give ``d(e_j a) = d(e_j) a + (-1)^{n_j} e_j da``,
so d^2 = 0 is the Maurer-Cartan equation

    (delta delta)[l, j] + (-1)^{n_l} d(delta[l, j]) = 0.

A morphism of degree p is a matrix ``phi[i, j]`` of algebra elements with
``phi(e_j) = sum_i e'_i phi[i, j]``; composition is the matrix product.
"""
from __future__ import annotations

from .dg import DGModule, homogeneous_degree, sign
from .errors import AlgebraMismatch, NotClosed, ValidationError, WrongDegree
from .linalg import Cohomology, Decomposer, FiniteComplex, Matrix, RowReducer, vadd


def _neg(F, v):
    return {k: F.neg(c) for k, c in v.items()}


def mat_mul(A, X, Y, inner):
    """Product of sparse matrices of algebra elements; ``inner`` is the shared dimension."""
    F = A.field
    rows = {}
    for (i, k), v in X.items():
        rows.setdefault(k, []).append((i, v))
    out = {}
    for (k, j), w in Y.items():
        for i, v in rows.get(k, ()):
            p = A.product(v, w)
            if p:
                cur = vadd(F, out.get((i, j), {}), p)
                if cur:
                    out[(i, j)] = cur
                else:
                    out.pop((i, j), None)
    return out


def mat_add(F, X, Y, c=None):
    out = dict(X)
    for key, v in Y.items():
        cur = vadd(F, out.get(key, {}), v, c)
        if cur:
            out[key] = cur
        else:
            out.pop(key, None)
    return out


def identity_matrix(A, r):
    return {(i, i): dict(A.unit_vector) for i in range(r)}


class PerfObject:
    """A twisted complex together with a strict idempotent (None means identity)."""

    def __init__(self, algebra, cells, twist=None, idempotent=None, check=True):
        self.algebra = algebra
        self.cells = tuple(int(n) for n in cells)
        self.twist = {k: dict(v) for k, v in (twist or {}).items() if v}
        self.idempotent = None
        if idempotent is not None:
            idem = {k: dict(v) for k, v in idempotent.items() if v}
            if idem != identity_matrix(algebra, len(self.cells)):
                self.idempotent = idem
        if check:
            self.validate()

    @property
    def rank(self):
        return len(self.cells)

    @property
    def field(self):
        return self.algebra.field

    def __eq__(self, other):
        return (
            isinstance(other, PerfObject)
            and self.algebra == other.algebra
            and self.cells == other.cells
            and self.twist == other.twist
            and self.idempotent == other.idempotent
        )

    def __repr__(self):
        tag = ", summand" if self.idempotent is not None else ""
        return f"PerfObject(cells={list(self.cells)}{tag})"

    def idempotent_matrix(self):
        if self.idempotent is None:
            return identity_matrix(self.algebra, self.rank)
        return self.idempotent

    def validate(self):
        A = self.algebra
        F = A.field
        n = self.cells
        for (i, j), v in self.twist.items():
            if not (0 <= j < i < self.rank):
                raise ValidationError("twisted complex", "strictly lower triangular", (i, j))
            if homogeneous_degree(A.degrees, v) != n[i] - n[j] + 1:
                raise ValidationError("twisted complex", "twist entry degree", (i, j))
        sq = mat_mul(A, self.twist, self.twist, self.rank)
        for (l, j), v in self.twist.items():
            sq = mat_add(F, sq, {(l, j): A.d(v)}, F.one if sign(n[l]) == 1 else F.neg(F.one))
        if sq:
            raise ValidationError("twisted complex", "Maurer-Cartan equation", min(sq))
        if self.idempotent is not None:
            e = Morphism(self, self, self.idempotent, 0, check=False)
            for (i, j), v in e.entries.items():
                if homogeneous_degree(A.degrees, v) != n[i] - n[j]:
                    raise ValidationError("perfect object", "idempotent has degree 0", (i, j))
            if e.differential().entries:
                raise ValidationError("perfect object", "idempotent is closed", None)
            if mat_mul(A, e.entries, e.entries, self.rank) != e.entries:
                raise ValidationError("perfect object", "idempotent squares to itself", None)
        return self

    # -- underlying module ---------------------------------------------------

    def underlying_module(self):
        """The DG module sum_i e_i A; basis ``c{i}.{b}`` at index i*dim(A)+b."""
        if getattr(self, "_module", None) is None:
            self._module = _underlying(self)
        return self._module

    def projector(self):
        """The idempotent as a column map on the underlying module (None for identity)."""
        if self.idempotent is None:
            return None
        return module_action_of_matrix(self.algebra, self.idempotent, self.rank, self.rank)


def _underlying(x):
    A = x.algebra
    F = A.field
    nA = A.dim
    names, degrees, diff = [], [], []
    act = [[] for _ in range(nA)]
    by_col = {}
    for (l, i), v in x.twist.items():
        by_col.setdefault(i, []).append((l, v))
    for i, n in enumerate(x.cells):
        off = i * nA
        s = sign(n)
        for b in range(nA):
            names.append(f"c{i}.{A.names[b]}")
            degrees.append(A.degrees[b] - n)
            col = {}
            for l, v in by_col.get(i, ()):
                p = A.product(v, {b: F.one})
                col = vadd(F, col, {l * nA + k: c for k, c in p.items()})
            db = A.diff[b]
            if db:
                col = vadd(F, col, {off + k: (c if s == 1 else F.neg(c)) for k, c in db.items()})
            diff.append(col)
        for a in range(nA):
            rm = A.rmul(a)
            act[a].extend({off + k: c for k, c in rm[b].items()} for b in range(nA))
    return DGModule(A, names, degrees, act, diff)


def module_action_of_matrix(A, M, rows, cols):
    """Column map U(x) -> U(y) of the right-linear map with matrix M."""
    F = A.field
    nA = A.dim
    by_col = {}
    for (i, j), v in M.items():
        by_col.setdefault(j, []).append((i, v))
    out = []
    for j in range(cols):
        for b in range(nA):
            col = {}
            for i, v in by_col.get(j, ()):
                p = A.product(v, {b: F.one})
                col = vadd(F, col, {i * nA + k: c for k, c in p.items()})
            out.append(col)
    return out


# -- constructors -------------------------------------------------------------

def free(A, n=0):
    """The free module A[n] as a one-cell twisted complex."""
    return PerfObject(A, [n])


def zero_object(A):
    return PerfObject(A, [])


def shift(x, n):
    F = x.field
    s = sign(n)
    twist = x.twist if s == 1 else {k: _neg(F, v) for k, v in x.twist.items()}
    return PerfObject(x.algebra, [c + n for c in x.cells], twist, x.idempotent, check=False)


def direct_sum(x, y):
    if x.algebra != y.algebra:
        raise AlgebraMismatch("direct sum of objects over different algebras")
    r = x.rank
    twist = dict(x.twist)
    twist.update({(i + r, j + r): v for (i, j), v in y.twist.items()})
    idem = None
    if x.idempotent is not None or y.idempotent is not None:
        idem = dict(x.idempotent_matrix())
        idem.update({(i + r, j + r): v for (i, j), v in y.idempotent_matrix().items()})
    return PerfObject(x.algebra, x.cells + y.cells, twist, idem, check=False)


def summand(x, e):
    """The summand of x cut out by a strict idempotent ``e`` (an endomorphism of x)."""
    if isinstance(e, Morphism):
        e = e.entries
    A = x.algebra
    # e must live inside the existing summand
    ex = x.idempotent_matrix()
    if mat_mul(A, e, ex, x.rank) != {k: v for k, v in e.items() if v} or \
            mat_mul(A, ex, e, x.rank) != {k: v for k, v in e.items() if v}:
        raise ValidationError("perfect object", "idempotent lies in the summand", None)
    return PerfObject(A, x.cells, x.twist, e)


def cone(f):
    """Cone of a closed degree-0 morphism: cells of x[1] followed by cells of y."""
    if f.degree != 0:
        raise WrongDegree(f"cone needs a degree 0 morphism, got {f.degree}")
    if not f.is_closed():
        raise NotClosed("cone of a morphism that is not closed")
    x, y = f.source, f.target
    F = x.field
    r = x.rank
    f = f.compressed()
    twist = {k: _neg(F, v) for k, v in x.twist.items()}
    twist.update({(i + r, j + r): v for (i, j), v in y.twist.items()})
    twist.update({(i + r, j): v for (i, j), v in f.entries.items()})
    idem = None
    if x.idempotent is not None or y.idempotent is not None:
        idem = dict(x.idempotent_matrix())
        idem.update({(i + r, j + r): v for (i, j), v in y.idempotent_matrix().items()})
    return PerfObject(x.algebra, [c + 1 for c in x.cells] + list(y.cells), twist, idem)


# -- morphisms --------------------------------------------------------------------

class Morphism:
    """Right-linear map x -> y of a fixed degree, as a matrix of algebra elements."""

    def __init__(self, source, target, entries, degree=0, check=True):
        if source.algebra != target.algebra:
            raise AlgebraMismatch("morphism between objects over different algebras")
        self.source = source
        self.target = target
        self.degree = degree
        self.entries = {k: dict(v) for k, v in entries.items() if v}
        if check:
            A = source.algebra
            for (i, j), v in self.entries.items():
                if not (0 <= i < target.rank and 0 <= j < source.rank):
                    raise WrongDegree(f"entry ({i}, {j}) outside the matrix")
                want = degree - source.cells[j] + target.cells[i]
                if homogeneous_degree(A.degrees, v) != want:
                    raise WrongDegree(f"entry ({i}, {j}) should have degree {want}")

    @classmethod
    def identity(cls, x):
        return cls(x, x, x.idempotent_matrix(), 0, check=False)

    @classmethod
    def zero(cls, x, y, degree=0):
        return cls(x, y, {}, degree, check=False)

    def __eq__(self, other):
        return (isinstance(other, Morphism) and self.source == other.source
                and self.target == other.target and self.degree == other.degree
                and self.entries == other.entries)

    def __repr__(self):
        return f"Morphism({self.source!r} -> {self.target!r}, degree {self.degree})"

    def compose(self, other):
        """self o other."""
        if other.target != self.source:
            raise AlgebraMismatch("composition of non-composable morphisms")
        A = self.source.algebra
        return Morphism(other.source, self.target,
                        mat_mul(A, self.entries, other.entries, self.source.rank),
                        self.degree + other.degree, check=False)

    def __add__(self, other):
        return Morphism(self.source, self.target,
                        mat_add(self.source.field, self.entries, other.entries),
                        self.degree, check=False)

    def scaled(self, c):
        F = self.source.field
        c = F.coerce(c)
        return Morphism(self.source, self.target,
                        {k: {b: F.mul(c, x) for b, x in v.items()} for k, v in self.entries.items()}
                        if not F.is_zero(c) else {}, self.degree, check=False)

    def differential(self):
        """D(phi) = delta' phi + S' d(phi) - (-1)^p phi delta."""
        x, y = self.source, self.target
        A = x.algebra
        F = A.field
        out = mat_mul(A, y.twist, self.entries, y.rank)
        for (i, j), v in self.entries.items():
            dv = A.d(v)
            if dv:
                out = mat_add(F, out, {(i, j): dv if sign(y.cells[i]) == 1 else _neg(F, dv)})
        right = mat_mul(A, self.entries, x.twist, x.rank)
        out = mat_add(F, out, right, F.neg(F.one) if sign(self.degree) == 1 else F.one)
        return Morphism(x, y, out, self.degree + 1, check=False)

    def is_closed(self):
        return not self.differential().entries

    def compressed(self):
        """g o phi o e for the idempotents of target and source."""
        A = self.source.algebra
        m = self.entries
        if self.source.idempotent is not None:
            m = mat_mul(A, m, self.source.idempotent, self.source.rank)
        if self.target.idempotent is not None:
            m = mat_mul(A, self.target.idempotent, m, self.target.rank)
        return Morphism(self.source, self.target, m, self.degree, check=False)

    def to_vector(self):
        """Coordinates in the hom space of :func:`hom_complex`."""
        nA = self.source.algebra.dim
        dimN = self.target.rank * nA
        v = {}
        for (i, j), w in self.entries.items():
            for b, c in w.items():
                v[j * dimN + i * nA + b] = c
        return v

    @classmethod
    def from_vector(cls, x, y, v, degree):
        nA = x.algebra.dim
        dimN = y.rank * nA
        entries = {}
        for idx, c in v.items():
            j, rest = divmod(idx, dimN)
            i, b = divmod(rest, nA)
            entries.setdefault((i, j), {})[b] = c
        return cls(x, y, entries, degree, check=False)


# -- hom complexes --------------------------------------------------------------------

class HomComplex:
    """Hom(x, N) for a perfect x and a DG module N, optionally compressed by projectors.

    Basis of the uncompressed space: (j, m) for cell j of x and basis m of N,
    at index ``j * dim N + m`` and degree ``deg m + n_j``; it stands for the
    map with ``e_j -> m`` and every other generator to zero.
    """

    def __init__(self, x, N, left=None):
        if x.algebra != N.algebra:
            raise AlgebraMismatch("hom complex between objects over different algebras")
        self.source = x
        self.module = N
        F = N.field
        self.field = F
        dimN = N.dim
        self.dimN = dimN
        cells = x.cells
        by_row = {}
        for (k, l), v in x.twist.items():
            by_row.setdefault(k, []).append((l, v))
        degrees = []
        diff = []
        for j, n in enumerate(cells):
            off = j * dimN
            for m in range(dimN):
                p = N.degrees[m] + n
                degrees.append(p)
                col = {off + k: c for k, c in N.diff[m].items()}
                s = F.neg(F.one) if sign(p) == 1 else F.one
                for l, v in by_row.get(j, ()):
                    w = N.act_elem({m: F.one}, v)
                    col = vadd(F, col, {l * dimN + k: c for k, c in w.items()}, s)
                diff.append(col)
        self.degrees = degrees
        self.diff = diff
        proj = None
        if x.idempotent is not None or left is not None:
            proj = self._projector(x, N, left)
        self.proj = proj
        self._build(proj)

    def _projector(self, x, N, left):
        F = self.field
        dimN = self.dimN
        e = x.idempotent_matrix()
        by_row = {}
        for (k, l), v in e.items():
            by_row.setdefault(k, []).append((l, v))
        out = []
        for j in range(x.rank):
            for m in range(dimN):
                # (phi e)(e_l) = sum_k phi(e_k) e[k, l] with phi(e_j) = m
                col = {}
                for l, v in by_row.get(j, ()):
                    w = N.act_elem({m: F.one}, v)
                    if left is not None:
                        w2 = {}
                        for k, c in w.items():
                            w2 = vadd(F, w2, left[k], c)
                        w = w2
                    col = vadd(F, col, {l * dimN + k: c for k, c in w.items()})
                out.append(col)
        return out

    def apply_proj(self, v):
        if self.proj is None:
            return v
        F = self.field
        out = {}
        for k, c in v.items():
            out = vadd(F, out, self.proj[k], c)
        return out

    def d(self, v):
        F = self.field
        out = {}
        for k, c in v.items():
            if self.diff[k]:
                out = vadd(F, out, self.diff[k], c)
        return out

    def _build(self, proj):
        F = self.field
        by_degree = {}
        for i, p in enumerate(self.degrees):
            by_degree.setdefault(p, []).append(i)
        basis = {}
        if proj is None:
            for p, idx in by_degree.items():
                basis[p] = [{i: F.one} for i in idx]
        else:
            for p, idx in by_degree.items():
                red = RowReducer(F)
                vecs = [proj[i] for i in idx if proj[i] and red.add(proj[i])]
                if vecs:
                    basis[p] = vecs
        self.basis = basis
        self._dec = {}
        dims = {p: len(v) for p, v in basis.items()}
        diffs = {}
        for p, vecs in basis.items():
            cols = [self.local_coords(p + 1, self.d(v)) for v in vecs]
            diffs[p] = Matrix(F, dims.get(p + 1, 0), len(vecs), cols)
        self.finite_complex = FiniteComplex(F, dims, diffs)
        self.cohomology = Cohomology(self.finite_complex)

    def local_coords(self, p, v):
        if not v:
            return {}
        if self.proj is None:
            idx = self._index(p)
            return {idx[k]: c for k, c in v.items()}
        if p not in self._dec:
            self._dec[p] = Decomposer(self.field, self.basis.get(p, []))
        return self._dec[p].coords(v)

    def _index(self, p):
        key = ("index", p)
        if key not in self._dec:
            self._dec[key] = {next(iter(v)): k for k, v in enumerate(self.basis.get(p, []))}
        return self._dec[key]

    def to_global(self, p, local):
        F = self.field
        out = {}
        vecs = self.basis[p]
        for k, c in local.items():
            out = vadd(F, out, vecs[k], c)
        return out

    def dims(self):
        return self.cohomology.dims()

    def ext_dims(self, window=None):
        d = self.dims()
        if window is None:
            return dict(sorted(d.items()))
        lo, hi = window
        return {i: d.get(i, 0) for i in range(lo, hi + 1)}

    def support(self):
        return sorted(self.dims())

    def is_acyclic(self):
        return self.cohomology.is_zero()

    def cocycle_reps(self, p):
        return [self.to_global(p, z) for z in self.cohomology.reps.get(p, [])]

    def class_of(self, v):
        """Coordinates of the class of a cocycle (global vector) in its degree."""
        if not v:
            return {}
        p = homogeneous_degree(self.degrees, v)
        if p not in self.cohomology.reps:
            return {}
        return self.cohomology.class_of(p, self.local_coords(p, v))


def hom_to_module(x, N, left=None):
    return HomComplex(x, N, left)


def hom_complex(x, y):
    """Hom(x, y) between perfect objects, compressed through both idempotents."""
    if x.algebra != y.algebra:
        raise AlgebraMismatch("hom complex between objects over different algebras")
    return HomComplex(x, y.underlying_module(), y.projector())


def ext_dims(x, y, window=(-10, 10)):
    return hom_complex(x, y).ext_dims(window)


class IsoReport:
    def __init__(self, iso, dims):
        self.iso = iso
        self.dims = dims  # cohomology dims of the compressed cone (empty iff acyclic)

    def __bool__(self):
        return self.iso

    def __repr__(self):
        return f"IsoReport(iso={self.iso}, cone_cohomology={self.dims})"


def acyclicity(x):
    """Cohomology dims of the underlying module of x cut down by its idempotent."""
    U = x.underlying_module()
    F = x.field
    proj = x.projector()
    basis = {}
    for i, p in enumerate(U.degrees):
        v = {i: F.one} if proj is None else proj[i]
        if v:
            basis.setdefault(p, []).append(v)
    dims, diffs, decs = {}, {}, {}
    for p, vecs in basis.items():
        red = RowReducer(F)
        basis[p] = [v for v in vecs if red.add(v)]
        dims[p] = len(basis[p])
    for p, vecs in basis.items():
        dec = decs.setdefault(p + 1, Decomposer(F, basis.get(p + 1, [])))
        cols = [dec.coords(U.d(v)) if U.d(v) else {} for v in vecs]
        diffs[p] = Matrix(F, dims.get(p + 1, 0), len(vecs), cols)
    return Cohomology(FiniteComplex(F, dims, diffs)).dims()


def is_homotopy_iso(f):
    """A closed degree-0 morphism is a homotopy equivalence iff its cone is acyclic."""
    if f.degree != 0:
        raise WrongDegree("homotopy isomorphisms have degree 0")
    if not f.is_closed():
        raise NotClosed("morphism is not closed")
    dims = acyclicity(cone(f))
    return IsoReport(not dims, dims)
