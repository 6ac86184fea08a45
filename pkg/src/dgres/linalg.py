"""Dense-API, sparse-core exact linear algebra over a tower level.

Vectors are dicts ``{index: nonzero raw scalar}``; matrices are stored by
column.  Elimination always picks the first nonzero column, so every basis
returned here is a deterministic function of the input.
"""
from __future__ import annotations

from .errors import NoSolution, NotAComplex, ShapeMismatch


# -- sparse vector helpers ---------------------------------------------------

def vadd(F, u, v, c=None):
    """Return u + c*v (c defaults to one)."""
    out = dict(u)
    for k, x in v.items():
        if c is not None:
            x = F.mul(c, x)
        y = out.get(k)
        y = x if y is None else F.add(y, x)
        if F.is_zero(y):
            out.pop(k, None)
        else:
            out[k] = y
    return out


def vscale(F, c, v):
    if F.is_zero(c):
        return {}
    return {k: F.mul(c, x) for k, x in v.items()}


def vsum(F, terms):
    """Sum of (coefficient, vector) pairs."""
    out = {}
    for c, v in terms:
        out = vadd(F, out, v, c)
    return out


def dense(F, v, n):
    return [v.get(i, F.zero) for i in range(n)]


def sparse(F, row):
    return {i: x for i, x in enumerate(row) if not F.is_zero(x)}


class Matrix:
    """An ``nrows x ncols`` matrix stored as a tuple of sparse columns."""

    __slots__ = ("field", "nrows", "ncols", "cols")

    def __init__(self, field, nrows, ncols, cols):
        if len(cols) != ncols:
            raise ShapeMismatch(f"{len(cols)} columns given, expected {ncols}")
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.cols = tuple(cols)

    @classmethod
    def from_rows(cls, field, rows, ncols=None):
        rows = [[field.coerce(x) for x in r] for r in rows]
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ShapeMismatch("ragged rows")
        cols = [{} for _ in range(ncols)]
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                if not field.is_zero(x):
                    cols[j][i] = x
        return cls(field, nrows, ncols, cols)

    @classmethod
    def identity(cls, field, n):
        return cls(field, n, n, [{i: field.one} for i in range(n)])

    @classmethod
    def zero(cls, field, nrows, ncols):
        return cls(field, nrows, ncols, [{} for _ in range(ncols)])

    def rows(self):
        """Sparse rows."""
        out = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, x in col.items():
                out[i][j] = x
        return out

    def to_rows(self):
        F = self.field
        return [dense(F, r, self.ncols) for r in self.rows()]

    def apply(self, v):
        F = self.field
        out = {}
        for j, c in v.items():
            out = vadd(F, out, self.cols[j], c)
        return out

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"{self.shape} @ {other.shape}")
        return Matrix(self.field, self.nrows, other.ncols, [self.apply(c) for c in other.cols])

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} + {other.shape}")
        F = self.field
        return Matrix(F, self.nrows, self.ncols, [vadd(F, a, b) for a, b in zip(self.cols, other.cols)])

    def scaled(self, c):
        F = self.field
        return Matrix(F, self.nrows, self.ncols, [vscale(F, c, col) for col in self.cols])

    def transpose(self):
        return Matrix(self.field, self.ncols, self.nrows, self.rows())

    def is_zero(self):
        return not any(self.cols)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.shape == other.shape
            and self.field == other.field
            and self.cols == other.cols
        )

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols})"


# -- incremental row reduction -------------------------------------------------

class RowReducer:
    """Echelon basis of a growing row space, optionally tracking combinations.

    With ``track=True`` each stored row remembers which combination of the
    inserted rows (by insertion id) produced it, so that :meth:`express`
    writes a vector in terms of the inputs.
    """

    def __init__(self, F, track=False):
        self.F = F
        self.track = track
        self.pivots = {}      # pivot column -> row (pivot entry normalised to one)
        self.combos = {}      # pivot column -> {input id: coeff}
        self.count = 0

    def _reduce(self, row, combo):
        F = self.F
        row = dict(row)
        coeffs = {}
        while True:
            hits = [k for k in row if k in self.pivots]
            if not hits:
                break
            k = min(hits)
            c = row[k]
            row = vadd(F, row, self.pivots[k], F.neg(c))
            coeffs[k] = F.add(coeffs.get(k, F.zero), c)
            if self.track:
                combo = vadd(F, combo, self.combos[k], F.neg(c))
        return row, combo, coeffs

    def add(self, row):
        """Insert ``row``; return True iff it enlarged the span."""
        ident = self.count
        self.count += 1
        combo = {ident: self.F.one} if self.track else None
        row, combo, _ = self._reduce(row, combo)
        if not row:
            return False
        k = min(row)
        inv = self.F.inv(row[k])
        self.pivots[k] = vscale(self.F, inv, row)
        if self.track:
            self.combos[k] = vscale(self.F, inv, combo)
        return True

    def residual(self, row):
        return self._reduce(row, {} if self.track else None)[0]

    def contains(self, row):
        return not self.residual(row)

    def express(self, row):
        """Coefficients over the inserted rows, or None if outside the span."""
        if not self.track:
            raise ValueError("reducer does not track combinations")
        F = self.F
        rest, _, coeffs = self._reduce(row, {})
        if rest:
            return None
        out = {}
        for k, c in coeffs.items():
            out = vadd(F, out, self.combos[k], c)
        return out

    @property
    def rank(self):
        return len(self.pivots)

    def rref(self):
        """Fully reduced rows sorted by pivot column."""
        F = self.F
        cols = sorted(self.pivots)
        rows = {k: dict(self.pivots[k]) for k in cols}
        for k in reversed(cols):
            for k2 in cols:
                if k2 < k and k in rows[k2]:
                    rows[k2] = vadd(F, rows[k2], rows[k], F.neg(rows[k2][k]))
        return [rows[k] for k in cols], cols


def _row_reduce(m):
    red = RowReducer(m.field)
    for r in m.rows():
        red.add(r)
    return red.rref()


def rank(m):
    return len(_row_reduce(m)[1])


def kernel(m):
    """Basis of {x : m x = 0}; one vector per free column, in column order."""
    F = m.field
    rows, pivots = _row_reduce(m)
    pset = set(pivots)
    basis = []
    for f in range(m.ncols):
        if f in pset:
            continue
        v = {f: F.one}
        for r, p in zip(rows, pivots):
            x = r.get(f)
            if x is not None:
                v[p] = F.neg(x)
        basis.append(v)
    return basis


def image(m):
    """Basis of the column space: the columns of ``m`` at pivot positions."""
    _, pivots = _row_reduce(m)
    return [dict(m.cols[j]) for j in pivots]


def rank_kernel_image(m):
    rows, pivots = _row_reduce(m)
    return len(pivots), kernel(m), [dict(m.cols[j]) for j in pivots]


def left_kernel(m):
    return kernel(m.transpose())


def solve(m, rhs):
    """Return x with m x = rhs, or raise NoSolution carrying y with y m = 0, y.rhs != 0."""
    F = m.field
    if isinstance(rhs, (list, tuple)):
        if len(rhs) != m.nrows:
            raise ShapeMismatch(f"rhs of length {len(rhs)} for {m.shape}")
        rhs = sparse(F, [F.coerce(x) for x in rhs])
    elif rhs and max(rhs) >= m.nrows:
        raise ShapeMismatch("rhs index out of range")
    red = RowReducer(F, track=True)
    for col in m.cols:
        red.add(col)
    x = red.express(rhs)
    if x is not None:
        return x
    for y in left_kernel(m):
        dot = F.zero
        for i, c in y.items():
            if i in rhs:
                dot = F.add(dot, F.mul(c, rhs[i]))
        if not F.is_zero(dot):
            raise NoSolution(y)
    raise AssertionError("inconsistent system without a certificate")


class Decomposer:
    """Coordinates with respect to a fixed list of independent vectors."""

    def __init__(self, F, vectors):
        self.F = F
        self.n = len(vectors)
        self.red = RowReducer(F, track=True)
        for v in vectors:
            if not self.red.add(v):
                raise ValueError("vectors are not independent")

    def coords(self, v):
        c = self.red.express(v)
        if c is None:
            raise NoSolution()
        return c

    def contains(self, v):
        return self.red.contains(v)


# -- finite complexes ------------------------------------------------------------

class FiniteComplex:
    """Cochain complex of finite-dimensional spaces, d_n : C^n -> C^(n+1)."""

    def __init__(self, field, dims, diffs):
        self.field = field
        self.dims = {n: d for n, d in dims.items() if d}
        self.diffs = {}
        for n, m in diffs.items():
            if m.ncols != self.dim(n) or m.nrows != self.dim(n + 1):
                raise ShapeMismatch(f"d_{n} has shape {m.shape}, expected "
                                    f"({self.dim(n + 1)}, {self.dim(n)})")
            if not m.is_zero():
                self.diffs[n] = m

    def dim(self, n):
        return self.dims.get(n, 0)

    def d(self, n):
        m = self.diffs.get(n)
        if m is None:
            return Matrix.zero(self.field, self.dim(n + 1), self.dim(n))
        return m

    @property
    def support(self):
        return sorted(self.dims)

    def validate(self):
        for n in sorted(self.diffs):
            if n + 1 in self.diffs and not (self.diffs[n + 1] @ self.diffs[n]).is_zero():
                raise NotAComplex(n)
        return self

    def euler_characteristic(self):
        return sum((-1) ** (n % 2) * d for n, d in self.dims.items())


class Cohomology:
    """Cohomology of a FiniteComplex with chosen cocycle representatives."""

    def __init__(self, complex_, preferred=None):
        self.complex = complex_
        F = complex_.field
        self.field = F
        self.reps = {}
        self.boundaries = {}
        self._dec = {}
        preferred = preferred or {}
        for n in complex_.support:
            cycles = kernel(complex_.d(n))
            bnd = image(complex_.d(n - 1)) if complex_.dim(n - 1) else []
            red = RowReducer(F)
            for b in bnd:
                red.add(b)
            # preferred cocycles (e.g. the unit) are tried first
            first = [v for v in preferred.get(n, ()) if not complex_.d(n).apply(v)]
            reps = [z for z in first + cycles if red.add(z)]
            self.boundaries[n] = bnd
            if reps:
                self.reps[n] = reps

    def dims(self):
        return {n: len(r) for n, r in self.reps.items()}

    def dim(self, n):
        return len(self.reps.get(n, ()))

    def is_zero(self):
        return not self.reps

    def class_of(self, n, cocycle):
        """Coordinates of the class of ``cocycle`` in the basis of representatives."""
        if n not in self._dec:
            self._dec[n] = Decomposer(self.field, self.boundaries.get(n, []) + self.reps.get(n, []))
        dec = self._dec[n]
        nb = len(self.boundaries.get(n, []))
        c = dec.coords(cocycle)
        return {k - nb: x for k, x in c.items() if k >= nb}


def cohomology(c, preferred=None):
    """Validate ``c`` and return its :class:`Cohomology`."""
    c.validate()
    return Cohomology(c, preferred)
