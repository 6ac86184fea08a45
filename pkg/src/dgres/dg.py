"""Finite-dimensional DG algebras, right DG modules and DG bimodules.

Conventions: grading is cohomological and differentials have degree +1.
Structure constants are sparse: ``mul[(i, j)] = {k: c}`` means
``b_i * b_j = sum_k c b_k``; unset products are zero.  A module action is
stored per algebra basis element as a column map, ``act[a][i]`` being the
vector ``m_i . b_a``.  Path algebras compose left to right.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import FieldMismatch, ValidationError
from .linalg import (
    Cohomology,
    Decomposer,
    FiniteComplex,
    Matrix,
    RowReducer,
    vadd,
    vscale,
)

EXHAUSTIVE_LIMIT = 32
SAMPLES = 10 ** 4


def sign(n):
    return -1 if n % 2 else 1


@dataclass(frozen=True)
class Validation:
    ok: bool
    axiom: str | None = None
    witness: tuple | None = None
    mode: str = "exhaustive"

    def raise_for(self, entity):
        if not self.ok:
            raise ValidationError(entity, self.axiom, self.witness)
        return self


def _signed(F, s, v):
    return v if s == 1 else {k: F.neg(x) for k, x in v.items()}


# ---------------------------------------------------------------------------
# graded spaces
# ---------------------------------------------------------------------------

def graded_complex(F, degrees, diff):
    """FiniteComplex of a graded space with column-map differential.

    Returns the complex and ``by_degree``: degree -> list of global indices.
    """
    by_degree = {}
    local = {}
    for i, d in enumerate(degrees):
        lst = by_degree.setdefault(d, [])
        local[i] = len(lst)
        lst.append(i)
    diffs = {}
    for n, idx in by_degree.items():
        cols = []
        for i in idx:
            col = {}
            for k, c in diff[i].items():
                if degrees[k] != n + 1:
                    raise ValueError(f"differential of basis {i} leaves degree {n + 1}")
                col[local[k]] = c
            cols.append(col)
        diffs[n] = Matrix(F, len(by_degree.get(n + 1, ())), len(idx), cols)
    return FiniteComplex(F, {n: len(v) for n, v in by_degree.items()}, diffs), by_degree


class SpaceCohomology:
    """Cohomology of a graded space, with representatives in global coordinates."""

    def __init__(self, F, degrees, diff, preferred=()):
        self.field = F
        self.degrees = degrees
        cx, self.by_degree = graded_complex(F, degrees, diff)
        local = {}
        for n, idx in self.by_degree.items():
            for k, i in enumerate(idx):
                local[i] = k
        self._local = local
        pref = {}
        for v in preferred:
            if v:
                n = degrees[next(iter(v))]
                pref.setdefault(n, []).append(self.to_local(v))
        self.local = Cohomology(cx.validate(), pref)
        self.reps = {
            n: [self.to_global(n, z) for z in zs] for n, zs in self.local.reps.items()
        }

    def to_local(self, v):
        return {self._local[i]: c for i, c in v.items()}

    def to_global(self, n, v):
        idx = self.by_degree[n]
        return {idx[k]: c for k, c in v.items()}

    def dims(self):
        return self.local.dims()

    def is_zero(self):
        return self.local.is_zero()

    def class_of(self, v):
        """(degree, coordinates) of the class of a homogeneous cocycle."""
        if not v:
            return None, {}
        n = self.degrees[next(iter(v))]
        if n not in self.reps:
            # still must be a coboundary; class_of on the complex checks it
            if n in self.local.complex.dims:
                self.local.class_of(n, self.to_local(v))
            return n, {}
        return n, self.local.class_of(n, self.to_local(v))

    def flat_reps(self):
        """[(degree, rep)] in degree order."""
        return [(n, z) for n in sorted(self.reps) for z in self.reps[n]]


def homogeneous_degree(degrees, v):
    ds = {degrees[i] for i in v}
    if len(ds) == 1:
        return ds.pop()
    return None


# ---------------------------------------------------------------------------
# algebras
# ---------------------------------------------------------------------------

class DGAlgebra:
    def __init__(self, field, names, degrees, unit, mul, diff):
        self.field = field
        self.names = tuple(names)
        self.degrees = tuple(degrees)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate basis names")
        self.index = {n: i for i, n in enumerate(self.names)}
        # the unit is a basis name or a combination {name: scalar}
        if isinstance(unit, str):
            uvec = {self.index[unit]: field.one}
        else:
            uvec = {}
            for k, c in unit.items():
                k = self.index[k] if isinstance(k, str) else k
                c = field.coerce(c)
                if not field.is_zero(c):
                    uvec[k] = c
        self.unit_vector = uvec
        single = len(uvec) == 1 and next(iter(uvec.values())) == field.one
        self.unit_index = next(iter(uvec)) if single else None
        self.unit = self.names[self.unit_index] if single else None
        self.mul = {k: dict(v) for k, v in mul.items() if v}
        self.diff = tuple(dict(c) for c in diff)
        self.factors = None  # (A, B) when built by env(A, B)
        self._lmul = {}
        self._rmul = {}

    @classmethod
    def build(cls, field, basis, unit, mul=None, diff=None):
        """Build from names: ``mul={(x, y): {z: c}}``, ``diff={x: {y: c}}``."""
        names = [b[0] for b in basis]
        degrees = [int(b[1]) for b in basis]
        index = {n: i for i, n in enumerate(names)}
        m = {}
        for (x, y), out in (mul or {}).items():
            vec = {}
            for z, c in out.items():
                c = field.coerce(c)
                if not field.is_zero(c):
                    vec[index[z]] = c
            if vec:
                m[(index[x], index[y])] = vec
        d = [{} for _ in names]
        for x, out in (diff or {}).items():
            for y, c in out.items():
                c = field.coerce(c)
                if not field.is_zero(c):
                    d[index[x]][index[y]] = c
        return cls(field, names, degrees, unit, m, d)

    @property
    def dim(self):
        return len(self.names)

    def __eq__(self, other):
        return (
            isinstance(other, DGAlgebra)
            and self.field == other.field
            and self.names == other.names
            and self.degrees == other.degrees
            and self.unit_vector == other.unit_vector
            and self.mul == other.mul
            and self.diff == other.diff
        )

    def __hash__(self):
        return hash((self.field, self.names, self.degrees))

    def __repr__(self):
        return f"DGAlgebra(dim={self.dim}, basis={list(self.names)})"

    def basis_vector(self, name):
        return {self.index[name]: self.field.one}

    def element(self, terms):
        """Vector from ``{name: scalar}`` or ``[(name, scalar)]``."""
        F = self.field
        items = terms.items() if isinstance(terms, dict) else terms
        v = {}
        for name, c in items:
            v = vadd(F, v, {self.index[name]: F.coerce(c)})
        return v

    def basis_product(self, i, j):
        return self.mul.get((i, j), {})

    def product(self, u, v):
        F = self.field
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                p = self.mul.get((i, j))
                if p:
                    out = vadd(F, out, p, F.mul(a, b))
        return out

    def d(self, v):
        F = self.field
        out = {}
        for i, c in v.items():
            if self.diff[i]:
                out = vadd(F, out, self.diff[i], c)
        return out

    def lmul(self, i):
        if i not in self._lmul:
            self._lmul[i] = [self.mul.get((i, j), {}) for j in range(self.dim)]
        return self._lmul[i]

    def rmul(self, j):
        if j not in self._rmul:
            self._rmul[j] = [self.mul.get((i, j), {}) for i in range(self.dim)]
        return self._rmul[j]

    def degree_of(self, v):
        return homogeneous_degree(self.degrees, v)

    def has_zero_differential(self):
        return not any(self.diff)

    def is_connective(self):
        """H^n(A) = 0 for all n > 0."""
        return all(n <= 0 for n in algebra_cohomology(self).dims)

    def validate(self, **kw):
        return validate_algebra(self, **kw)


def _triples(n, m, k, exhaustive, rng, samples):
    if exhaustive:
        for i in range(n):
            for j in range(m):
                for l in range(k):
                    yield i, j, l
    else:
        for _ in range(samples):
            yield rng.randrange(n), rng.randrange(m), rng.randrange(k)


def validate_algebra(A, exhaustive_limit=EXHAUSTIVE_LIMIT, samples=SAMPLES, seed=0):
    """Check every DG algebra axiom; the first failure is reported in-band."""
    F = A.field
    n = A.dim
    N = A.names
    deg = A.degrees
    exhaustive = n <= exhaustive_limit
    mode = "exhaustive" if exhaustive else "sampled"
    rng = random.Random(seed)

    def fail(axiom, *idx):
        return Validation(False, axiom, tuple(N[i] for i in idx), mode)

    for (i, j), v in sorted(A.mul.items()):
        for k in v:
            if deg[k] != deg[i] + deg[j]:
                return fail("multiplication respects grading", i, j, k)
    for i in range(n):
        for k in A.diff[i]:
            if deg[k] != deg[i] + 1:
                return fail("differential has degree +1", i, k)
    uv = A.unit_vector
    for i in range(n):
        e = {i: F.one}
        if A.product(uv, e) != e:
            return fail("left unit law", i)
        if A.product(e, uv) != e:
            return fail("right unit law", i)
    if A.d(uv):
        return fail("d(unit) = 0", *sorted(uv))
    for i, j, k in _triples(n, n, n, exhaustive, rng, samples):
        lhs = A.product(A.basis_product(i, j), {k: F.one})
        rhs = A.product({i: F.one}, A.basis_product(j, k))
        if lhs != rhs:
            return fail("associativity", i, j, k)
    for i in range(n):
        if A.d(A.diff[i]):
            return fail("d o d = 0", i)
    pairs = ((i, j) for i in range(n) for j in range(n)) if exhaustive else (
        (rng.randrange(n), rng.randrange(n)) for _ in range(samples))
    for i, j in pairs:
        lhs = A.d(A.basis_product(i, j))
        rhs = vadd(F, A.product(A.diff[i], {j: F.one}),
                   _signed(F, sign(deg[i]), A.product({i: F.one}, A.diff[j])))
        if lhs != rhs:
            return fail("Leibniz rule", i, j)
    return Validation(True, mode=mode)


def opposite(A):
    """A^op with the Koszul sign: a *op b = (-1)^{|a||b|} b a."""
    F = A.field
    mul = {}
    for (i, j), v in A.mul.items():
        mul[(j, i)] = _signed(F, sign(A.degrees[i] * A.degrees[j]), v)
    return DGAlgebra(F, A.names, A.degrees, A.unit_vector, mul, A.diff)


def tensor_name(x, y):
    return f"{x}|{y}"


def env(A, B):
    """The algebra A^op (x) B; basis a|b, (a1|b1)(a2|b2) = (-1)^{|b1||a2|} (a1 *op a2)|(b1 b2)."""
    if A.field != B.field:
        raise FieldMismatch(f"{A.field} vs {B.field}")
    F = A.field
    Aop = opposite(A)
    nb = B.dim
    names, degrees = [], []
    for i in range(A.dim):
        for j in range(nb):
            names.append(tensor_name(A.names[i], B.names[j]))
            degrees.append(A.degrees[i] + B.degrees[j])
    mul = {}
    for (i1, i2), av in Aop.mul.items():
        for (j1, j2), bv in B.mul.items():
            s = sign(B.degrees[j1] * A.degrees[i2])
            out = {}
            for k, a in av.items():
                for l, b in bv.items():
                    out[k * nb + l] = F.mul(a, b)
            mul[(i1 * nb + j1, i2 * nb + j2)] = _signed(F, s, out)
    diff = []
    for i in range(A.dim):
        for j in range(nb):
            col = {}
            for k, c in A.diff[i].items():
                col[k * nb + j] = c
            s = sign(A.degrees[i])
            for l, c in B.diff[j].items():
                col = vadd(F, col, {i * nb + l: c if s == 1 else F.neg(c)})
            diff.append(col)
    unit = {}
    for i, a in A.unit_vector.items():
        for j, b in B.unit_vector.items():
            unit[i * nb + j] = F.mul(a, b)
    E = DGAlgebra(F, names, degrees, unit, mul, diff)
    E.factors = (A, B)
    return E


# ---------------------------------------------------------------------------
# modules
# ---------------------------------------------------------------------------

class DGModule:
    """Right DG module; ``act[a][i] = m_i . b_a``, ``diff[i] = d(m_i)``."""

    def __init__(self, algebra, names, degrees, act, diff):
        self.algebra = algebra
        self.field = algebra.field
        self.names = tuple(names)
        self.degrees = tuple(degrees)
        self.act = tuple(tuple(dict(c) for c in cols) for cols in act)
        self.diff = tuple(dict(c) for c in diff)
        if len(self.act) != algebra.dim:
            raise ValueError("one action map per algebra basis element required")

    @classmethod
    def build(cls, algebra, basis, action=None, diff=None):
        """``action={(m, a): {m2: c}}``; unit action defaults to identity."""
        F = algebra.field
        names = [b[0] for b in basis]
        degrees = [int(b[1]) for b in basis]
        index = {n: i for i, n in enumerate(names)}
        act = [[{} for _ in names] for _ in range(algebra.dim)]
        u = algebra.unit_index
        if u is not None:
            for i in range(len(names)):
                act[u][i] = {i: F.one}
        for (m, a), out in (action or {}).items():
            vec = {}
            for m2, c in out.items():
                c = F.coerce(c)
                if not F.is_zero(c):
                    vec[index[m2]] = c
            act[algebra.index[a]][index[m]] = vec
        d = [{} for _ in names]
        for m, out in (diff or {}).items():
            for m2, c in out.items():
                c = F.coerce(c)
                if not F.is_zero(c):
                    d[index[m]][index[m2]] = c
        return cls(algebra, names, degrees, act, d)

    @property
    def dim(self):
        return len(self.names)

    def __eq__(self, other):
        return (
            isinstance(other, DGModule)
            and self.algebra == other.algebra
            and self.names == other.names
            and self.degrees == other.degrees
            and self.act == other.act
            and self.diff == other.diff
        )

    def __repr__(self):
        return f"DGModule(dim={self.dim})"

    def act_basis(self, v, a):
        F = self.field
        cols = self.act[a]
        out = {}
        for i, c in v.items():
            if cols[i]:
                out = vadd(F, out, cols[i], c)
        return out

    def act_elem(self, v, elem):
        F = self.field
        out = {}
        for a, c in elem.items():
            out = vadd(F, out, self.act_basis(v, a), c)
        return out

    def d(self, v):
        F = self.field
        out = {}
        for i, c in v.items():
            if self.diff[i]:
                out = vadd(F, out, self.diff[i], c)
        return out

    def cohomology(self):
        return SpaceCohomology(self.field, self.degrees, self.diff)

    def validate(self, **kw):
        return validate_module(self, **kw)


def validate_module(M, exhaustive_limit=EXHAUSTIVE_LIMIT, samples=SAMPLES, seed=0):
    A = M.algebra
    F = M.field
    n, na = M.dim, A.dim
    deg, adeg = M.degrees, A.degrees
    exhaustive = max(n, na) <= exhaustive_limit
    mode = "exhaustive" if exhaustive else "sampled"
    rng = random.Random(seed)

    def fail(axiom, witness):
        return Validation(False, axiom, witness, mode)

    for a in range(na):
        for i in range(n):
            for k in M.act[a][i]:
                if deg[k] != deg[i] + adeg[a]:
                    return fail("action respects grading", (M.names[i], A.names[a], M.names[k]))
    for i in range(n):
        for k in M.diff[i]:
            if deg[k] != deg[i] + 1:
                return fail("differential has degree +1", (M.names[i], M.names[k]))
    for i in range(n):
        if M.act_elem({i: F.one}, A.unit_vector) != {i: F.one}:
            return fail("unit acts as identity", (M.names[i],))
    for i, a, b in _triples(n, na, na, exhaustive, rng, samples):
        lhs = M.act_basis(M.act[a][i], b)
        rhs = M.act_elem({i: F.one}, A.basis_product(a, b))
        if lhs != rhs:
            return fail("associativity of the action", (M.names[i], A.names[a], A.names[b]))
    for i in range(n):
        if M.d(M.diff[i]):
            return fail("d o d = 0", (M.names[i],))
    pairs = ((i, a) for i in range(n) for a in range(na)) if exhaustive else (
        (rng.randrange(n), rng.randrange(na)) for _ in range(samples))
    for i, a in pairs:
        lhs = M.d(M.act[a][i])
        rhs = vadd(F, M.act_basis(M.diff[i], a),
                   _signed(F, sign(deg[i]), M.act_elem({i: F.one}, A.diff[a])))
        if lhs != rhs:
            return fail("Leibniz rule", (M.names[i], A.names[a]))
    return Validation(True, mode=mode)


class DGBimodule:
    """A-B bimodule: ``lact[a][t] = b_a . t``, ``ract[b][t] = t . b_b``."""

    def __init__(self, left, right, names, degrees, lact, ract, diff):
        if left.field != right.field:
            raise FieldMismatch(f"{left.field} vs {right.field}")
        self.left = left
        self.right = right
        self.field = left.field
        self.names = tuple(names)
        self.degrees = tuple(degrees)
        self.lact = tuple(tuple(dict(c) for c in cols) for cols in lact)
        self.ract = tuple(tuple(dict(c) for c in cols) for cols in ract)
        self.diff = tuple(dict(c) for c in diff)

    @classmethod
    def build(cls, left, right, basis, left_action=None, right_action=None, diff=None):
        """``left_action={(a, t): {t2: c}}``, ``right_action={(t, b): {t2: c}}``."""
        F = left.field
        names = [b[0] for b in basis]
        degrees = [int(b[1]) for b in basis]
        index = {n: i for i, n in enumerate(names)}

        def table(alg, spec, left_side):
            act = [[{} for _ in names] for _ in range(alg.dim)]
            if alg.unit_index is not None:
                for i in range(len(names)):
                    act[alg.unit_index][i] = {i: F.one}
            for key, out in (spec or {}).items():
                a, t = key if left_side else (key[1], key[0])
                vec = {}
                for t2, c in out.items():
                    c = F.coerce(c)
                    if not F.is_zero(c):
                        vec[index[t2]] = c
                act[alg.index[a]][index[t]] = vec
            return act

        d = [{} for _ in names]
        for t, out in (diff or {}).items():
            for t2, c in out.items():
                c = F.coerce(c)
                if not F.is_zero(c):
                    d[index[t]][index[t2]] = c
        return cls(left, right, names, degrees,
                   table(left, left_action, True), table(right, right_action, False), d)

    @property
    def dim(self):
        return len(self.names)

    def __eq__(self, other):
        return (
            isinstance(other, DGBimodule)
            and self.left == other.left
            and self.right == other.right
            and self.names == other.names
            and self.degrees == other.degrees
            and self.lact == other.lact
            and self.ract == other.ract
            and self.diff == other.diff
        )

    def __repr__(self):
        return f"DGBimodule(dim={self.dim})"

    def left_act_basis(self, a, v):
        F = self.field
        out = {}
        for i, c in v.items():
            if self.lact[a][i]:
                out = vadd(F, out, self.lact[a][i], c)
        return out

    def left_act_elem(self, elem, v):
        F = self.field
        out = {}
        for a, c in elem.items():
            out = vadd(F, out, self.left_act_basis(a, v), c)
        return out

    def right_module(self):
        """T as a right B-module (left action forgotten)."""
        return DGModule(self.right, self.names, self.degrees, self.ract, self.diff)

    def left_module_as_right_over_opposite(self):
        return DGModule(opposite(self.left), self.names, self.degrees,
                        [[_signed(self.field, sign(self.left.degrees[a] * self.degrees[i]), c)
                          for i, c in enumerate(cols)] for a, cols in enumerate(self.lact)],
                        self.diff)

    def validate(self, **kw):
        return validate_bimodule(self, **kw)


def validate_bimodule(T, exhaustive_limit=EXHAUSTIVE_LIMIT, samples=SAMPLES, seed=0):
    F = T.field
    A, B = T.left, T.right
    n = T.dim
    deg = T.degrees
    exhaustive = max(n, A.dim, B.dim) <= exhaustive_limit
    mode = "exhaustive" if exhaustive else "sampled"
    rng = random.Random(seed)

    def fail(axiom, witness):
        return Validation(False, axiom, witness, mode)

    for a in range(A.dim):
        for i in range(n):
            for k in T.lact[a][i]:
                if deg[k] != deg[i] + A.degrees[a]:
                    return fail("left action respects grading", (A.names[a], T.names[i]))
    right = validate_module(T.right_module(), exhaustive_limit, samples, seed)
    if not right.ok:
        return Validation(False, "right module: " + right.axiom, right.witness, right.mode)
    for i in range(n):
        if T.left_act_elem(A.unit_vector, {i: F.one}) != {i: F.one}:
            return fail("left unit acts as identity", (T.names[i],))
    for a, b, i in _triples(A.dim, A.dim, n, exhaustive, rng, samples):
        lhs = T.left_act_basis(a, T.lact[b][i])
        rhs = T.left_act_elem(A.basis_product(a, b), {i: F.one})
        if lhs != rhs:
            return fail("associativity of the left action", (A.names[a], A.names[b], T.names[i]))
    for a, i, b in _triples(A.dim, n, B.dim, exhaustive, rng, samples):
        lhs = T.right_module().act_basis(T.lact[a][i], b)
        rhs = T.left_act_basis(a, T.ract[b][i])
        if lhs != rhs:
            return fail("left and right actions commute", (A.names[a], T.names[i], B.names[b]))
    M = T.right_module()
    for a in range(A.dim):
        for i in range(n):
            lhs = M.d(T.lact[a][i])
            rhs = vadd(F, T.left_act_elem(A.diff[a], {i: F.one}),
                       _signed(F, sign(A.degrees[a]), T.left_act_basis(a, T.diff[i])))
            if lhs != rhs:
                return fail("left Leibniz rule", (A.names[a], T.names[i]))
    return Validation(True, mode=mode)


# ---------------------------------------------------------------------------
# standard constructions
# ---------------------------------------------------------------------------

def free_module(A):
    """A as a right module over itself."""
    return DGModule(A, A.names, A.degrees, [A.rmul(j) for j in range(A.dim)], A.diff)


def diagonal_bimodule(A):
    return DGBimodule(A, A, A.names, A.degrees,
                      [A.lmul(i) for i in range(A.dim)],
                      [A.rmul(j) for j in range(A.dim)], A.diff)


def zero_module(A):
    return DGModule(A, (), (), [() for _ in range(A.dim)], ())


def bimodule_to_right_module(T, E=None):
    """T as a right module over env(A, B): t.(a|b) = (-1)^{|a||t|} a.(t.b)."""
    A, B = T.left, T.right
    E = E if E is not None else env(A, B)
    F = T.field
    nb = B.dim
    act = []
    for i in range(A.dim):
        for j in range(nb):
            cols = []
            for t in range(T.dim):
                v = T.left_act_basis(i, T.ract[j][t])
                cols.append(_signed(F, sign(A.degrees[i] * T.degrees[t]), v))
            act.append(cols)
    return DGModule(E, T.names, T.degrees, act, T.diff)


def right_module_to_bimodule(N, A=None, B=None):
    """Inverse of :func:`bimodule_to_right_module`."""
    if A is None or B is None:
        if N.algebra.factors is None:
            raise ValueError("algebra is not an enveloping algebra; pass A and B")
        A, B = N.algebra.factors
    F = N.field
    nb = B.dim
    lact = []
    for i in range(A.dim):
        elem = {i * nb + j: c for j, c in B.unit_vector.items()}
        lact.append([_signed(F, sign(A.degrees[i] * N.degrees[t]), N.act_elem({t: F.one}, elem))
                     for t in range(N.dim)])
    ract = []
    for j in range(nb):
        elem = {i * nb + j: c for i, c in A.unit_vector.items()}
        ract.append([N.act_elem({t: F.one}, elem) for t in range(N.dim)])
    return DGBimodule(A, B, N.names, N.degrees, lact, ract, N.diff)


def module_shift(M, n):
    """M[n]: degrees lowered by n, differential multiplied by (-1)^n."""
    F = M.field
    s = sign(n)
    return DGModule(M.algebra, M.names, [d - n for d in M.degrees], M.act,
                    [_signed(F, s, c) for c in M.diff])


def module_direct_sum(modules, prefixes=None):
    A = modules[0].algebra
    names, degrees, diff = [], [], []
    act = [[] for _ in range(A.dim)]
    off = 0
    for idx, M in enumerate(modules):
        if M.algebra != A:
            raise FieldMismatch("direct sum over different algebras")
        pre = prefixes[idx] if prefixes else f"{idx}:"
        names += [pre + x for x in M.names]
        degrees += M.degrees
        for a in range(A.dim):
            act[a] += [{k + off: c for k, c in col.items()} for col in M.act[a]]
        diff += [{k + off: c for k, c in col.items()} for col in M.diff]
        off += M.dim
    return DGModule(A, names, degrees, act, diff)


def module_cone(M, N, f):
    """Cone of a closed degree-0 map f (column map M -> N): M[1] (+) N."""
    F = M.field
    A = M.algebra
    nm = M.dim
    names = [f"s:{x}" for x in M.names] + [f"t:{x}" for x in N.names]
    degrees = [d - 1 for d in M.degrees] + list(N.degrees)
    act = []
    for a in range(A.dim):
        act.append(list(M.act[a]) + [{k + nm: c for k, c in col.items()} for col in N.act[a]])
    diff = []
    for i in range(nm):
        col = {k: F.neg(c) for k, c in M.diff[i].items()}
        col.update({k + nm: c for k, c in f[i].items()})
        diff.append(col)
    diff += [{k + nm: c for k, c in col.items()} for col in N.diff]
    return DGModule(A, names, degrees, act, diff)


def same_structure(M, N):
    """Equality of modules up to basis names."""
    return (M.algebra == N.algebra and M.degrees == N.degrees
            and M.act == N.act and M.diff == N.diff)


def span_closure(M, vectors):
    """Echelon basis of the smallest DG submodule containing ``vectors``."""
    F = M.field
    red = RowReducer(F)
    basis = []
    queue = [v for v in vectors if v]
    while queue:
        v = queue.pop(0)
        if red.add(v):
            basis.append(v)
            queue.append(M.d(v))
            for a in range(M.algebra.dim):
                w = M.act_basis(v, a)
                if w:
                    queue.append(w)
    return basis


def _homogeneous_parts(M, v):
    parts = {}
    for i, c in v.items():
        parts.setdefault(M.degrees[i], {})[i] = c
    return list(parts.values())


def submodule(M, vectors, prefix="s"):
    """The DG submodule generated by ``vectors``, and its inclusion (column map)."""
    F = M.field
    gens = [p for v in vectors for p in _homogeneous_parts(M, v)]
    basis = span_closure(M, gens)
    dec = Decomposer(F, basis)
    degrees = [homogeneous_degree(M.degrees, v) for v in basis]
    act = [[dec.coords(M.act_basis(v, a)) for v in basis] for a in range(M.algebra.dim)]
    diff = [dec.coords(M.d(v)) for v in basis]
    names = [f"{prefix}{k}" for k in range(len(basis))]
    return DGModule(M.algebra, names, degrees, act, diff), basis


def quotient_module(M, vectors):
    """M modulo the DG submodule generated by ``vectors``; basis is a subset of M's."""
    F = M.field
    gens = [p for v in vectors for p in _homogeneous_parts(M, v)]
    sub = span_closure(M, gens)
    red = RowReducer(F)
    for v in sub:
        red.add(v)
    keep = [i for i in range(M.dim) if red.add({i: F.one})]
    dec = Decomposer(F, sub + [{i: F.one} for i in keep])
    ns = len(sub)

    def project(v):
        c = dec.coords(v)
        return {k - ns: x for k, x in c.items() if k >= ns}

    act = [[project(M.act[a][i]) for i in keep] for a in range(M.algebra.dim)]
    diff = [project(M.diff[i]) for i in keep]
    Q = DGModule(M.algebra, [M.names[i] for i in keep], [M.degrees[i] for i in keep], act, diff)
    return Q, project


def simple_module(A, idempotent, degree=0):
    """One-dimensional module on which ``idempotent`` acts as 1 and other basis elements as 0."""
    F = A.field
    e = A.index[idempotent]
    act = [[{}] for _ in range(A.dim)]
    act[e] = [{0: F.one}]
    if A.unit_index is not None:
        act[A.unit_index] = [{0: F.one}]
    M = DGModule(A, [f"S[{idempotent}]"], [degree], act, [{}])
    validate_module(M).raise_for(f"simple module at {idempotent}")
    return M


# ---------------------------------------------------------------------------
# cohomology
# ---------------------------------------------------------------------------

class AlgebraCohomology:
    """H*(A) as a graded algebra on chosen representatives."""

    def __init__(self, A):
        F = A.field
        self.source = A
        self.space = SpaceCohomology(F, A.degrees, A.diff, preferred=[A.unit_vector])
        reps = self.space.flat_reps()
        self.reps = [z for _, z in reps]
        self.rep_degrees = [n for n, _ in reps]
        names = []
        for n, z in reps:
            if len(z) == 1 and next(iter(z.values())) == F.one:
                names.append(A.names[next(iter(z))])
            else:
                names.append(f"h{n}_{len([m for m in names])}")
        offsets = {}
        pos = 0
        for n in sorted(self.space.reps):
            offsets[n] = pos
            pos += len(self.space.reps[n])
        self._offsets = offsets
        mul = {}
        self.well_defined = True
        for i, zi in enumerate(self.reps):
            for j, zj in enumerate(self.reps):
                p = A.product(zi, zj)
                if A.d(p):
                    self.well_defined = False
                cls = self.coords(p)
                if cls:
                    mul[(i, j)] = cls
        # boundaries times cycles must be boundaries
        for n, bnd in self.space.local.boundaries.items():
            for b in bnd:
                bg = self.space.to_global(n, b)
                for z in self.reps:
                    if self.coords(A.product(bg, z)) or self.coords(A.product(z, bg)):
                        self.well_defined = False
        unit = self.coords(A.unit_vector)
        self.algebra = None
        if unit:
            self.algebra = DGAlgebra(F, names, self.rep_degrees, unit, mul,
                                     [{} for _ in names])
        self.dims = self.space.dims()

    def coords(self, v):
        """Global coordinates (index into reps) of the class of cocycle v."""
        if not v:
            return {}
        n, c = self.space.class_of(v)
        off = self._offsets.get(n, 0)
        return {off + k: x for k, x in c.items()}


def algebra_cohomology(A):
    return AlgebraCohomology(A)
