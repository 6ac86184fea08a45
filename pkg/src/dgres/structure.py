"""Structure of small algebras and modules: idempotents, radical, module isomorphisms."""
from __future__ import annotations

import random

import numpy as np

from .dg import DGModule, homogeneous_degree
from .linalg import Matrix, RowReducer, kernel, rank, vadd


# -- idempotents ----------------------------------------------------------------

def _is_idempotent(A, v):
    return A.product(v, v) == v


def idempotent_set(A):
    """A complete set of orthogonal, closed, degree-0 idempotents summing to the unit.

    Enveloping algebras use products of the factors' sets.  Otherwise basis
    idempotents are collected greedily and the remainder of the unit is added
    when it is a nonzero idempotent.  The result is not guaranteed primitive.
    """
    F = A.field
    if getattr(A, "idempotents", None):
        return [dict(e) for e in A.idempotents]
    if A.factors is not None:
        L, R = A.factors
        nb = R.dim
        out = []
        for e in idempotent_set(L):
            for f in idempotent_set(R):
                v = {}
                for i, a in e.items():
                    for j, b in f.items():
                        v[i * nb + j] = F.mul(a, b)
                out.append(v)
        return out
    chosen = []
    for i in range(A.dim):
        v = {i: F.one}
        if v == A.unit_vector or A.degrees[i] != 0 or A.diff[i] or not _is_idempotent(A, v):
            continue
        if all(not A.product(v, e) and not A.product(e, v) for e in chosen):
            chosen.append(v)
    rest = dict(A.unit_vector)
    for e in chosen:
        rest = vadd(F, rest, e, F.neg(F.one))
    if rest:
        if not _is_idempotent(A, rest) or any(A.product(rest, e) or A.product(e, rest) for e in chosen):
            return [dict(A.unit_vector)]
        chosen.append(rest)
    return chosen


# -- radical --------------------------------------------------------------------

def _left_matrix(A, v):
    """Left multiplication by v as a list of columns over the basis."""
    F = A.field
    return [A.product(v, {j: F.one}) for j in range(A.dim)]


def _trace(A, v):
    F = A.field
    t = F.zero
    for j, col in enumerate(_left_matrix(A, v)):
        c = col.get(j)
        if c is not None:
            t = F.add(t, c)
    return t


def _dickson(A):
    """{x : Tr(L_{xy}) = 0 for all y}; the radical in characteristic 0."""
    F = A.field
    n = A.dim
    tr = [_trace(A, {k: F.one}) for k in range(n)]
    cols = []
    for i in range(n):
        col = {}
        for j in range(n):
            t = F.zero
            for k, c in A.basis_product(i, j).items():
                t = F.add(t, F.mul(c, tr[k]))
            if not F.is_zero(t):
                col[j] = t
        cols.append(col)
    # x = sum x_i b_i is in the radical iff sum_i x_i T[i][j] = 0 for all j
    return kernel(Matrix(F, n, n, cols))


def _restriction_data(A):
    """A as an algebra over the prime field: integer left-multiplication matrices."""
    F = A.field
    base = F.base
    fb = F.basis_over(base)
    m = len(fb)
    N = A.dim * m

    def flat(v):
        out = [0] * N
        for k, c in v.items():
            for s, x in enumerate(F.coords(c, base)):
                out[k * m + s] = int(x)
        return out

    elems = []
    for k in range(A.dim):
        for w in fb:
            elems.append({k: w})
    mats = []
    for a in elems:
        cols = [flat(A.product(a, b)) for b in elems]
        mats.append([[cols[j][i] for j in range(N)] for i in range(N)])
    return elems, mats, N, m


def _batched_trace_power(M, e, q):
    """Traces of M[k]^e mod q for a stack of integer matrices."""
    n = M.shape[-1]
    R = np.broadcast_to(np.eye(n, dtype=np.int64), M.shape).copy()
    B = M % q
    while e:
        if e & 1:
            R = np.matmul(R, B) % q
        B = np.matmul(B, B) % q
        e >>= 1
    return np.trace(R, axis1=-2, axis2=-1) % q


def _ciw(A):
    """Radical in characteristic p via iterated generalized trace forms over GF(p)."""
    F = A.field
    p = F.characteristic
    _, mats, N, m = _restriction_data(A)
    Fp = F.base
    L = np.array(mats, dtype=np.int64)          # (N, N, N): left multiplications
    current = np.eye(N, dtype=np.int64)         # rows span the current subspace
    l = 0
    while p ** (l + 1) <= N:
        l += 1
    for i in range(l + 1):
        q = p ** (i + 1)
        Mc = np.tensordot(current, L, axes=(1, 0)) % p           # (c, N, N)
        prod = np.matmul(Mc[:, None], L[None]) % q               # (c, N, N, N)
        t = _batched_trace_power(prod, p ** i, q)                # (c, N)
        if np.any(t % (p ** i)):
            return None
        g = (t // p ** i) % p
        cols = [{j: int(g[k, j]) for j in range(N) if g[k, j]} for k in range(len(current))]
        ker = kernel(Matrix(Fp, N, len(current), cols))
        if not ker:
            current = np.zeros((0, N), dtype=np.int64)
            break
        comb = np.array([[int(v.get(k, 0)) for k in range(len(current))] for v in ker], dtype=np.int64)
        current = (comb @ current) % p
    vecs = []
    red = RowReducer(F)
    for vec in current.tolist():
        v = {}
        for k in range(A.dim):
            c = F.from_coords([Fp.coerce(x) for x in vec[k * m:(k + 1) * m]], Fp)
            if not F.is_zero(c):
                v[k] = c
        if v and red.add(v):
            vecs.append(v)
    return vecs


def is_nilpotent_ideal(A, basis):
    if not basis:
        return True
    F = A.field
    red = RowReducer(F)
    for v in basis:
        red.add(v)
    for v in basis:
        for j in range(A.dim):
            e = {j: F.one}
            if not red.contains(A.product(v, e)) or not red.contains(A.product(e, v)):
                return False
    power = list(basis)
    for _ in range(A.dim + 1):
        nxt = RowReducer(F)
        out = []
        for u in power:
            for v in basis:
                w = A.product(u, v)
                if w and nxt.add(w):
                    out.append(w)
        if not out:
            return True
        power = out
    return False


def _over_prime_field(A):
    """The same algebra over the prime field, when all its constants live there."""
    from .dg import DGAlgebra

    F = A.field
    if not F.height:
        return None
    base = F.base

    def down(v):
        out = {}
        for k, c in v.items():
            cs = F.coords(c, base)
            if any(not base.is_zero(x) for x in cs[1:]):
                raise ValueError
            out[k] = cs[0]
        return out

    try:
        mul = {key: down(v) for key, v in A.mul.items()}
        diff = [down(v) for v in A.diff]
        unit = down(A.unit_vector)
    except ValueError:
        return None
    return DGAlgebra(base, A.names, A.degrees, unit, mul, diff)


def radical(A):
    """Basis of the Jacobson radical of an algebra with zero differential.

    Returns (basis, exact).  ``exact`` is False when the characteristic-p
    computation could not be certified; the basis is then empty, which
    keeps resolutions correct but possibly non-minimal.
    """
    if A.field.characteristic == 0:
        return _dickson(A), True
    small = _over_prime_field(A)
    if small is not None:
        # finite fields are perfect, so the radical commutes with extension
        J, exact = radical(small)
        F = A.field
        return [{k: F.embed(c, F.base) for k, c in v.items()} for v in J], exact
    J = _ciw(A)
    if J is None or not is_nilpotent_ideal(A, J):
        return [], False
    return J, True


# -- modules over a cohomology algebra --------------------------------------------------

def action_ranks(M):
    F = M.field
    return tuple(rank(Matrix(F, M.dim, M.dim, list(M.act[a]))) for a in range(M.algebra.dim))


def fingerprint(M):
    """Shift-normalised graded dims plus ranks of every action map."""
    if not M.dim:
        return ((), ())
    lo = min(M.degrees)
    dims = {}
    for d in M.degrees:
        dims[d - lo] = dims.get(d - lo, 0) + 1
    return (tuple(sorted(dims.items())), action_ranks(M))


def module_hom_space(X, Y, shift=0):
    """Basis of closed module maps X -> Y lowering degree by ``shift`` (i.e. X[shift]... degree matching)."""
    F = X.field
    A = X.algebra
    pairs = [(y, x) for x in range(X.dim) for y in range(Y.dim) if Y.degrees[y] == X.degrees[x] - shift]
    index = {pr: k for k, pr in enumerate(pairs)}
    if not pairs:
        return [], pairs
    rows = []

    def apply_unknown(x_vec):
        # f(x_vec) as {y: {var: coeff}}
        out = {}
        for x, c in x_vec.items():
            for y in range(Y.dim):
                k = index.get((y, x))
                if k is not None:
                    out.setdefault(y, {})
                    out[y] = vadd(F, out[y], {k: c})
        return out

    def unknown_then(f_x, op):
        # op applied to the Y-vector f(x) = sum_var var * e_y
        out = {}
        for y, coeffs in f_x.items():
            img = op({y: F.one})
            for y2, c in img.items():
                out.setdefault(y2, {})
                out[y2] = vadd(F, out[y2], coeffs, c)
        return out

    for x in range(X.dim):
        ex = {x: F.one}
        fx = apply_unknown(ex)
        for a in range(A.dim):
            lhs = apply_unknown(X.act_basis(ex, a))
            rhs = unknown_then(fx, lambda v, a=a: Y.act_basis(v, a))
            for y in set(lhs) | set(rhs):
                r = vadd(F, lhs.get(y, {}), rhs.get(y, {}), F.neg(F.one))
                if r:
                    rows.append(r)
        lhs = apply_unknown(X.d(ex))
        rhs = unknown_then(fx, Y.d)
        for y in set(lhs) | set(rhs):
            r = vadd(F, lhs.get(y, {}), rhs.get(y, {}), F.neg(F.one))
            if r:
                rows.append(r)
    m = Matrix(F, len(pairs), len(rows), rows).transpose() if rows else None
    basis = kernel(m) if m is not None else [{k: F.one} for k in range(len(pairs))]
    maps = []
    for v in basis:
        cols = [{} for _ in range(X.dim)]
        for k, c in v.items():
            y, x = pairs[k]
            cols[x][y] = c
        maps.append(cols)
    return maps, pairs


def is_module_iso(X, Y, f, shift=0):
    """f (column map) is a closed, degree-matching, bijective module map X -> Y."""
    F = X.field
    if X.dim != Y.dim:
        return False
    for x, col in enumerate(f):
        for y in col:
            if Y.degrees[y] != X.degrees[x] - shift:
                return False

    def app(v):
        out = {}
        for x, c in v.items():
            out = vadd(F, out, f[x], c)
        return out

    for x in range(X.dim):
        ex = {x: F.one}
        for a in range(X.algebra.dim):
            if app(X.act_basis(ex, a)) != Y.act_basis(f[x], a):
                return False
        if app(X.d(ex)) != Y.d(f[x]):
            return False
    return rank(Matrix(F, Y.dim, X.dim, f)) == X.dim


def find_module_iso(X, Y, shift=0, seed=0, tries=64):
    """An explicit isomorphism X -> Y (degrees lowered by ``shift``) or None."""
    if X.dim != Y.dim or X.algebra != Y.algebra:
        return None
    if X.dim == 0:
        return []
    F = X.field
    maps, _ = module_hom_space(X, Y, shift)
    if not maps:
        return None
    n = X.dim
    for f in maps:
        if rank(Matrix(F, n, n, f)) == n:
            return f
    rng = random.Random(seed)
    for _ in range(tries):
        f = [{} for _ in range(n)]
        for g in maps:
            c = F.random_element(rng)
            if F.is_zero(c):
                continue
            f = [vadd(F, a, b, c) for a, b in zip(f, g)]
        if rank(Matrix(F, n, n, f)) == n:
            return f
    return None


def cohomology_module(C, HA, space=None):
    """H(C) as a module over the cohomology algebra ``HA`` (zero differential).

    Returns the module and the flat list of cocycle representatives.
    """
    from .dg import SpaceCohomology

    F = C.field
    space = space or SpaceCohomology(F, C.degrees, C.diff)
    reps = space.flat_reps()
    offsets = {}
    pos = 0
    for n in sorted(space.reps):
        offsets[n] = pos
        pos += len(space.reps[n])

    def coords(v):
        if not v:
            return {}
        n, c = space.class_of(v)
        return {offsets.get(n, 0) + k: x for k, x in c.items()}

    act = []
    for a in HA.reps:
        act.append([coords(C.act_elem(z, a)) for _, z in reps])
    names = [f"z{k}" for k in range(len(reps))]
    M = DGModule(HA.algebra, names, [n for n, _ in reps], act, [{} for _ in reps])
    return M, reps, coords
