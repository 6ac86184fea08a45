"""Random objects and an independent brute-force Hom oracle for the tests."""
import itertools
import random

import numpy as np

from dgres.perf import PerfObject, Morphism, cone, direct_sum, free, hom_complex, shift, summand
from dgres.resolve import compress
from dgres.structure import idempotent_set


# -- mod p linear algebra, written independently of dgres.linalg ------------------------------

def _eliminate(M, p):
    """Reduced row echelon form mod p; returns (matrix, pivot columns)."""
    M = np.array(M, dtype=np.int64) % p
    pivots = []
    if M.size == 0:
        return M, pivots
    r = 0
    for c in range(M.shape[1]):
        nz = np.nonzero(M[r:, c])[0]
        if not len(nz):
            continue
        piv = r + nz[0]
        M[[r, piv]] = M[[piv, r]]
        M[r] = (M[r] * pow(int(M[r, c]), p - 2, p)) % p
        col = M[:, c].copy()
        col[r] = 0
        M = (M - np.outer(col, M[r])) % p
        pivots.append(c)
        r += 1
        if r == M.shape[0]:
            break
    return M, pivots


def rank_mod_p(M, p):
    return len(_eliminate(M, p)[1])


def nullspace_mod_p(M, p, n):
    """Basis (as columns of an n x k array) of {v : M v = 0}."""
    if len(M) == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = _eliminate(M, p)
    free_cols = [c for c in range(n) if c not in pivots]
    basis = np.zeros((n, len(free_cols)), dtype=np.int64)
    for k, f in enumerate(free_cols):
        basis[f, k] = 1
        for i, c in enumerate(pivots):
            basis[c, k] = (-R[i, f]) % p
    return basis


# -- the oracle ----------------------------------------------------------------------------------

def _dense_module(M):
    n = M.dim
    acts = []
    for a in range(M.algebra.dim):
        X = np.zeros((n, n), dtype=np.int64)
        for i, col in enumerate(M.act[a]):
            for k, c in col.items():
                X[k, i] = c
        acts.append(X)
    D = np.zeros((n, n), dtype=np.int64)
    for i, col in enumerate(M.diff):
        for k, c in col.items():
            D[k, i] = c
    return acts, D, list(M.degrees)


def _projector(x):
    U = x.underlying_module()
    n = U.dim
    P = np.eye(n, dtype=np.int64)
    proj = x.projector()
    if proj is not None:
        P = np.zeros((n, n), dtype=np.int64)
        for i, col in enumerate(proj):
            for k, c in col.items():
                P[k, i] = c
    return U, P


_MAPS = {}
_DENSE = {}


def _dense(x):
    """Dense action, differential, degrees and projector of U(x), cached per object."""
    hit = _DENSE.get(id(x))
    if hit is None or hit[0] is not x:
        U, P = _projector(x)
        hit = _DENSE[id(x)] = (x, *_dense_module(U), P)
    return hit[1:]


def _rank_f2(rows):
    """Rank over F2 of integer bit-rows."""
    basis = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top not in basis:
                basis[top] = r
                break
            r ^= basis[top]
    return len(basis)


def oracle_hom_dims(x, y, window):
    """dim H^p of graded module maps U(x) -> U(y), cut down by the idempotents, over a prime field.

    Uses only the underlying modules: all right-linear maps of degree p, the
    differential f -> d f - (-1)^p f d, and the projector f -> g f e.  The
    space of degree-p module maps only depends on the graded modules, so it is
    cached across calls.
    """
    F = x.field
    p = F.characteristic
    assert p and F.height == 0
    ax, dx, degx, E = _dense(x)
    ay, dy, degy, G = _dense(y)
    nx, ny = len(degx), len(degy)
    dxf, dyf = dx.astype(np.float64), dy.astype(np.float64)
    sig = (p, tuple(a.tobytes() for a in ax), tuple(degx), E.tobytes(),
           tuple(a.tobytes() for a in ay), tuple(degy), G.tobytes())

    def maps(q):
        """Basis of degree-q module maps, each an ny x nx array, after the projector."""
        key = sig + (q,)
        if key in _MAPS:
            return _MAPS[key]
        slots = [(i, j) for i in range(ny) for j in range(nx) if degy[i] == degx[j] + q]
        out = []
        if slots:
            cols = [i * nx + j for i, j in slots]
            # vec(f A - B f) = (I (x) A^T - B (x) I) vec(f), row-major vec
            eqs = [(np.kron(np.eye(ny, dtype=np.int64), A.T) - np.kron(B, np.eye(nx, dtype=np.int64)))[:, cols]
                   for A, B in zip(ax, ay)]
            eqs = np.vstack(eqs) % p if eqs else []
            K = nullspace_mod_p(eqs, p, len(slots))
            for k in range(K.shape[1]):
                f = np.zeros((ny, nx), dtype=np.int64)
                for s, (r, c) in enumerate(slots):
                    f[r, c] = K[s, k]
                out.append((G @ f @ E) % p)
        out = np.array(out, dtype=np.int64).reshape(len(out), ny, nx)
        _MAPS[key] = out
        return out

    def diff(fs, q):
        if not len(fs):
            return fs
        sgn = -1 if q % 2 else 1
        # entries stay far below 2**53, so float products (BLAS) are exact
        k = len(fs)
        f = fs.astype(np.float64)
        left = (dyf @ f.transpose(1, 0, 2).reshape(ny, k * nx)).reshape(ny, k, nx).transpose(1, 0, 2)
        right = (f.reshape(k * ny, nx) @ dxf).reshape(k, ny, nx)
        return (left - sgn * right).astype(np.int64) % p

    def rank_of(fs):
        if not len(fs):
            return 0
        rows = fs.reshape(len(fs), -1)
        if p == 2:
            return _rank_f2([int.from_bytes(r.tobytes(), "big") for r in np.packbits(rows != 0, axis=1)])
        return rank_mod_p(rows, p)

    lo, hi = window
    spaces = {q: maps(q) for q in range(lo - 1, hi + 1)}
    out = {}
    for q in range(lo, hi + 1):
        C = spaces[q]
        if not len(C):
            continue
        h = rank_of(C) - rank_of(diff(C, q)) - rank_of(diff(spaces[q - 1], q - 1))
        if h:
            out[q] = h
    return out


# -- random objects -------------------------------------------------------------------------------

def base_objects(A):
    objs = [free(A)]
    idems = idempotent_set(A)
    if len(idems) > 1:
        objs += [summand(free(A), {(0, 0): e}) for e in idems]
    return objs


def random_closed_map(x, y, rng):
    H = hom_complex(x, y)
    reps = H.cocycle_reps(0)
    if not reps:
        return Morphism.zero(x, y)
    F = x.field
    v = {}
    for z in reps:
        c = F.random_element(rng)
        for k, a in z.items():
            v[k] = F.add(v.get(k, F.zero), F.mul(c, a))
    v = {k: a for k, a in v.items() if not F.is_zero(a)}
    return Morphism.from_vector(x, y, v, 0).compressed()


def random_perf(A, rng, steps=2, max_rank=4):
    """Shifts, sums and cones of random closed maps, starting from free and projective objects."""
    pool = base_objects(A)
    x = rng.choice(pool)
    x = shift(x, rng.randint(-1, 1))
    for _ in range(steps):
        kind = rng.random()
        y = shift(rng.choice(pool), rng.randint(-1, 1))
        if x.rank + y.rank > max_rank:
            break
        if kind < 0.4:
            x = direct_sum(x, y)
        else:
            f = random_closed_map(y, x, rng) if rng.random() < 0.5 else random_closed_map(x, y, rng)
            x = cone(f)
    return x


def module_of(x):
    """The underlying module of a perfect object, cut down by its idempotent."""
    M, _, _ = compress(x.underlying_module(), x.projector())
    return M


def twisted_complexes(A, max_cells=3, cells=(0, 1)):
    """Every one-sided twisted complex over a prime-field algebra with up to ``max_cells`` cells."""
    F = A.field
    scalars = list(F.elements())
    by_degree = {}
    for d in set(A.degrees):
        idx = [i for i in range(A.dim) if A.degrees[i] == d]
        vecs = []
        for coeffs in itertools.product(scalars, repeat=len(idx)):
            vecs.append({i: c for i, c in zip(idx, coeffs) if not F.is_zero(c)})
        by_degree[d] = vecs
    out = []
    for r in range(1, max_cells + 1):
        for ns in itertools.product(cells, repeat=r):
            slots = [(i, j) for i in range(r) for j in range(i) if ns[i] - ns[j] + 1 in by_degree]
            choices = [by_degree[ns[i] - ns[j] + 1] for i, j in slots]
            for pick in itertools.product(*choices):
                twist = {s: v for s, v in zip(slots, pick) if v}
                try:
                    out.append(PerfObject(A, ns, twist))
                except Exception:
                    pass
    return out


def rng_for(seed):
    return random.Random(seed)
