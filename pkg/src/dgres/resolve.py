"""Minimal semifree resolutions, Ext, derived tensor and the smoothness probe.

A resolution of M is built as a perfect object P with an augmentation
rho : P -> M.  Each step computes H(C) for C = cone(rho) = P[1] + M.  If it
vanishes, rho is a quasi-isomorphism.  Otherwise every class in a
complement of the decomposables H(C).J (J the radical of H(A)) is killed by
attaching one cell e A[-q], e an idempotent from a fixed complete set:
for a cocycle (p, m) of degree q the new generator g has d(g) = -p and
rho(g) = m.

The syzygy H(C_k) is logged as a module over H(A).  If it matches an
earlier syzygy up to a degree shift (fingerprint first, then an explicit
isomorphism) the resolution is reported periodic.  For ordinary algebras
this is the classical criterion for minimal resolutions; for DG algebras
it is an assumption recorded in reports.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .dg import (
    DGModule,
    SpaceCohomology,
    algebra_cohomology,
    bimodule_to_right_module,
    diagonal_bimodule,
    env,
    homogeneous_degree,
    sign,
)
from .errors import ActionMismatch, AlgebraMismatch, SizeBoundExceeded, WindowNotGuaranteed
from .linalg import Decomposer, Matrix, RowReducer, rank, vadd
from .perf import HomComplex, PerfObject, hom_to_module
from .structure import (
    cohomology_module,
    find_module_iso,
    fingerprint,
    idempotent_set,
    is_module_iso,
    radical,
)

DEFAULT_DEPTH = 24
DEFAULT_SIZE = 2000


@dataclass(frozen=True)
class Finite:
    length: int

    def __str__(self):
        return f"Finite({self.length})"


@dataclass(frozen=True)
class Periodic:
    period: int
    syzygy: int

    def __str__(self):
        return f"Periodic({self.period}, from {self.syzygy})"


@dataclass(frozen=True)
class Truncated:
    depth: int

    def __str__(self):
        return f"Truncated({self.depth})"


@dataclass
class Syzygy:
    step: int
    module: DGModule          # H(C_k) over H(A)
    fingerprint: tuple
    cells_before: int          # number of cells of P when C_k was formed
    top: int | None            # highest degree of H(C_k)


@dataclass
class PeriodicityCertificate:
    first: int
    second: int
    shift: int
    iso: list                  # column map H(C_first) -> H(C_second)


def compress(U, proj):
    """The image of a projector on a module, as a module; returns (module, basis, decomposer)."""
    F = U.field
    if proj is None:
        basis = [{i: F.one} for i in range(U.dim)]
        return U, basis, None
    basis = []
    red = RowReducer(F)
    for i in range(U.dim):
        v = proj[i]
        if v and red.add(v):
            basis.append(v)
    dec = Decomposer(F, basis)
    act = [[dec.coords(U.act_basis(v, a)) for v in basis] for a in range(U.algebra.dim)]
    diff = [dec.coords(U.d(v)) for v in basis]
    degrees = [homogeneous_degree(U.degrees, v) for v in basis]
    names = [f"q{k}" for k in range(len(basis))]
    return DGModule(U.algebra, names, degrees, act, diff), basis, dec


class Resolver:
    """Stateful construction of a minimal semifree resolution of M."""

    def __init__(self, M, depth_bound=DEFAULT_DEPTH, size_bound=DEFAULT_SIZE, seed=0):
        self.module = M
        self.algebra = A = M.algebra
        self.field = M.field
        self.depth_bound = depth_bound
        self.size_bound = size_bound
        self.seed = seed
        self.HA = algebra_cohomology(A)
        self.idempotents = idempotent_set(A)
        J, exact = radical(self.HA.algebra)
        self.radical_exact = exact
        # closed representatives in A of a basis of the radical of H(A)
        self.radical_reps = []
        for v in J:
            rep = {}
            for k, c in v.items():
                rep = vadd(self.field, rep, self.HA.reps[k], c)
            self.radical_reps.append(rep)
        self.cells = []        # creation order
        self.cell_idem = []
        self.twist = {}        # (older, newer) -> algebra element
        self.rho = []          # augmentation value of each generator
        self.syzygies = []
        self.status = None
        self.certificate = None
        self.steps = 0
        self.acyclic_at = None

    # -- the current partial resolution -------------------------------------

    def model(self, ncells=None):
        """The perfect object on the first ``ncells`` cells, in triangular order."""
        r = len(self.cells) if ncells is None else ncells
        cells = [self.cells[r - 1 - i] for i in range(r)]
        twist = {}
        for (old, new), v in self.twist.items():
            if new < r:
                twist[(r - 1 - old, r - 1 - new)] = v
        idem = {(i, i): self.cell_idem[r - 1 - i] for i in range(r)}
        return PerfObject(self.algebra, cells, twist, idem, check=False)

    def augmentation(self, ncells=None):
        """rho as a column map from the underlying module of :meth:`model`."""
        F = self.field
        A = self.algebra
        M = self.module
        r = len(self.cells) if ncells is None else ncells
        cols = []
        for i in range(r):
            m = self.rho[r - 1 - i]
            for b in range(A.dim):
                cols.append(M.act_elem(m, {b: F.one}))
        return cols

    def _cone(self):
        """C = cone(rho) on the compressed underlying module of P."""
        F = self.field
        M = self.module
        P = self.model()
        U = P.underlying_module()
        Q, basis, _ = compress(U, P.projector())
        rho = self.augmentation()
        nq = Q.dim

        def rho_of(v):
            out = {}
            for k, c in v.items():
                out = vadd(F, out, rho[k], c)
            return out

        names = [f"s:{x}" for x in Q.names] + [f"t:{x}" for x in M.names]
        degrees = [d - 1 for d in Q.degrees] + list(M.degrees)
        act = []
        for a in range(self.algebra.dim):
            act.append(list(Q.act[a]) + [{k + nq: c for k, c in col.items()} for col in M.act[a]])
        diff = []
        for i in range(nq):
            col = {k: F.neg(c) for k, c in Q.diff[i].items()}
            col.update({k + nq: c for k, c in rho_of(basis[i]).items()})
            diff.append(col)
        diff += [{k + nq: c for k, c in col.items()} for col in M.diff]
        C = DGModule(self.algebra, names, degrees, act, diff)
        return C, basis, nq

    # -- one step -----------------------------------------------------------

    def advance(self):
        """Compute H(C_k); log the syzygy; attach generators.  Returns False once acyclic."""
        if self.acyclic_at is not None:
            return False
        F = self.field
        C, basis, nq = self._cone()
        space = SpaceCohomology(F, C.degrees, C.diff)
        k = self.steps
        self.steps += 1
        if space.is_zero():
            self.acyclic_at = k
            self.status = Finite(max(k - 1, 0))
            self.syzygies.append(Syzygy(k, None, ((), ()), len(self.cells), None))
            return False
        S, reps, coords = cohomology_module(C, self.HA, space)
        fp = fingerprint(S)
        syz = Syzygy(k, S, fp, len(self.cells), max(S.degrees))
        self.syzygies.append(syz)
        if self.status is None:
            for old in self.syzygies[:-1]:
                if old.module is None or old.fingerprint != fp:
                    continue
                sh = min(S.degrees) - min(old.module.degrees)
                iso = find_module_iso(S, old.module, sh, seed=self.seed)
                if iso is not None:
                    self.status = Periodic(k - old.step, old.step)
                    self.certificate = PeriodicityCertificate(k, old.step, sh, iso)
                    break
        self._attach(C, reps, coords, basis, nq)
        return True

    def _attach(self, C, reps, coords, basis, nq):
        F = self.field
        A = self.algebra
        red = RowReducer(F)
        for _, z in reps:
            for a in self.radical_reps:
                w = C.act_elem(z, a)
                if w:
                    red.add(coords(w))
        new = []
        for e in self.idempotents:
            for _, z in reps:
                w = C.act_elem(z, e)
                if w and red.add(coords(w)):
                    new.append((w, e))
                    # the whole submodule generated by w is now accounted for
                    for a in self.HA.reps:
                        u = C.act_elem(w, a)
                        if u:
                            red.add(coords(u))
        if len(self.cells) + len(new) > self.size_bound:
            raise SizeBoundExceeded(
                f"resolution needs {len(self.cells) + len(new)} cells, bound {self.size_bound}")
        r = len(self.cells)
        nA = A.dim
        for w, e in new:
            q = homogeneous_degree(C.degrees, w)
            p_local = {i: c for i, c in w.items() if i < nq}
            m = {i - nq: c for i, c in w.items() if i >= nq}
            # back to the underlying module of the current model, then to cells
            p = {}
            for i, c in p_local.items():
                p = vadd(F, p, basis[i], c)
            entries = {}
            for idx, c in p.items():
                cell, b = divmod(idx, nA)
                entries.setdefault(r - 1 - cell, {})[b] = F.neg(c)
            c_new = len(self.cells)
            for old, v in entries.items():
                self.twist[(old, c_new)] = v
            self.cells.append(-q)
            self.cell_idem.append(e)
            self.rho.append(m)

    # -- driver ---------------------------------------------------------------

    def run(self, until_status=True, min_steps=0):
        while self.steps < self.depth_bound:
            if until_status and self.status is not None and self.steps >= min_steps:
                break
            if not self.advance():
                break
        if self.status is None:
            self.status = Truncated(self.steps)
        return self

    def guaranteed_top(self, N, step=None):
        """Largest i with Ext^i(M, N) = H^i Hom(P_k, N) guaranteed, for the latest step.

        Returns (i_max, ncells); i_max is None when every degree is exact.
        Requires a connective algebra unless the resolution is finite.
        """
        syz = self.syzygies[-1] if step is None else self.syzygies[step]
        if syz.module is None:
            return None, syz.cells_before
        if not self.HA.algebra or any(n > 0 for n in self.HA.dims):
            raise WindowNotGuaranteed(None, None)
        ndims = N.cohomology().dims()
        if not ndims:
            return None, syz.cells_before
        return min(ndims) - syz.top - 2, syz.cells_before


class ResolutionResult:
    def __init__(self, resolver):
        self.resolver = resolver
        self.status = resolver.status
        self.model = resolver.model()
        self.syzygy_log = [s.fingerprint for s in resolver.syzygies]
        self.certificate = resolver.certificate
        self.minimal = resolver.radical_exact

    @property
    def augmentation(self):
        return self.resolver.augmentation()

    def verify_periodicity(self):
        c = self.certificate
        if c is None:
            return False
        S = self.resolver.syzygies
        return is_module_iso(S[c.first].module, S[c.second].module, c.iso, c.shift)

    def __repr__(self):
        return f"ResolutionResult({self.status}, cells={len(self.resolver.cells)})"


def minimal_resolution(M, depth_bound=DEFAULT_DEPTH, size_bound=DEFAULT_SIZE, seed=0):
    return ResolutionResult(Resolver(M, depth_bound, size_bound, seed).run())


# -- Ext ------------------------------------------------------------------------------

class ExtResult(dict):
    """Ext dims in a window, with the bookkeeping that justifies them."""

    def __init__(self, dims, status, guaranteed, extrapolated=()):
        super().__init__(dims)
        self.status = status
        self.guaranteed = guaranteed
        self.extrapolated = tuple(extrapolated)


def _single_degree(dims):
    return len(dims) == 1


def _ordinary(A):
    return all(d == 0 for d in A.degrees) and not any(A.diff)


def ext_dims(m, n, window=(0, 10), depth_bound=DEFAULT_DEPTH, size_bound=DEFAULT_SIZE,
             resolver=None, seed=0):
    """dim Ext^i(m, n) = dim Hom_D(m, n[i]) for i in the window.

    ``m`` may be a perfect object (exact, via its hom complex) or a DG module
    (via a minimal resolution).  Degrees outside the guaranteed window raise
    WindowNotGuaranteed rather than being reported.
    """
    lo, hi = window
    if isinstance(m, PerfObject):
        if m.algebra != n.algebra:
            raise AlgebraMismatch("ext between objects over different algebras")
        H = hom_to_module(m, n)
        return ExtResult(H.ext_dims(window), "perfect", None)
    if m.algebra != n.algebra:
        raise AlgebraMismatch("ext between modules over different algebras")
    R = resolver or Resolver(m, depth_bound, size_bound, seed)
    ndims = n.cohomology().dims()
    if not ndims:
        return ExtResult({i: 0 for i in range(lo, hi + 1)}, "zero target", None)
    connective = R.HA.algebra is not None and all(d <= 0 for d in R.HA.dims)
    top, ncells = -10 ** 9, 0
    while True:
        if R.acyclic_at is not None:
            top, ncells = None, len(R.cells)
            break
        if R.steps and connective:
            top, ncells = R.guaranteed_top(n)
            if top is None or top >= hi:
                break
        if R.steps >= R.depth_bound:
            break
        R.advance()
    if R.status is None:
        R.status = Truncated(R.steps)
    if top is not None and not connective:
        raise WindowNotGuaranteed(window, None)
    H = hom_to_module(R.model(ncells), n)
    dims = H.cohomology.dims()
    out, extra = {}, []
    for i in range(lo, hi + 1):
        if top is None or i <= top:
            out[i] = dims.get(i, 0)
    if top is not None and top < hi:
        if not (isinstance(R.status, Periodic) and _can_extrapolate(R, m, n)):
            raise WindowNotGuaranteed(window, (None, top))
        p, j = R.status.period, R.status.syzygy
        t_shift = min(m.cohomology().dims()) - min(ndims)
        for i in range(max(lo, top + 1), hi + 1):
            src = i - p
            if i + t_shift < j + p + 1:
                raise WindowNotGuaranteed(window, (None, top))
            if src in out:
                out[i] = out[src]
            elif src <= top:
                out[i] = dims.get(src, 0)
            else:
                raise WindowNotGuaranteed(window, (None, top))
            extra.append(i)
    return ExtResult(out, R.status, (None, top), extra)


def _can_extrapolate(R, m, n):
    """Periodic extrapolation is used only for ordinary algebras and formal arguments."""
    return (_ordinary(R.algebra) and R.radical_exact
            and _single_degree(m.cohomology().dims()) and _single_degree(n.cohomology().dims()))


# -- derived tensor ---------------------------------------------------------------------

def derived_tensor(x, T):
    """x (perfect over A) tensored with the A-B bimodule T: cell A[n] becomes T[n]."""
    A = x.algebra
    if T.left != A:
        raise ActionMismatch("left algebra of the bimodule differs from the algebra of x")
    F = A.field
    B = T.right
    nt = T.dim
    by_col = {}
    for (l, c), v in x.twist.items():
        by_col.setdefault(c, []).append((l, v))
    names, degrees, diff = [], [], []
    act = [[] for _ in range(B.dim)]
    for c, n in enumerate(x.cells):
        s = sign(n)
        for t in range(nt):
            names.append(f"c{c}.{T.names[t]}")
            degrees.append(T.degrees[t] - n)
            col = {}
            for l, v in by_col.get(c, ()):
                w = T.left_act_elem(v, {t: F.one})
                col = vadd(F, col, {l * nt + k: a for k, a in w.items()})
            if T.diff[t]:
                col = vadd(F, col, {c * nt + k: (a if s == 1 else F.neg(a)) for k, a in T.diff[t].items()})
            diff.append(col)
        for b in range(B.dim):
            act[b].extend({c * nt + k: a for k, a in T.ract[b][t].items()} for t in range(nt))
    X = DGModule(B, names, degrees, act, diff)
    if x.idempotent is None:
        return X
    proj = []
    for c in range(x.rank):
        for t in range(nt):
            col = {}
            for (l, c2), v in x.idempotent.items():
                if c2 == c:
                    w = T.left_act_elem(v, {t: F.one})
                    col = vadd(F, col, {l * nt + k: a for k, a in w.items()})
            proj.append(col)
    Q, _, _ = compress(X, proj)
    return Q


# -- condition (1) style checks --------------------------------------------------------------

@dataclass
class QuasiIsoReport:
    ok: bool
    source_dims: dict
    target_dims: dict
    ranks: dict
    window: tuple | None
    status: object = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def action_quasi_iso_check(A, T, window=(-10, 10), depth_bound=DEFAULT_DEPTH,
                           size_bound=DEFAULT_SIZE, resolution=None):
    """Is a -> (p -> a . rho(p)) a quasi-isomorphism A -> Hom_B(P, T)?"""
    if T.left != A:
        raise ActionMismatch("bimodule's left algebra differs from A")
    F = A.field
    N = T.right_module()
    res = resolution or minimal_resolution(N, depth_bound, size_bound)
    R = res.resolver
    exhaustive = isinstance(res.status, Finite)
    if not exhaustive:
        raise WindowNotGuaranteed(window, None)
    P = res.model
    H = hom_to_module(P, N)
    HA = algebra_cohomology(A)
    src = HA.dims
    tgt = H.dims()
    ranks = {}
    ok = True
    for deg in sorted(set(src) | set(tgt)):
        reps = [z for z, d in zip(HA.reps, HA.rep_degrees) if d == deg]
        rows = []
        for a in reps:
            phi = {}
            for j in range(P.rank):
                val = T.left_act_elem(a, R.rho[P.rank - 1 - j])
                phi = vadd(F, phi, {j * N.dim + k: c for k, c in val.items()})
            if H.d(phi):
                raise ActionMismatch("the action map is not a chain map")
            rows.append(H.class_of(phi))
        r = rank(Matrix(F, tgt.get(deg, 0), len(rows), rows)) if rows else 0
        ranks[deg] = r
        if not (src.get(deg, 0) == tgt.get(deg, 0) == r):
            ok = False
    return QuasiIsoReport(ok, dict(sorted(src.items())), dict(sorted(tgt.items())), ranks, None,
                          res.status, "" if ok else "H(A) -> Hom(T, T[*]) is not bijective")


# -- smoothness ------------------------------------------------------------------------------

@dataclass
class SmoothnessVerdict:
    verdict: str                 # "Smooth" | "NotSmooth" | "Undetermined"
    result: ResolutionResult

    @property
    def length(self):
        s = self.result.status
        return s.length if isinstance(s, Finite) else None

    def __repr__(self):
        return f"SmoothnessVerdict({self.verdict}, {self.result.status})"


def diagonal_module(A):
    E = env(A, A)
    return bimodule_to_right_module(diagonal_bimodule(A), E)


def smoothness_probe(A, depth_bound=DEFAULT_DEPTH, size_bound=DEFAULT_SIZE):
    res = minimal_resolution(diagonal_module(A), depth_bound, size_bound)
    if isinstance(res.status, Finite):
        v = "Smooth"
    elif isinstance(res.status, Periodic):
        v = "NotSmooth"
    else:
        v = "Undetermined"
    return SmoothnessVerdict(v, res)
