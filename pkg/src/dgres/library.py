"""Small algebras, modules and bimodules used as golden examples.

Path algebras compose left to right: the path ``pq`` is "p then q", and
``e_i A`` is spanned by the paths starting at vertex ``i``.
"""
from __future__ import annotations

from .dg import DGAlgebra, DGBimodule, DGModule, simple_module, validate_algebra
from .checkers import GenerationCertificate, Sum
from .fields import rationals
from .perf import free, summand


def path_algebra(F, vertices, arrows, paths):
    """Monomial path algebra.

    ``arrows`` maps an arrow name to (source, target); ``paths`` lists the
    nonzero paths of length >= 1 as tuples of arrow names.  A product whose
    concatenation is not listed is zero, so ``paths`` must be closed under
    taking subpaths.  Vertex idempotents are named ``e<vertex>``.
    """
    basis = [(f"e{v}", 0) for v in vertices]
    ends = {f"e{v}": (v, v, ()) for v in vertices}
    names = {}
    for path in paths:
        path = tuple(path)
        for a, b in zip(path, path[1:]):
            if arrows[a][1] != arrows[b][0]:
                raise ValueError(f"path {path} is not composable")
        name = "".join(path)
        names[path] = name
        basis.append((name, 0))
        ends[name] = (arrows[path[0]][0], arrows[path[-1]][1], path)
    mul = {}
    for x, (sx, tx, px) in ends.items():
        for y, (sy, ty, py) in ends.items():
            if tx != sy:
                continue
            if not px:
                mul[(x, y)] = {y: 1}
            elif not py:
                mul[(x, y)] = {x: 1}
            elif px + py in names:
                mul[(x, y)] = {names[px + py]: 1}
    unit = {f"e{v}": 1 for v in vertices}
    if len(vertices) == 1:
        unit = f"e{vertices[0]}"
    return DGAlgebra.build(F, basis, unit, mul)


def corner(A, idempotent):
    """Basis names b with ``idempotent * b = b`` (used for e A when it is spanned by basis elements)."""
    e = A.basis_vector(idempotent)
    return [A.names[i] for i in range(A.dim) if A.product(e, {i: A.field.one}) == {i: A.field.one}]


def principal_module(A, idempotent):
    """The right module e A, for e a basis idempotent with e A spanned by basis elements."""
    F = A.field
    keep = corner(A, idempotent)
    pos = {A.index[n]: k for k, n in enumerate(keep)}
    act = []
    for a in range(A.dim):
        cols = []
        for n in keep:
            v = A.basis_product(A.index[n], a)
            cols.append({pos[i]: c for i, c in v.items()})
        act.append(cols)
    diff = [{pos[i]: c for i, c in A.diff[A.index[n]].items()} for n in keep]
    return DGModule(A, keep, [A.degrees[A.index[n]] for n in keep], act, diff)


def trivial_field_algebra(F=None):
    F = F or rationals()
    return DGAlgebra.build(F, [("1", 0)], "1", {("1", "1"): {"1": 1}})


def dual_numbers(F=None):
    F = F or rationals()
    return DGAlgebra.build(F, [("1", 0), ("eps", 0)], "1", {
        ("1", "1"): {"1": 1}, ("1", "eps"): {"eps": 1}, ("eps", "1"): {"eps": 1},
    })


def split_pair(F=None):
    """k x k with basis {1, f}, f idempotent."""
    F = F or rationals()
    return DGAlgebra.build(F, [("1", 0), ("f", 0)], "1", {
        ("1", "1"): {"1": 1}, ("1", "f"): {"f": 1}, ("f", "1"): {"f": 1}, ("f", "f"): {"f": 1},
    })


def dg_contractible_example(F=None):
    """Basis {1, t, u}, |u| = -1, d(u) = t, products of t and u zero."""
    F = F or rationals()
    return DGAlgebra.build(F, [("1", 0), ("t", 0), ("u", -1)], "1", {
        ("1", "1"): {"1": 1}, ("1", "t"): {"t": 1}, ("t", "1"): {"t": 1},
        ("1", "u"): {"u": 1}, ("u", "1"): {"u": 1},
    }, {"u": {"t": 1}})


def kronecker(F=None):
    """Two vertices, arrows a, b : 2 -> 1."""
    F = F or rationals()
    return path_algebra(F, [1, 2], {"a": (2, 1), "b": (2, 1)}, [("a",), ("b",)])


def a2_quiver(F=None):
    """Two vertices, one arrow alpha : 2 -> 1."""
    F = F or rationals()
    return path_algebra(F, [1, 2], {"alpha": (2, 1)}, [("alpha",)])


def auslander(F=None):
    """End of R + k over the dual numbers R: arrows p : 1 -> 2, q : 2 -> 1, qp = 0.

    Vertex 1 corresponds to R, vertex 2 to k; the loop pq is multiplication by eps.
    """
    F = F or rationals()
    return path_algebra(F, [1, 2], {"p": (1, 2), "q": (2, 1)}, [("p",), ("q",), ("p", "q")])


def matrix_algebra(F=None):
    """M_2(k) on matrix units e11, e12, e21, e22."""
    F = F or rationals()
    units = ["e11", "e12", "e21", "e22"]
    mul = {}
    for x in units:
        for y in units:
            if x[2] == y[1]:
                mul[(x, y)] = {f"e{x[1]}{y[2]}": 1}
    return DGAlgebra.build(F, [(u, 0) for u in units], {"e11": 1, "e22": 1}, mul)


def auslander_bimodule(F=None):
    """e Lambda with e = e1, as a (dual numbers, Lambda)-bimodule; eps acts by pq."""
    R = dual_numbers(F)
    L = auslander(R.field)
    M = principal_module(L, "e1")
    lact = {("eps", "e1"): {"pq": 1}}
    return DGBimodule.build(
        R, L, list(zip(M.names, M.degrees)), lact,
        _right_table(M), None,
    )


def row_bimodule(A=None, F=None, trivial_f=True):
    """The row module e11 M_2(k) as an (A, M_2(k))-bimodule, A = k or k x k.

    For A = k x k the idempotent f acts by zero.
    """
    B = matrix_algebra(F if A is None else A.field)
    A = A if A is not None else trivial_field_algebra(B.field)
    M = principal_module(B, "e11")
    lact = {}
    if "f" in A.index and not trivial_f:
        lact = {("f", n): {n: 1} for n in M.names}
    return DGBimodule.build(A, B, list(zip(M.names, M.degrees)), lact, _right_table(M), None)


def _right_table(M):
    A = M.algebra
    table = {}
    for a in range(A.dim):
        for i in range(M.dim):
            table[(M.names[i], A.names[a])] = {M.names[k]: c for k, c in M.act[a][i].items()}
    return table


def simple(A, vertex):
    return simple_module(A, f"e{vertex}")


GOLDEN = {
    "k": trivial_field_algebra,
    "dual": dual_numbers,
    "kxk": split_pair,
    "kronecker": kronecker,
    "a2": a2_quiver,
    "auslander": auslander,
    "m2": matrix_algebra,
}


def golden(name, F=None):
    A = GOLDEN[name](F)
    validate_algebra(A).raise_for(name)
    return A


# -- golden perfect objects and certificates -----------------------------------------------

def projective(A, idempotent):
    """e A as the summand of the free module cut out by a basis idempotent."""
    return summand(free(A), {(0, 0): A.basis_vector(idempotent)})


def splitting_certificate(A, idempotents):
    """Starts e_i A, summed in order, mapped to A by the inclusions; sum of e_i must be 1."""
    starts = [(f"P{k + 1}", projective(A, e)) for k, e in enumerate(idempotents)]
    steps = []
    ref = starts[0][0]
    for k, (name, _) in enumerate(starts[1:]):
        steps.append(Sum(ref, name))
        ref = f"#{k}"
    claim = {(0, j): A.basis_vector(e) for j, e in enumerate(idempotents)}
    return GenerationCertificate(A, starts, steps, free(A), ref, claim)


def row_certificate(B=None):
    """M_2(k) = T + T for the row summand T = e11 M_2(k), via e11 and e21."""
    B = B or matrix_algebra()
    T = projective(B, "e11")
    claim = {(0, 0): B.basis_vector("e11"), (0, 1): B.basis_vector("e21")}
    return GenerationCertificate(B, [("T", T)], [Sum("T", "T")], free(B), "#0", claim)


def trivial_certificate(B):
    return GenerationCertificate(B, [("B", free(B))], [], free(B), "B", {(0, 0): dict(B.unit_vector)})
