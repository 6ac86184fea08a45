import itertools

import pytest

from dgres.dg import (
    DGAlgebra,
    DGBimodule,
    DGModule,
    algebra_cohomology,
    bimodule_to_right_module,
    diagonal_bimodule,
    env,
    opposite,
    right_module_to_bimodule,
    validate_algebra,
    validate_bimodule,
    validate_module,
)
from dgres.errors import FieldMismatch
from dgres.library import (
    GOLDEN,
    auslander,
    auslander_bimodule,
    dg_contractible_example,
    dual_numbers,
    kronecker,
    trivial_field_algebra,
)


def exterior(F):
    """k[x]/x^2 with |x| = 1."""
    return DGAlgebra.build(F, [("1", 0), ("x", 1)], "1", {
        ("1", "1"): {"1": 1}, ("1", "x"): {"x": 1}, ("x", "1"): {"x": 1},
    })


def graded_mixed(F):
    """Basis 1, x, y, z in degrees 0, 1, -1, 0; the only nontrivial product is x y = z."""
    return DGAlgebra.build(F, [("1", 0), ("x", 1), ("y", -1), ("z", 0)], "1", {
        ("1", "1"): {"1": 1}, ("1", "x"): {"x": 1}, ("x", "1"): {"x": 1},
        ("1", "y"): {"y": 1}, ("y", "1"): {"y": 1}, ("1", "z"): {"z": 1}, ("z", "1"): {"z": 1},
        ("x", "y"): {"z": 1},
    })


def test_dual_numbers_validate(Q):
    assert validate_algebra(dual_numbers(Q)).ok


def test_bad_differential_degree(Q):
    A = DGAlgebra.build(Q, [("1", 0), ("eps", 0)], "1", {
        ("1", "1"): {"1": 1}, ("1", "eps"): {"eps": 1}, ("eps", "1"): {"eps": 1}, ("eps", "eps"): {"1": 1},
    }, {"eps": {"1": 1}})
    v = validate_algebra(A)
    assert not v.ok
    assert v.axiom == "differential has degree +1"
    assert v.witness == ("eps", "1")


def test_kronecker_validates_exhaustively(Q):
    v = validate_algebra(kronecker(Q))
    assert v.ok and v.mode == "exhaustive"


def test_associativity_witness(Q):
    # a b = c but (a a) b != a (a b)
    A = DGAlgebra.build(Q, [("1", 0), ("a", 0), ("b", 0), ("c", 0)], "1", {
        ("1", "1"): {"1": 1}, ("1", "a"): {"a": 1}, ("a", "1"): {"a": 1}, ("1", "b"): {"b": 1},
        ("b", "1"): {"b": 1}, ("1", "c"): {"c": 1}, ("c", "1"): {"c": 1},
        ("a", "a"): {"a": 1}, ("a", "b"): {"c": 1},
    })
    v = validate_algebra(A)
    assert not v.ok and v.axiom == "associativity"


def test_leibniz_failure(Q):
    # d(x) = y with y idempotent: d(x y) = 0 but d(x) y - x d(y) = y
    A = DGAlgebra.build(Q, [("1", 0), ("x", -1), ("y", 0)], "1", {
        ("1", "1"): {"1": 1}, ("1", "x"): {"x": 1}, ("x", "1"): {"x": 1},
        ("1", "y"): {"y": 1}, ("y", "1"): {"y": 1}, ("y", "y"): {"y": 1},
    }, {"x": {"y": 1}})
    v = validate_algebra(A)
    assert not v.ok and v.axiom == "Leibniz rule"


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_goldens_validate(Q, name):
    assert validate_algebra(GOLDEN[name](Q)).ok


def test_cohomology_of_dual_numbers(Q):
    H = algebra_cohomology(dual_numbers(Q))
    assert H.dims == {0: 2}
    assert H.algebra.mul == dual_numbers(Q).mul


def test_cohomology_of_contractible_example(Q):
    H = algebra_cohomology(dg_contractible_example(Q))
    assert H.dims == {0: 1}
    assert H.well_defined


@pytest.mark.parametrize("make", [dual_numbers, kronecker, auslander, exterior, graded_mixed])
def test_zero_differential_cohomology_is_the_algebra(Q, make):
    A = make(Q)
    H = algebra_cohomology(A)
    want = {}
    for d in A.degrees:
        want[d] = want.get(d, 0) + 1
    assert H.dims == want


def test_env_unit_law(Q):
    B = kronecker(Q)
    E = env(trivial_field_algebra(Q), B)
    assert E.dim == B.dim
    assert E.degrees == B.degrees
    assert {(i, j): v for (i, j), v in E.mul.items()} == B.mul


def test_env_dimension(Q):
    E = env(dual_numbers(Q), kronecker(Q))
    assert E.dim == 8
    assert validate_algebra(E).ok


def test_env_sign_rule(Q):
    A, B = graded_mixed(Q), exterior(Q)
    E = env(A, B)
    nb = B.dim
    Aop = opposite(A)
    for i1, j1, i2, j2 in itertools.product(range(A.dim), range(nb), range(A.dim), range(nb)):
        got = E.product({i1 * nb + j1: 1}, {i2 * nb + j2: 1})
        a = Aop.product({i1: 1}, {i2: 1})
        b = B.product({j1: 1}, {j2: 1})
        s = -1 if (B.degrees[j1] * A.degrees[i2]) % 2 else 1
        want = {k * nb + l: s * x * y for k, x in a.items() for l, y in b.items()}
        assert got == want


def test_opposite_involution(Q):
    for A in (graded_mixed(Q), exterior(Q), kronecker(Q)):
        assert opposite(opposite(A)) == A
        assert validate_algebra(opposite(A)).ok


def test_env_field_mismatch(Q, F2):
    with pytest.raises(FieldMismatch):
        env(dual_numbers(Q), dual_numbers(F2))


def test_kunneth_dims(Q):
    # contractible-ish example has H = k, so H(env) = H(other)
    C = dg_contractible_example(Q)
    for other in (exterior(Q), dual_numbers(Q), graded_mixed(Q)):
        for E in (env(C, other), env(other, C)):
            assert validate_algebra(E).ok
            want = {}
            for d in other.degrees:
                want[d] = want.get(d, 0) + 1
            assert algebra_cohomology(E).dims == want


def test_diagonal_interconverts(Q):
    B = kronecker(Q)
    T = diagonal_bimodule(B)
    assert validate_bimodule(T).ok
    N = bimodule_to_right_module(T)
    assert N.dim == B.dim
    assert validate_module(N).ok
    assert right_module_to_bimodule(N) == T


def test_auslander_bimodule_round_trip(Q):
    T = auslander_bimodule(Q)
    assert T.dim == 3
    assert validate_bimodule(T).ok
    N = bimodule_to_right_module(T)
    assert validate_module(N).ok
    assert right_module_to_bimodule(N) == T


def test_graded_bimodule_round_trip(Q):
    A = exterior(Q)
    T = diagonal_bimodule(A)
    N = bimodule_to_right_module(T)
    assert validate_module(N).ok
    assert right_module_to_bimodule(N) == T


def test_zero_bimodule(Q):
    A, B = dual_numbers(Q), kronecker(Q)
    T = DGBimodule(A, B, (), (), [() for _ in range(A.dim)], [() for _ in range(B.dim)], ())
    N = bimodule_to_right_module(T)
    assert N.dim == 0
    assert right_module_to_bimodule(N) == T


def test_module_validation_reports_failure(Q):
    A = dual_numbers(Q)
    # eps acting as the identity breaks eps * eps = 0
    M = DGModule(A, ["m"], [0], [[{0: 1}], [{0: 1}]], [{}])
    v = validate_module(M)
    assert not v.ok

