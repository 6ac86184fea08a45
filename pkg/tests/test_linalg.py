from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dgres.errors import NoSolution, NotAComplex, ShapeMismatch
from dgres.linalg import FiniteComplex, Matrix, cohomology, image, kernel, rank, solve
from support import rank_mod_p


def test_identity(Q):
    m = Matrix.identity(Q, 3)
    assert rank(m) == 3
    assert kernel(m) == []
    assert image(m) == [{0: 1}, {1: 1}, {2: 1}]


def test_zero_matrix(Q):
    m = Matrix.zero(Q, 2, 5)
    assert rank(m) == 0
    assert len(kernel(m)) == 5


def test_proportional_rows(Q):
    m = Matrix.from_rows(Q, [[1, 2], [2, 4]])
    assert rank(m) == 1
    (v,) = kernel(m)
    # spanned by (-2, 1)
    assert v[1] != 0 and v[0] / v[1] == Fraction(-2)
    assert m.apply(v) == {}


def test_solve_identity(Q):
    assert solve(Matrix.identity(Q, 3), [4, 0, Fraction(1, 2)]) == {0: 4, 2: Fraction(1, 2)}


def test_solve_affine_line(Q):
    m = Matrix.from_rows(Q, [[1, 1]])
    x = solve(m, [1])
    assert m.apply(x) == {0: 1}


def test_solve_inconsistent(Q):
    m = Matrix.from_rows(Q, [[1], [1]])
    with pytest.raises(NoSolution) as exc:
        solve(m, [1, 2])
    y = exc.value.certificate
    # y m = 0 but y . rhs != 0
    assert y.get(0, 0) + y.get(1, 0) == 0
    assert y.get(0, 0) * 1 + y.get(1, 0) * 2 != 0


def test_solve_shape(Q):
    with pytest.raises(ShapeMismatch):
        solve(Matrix.identity(Q, 2), [1, 2, 3])


def test_identity_complex_is_acyclic(Q):
    c = FiniteComplex(Q, {0: 1, 1: 1}, {0: Matrix.identity(Q, 1)})
    assert cohomology(c).dims() == {}


def test_zero_map_complex(Q):
    c = FiniteComplex(Q, {0: 1, 1: 1}, {0: Matrix.zero(Q, 1, 1)})
    assert cohomology(c).dims() == {0: 1, 1: 1}


def test_rank_one_complex(Q):
    c = FiniteComplex(Q, {0: 2, 1: 2}, {0: Matrix.from_rows(Q, [[1, 2], [2, 4]])})
    assert cohomology(c).dims() == {0: 1, 1: 1}


def test_not_a_complex(Q):
    one = Matrix.identity(Q, 1)
    c = FiniteComplex(Q, {0: 1, 1: 1, 2: 1}, {0: one, 1: one})
    with pytest.raises(NotAComplex) as exc:
        cohomology(c)
    assert exc.value.degree == 0


def test_representatives_are_cocycles(Q):
    d0 = Matrix.from_rows(Q, [[1, 0], [0, 0], [0, 0]])
    d1 = Matrix.from_rows(Q, [[0, 1, 0]])
    H = cohomology(FiniteComplex(Q, {0: 2, 1: 3, 2: 1}, {0: d0, 1: d1}))
    assert H.dims() == {0: 1, 1: 1}
    for n, reps in H.reps.items():
        for z in reps:
            assert H.complex.d(n).apply(z) == {}


# -- randomized comparison against an independent elimination ----------------------

def _random_complex(F, p, rng, dims):
    """d1 d0 = 0 by construction: d1 kills the image of d0."""
    n0, n1, n2 = dims
    d0 = rng.integers(0, p, size=(n1, n0))
    d0[:, rng.integers(0, n0 + 1):] = 0
    # rows of d1 from the left kernel of d0
    from support import nullspace_mod_p
    K = nullspace_mod_p(d0.T % p, p, n1) if n0 else np.eye(n1, dtype=np.int64)
    coeffs = rng.integers(0, p, size=(n2, K.shape[1]))
    d1 = (coeffs @ K.T) % p
    return d0, d1


@pytest.mark.parametrize("p", [2, 3, 5])
def test_cohomology_matches_independent_ranks(p):
    from dgres.fields import prime_field
    F = prime_field(p)
    rng = np.random.default_rng(p)
    for _ in range(60):
        dims = tuple(int(x) for x in rng.integers(1, 5, size=3))
        d0, d1 = _random_complex(F, p, rng, dims)
        assert not ((d1 @ d0) % p).any()
        c = FiniteComplex(F, {0: dims[0], 1: dims[1], 2: dims[2]},
                          {0: Matrix.from_rows(F, d0.tolist(), dims[0]),
                           1: Matrix.from_rows(F, d1.tolist(), dims[1])})
        r0, r1 = rank_mod_p(d0, p), rank_mod_p(d1, p)
        want = {0: dims[0] - r0, 1: dims[1] - r1 - r0, 2: dims[2] - r1}
        got = cohomology(c).dims()
        assert {n: got.get(n, 0) for n in want} == want
        assert c.euler_characteristic() == sum((-1) ** n * h for n, h in got.items())


_small = st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=4)


@settings(max_examples=80, deadline=None)
@given(rows=_small, rhs_seed=st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_rank_and_solve_over_q(Q, rows, rhs_seed):
    m = Matrix.from_rows(Q, rows)
    assert rank(m) == np.linalg.matrix_rank(np.array(rows, dtype=float))
    assert rank(m) + len(kernel(m)) == 3
    rhs = rhs_seed[:len(rows)]
    aug = [r + [b] for r, b in zip(rows, rhs)]
    consistent = rank(m) == rank(Matrix.from_rows(Q, aug))
    try:
        x = solve(m, rhs)
    except NoSolution:
        assert not consistent
    else:
        assert consistent
        assert m.apply(x) == {i: Fraction(b) for i, b in enumerate(rhs) if b}


@settings(max_examples=40, deadline=None)
@given(rows=_small)
def test_kernel_vectors_are_killed(Q, rows):
    m = Matrix.from_rows(Q, rows)
    for v in kernel(m):
        assert m.apply(v) == {}
