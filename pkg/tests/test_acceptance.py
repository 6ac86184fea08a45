"""Acceptance criteria 1 to 9, each at its stated tolerance.

Every test prints a ``criterion N: PASS/FAIL`` line as it finishes, and the
terminal summary repeats them (see conftest.py).  Criterion 7 is the
exhaustive oracle sweep and dominates the running time.
"""
import re
import time

import pytest

from conftest import data_path
from dgres.basechange import ExtensionMap, check_adjunction_dims, check_hom_base_change, extend
from dgres.checkers import (
    FAIL,
    PASS,
    Task,
    check_exceptional_collection,
    check_morita,
    check_resolution_triple,
    rederive,
    transport_and_recheck,
)
from dgres.cli import main
from dgres.dg import diagonal_bimodule, free_module, simple_module
from dgres.library import (
    GOLDEN,
    a2_quiver,
    auslander,
    auslander_bimodule,
    dg_contractible_example,
    dual_numbers,
    kronecker,
    matrix_algebra,
    projective,
    row_bimodule,
    row_certificate,
    simple,
    splitting_certificate,
    trivial_certificate,
    trivial_field_algebra,
)
from dgres.perf import Morphism, cone, free, hom_complex
from dgres.resolve import Periodic, ext_dims, minimal_resolution, smoothness_probe
from support import base_objects, module_of, oracle_hom_dims, random_perf, rng_for, twisted_complexes


@pytest.fixture
def say(capsys, request):
    """Print the criterion line for this test, pass or fail."""
    n = request.node.get_closest_marker("criterion").args[0]
    state = {"label": f"criterion {n}"}
    yield state
    ok = getattr(request.node, "_passed", None)
    with capsys.disabled():
        print(f"\n{state['label']}: {'PASS' if ok else 'FAIL'}")


def nonzero(d):
    return {i: n for i, n in d.items() if n}


# -- 1 ---------------------------------------------------------------------------------------------

@pytest.mark.criterion(1)
def test_auslander_resolution(Q, say):
    t = time.perf_counter()
    rep = check_resolution_triple(dual_numbers(Q), auslander(Q), auslander_bimodule(Q))
    elapsed = time.perf_counter() - t
    for c in ("smoothness", "condition-1", "condition-2", "condition-3"):
        assert rep.child(c).verdict == PASS, c
    assert rep.verdict == PASS
    assert rep.child("condition-3").evidence["total"] == 3
    assert elapsed < 10, elapsed


# -- 2 ---------------------------------------------------------------------------------------------

@pytest.mark.criterion(2)
def test_ext_periodicity(Q, say):
    A = dual_numbers(Q)
    t = time.perf_counter()
    k = simple_module(A, "1")
    r = ext_dims(k, k, (0, 10))
    elapsed = time.perf_counter() - t
    assert dict(r) == {i: 1 for i in range(11)}
    assert isinstance(r.status, Periodic) and r.status.period == 1
    assert minimal_resolution(k).verify_periodicity()
    assert elapsed < 2, elapsed


# -- 3 ---------------------------------------------------------------------------------------------

@pytest.mark.criterion(3)
def test_base_change_invariance(Q, Qs, F2, F4, say):
    t = time.perf_counter()
    done = 0
    for F, e in ((Q, ExtensionMap(Q, Qs)), (F2, ExtensionMap(F2, F4))):
        for name in sorted(GOLDEN):
            A = GOLDEN[name](F)
            rng = rng_for(f"acceptance/{name}/{F.characteristic}")
            for _ in range(100):
                x = random_perf(A, rng)
                f = module_of(random_perf(A, rng))
                rep = check_hom_base_change(x, f, e, (-3, 3))
                assert rep.ok and rep.source == rep.target, (name, F, rep)
                done += 1
    elapsed = time.perf_counter() - t
    assert done == 2 * 100 * len(GOLDEN)
    assert elapsed < 60, elapsed


# -- 4 ---------------------------------------------------------------------------------------------

@pytest.mark.criterion(4)
def test_exceptional_collection_transport(F2, F4, say):
    A = kronecker(F2)
    e = ExtensionMap(F2, F4)
    P1, P2 = projective(A, "e1"), projective(A, "e2")
    cert = splitting_certificate(A, ["e1", "e2"])
    rep = transport_and_recheck(Task("check-full-exc", b=A, objects=[P1, P2], certificate=cert), e)
    assert rep.child("over-base").verdict == PASS
    assert rep.child("over-extension").verdict == PASS
    for B, objs in ((A, [P2, P1]), (extend(A, e), [extend(P2, e), extend(P1, e)])):
        bad = check_exceptional_collection(B, objs)
        assert bad.verdict == FAIL
        witness = [c.witness for c in bad.children if c.verdict == FAIL]
        assert witness == [{"pair": [1, 0], "degree": 0, "dim": 2}]


# -- 5 ---------------------------------------------------------------------------------------------

@pytest.mark.criterion(5)
def test_morita(Q, say):
    B = matrix_algebra(Q)
    rep = check_morita(trivial_field_algebra(Q), B, row_bimodule(F=Q), certificate=row_certificate(B))
    assert rep.verdict == PASS

    L = auslander(Q)
    N = simple(L, 2)
    rep = check_morita(dual_numbers(Q), L, auslander_bimodule(Q), witness=N)
    assert rep.verdict == FAIL
    assert rep.child("condition-2").verdict == FAIL
    assert rep.child("condition-1").verdict == PASS and rep.child("condition-3").verdict == PASS
    # the witness again, recomputed here: nonzero, and T = e1 L has a finite model with no Ext into N
    assert N.cohomology().dims() == {0: 1}
    T = module_of(projective(L, "e1"))
    res = minimal_resolution(T)
    assert res.status.__class__.__name__ == "Finite"
    assert not any(ext_dims(T, N, (0, 10)).values())
    assert rederive(rep.to_dict()) == FAIL


# -- 6 ---------------------------------------------------------------------------------------------

@pytest.mark.criterion(6)
def test_smoothness(Q, say):
    t = time.perf_counter()
    v = smoothness_probe(a2_quiver(Q))
    assert time.perf_counter() - t < 5
    assert v.verdict == "Smooth" and v.length == 1
    t = time.perf_counter()
    v = smoothness_probe(dual_numbers(Q))
    assert time.perf_counter() - t < 5
    assert v.verdict == "NotSmooth"
    assert isinstance(v.result.status, Periodic)
    assert v.result.verify_periodicity()


# -- 7 ---------------------------------------------------------------------------------------------

SWEEP = ["k", "dual", "kxk", "dg", "a2", "kronecker", "m2"]


@pytest.mark.criterion(7)
@pytest.mark.parametrize("name", SWEEP)
def test_oracle_sweep(F2, name, say):
    """Every pair of twisted complexes with at most 3 cells (cells in -1..1), all twists over F2."""
    A = dg_contractible_example(F2) if name == "dg" else GOLDEN[name](F2)
    assert A.dim <= 4
    objs = twisted_complexes(A, 3, (-1, 0, 1)) + base_objects(A)
    say["label"] = f"criterion 7 [{name}, {len(objs)} objects, {len(objs) ** 2} pairs]"
    bad = []
    for x in objs:
        for y in objs:
            if nonzero(hom_complex(x, y).ext_dims((-3, 3))) != oracle_hom_dims(x, y, (-3, 3)):
                bad.append((x, y))
    assert not bad, bad[:3]


def test_sweep_covers_every_small_algebra(F2):
    dims = {name: GOLDEN[name](F2).dim for name in GOLDEN}
    assert sorted(n for n, d in dims.items() if d <= 4) == sorted(n for n in SWEEP if n != "dg")
    assert dg_contractible_example(F2).dim <= 4


# -- 8 ---------------------------------------------------------------------------------------------

def _golden_tasks(F):
    tasks = []
    for name in sorted(GOLDEN):
        A = GOLDEN[name](F)
        tasks.append(Task("smoothness", b=A))
        tasks.append(Task("check-morita", a=A, b=A, t=diagonal_bimodule(A), certificate=trivial_certificate(A)))
        objects = [projective(A, e) for e in A.names if re.fullmatch(r"e\d", e)] or [free(A)]
        tasks.append(Task("check-exc", b=A, objects=objects))
    A, L = dual_numbers(F), auslander(F)
    tasks.append(Task("check-triple", a=A, b=L, t=auslander_bimodule(F)))
    tasks.append(Task("check-triple", a=A, b=A, t=diagonal_bimodule(A)))
    tasks.append(Task("check-triple", a=trivial_field_algebra(F), b=matrix_algebra(F), t=row_bimodule(F=F)))
    tasks.append(Task("check-morita", a=A, b=L, t=auslander_bimodule(F), witness=simple(L, 2)))
    B = matrix_algebra(F)
    tasks.append(Task("check-morita", a=trivial_field_algebra(F), b=B, t=row_bimodule(F=F),
                      certificate=row_certificate(B)))
    K = kronecker(F)
    tasks.append(Task("check-full-exc", b=K, objects=[projective(K, "e1"), projective(K, "e2")],
                      certificate=splitting_certificate(K, ["e1", "e2"])))
    return tasks


@pytest.mark.criterion(8)
def test_transport_conformance(Q, Qs, F2, F4, tmp_path, say):
    transitions = {}
    for F, e in ((Q, ExtensionMap(Q, Qs)), (F2, ExtensionMap(F2, F4))):
        for task in _golden_tasks(F):
            rep = transport_and_recheck(task, e)
            assert not rep.evidence["anomaly"], (task, rep.summary())
            transitions[rep.evidence["transition"]] = transitions.get(rep.evidence["transition"], 0) + 1
    assert "Pass->Fail" not in transitions
    assert transitions.get("Pass->Pass", 0) > 0 and transitions.get("Fail->Fail", 0) > 0
    for doc in ("auslander.dgw", "kronecker.dgw"):
        code = main(["run", data_path("dgw", doc), "--report", str(tmp_path / "r.json")])
        assert code != 4
        assert main(["verify", str(tmp_path / "r.json")]) == code


# -- 9 ---------------------------------------------------------------------------------------------

@pytest.mark.criterion(9)
def test_adjunction_dims(Q, Qs, say):
    e = ExtensionMap(Q, Qs)
    A = dual_numbers(Q)
    Ae = extend(A, e)
    eps = cone(Morphism(free(A), free(A), {(0, 0): A.basis_vector("eps")}))
    sources = [free_module(A), simple_module(A, "1"), module_of(eps)]
    targets = [free_module(Ae), simple_module(Ae, "1"), extend(module_of(eps), e)]
    for x in sources:
        for f in targets:
            rep = check_adjunction_dims(x, f, e, (0, 6))
            assert rep.ok, rep
            assert set(rep.source) == set(range(7))
            assert rep.source == rep.target
    # one value pinned by hand: Ext^i(k, k') over dual numbers is one-dimensional over Q(s), so two over Q
    rep = check_adjunction_dims(simple_module(A, "1"), simple_module(Ae, "1"), e, (0, 6))
    assert rep.source == {i: 2 for i in range(7)}


def test_oracle_agrees_on_golden_pair(F2):
    # sanity for the sweep harness itself: the Kronecker pair through both routes
    A = kronecker(F2)
    P1, P2 = projective(A, "e1"), projective(A, "e2")
    assert nonzero(hom_complex(P1, P2).ext_dims((-3, 3))) == oracle_hom_dims(P1, P2, (-3, 3)) == {0: 2}
