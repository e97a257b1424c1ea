from collections import Counter
from fractions import Fraction

import pytest

from grady.cyclo import Cyc
from grady.gdivalg import HomElem, build_gda
from grady.gradedmat import (GradingParams, MexParams, build, check_closed_forms,
                             closed_form_census, diagonalize_form, is_fine, params_from_dict,
                             refine_equal_degrees, split_search, validate, verify_grading,
                             verify_refinement)

E = (0, 0)
A = (1, 0)
B = (0, 1)


def test_census_small_real_example():
    p = GradingParams("D(2;+1)", 2, 1, ((A, 1), (B, 1)), 1)
    alg = build(p)
    assert alg.dim() == 16 * 4 and alg.real_dim() == 64
    assert alg.census() == Counter({4: 4, 1: 8, 2: 20})
    assert alg.U.iso_type() == "Z2 x Z4 x Z"
    assert verify_grading(alg)
    assert check_closed_forms(alg)
    assert closed_form_census(p) == alg.census()


def test_exchange_construction():
    alg = build(MexParams("D(2;+1)", 3))
    assert alg.exchange and alg.real_dim() == 2 * 9 * 4
    assert alg.U.iso_type() == "Z2^2 x Z^2"
    assert sum(n * c for n, c in alg.census().items()) == 72
    assert verify_grading(alg)
    assert check_closed_forms(alg)


def test_corrupted_degree_map_is_rejected():
    alg = build(GradingParams("D(2;+1)", 2, 1, ((A, 1), (B, 1)), 1))
    deg = dict(alg.degree)
    b = next(b for b in alg.basis if b[1] != b[2])
    deg[b] = alg.U.zero()
    rep = verify_grading(alg, deg)
    assert not rep and rep.failure == "partition"
    # move a whole component, so the partition survives but products break
    g, comp = next((g, c) for g, c in alg.components.items() if g != alg.U.zero())
    shifted = {x: (alg.U.add(alg.degree[x], g) if x in comp else alg.degree[x])
               for x in alg.basis}
    moved = dict(alg.components)
    alg.components = {h: v for h, v in moved.items() if h != g}
    alg.components[alg.U.add(g, g)] = alg.components.get(alg.U.add(g, g), []) + comp
    try:
        assert not verify_grading(alg, shifted)
    finally:
        alg.components = moved


def test_validate_rejects_bad_parameters():
    with pytest.raises(ValueError):
        validate(GradingParams("D(2;+1)", 0, 0, (), 1))
    with pytest.raises(ValueError):
        validate(GradingParams("D(2;+1)", 2, 0, ((A, 1),), 1))
    with pytest.raises(ValueError):
        validate(GradingParams("D(3;R)", 1, 0, ((E, 1),), -1))
    # X_{ab} is skew under phi0 in the real model, so delta = +1 cannot use it
    with pytest.raises(ValueError):
        validate(GradingParams("D(2;+1)", 1, 0, (((1, 1), 1),), 1))
    # only the identity degree carries a sign invariant here
    with pytest.raises(ValueError):
        validate(GradingParams("D(2;+1)", 1, 0, ((A, -1),), 1))
    validate(GradingParams("D(2;+1)", 1, 0, ((E, -1),), 1))


def test_fineness_examples():
    assert is_fine(GradingParams("D(2;+1)", 2, 1, ((A, 1), (B, 1)), 1))[0]
    fine, cert = is_fine(GradingParams("D(2;+1)", 2, 0, ((A, 1), (A, 1)), 1))
    assert not fine
    ref = cert["refinement"]
    assert verify_refinement(ref)
    assert ref.group.size() > ref.alg.U.size() or not ref.group.is_finite()
    assert not is_fine(GradingParams("D(2;C)", 1, 0, ((E, 1),), 1))[0]
    assert not is_fine(MexParams("D(2;+1)", 2))[0]
    assert is_fine(MexParams("D(2;+1)", 3))[0]
    assert not is_fine(MexParams("D(1;R)", 4))[0]


def test_equal_degree_refinement_splits_identity_component():
    p = GradingParams("D(0;+1)", 2, 0, (((), 1), ((), 1)), 1)
    ref = refine_equal_degrees(p)
    assert verify_refinement(ref)
    assert ref.census() == Counter({1: 4})
    assert ref.alg.census() == Counter({2: 2})


def test_split_search_finds_nothing_for_distinct_degrees():
    assert split_search(GradingParams("D(2;+1)", 2, 0, ((E, 1), (A, 1)), 1)) == []
    assert split_search(GradingParams("D(0;+1)", 2, 0, (((), 1), ((), 1)), 1))
    with pytest.raises(ValueError):
        split_search(GradingParams("D(3;C)", 1, 1, ((E, 1),), 1))


def _check_diagonal(D, Phi, res):
    k = len(Phi)
    P = res.P

    def entry(i, j):
        acc = None
        for r in range(k):
            for c in range(k):
                if P[r][i] is None or Phi[r][c] is None or P[c][j] is None:
                    continue
                x = D.multiply(D.multiply(D.apply_phi0(P[r][i]), Phi[r][c]), P[c][j])
                if acc is None:
                    acc = x
                else:
                    assert acc.degree == x.degree
                    acc = HomElem(x.degree, acc.coeff + x.coeff)
        return None if acc is None or acc.coeff.is_zero() else acc
    for i, ((t, e), sc) in enumerate(zip(res.dbar, res.scale)):
        assert sc > 0
        got = entry(i, i)
        assert got == HomElem(t, Cyc(D.M, e) * sc)
    q = res.q
    for r in range(res.s):
        i = q + 2 * r
        assert entry(i, i + 1) == D.one()
        assert entry(i + 1, i) == HomElem(E, Cyc(D.M, res.delta))
    for i in range(k):
        for j in range(k):
            partner = i >= q and (i - q) // 2 == (j - q) // 2 and j >= q
            if i != j and not partner:
                assert entry(i, j) is None


def test_diagonalize_form_examples():
    D = build_gda("D(2;+1)")
    M = D.M
    Phi = [[HomElem(E, Cyc(M, 2)), None], [None, HomElem(A, Cyc(M, -3))]]
    res = diagonalize_form(D, Phi, 1)
    assert (res.q, res.s) == (2, 0)
    assert res.scale == [Fraction(2), Fraction(3)]
    _check_diagonal(D, Phi, res)
    Phi = [[None, D.one()], [D.one(), None]]
    res = diagonalize_form(D, Phi, 1)
    assert (res.q, res.s) == (0, 1)
    _check_diagonal(D, Phi, res)
    D0 = build_gda("D(0;+1)")
    Phi = [[HomElem((), Cyc(D0.M, 1)), None], [None, HomElem((), Cyc(D0.M, -5))]]
    res = diagonalize_form(D0, Phi, 1)
    assert sorted(e for _, e in res.dbar) == [-1, 1]
    _check_diagonal(D0, Phi, res)
    with pytest.raises(ValueError):
        diagonalize_form(D, [[None, D.one()], [None, None]], 1)


def test_json_round_trip():
    p = GradingParams("D(4;C)", 1, 2, (((2, 0), 1),), 1)
    assert GradingParams.from_json(p.to_json()) == p
    assert params_from_dict(MexParams("D(3;+1)", 2).to_dict()) == MexParams("D(3;+1)", 2)
    with pytest.raises(ValueError):
        GradingParams.from_dict({"gda": "D(2;+1)"})
