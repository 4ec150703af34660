from __future__ import annotations

import json
from fractions import Fraction

import pytest

from spectra_def import deformation, obstruction, spectral
from spectra_def.builtins import builtin
from spectra_def.deformation import MCState, Series, multi_indices
from spectra_def.errors import HypothesisFailed
from spectra_def.exact_linalg import ONE, Scalar
from spectra_def.model import ModelSpec, build_model

HALF = Scalar(Fraction(1, 2))


@pytest.fixture(scope="module")
def iwa():
    return builtin("iwasawa")


@pytest.fixture(scope="module")
def nak():
    return builtin("nakamura", k=1)


def test_multi_indices():
    assert multi_indices(2, 2) == [(0, 2), (1, 1), (2, 0)]
    assert len(multi_indices(3, 3)) == 10
    assert multi_indices(0, 1) == []


def test_series_round_trip(iwa):
    st = deformation.kuranishi(iwa, 2)
    again = Series.from_json(iwa, json.loads(json.dumps(st.phi.to_json(iwa))))
    assert again == st.phi


def test_kuranishi_iwasawa(iwa):
    st = deformation.kuranishi(iwa, 4)
    assert len(st.directions) == 6
    assert st.solved_through == 4
    assert deformation.mc_residual(iwa, st).is_zero()
    for k in (3, 4):
        assert not any(st.phi_order(k).values())
    assert any(st.phi_order(2).values())


def test_kuranishi_abelian():
    m = builtin("abelian", n=2)
    st = deformation.kuranishi(m, 3)
    assert len(st.directions) == 4
    assert set(sum(i) for i in st.phi.coeffs) == {1}
    assert deformation.mc_residual(m, st).is_zero()
    assert deformation.obstruction_class(m, st, 1).vanishes


def test_kuranishi_nakamura(nak):
    st = deformation.kuranishi(nak, 2)
    assert len(st.directions) == 5
    assert st.obstructed and st.solved_through == 1
    assert "obstructed" in st.status[2]
    obs = deformation.obstruction_class(nak, st, 1)
    assert not obs.vanishes
    assert deformation.obstruction_in_ker_mu(nak, st, 3, 1, 1)
    for rep in obs.representatives.values():
        assert not nak.delbar_vform(rep)
    with pytest.raises(HypothesisFailed):
        deformation.obstruction_class(nak, st, 2)


def test_nakamura_single_direction(nak):
    st = deformation.kuranishi(nak, 3, directions=[0])
    assert st.solved_through == 3
    assert deformation.mc_residual(nak, st).is_zero()


def test_residual_of_first_order_state(iwa):
    full = deformation.kuranishi(iwa, 2)
    m = len(full.variables)
    first = {i: v for i, v in full.phi.coeffs.items() if sum(i) == 1}
    st = MCState(full.directions, Series(full.variables, 2, first, "vform"), 2, {}, 1)
    res = deformation.mc_residual(iwa, st)
    for idx in multi_indices(m, 2):
        expect = deformation._bracket_sum(iwa, st.phi, idx).scale(-HALF)
        assert res.get(idx, None) == (expect if expect else None)


def test_iwasawa_obstruction_vanishes(iwa):
    st = deformation.kuranishi(iwa, 1)
    assert deformation.obstruction_class(iwa, st, 1).vanishes


def test_parallelisable_iwasawa(iwa):
    st = deformation.parallelisable_mc(iwa, 4)
    assert st.info["route"] == "nilpotent"
    assert st.info["h02_d_dim"] == 2
    psi12 = iwa.form_from_json(st.info["psi"]["1,2"])
    assert psi12 == -iwa.gen("phibar3")
    assert deformation.mc_residual(iwa, st).is_zero()
    for k in (3, 4):
        assert not any(st.phi_order(k).values())
    kur = deformation.kuranishi(iwa, 4)
    assert st.phi == kur.phi
    for n in (1, 2, 3):
        assert deformation.obstruction_class(iwa, st, n).vanishes
        assert deformation.obstruction_class(iwa, kur, n).vanishes


def test_parallelisable_abelian():
    m = builtin("abelian", n=2)
    st = deformation.parallelisable_mc(m, 3)
    assert st.info["route"] == "abelian"
    assert set(sum(i) for i in st.phi.coeffs) == {1}


def test_parallelisable_requires_closed_holomorphic_forms():
    # delbar b2 = 0 but del b2 = a1 b1
    spec = ModelSpec("open", ["a1", "a2"], ["b1", "b2"], {"b2": [(ONE, ["a1", "b1"])]})
    m = build_model(spec)
    with pytest.raises(HypothesisFailed, match="closedness"):
        deformation.parallelisable_mc(m, 2)


def test_parallelisable_requires_frame(nak):
    with pytest.raises(HypothesisFailed, match="frame"):
        deformation.parallelisable_mc(nak, 2)


def test_extend_iwasawa(iwa):
    st = deformation.kuranishi(iwa, 3)
    alpha0 = iwa.monomial("phi1", "phi2", "phi3")
    alpha = deformation.extend_form(iwa, alpha0, st, 3)
    phi = st.phi.truncate(3)
    assert deformation.d_series(iwa, deformation.exp_contract_series(iwa, phi, alpha, 3)).is_zero()
    assert deformation.delbar_phi_series(iwa, phi, alpha, 3).is_zero()


def test_extend_nakamura(nak):
    st = deformation.kuranishi(nak, 2, directions=[0])
    alpha0 = nak.monomial("phi1", "phi2", "phi3", "phit3")
    alpha = deformation.extend_form(nak, alpha0, st, 2)
    phi = st.phi.truncate(2)
    assert deformation.d_series(nak, deformation.exp_contract_series(nak, phi, alpha, 2)).is_zero()


def test_extend_with_zero_deformation(iwa):
    st = deformation.kuranishi(iwa, 2)
    zero = MCState(st.directions, Series(st.variables, 2, {}, "vform"), 2, {}, 2)
    alpha0 = iwa.monomial("phi1", "phi2", "phi3")
    alpha = deformation.extend_form(iwa, alpha0, zero, 2)
    assert set(alpha.coeffs) == {(0,) * len(st.variables)}


def test_extend_hypotheses(iwa, nak):
    st = deformation.kuranishi(iwa, 2)
    with pytest.raises(HypothesisFailed):
        deformation.extend_form(iwa, iwa.gen("phi3"), st, 2)
    with pytest.raises(HypothesisFailed):
        deformation.extend_form(iwa, iwa.monomial("phi1", "phibar3"), st, 2)
    obstructed = deformation.kuranishi(nak, 2)
    with pytest.raises(HypothesisFailed):
        deformation.extend_form(nak, nak.monomial("phi1", "phi2", "phi3", "phit3"), obstructed, 2)


def test_refined_kodaira_never_contradicted():
    for name in ("iwasawa", "nakamura", "abelian"):
        m = builtin(name)
        st = deformation.kuranishi(m, 3)
        for p in range(m.n + 1):
            for q in range(m.n + 1):
                if not obstruction.check_refined_kodaira(m, p, q).passed:
                    continue
                for n in range(1, st.solved_through + 1):
                    if n + 1 <= st.order:
                        assert deformation.obstruction_in_ker_mu(m, st, p, q, n)


def test_harmonic_directions_are_closed(iwa, nak):
    for m in (iwa, nak):
        for eta in deformation.harmonic_directions(m):
            assert not m.delbar_vform(eta)
    assert spectral.stable_page(iwa) == 4
