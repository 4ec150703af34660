from __future__ import annotations

import random

import pytest

from spectra_def import deformation, obstruction, spectral
from spectra_def.builtins import builtin
from spectra_def.errors import NoDomainPath, NoTrivialCanonical
from spectra_def.exact_linalg import ONE, Subspace
from spectra_def.model import Form, ModelSpec, VectorForm, build_model
from util import random_form


@pytest.fixture(scope="module")
def iwa():
    return builtin("iwasawa")


@pytest.fixture(scope="module")
def nak():
    return builtin("nakamura", k=1)


def twisted_line():
    # delbar a1 = a1 b1: no trivial canonical form and no flat frame
    spec = ModelSpec("twisted", ["a1"], ["b1"], {"a1": [(ONE, ["a1", "b1"])]})
    return build_model(spec)


def test_omega_form(iwa, nak):
    for m in (iwa, nak, builtin("abelian", n=2)):
        om = obstruction.omega_form(m)
        assert om == Form(m.n, {m.omega_mask(): ONE})
        assert not m.delbar(om)
    assert not iwa.d(obstruction.omega_form(iwa))
    with pytest.raises(NoTrivialCanonical):
        obstruction.omega_form(twisted_line())


def test_no_domain_path():
    m = twisted_line()
    assert obstruction.available_paths(m) == []
    with pytest.raises(NoDomainPath):
        obstruction.mu(m, 1, 0)
    rep = obstruction.check_refined_kodaira(m, 1, 0)
    assert rep.kernel is None and rep.kernel_error


def test_omega_inverse(iwa, nak):
    assert obstruction.omega_inverse(iwa, Form.zero(3)) == VectorForm.zero(3)
    om = obstruction.omega_form(iwa)
    for a in range(3):
        beta = iwa.contract(a, om)
        assert obstruction.omega_inverse(iwa, beta) == iwa.frame_vector(a)
    sigma = obstruction.omega_inverse(nak, nak.monomial("phi1", "phi2", "phit1", "phit2"))
    assert sigma == nak.frame_vector(2, nak.monomial("phit1", "phit2"))
    rng = random.Random(2)
    for _ in range(10):
        beta = random_form(iwa, rng, 2, 2)
        sigma = obstruction.omega_inverse(iwa, beta)
        assert iwa.contract_vform(sigma, om) == beta


def test_nakamura_ker_mu(nak):
    cmap = obstruction.mu(nak, 3, 1, verify=True)
    assert cmap.path == "omega"
    assert cmap.domain_dim == 5
    h22 = spectral.dolbeault(nak, 2, 2)
    four = [
        nak.monomial("phi1", "phi3", "phit1", "phit3"),
        nak.monomial("phi1", "phi3", "phit2", "phit3"),
        nak.monomial("phi2", "phi3", "phit1", "phit3"),
        nak.monomial("phi2", "phi3", "phit2", "phit3"),
    ]
    assert cmap.kernel() == Subspace.span([h22.coords(nak, f) for f in four], h22.dim)
    outside = obstruction.omega_inverse(nak, nak.monomial("phi1", "phi2", "phit1", "phit2"))
    assert not obstruction.in_ker_mu(nak, outside, 3, 1)
    assert obstruction.in_ker_mu(nak, VectorForm.zero(3), 3, 1)


def test_mu_paths_agree(nak, iwa):
    assert obstruction.available_paths(nak) == ["omega", "vector"]
    assert obstruction.paths_agree(nak, 3, 1)
    assert obstruction.ker_mu(nak, 1, 0) == obstruction.ker_mu(nak, 3, 1)
    for p, q in ((3, 0), (3, 1), (2, 1), (1, 1)):
        assert obstruction.paths_agree(iwa, p, q)
        obstruction.mu(iwa, p, q, path="vector", verify=True)


@pytest.mark.parametrize("name", ["iwasawa", "nakamura", "abelian"])
def test_ker_mu_top_is_zero(name):
    m = builtin(name)
    assert obstruction.ker_mu(m, m.n, 0).dim == 0


def test_mu_zero_sigma(iwa):
    src = spectral.dolbeault(iwa, 3, 1)
    for f in src.representatives:
        assert not iwa.contract_vform(VectorForm.zero(3), f)


def test_refined_kodaira_examples(iwa, nak):
    assert obstruction.check_refined_kodaira(nak, 3, 1, verify=True).passed
    ab = builtin("abelian", n=3)
    for p in range(4):
        for q in range(4):
            assert obstruction.check_refined_kodaira(ab, p, q).passed
    rep = obstruction.check_refined_kodaira(iwa, 2, 0)
    assert not rep.degeneration_shifted
    assert not obstruction.check_refined_kodaira(iwa, 1, 1).degeneration_pq


def test_check_cy(iwa, nak):
    assert obstruction.check_cy(builtin("abelian", n=3)).verdict == "UNOBSTRUCTED"
    v = obstruction.check_cy(nak)
    assert v.verdict == "INCONCLUSIVE"
    assert "d_1^{1,2} = 0" in v.failing
    v = obstruction.check_cy(iwa)
    assert v.verdict == "INCONCLUSIVE"
    assert "d_1^{1,2} = 0" in v.failing


def test_cy_verdict_implies_vanishing_obstructions():
    m = builtin("abelian", n=2)
    assert obstruction.check_cy(m).verdict == "UNOBSTRUCTED"
    st = deformation.kuranishi(m, 3)
    for n in (1, 2):
        assert deformation.obstruction_class(m, st, n).vanishes
