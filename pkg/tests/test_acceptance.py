"""Acceptance criteria 1-16, one test each.

Run ``python3 tests/test_acceptance.py`` for one PASS/FAIL line per
criterion; under pytest the same lines appear in the terminal summary.
"""

from __future__ import annotations

import os
import random
import subprocess
import sys
from fractions import Fraction

from spectra_def import deformation, obstruction, spectral
from spectra_def.builtins import builtin
from spectra_def.exact_linalg import Scalar, Subspace
from spectra_def.model import Form
from spectra_def.randspec import random_model

sys.path.insert(0, os.path.dirname(__file__))
from util import all_basis_forms, random_vform, spans_classes  # noqa: E402

HALF = Scalar(Fraction(1, 2))


def iwasawa():
    return builtin("iwasawa")


def nakamura():
    return builtin("nakamura", k=1)


def cells(model):
    return [(p, q) for p in range(model.n + 1) for q in range(model.n + 1)]


def test_criterion_01_structural_validation():
    for model in (iwasawa(), nakamura()):
        for p, q in cells(model):
            dim = model.dim(p, q)
            if dim == 0:
                continue
            if p + 2 <= model.n:
                assert (model.del_matrix(p + 1, q) @ model.del_matrix(p, q)).is_zero()
            if q + 2 <= model.n:
                assert (model.delbar_matrix(p, q + 1) @ model.delbar_matrix(p, q)).is_zero()
            if p + 1 <= model.n and q + 1 <= model.n:
                a = model.del_matrix(p, q + 1) @ model.delbar_matrix(p, q)
                b = model.delbar_matrix(p + 1, q) @ model.del_matrix(p, q)
                assert (a + b).is_zero()
        for f in all_basis_forms(model):
            assert not model.d(model.d(f))


def test_criterion_02_iwasawa_e1():
    m = iwasawa()
    assert spectral.page(m, 1, 1, 0).dim == 3
    h01 = spectral.dolbeault(m, 0, 1)
    assert h01.dim == 2
    assert spans_classes(h01, m, [m.gen("phibar1"), m.gen("phibar2")])
    for p, q in cells(m):
        assert spectral.page(m, 1, p, q).dim == spectral.page_oracle(m, 1, p, q)


def test_criterion_03_iwasawa_differentials():
    m = iwasawa()
    for p, q in cells(m):
        src = spectral.page(m, 1, p, q)
        if p + 1 > m.n or src.dim == 0 or spectral.page(m, 1, p + 1, q).dim == 0:
            continue
        assert (not src.d_matrix.is_zero()) == (p == 1), (p, q)
    for r in range(2, spectral.stable_page(m) + 1):
        for p, q in cells(m):
            assert spectral.differential(m, r, p, q).is_zero(), (r, p, q)


def test_criterion_04_iwasawa_deformations():
    m = iwasawa()
    st = deformation.parallelisable_mc(m, 4)
    assert st.solved_through == 4
    assert deformation.mc_residual(m, st).is_zero()
    for k in (3, 4):
        assert not any(st.phi_order(k).values())
    kur = deformation.kuranishi(m, 4)
    assert kur.solved_through == 4
    assert deformation.mc_residual(m, kur).is_zero()
    for n in (1, 2, 3):
        assert deformation.obstruction_class(m, kur, n).vanishes
        assert deformation.obstruction_class(m, st, n).vanishes


def test_criterion_05_nakamura_differentials():
    m = nakamura()
    for p, q in ((3, 1), (2, 2), (1, 3)):
        assert spectral.differential(m, 1, p, q).is_zero()
    src = spectral.page(m, 1, 1, 1)
    tgt = spectral.page(m, 1, 2, 1)
    alpha = m.monomial("phi1", "phit1")
    assert m.partial(alpha) == m.monomial("phi1", "phi3", "phit1", coeff=Scalar(0, 4))
    image = src.d_matrix.apply(src.coords(m, alpha))
    expected = tgt.coords(m, m.monomial("phi1", "phi3", "phit1", coeff=Scalar(0, 4)))
    assert image == expected
    assert any(x for x in image)
    for r in range(2, spectral.stable_page(m) + 1):
        for p in range(0, 5):
            q = 4 - p
            if 0 <= q <= m.n and p <= m.n:
                assert spectral.differential(m, r, p, q).is_zero(), (r, p, q)


def test_criterion_06_nakamura_quoted_groups():
    m = nakamura()
    h22 = spectral.dolbeault(m, 2, 2)
    five = [
        m.monomial("phi1", "phi2", "phit1", "phit2"),
        m.monomial("phi1", "phi3", "phit1", "phit3"),
        m.monomial("phi1", "phi3", "phit2", "phit3"),
        m.monomial("phi2", "phi3", "phit1", "phit3"),
        m.monomial("phi2", "phi3", "phit2", "phit3"),
    ]
    assert spectral.page(m, 1, 2, 2).dim == 5
    assert spans_classes(h22, m, five)
    quoted = {
        (3, 1): m.monomial("phi1", "phi2", "phi3", "phit3"),
        (2, 3): m.monomial("phi1", "phi2", "phit1", "phit2", "phit3"),
        (0, 1): m.gen("phit3"),
        (1, 0): m.gen("phi3"),
    }
    for (p, q), f in quoted.items():
        assert spectral.page(m, 1, p, q).dim == 1
        assert spans_classes(spectral.dolbeault(m, p, q), m, [f])


def test_criterion_07_nakamura_ker_mu():
    m = nakamura()
    cmap = obstruction.mu(m, 3, 1)
    h22 = spectral.dolbeault(m, 2, 2)
    four = [
        m.monomial("phi1", "phi3", "phit1", "phit3"),
        m.monomial("phi1", "phi3", "phit2", "phit3"),
        m.monomial("phi2", "phi3", "phit1", "phit3"),
        m.monomial("phi2", "phi3", "phit2", "phit3"),
    ]
    expected = Subspace.span([h22.coords(m, f) for f in four], h22.dim)
    assert cmap.kernel() == expected
    sigma = obstruction.omega_inverse(m, m.monomial("phi1", "phi2", "phit1", "phit2"))
    image = m.contract_vform(sigma, m.monomial("phi1", "phi2", "phi3", "phit3"))
    h23 = spectral.dolbeault(m, 2, 3)
    target = m.monomial("phi1", "phi2", "phit1", "phit2", "phit3")
    coords = h23.coords(m, image)
    assert any(coords)
    assert spans_classes(h23, m, [target])
    assert Subspace.span([coords], h23.dim) == Subspace.span([h23.coords(m, target)], h23.dim)


def test_criterion_08_nakamura_refined_kodaira():
    m = nakamura()
    rep = obstruction.check_refined_kodaira(m, 3, 1)
    assert rep.passed
    st = deformation.kuranishi(m, 2)
    assert st.solved_through == 1
    assert deformation.obstruction_in_ker_mu(m, st, 3, 1, 1)
    for rep_form in deformation.obstruction_class(m, st, 1).representatives.values():
        assert obstruction.in_ker_mu(m, rep_form, 3, 1)
    assert not deformation.obstruction_class(m, st, 1).vanishes


def test_criterion_09_nakamura_cy_check():
    v = obstruction.check_cy(nakamura())
    assert v.verdict == "INCONCLUSIVE"
    assert not (v.flags["d_1^{2,1} = 0"] and v.flags["d_1^{1,2} = 0"])


def test_criterion_10_oracle_equivalence():
    models = [iwasawa(), nakamura()]
    rng = random.Random(20240601)
    models += [random_model(rng) for _ in range(20)]
    for m in models:
        assert m.n <= 4
        for r in range(1, 5):
            for p, q in cells(m):
                assert spectral.page(m, r, p, q).dim == spectral.page_oracle(m, r, p, q), (m.name, r, p, q)


def test_criterion_11_lemma_equivalences():
    for m in (iwasawa(), nakamura()):
        for p, q in cells(m):
            d = spectral.degeneration(m, p, q)
            assert d.differentials_vanish == d.lifting == d.filtration_identity
            f = spectral.filtration_report(m, p, q)
            assert f.identity == f.differentials_vanish


def _operator_identities(m, rng):
    phi = random_vform(m, rng)
    psi = random_vform(m, rng)
    half_bracket = m.bracket(phi, phi).scale(HALF)
    for f in all_basis_forms(m):
        e = m.exp_contract(phi, f)
        lhs = m.exp_contract(phi, m.delbar(e), sign=-1)
        assert lhs == m.delbar(f) - m.lie01(phi, f)
        lhs = m.exp_contract(phi, m.partial(e), sign=-1)
        rhs = m.partial(f) - m.lie10(phi, f) - m.contract_vform(half_bracket, f)
        assert lhs == rhs
        cartan = m.lie10(phi, m.contract_vform(psi, f)) - m.contract_vform(psi, m.lie10(phi, f))
        assert cartan == m.contract_vform(m.bracket(phi, psi), f)


def test_criterion_12_operator_identities():
    rng = random.Random(12)
    for m in (iwasawa(), nakamura()):
        for _ in range(10):
            _operator_identities(m, rng)


def _popovici_implications(m):
    a1, a2 = spectral.popovici_maps(m, verify=True)
    if a1.is_zero():
        assert spectral.degeneration(m, m.n - 1, 1).verdict
    if a2.is_zero():
        assert spectral.filtration_condition(m, m.n - 2, 2)


def test_criterion_13_popovici_implications():
    _popovici_implications(iwasawa())
    _popovici_implications(nakamura())
    rng = random.Random(13)
    for _ in range(10):
        _popovici_implications(random_model(rng, n_choices=(2, 3)))


def test_criterion_14_extension():
    m = iwasawa()
    st = deformation.kuranishi(m, 3)
    alpha0 = m.monomial("phi1", "phi2", "phi3")
    alpha = deformation.extend_form(m, alpha0, st, 3)
    phi = st.phi.truncate(3)
    closed = deformation.d_series(m, deformation.exp_contract_series(m, phi, alpha, 3))
    assert closed.is_zero()
    assert deformation.delbar_phi_series(m, phi, alpha, 3).is_zero()
    assert alpha.get((0,) * len(st.variables)) == alpha0


def test_criterion_15_convergence_bookkeeping():
    for m in (iwasawa(), nakamura()):
        r = spectral.stable_page(m)
        for k in range(2 * m.n + 1):
            total = sum(spectral.page(m, r, p, k - p).dim for p in range(m.n + 1) if 0 <= k - p <= m.n)
            assert total == spectral.de_rham(m, k), (m.name, k)
    assert spectral.de_rham(iwasawa(), 1) == 4


def _report_bytes(manifold, threads):
    env = dict(os.environ, SPECTRA_DEF_THREADS=str(threads))
    cmd = [sys.executable, "-m", "spectra_def", "report", "--manifold", manifold, "--format", "json"]
    return subprocess.run(cmd, env=env, capture_output=True, check=True).stdout


def test_criterion_16_determinism():
    for manifold in ("iwasawa", "nakamura"):
        runs = [_report_bytes(manifold, t) for t in (1, 1, 4)]
        assert runs[0] == runs[1] == runs[2]
        assert runs[0]


CRITERIA = sorted(
    (name, fn) for name, fn in globals().items() if name.startswith("test_criterion_")
)


def main() -> int:
    failed = 0
    for name, fn in CRITERIA:
        number = int(name.split("_")[2])
        try:
            fn()
            status = "PASS"
        except Exception as exc:  # report and continue
            status = f"FAIL ({type(exc).__name__}: {exc})"
            failed += 1
        print(f"criterion {number:2d}: {status}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
