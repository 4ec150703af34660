"""Contraction maps on Dolbeault cohomology and unobstructedness criteria.

For a vector-valued (0,2) class sigma, mu_{p,q}(sigma) sends [alpha] in
H^{p,q} to [i_sigma alpha] in H^{p-1,q+2}.  The domain is either computed
directly as vector-valued Dolbeault cohomology (when the frame is
delbar-flat) or through the top holomorphic form Omega, which identifies
H^{0,2}(T) with H^{n-1,2}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EquivalenceViolation, NoDomainPath, NoSolution, NoTrivialCanonical
from .exact_linalg import ONE, Matrix, Quotient, Subspace, kernel
from .model import Form, Model, VectorForm, contract_sign, wedge_sign
from . import spectral

__all__ = [
    "omega_form",
    "omega_inverse",
    "vector_dolbeault",
    "ContractionMap",
    "mu",
    "ker_mu",
    "domain_coords",
    "KodairaReport",
    "check_refined_kodaira",
    "CYVerdict",
    "check_cy",
]


def omega_form(model: Model) -> Form:
    """The top holomorphic monomial, when it is a delbar-closed element of the model."""
    om = model.omega_mask()
    if om not in model.basis(model.n, 0):
        raise NoTrivialCanonical("the top holomorphic monomial is not in the model")
    f = Form(model.n, {om: ONE})
    if model.delbar(f):
        raise NoTrivialCanonical("delbar of the top holomorphic monomial is nonzero")
    return f


def has_trivial_canonical(model: Model) -> bool:
    try:
        omega_form(model)
    except NoTrivialCanonical:
        return False
    return True


def omega_inverse(model: Model, beta: Form) -> VectorForm:
    """The unique sigma with i_sigma(Omega) = beta, for beta of bidegree (n-1, q)."""
    omega_form(model)
    n = model.n
    om = model.omega_mask()
    terms = {}
    for m, c in beta.terms.items():
        p, _ = model.bidegree_of(m)
        if p != n - 1:
            raise ValueError("omega_inverse expects forms of holomorphic degree n-1")
        missing = om & ~m
        a = missing.bit_length() - 1
        inner = om & ~(1 << a)
        anti = m & ~inner
        # i_{anti (x) theta_a} Omega = s * (anti | inner)
        s = contract_sign(a, om) * wedge_sign(anti, inner)
        terms[(anti, a)] = c if s > 0 else -c
    sigma = VectorForm(n, terms)
    if model._contract_vform(sigma, Form(n, {om: ONE})) != beta:
        raise EquivalenceViolation("omega_inverse round trip failed")
    return sigma


@dataclass
class VectorCohomology:
    q: int
    quotient: Quotient = field(repr=False)
    representatives: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.quotient.dim

    def coords(self, model: Model, v: VectorForm) -> tuple:
        return self.quotient.coords(model.vform_to_vector(v, 0, self.q))

    def is_trivial(self, model: Model, v: VectorForm) -> bool:
        return self.quotient.is_trivial(model.vform_to_vector(v, 0, self.q))


def vector_dolbeault(model: Model, q: int) -> VectorCohomology:
    """H^{0,q} of vector-valued forms; needs a delbar-flat frame."""
    key = ("vdolb", q)
    if key in model._cache_misc:
        return model._cache_misc[key]
    model.require_flat()
    dim = len(model.vbasis(0, q))
    cyc = kernel(model.vdelbar_matrix(q))
    bnd = Subspace.span(model.vdelbar_matrix(q - 1).columns(), dim) if q >= 1 else Subspace.zero(dim)
    quo = Quotient(cyc, bnd)
    reps = [model.vform_from_vector(v, 0, q) for v in quo.representatives]
    out = VectorCohomology(q, quo, reps)
    model._cache_misc[key] = out
    return out


@dataclass
class ContractionMap:
    """mu_{p,q}: one matrix H^{p,q} -> H^{p-1,q+2} per domain class."""

    p: int
    q: int
    path: str  # "omega" or "vector"
    domain_reps: list  # VectorForms sigma
    domain_forms: list  # Omega path: (n-1,2) representatives; vector path: empty
    source: spectral.CohomologySpace = field(repr=False)
    target: spectral.CohomologySpace = field(repr=False)
    matrices: list = field(default_factory=list)

    @property
    def domain_dim(self) -> int:
        return len(self.domain_reps)

    def stacked(self) -> Matrix:
        """Rows indexed by (target coordinate, source class); columns by domain classes."""
        rows = self.target.dim * self.source.dim
        cols = []
        for m in self.matrices:
            cols.append(tuple(m[t, s] for t in range(self.target.dim) for s in range(self.source.dim)))
        if not cols:
            return Matrix.zeros(rows, 0)
        return Matrix.from_columns(cols, rows)

    def kernel(self) -> Subspace:
        return kernel(self.stacked())

    def to_json(self, model: Model) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "path": self.path,
            "domain": [model.vform_to_json(s) for s in self.domain_reps],
            "source": [model.form_to_json(f) for f in self.source.representatives],
            "target": [model.form_to_json(f) for f in self.target.representatives],
            "matrices": [m.to_json() for m in self.matrices],
            "kernel": [[x.to_json() for x in v] for v in self.kernel().vectors()],
        }


def available_paths(model: Model) -> list:
    out = []
    if has_trivial_canonical(model):
        out.append("omega")
    if model.is_delbar_flat():
        out.append("vector")
    return out


def _domain(model: Model, path: str):
    if path == "omega":
        space = spectral.dolbeault(model, model.n - 1, 2)
        forms = list(space.representatives)
        return [omega_inverse(model, f) for f in forms], forms
    if path == "vector":
        return list(vector_dolbeault(model, 2).representatives), []
    raise ValueError(f"unknown domain path {path!r}")


def _contraction_matrix(model: Model, sigma: VectorForm, src, tgt) -> Matrix:
    cols = []
    for f in src.representatives:
        img = model._contract_vform(sigma, f)
        try:
            cols.append(tgt.coords(model, img))
        except NoSolution:
            raise EquivalenceViolation("contraction of a class is not delbar-closed") from None
    if not cols:
        return Matrix.zeros(tgt.dim, 0)
    return Matrix.from_columns(cols, tgt.dim)


def mu(model: Model, p: int, q: int, path: str | None = None, verify: bool = False) -> ContractionMap:
    """The contraction map mu_{p,q}, preferring the Omega path when it exists."""
    paths = available_paths(model)
    if not paths:
        raise NoDomainPath(
            "neither a trivial canonical form nor a delbar-flat frame is available"
        )
    if path is None:
        path = paths[0]
    elif path not in paths:
        raise NoDomainPath(f"the {path} path is not available for this model")

    key = ("mu", p, q, path)
    cached = model._cache_misc.get(key)
    if cached is None:
        src = spectral.dolbeault(model, p, q)
        tgt = spectral.dolbeault(model, p - 1, q + 2)
        sigmas, forms = _domain(model, path)
        mats = [_contraction_matrix(model, s, src, tgt) for s in sigmas]
        cached = ContractionMap(p, q, path, sigmas, forms, src, tgt, mats)
        model._cache_misc[key] = cached
    if verify:
        _verify_mu(model, cached)
    return cached


def _verify_mu(model: Model, cmap: ContractionMap) -> None:
    """Coboundary perturbations of either argument do not change the output class."""
    src, tgt = cmap.source, cmap.target
    p, q = cmap.p, cmap.q
    bnd_src = [model.from_vector(v, p, q) for v in src.quotient.boundaries.vectors()]
    if cmap.path == "omega":
        bnd_dom = [omega_inverse(model, model.from_vector(v, model.n - 1, 2))
                   for v in spectral.dolbeault(model, model.n - 1, 2).quotient.boundaries.vectors()]
    else:
        bnd_dom = [model.vform_from_vector(v, 0, 2)
                   for v in vector_dolbeault(model, 2).quotient.boundaries.vectors()]
    for sigma in cmap.domain_reps:
        for g in bnd_src:
            if not tgt.contains_boundary(model, model._contract_vform(sigma, g)):
                raise EquivalenceViolation("mu depends on the source representative")
    for tau in bnd_dom:
        for f in src.representatives:
            if not tgt.contains_boundary(model, model._contract_vform(tau, f)):
                raise EquivalenceViolation("mu depends on the domain representative")


def ker_mu(model: Model, p: int, q: int, path: str | None = None) -> Subspace:
    return mu(model, p, q, path=path).kernel()


def domain_coords(model: Model, cmap: ContractionMap, sigma: VectorForm) -> tuple:
    """Coordinates of a vector-valued (0,2) class in the domain basis of ``cmap``."""
    if cmap.path == "omega":
        om = Form(model.n, {model.omega_mask(): ONE})
        beta = model._contract_vform(sigma, om)
        return spectral.dolbeault(model, model.n - 1, 2).coords(model, beta)
    return vector_dolbeault(model, 2).coords(model, sigma)


def in_ker_mu(model: Model, sigma: VectorForm, p: int, q: int) -> bool:
    cmap = mu(model, p, q)
    return cmap.kernel().contains_vector(domain_coords(model, cmap, sigma))


def paths_agree(model: Model, p: int, q: int) -> bool:
    """Kernels from both domain paths coincide under sigma -> i_sigma(Omega)."""
    a = mu(model, p, q, path="omega")
    b = mu(model, p, q, path="vector")
    mapped = [domain_coords(model, a, s) for s in b.domain_reps]
    if len(mapped) != a.domain_dim:
        return False
    transfer = Matrix.from_columns(mapped, a.domain_dim) if mapped else Matrix.zeros(a.domain_dim, 0)
    image = b.kernel().image_under(transfer) if mapped else Subspace.zero(a.domain_dim)
    return image == a.kernel()


# --------------------------------------------------------------------------
# hypothesis checkers


@dataclass
class KodairaReport:
    p: int
    q: int
    degeneration_pq: bool
    degeneration_shifted: bool
    filtration_tail: bool
    evidence: dict
    kernel: Subspace | None
    kernel_error: str | None = None

    @property
    def passed(self) -> bool:
        return self.degeneration_pq and self.degeneration_shifted and self.filtration_tail

    @property
    def conclusion(self) -> str:
        p, q = self.p, self.q
        if self.passed:
            return (
                f"all hypotheses hold: obstruction classes of every order lie in ker mu_{{{p},{q}}}"
            )
        failed = [name for name, ok in self.flags().items() if not ok]
        return "hypotheses fail: " + ", ".join(failed) + "; no conclusion"

    def flags(self) -> dict:
        p, q = self.p, self.q
        return {
            f"sum_r d_r^{{{p},{q}}} = 0": self.degeneration_pq,
            f"sum_r d_r^{{{p - 1},{q + 1}}} = 0": self.degeneration_shifted,
            f"sum_(r-1>=i>=0) d_r^{{{p - 2}-i,{q + 2}+i}} = 0": self.filtration_tail,
        }

    def to_json(self) -> dict:
        out = {
            "p": self.p,
            "q": self.q,
            "flags": self.flags(),
            "passed": self.passed,
            "conclusion": self.conclusion,
            "evidence": self.evidence,
        }
        if self.kernel is not None:
            out["ker_mu"] = [[x.to_json() for x in v] for v in self.kernel.vectors()]
        if self.kernel_error:
            out["ker_mu_error"] = self.kernel_error
        return out


def check_refined_kodaira(model: Model, p: int, q: int, verify: bool = False) -> KodairaReport:
    d0 = spectral.degeneration(model, p, q, verify=verify)
    d1 = spectral.degeneration(model, p - 1, q + 1, verify=verify)
    tail = spectral.filtration_report(model, p - 2, q + 2, verify=verify)
    evidence = {
        f"{p},{q}": {"nonzero_pages": d0.nonzero_pages},
        f"{p - 1},{q + 1}": {"nonzero_pages": d1.nonzero_pages},
        "tail": {"nonzero": [list(x) for x in tail.nonzero]},
    }
    try:
        kern = ker_mu(model, p, q)
        err = None
    except NoDomainPath as exc:
        kern, err = None, str(exc)
    return KodairaReport(p, q, d0.verdict, d1.verdict, tail.verdict, evidence, kern, err)


@dataclass
class CYVerdict:
    verdict: str  # "UNOBSTRUCTED" or "INCONCLUSIVE"
    flags: dict
    failing: list

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "flags": self.flags, "failing": self.failing}


def check_cy(model: Model, verify: bool = False) -> CYVerdict:
    n = model.n
    trivial = has_trivial_canonical(model)
    deg = spectral.degeneration(model, n - 1, 1, verify=verify).verdict
    tail = spectral.filtration_condition(model, n - 2, 2, verify=verify)
    d1_a = spectral.differential(model, 1, n - 1, 1).is_zero()
    d1_b = spectral.differential(model, 1, n - 2, 2).is_zero()
    r_top = spectral.stable_page(model)
    e2 = all(
        spectral.page(model, 2, p, n - p).dim == spectral.page(model, r_top, p, n - p).dim
        for p in range(0, n + 1)
    )
    flags = {
        "trivial_canonical": trivial,
        f"sum_r d_r^{{{n - 1},1}} = 0": deg,
        f"sum_(r-1>=i>=0) d_r^{{{n - 2}-i,2+i}} = 0": tail,
        f"E_2 degeneration in total degree {n}": e2,
        f"d_1^{{{n - 1},1}} = 0": d1_a,
        f"d_1^{{{n - 2},2}} = 0": d1_b,
    }
    theorem = trivial and deg and tail
    shortcut = trivial and e2 and d1_a and d1_b
    verdict = "UNOBSTRUCTED" if theorem or shortcut else "INCONCLUSIVE"
    failing = [] if verdict == "UNOBSTRUCTED" else [k for k, v in flags.items() if not v]
    return CYVerdict(verdict, flags, failing)
