"""Truncated power series, Maurer-Cartan iteration and form extension.

Series are indexed by multi-indices over the deformation parameters and
truncated by total degree.  The Kuranishi gauge uses the minimal-norm
solution of delbar, i.e. the coordinate inner product of the model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .errors import EquivalenceViolation, HypothesisFailed, NoSolution, NotSolvable
from .exact_linalg import ONE, ZERO, Matrix, Scalar, Subspace, kernel, solve_min_norm
from .model import Form, Model, VectorForm
from . import obstruction, spectral

__all__ = [
    "Series",
    "MCState",
    "multi_indices",
    "kuranishi",
    "mc_residual",
    "obstruction_class",
    "obstruction_in_ker_mu",
    "parallelisable_mc",
    "extend_form",
    "exp_contract_series",
    "d_series",
]

HALF = Scalar(1, 0) / 2


def multi_indices(m: int, k: int) -> list:
    """All multi-indices of length m and total degree k, in lexicographic order."""
    if m == 0:
        return [()] if k == 0 else []
    out = []
    for first in range(k, -1, -1):
        for rest in multi_indices(m - 1, k - first):
            out.append((first,) + rest)
    return sorted(out)


def _splits(idx: tuple):
    """Pairs (J, K) with J + K = idx and both nonzero."""
    total = sum(idx)
    for j in product(*(range(e + 1) for e in idx)):
        s = sum(j)
        if 0 < s < total:
            yield j, tuple(a - b for a, b in zip(idx, j))


def _unit(m: int, i: int) -> tuple:
    return tuple(1 if j == i else 0 for j in range(m))


def _key(idx: tuple) -> str:
    return ",".join(str(e) for e in idx)


class Series:
    """Truncated multivariate series with Form or VectorForm coefficients."""

    def __init__(self, variables: list, order: int, coeffs: dict | None = None, kind: str = "form"):
        self.variables = list(variables)
        self.order = order
        self.kind = kind
        self.coeffs = {}
        for idx, c in (coeffs or {}).items():
            if len(idx) != len(self.variables):
                raise ValueError("multi-index length does not match the variables")
            if sum(idx) <= order and c:
                self.coeffs[tuple(idx)] = c

    def __getitem__(self, idx):
        return self.coeffs.get(tuple(idx))

    def get(self, idx, default=None):
        return self.coeffs.get(tuple(idx), default)

    def degree_part(self, k: int) -> dict:
        return {i: c for i, c in self.coeffs.items() if sum(i) == k}

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "Series") -> "Series":
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out[i] + c if i in out else c
        return Series(self.variables, min(self.order, other.order), out, self.kind)

    def __sub__(self, other: "Series") -> "Series":
        return self + other.scale(-1)

    def scale(self, s) -> "Series":
        s = Scalar.coerce(s)
        return Series(self.variables, self.order, {i: c.scale(s) for i, c in self.coeffs.items()},
                      self.kind)

    def truncate(self, order: int) -> "Series":
        return Series(self.variables, order, self.coeffs, self.kind)

    def to_json(self, model: Model) -> dict:
        conv = model.vform_to_json if self.kind == "vform" else model.form_to_json
        return {
            "variables": self.variables,
            "order": self.order,
            "kind": self.kind,
            "coefficients": {_key(i): conv(c) for i, c in sorted(self.coeffs.items())},
        }

    @classmethod
    def from_json(cls, model: Model, obj) -> "Series":
        kind = obj.get("kind", "form")
        conv = model.vform_from_json if kind == "vform" else model.form_from_json
        coeffs = {}
        for k, v in obj["coefficients"].items():
            idx = tuple(int(x) for x in k.split(",")) if k else ()
            coeffs[idx] = conv(v)
        return cls(obj["variables"], obj["order"], coeffs, kind)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (self.variables, self.order, self.kind, self.coeffs) == (
            other.variables, other.order, other.kind, other.coeffs)

    def __repr__(self):
        return f"Series({len(self.coeffs)} terms, order {self.order}, {self.kind})"


@dataclass
class MCState:
    """A truncated Maurer-Cartan solution and its per-order status."""

    directions: list  # VectorForms eta_1..eta_m of type (0,1)
    phi: Series
    order: int
    status: dict  # k -> "solved" | {"obstructed": {multi-index: coords}}
    solved_through: int
    info: dict = field(default_factory=dict)

    @property
    def variables(self) -> list:
        return self.phi.variables

    def phi_order(self, k: int) -> dict:
        return self.phi.degree_part(k)

    @property
    def obstructed(self) -> bool:
        return self.solved_through < self.order

    def to_json(self, model: Model) -> dict:
        status = {}
        for k, v in sorted(self.status.items()):
            if v == "solved":
                status[str(k)] = "solved"
            else:
                status[str(k)] = {
                    "obstructed": {
                        _key(i): [x.to_json() for x in c] for i, c in sorted(v["obstructed"].items())
                    }
                }
        return {
            "directions": [model.vform_to_json(e) for e in self.directions],
            "phi": self.phi.to_json(model),
            "order": self.order,
            "solved_through": self.solved_through,
            "status": status,
            "info": self.info,
        }


def _bracket_sum(model: Model, phi: Series, idx: tuple) -> VectorForm:
    """sum over J + K = idx of [phi_J, phi_K]."""
    acc = VectorForm.zero(model.n)
    for j, k in _splits(idx):
        a, b = phi.get(j), phi.get(k)
        if a and b:
            acc = acc + model.bracket(a, b)
    return acc


def harmonic_directions(model: Model) -> list:
    """Basis of harmonic vector-valued (0,1)-forms: ker delbar cap ker delbar^*."""
    model.require_flat()
    d1 = model.vdelbar_matrix(1)
    d0 = model.vdelbar_matrix(0)
    dim = len(model.vbasis(0, 1))
    system = Matrix.vstack([d1, d0.conj_transpose()], dim) if dim else Matrix.zeros(0, 0)
    harm = kernel(system) if dim else Subspace.zero(0)
    return [model.vform_from_vector(v, 0, 1) for v in harm.vectors()]


def kuranishi(model: Model, order: int, directions: list | None = None) -> MCState:
    """Order-by-order Maurer-Cartan solution in the minimal-norm gauge.

    ``directions`` selects a subset of the harmonic basis (indices); the
    other parameters are set to zero.
    """
    model.require_flat()
    basis = harmonic_directions(model)
    if directions is not None:
        basis = [basis[i] for i in directions]
    m = len(basis)
    variables = [f"t{i + 1}" for i in range(m)]
    coeffs = {_unit(m, i): eta for i, eta in enumerate(basis)}
    h02 = obstruction.vector_dolbeault(model, 2)
    dbar1 = model.vdelbar_matrix(1)
    status = {1: "solved"} if order >= 1 else {}
    solved = min(order, 1)
    for k in range(2, order + 1):
        phi = Series(variables, k - 1, coeffs, "vform")
        new = {}
        classes = {}
        for idx in multi_indices(m, k):
            rhs = _bracket_sum(model, phi, idx)
            if not rhs:
                continue
            vec = model.vform_to_vector(rhs, 0, 2)
            if any(model.vdelbar_matrix(2).apply(vec)):
                raise EquivalenceViolation(f"bracket sum at {idx} is not delbar-closed")
            coords = h02.quotient.coords(vec)
            if any(coords):
                classes[idx] = coords
                continue
            sol = solve_min_norm(dbar1, vec)
            new[idx] = model.vform_from_vector(sol, 0, 1).scale(HALF)
        if classes:
            status[k] = {"obstructed": classes}
            break
        coeffs.update({i: v for i, v in new.items() if v})
        status[k] = "solved"
        solved = k
    phi = Series(variables, order, coeffs, "vform")
    return MCState(basis, phi, order, status, solved, {"gauge": "minimal-norm"})


def mc_residual(model: Model, state: MCState) -> Series:
    """delbar phi - 1/2 [phi, phi], truncated at the state's order."""
    phi = state.phi
    m = len(phi.variables)
    out = {}
    for k in range(1, state.order + 1):
        for idx in multi_indices(m, k):
            c = phi.get(idx)
            term = model.delbar_vform(c) if c else VectorForm.zero(model.n)
            term = term - _bracket_sum(model, phi, idx).scale(HALF)
            if term:
                out[idx] = term
    return Series(phi.variables, state.order, out, "vform")


@dataclass
class ObstructionClass:
    order: int
    representatives: dict  # multi-index -> VectorForm
    classes: dict  # multi-index -> coordinates in H^{0,2}(T)

    @property
    def vanishes(self) -> bool:
        return not any(any(c) for c in self.classes.values())

    def to_json(self, model: Model) -> dict:
        return {
            "order": self.order,
            "vanishes": self.vanishes,
            "classes": {_key(i): [x.to_json() for x in c] for i, c in sorted(self.classes.items())},
            "representatives": {
                _key(i): model.vform_to_json(v) for i, v in sorted(self.representatives.items())
            },
        }


def obstruction_class(model: Model, state: MCState, N: int) -> ObstructionClass:
    """Classes of sum_{j=1}^N [phi_j, phi_{N+1-j}] per multi-index of degree N+1."""
    if state.solved_through < N:
        raise HypothesisFailed(f"state is only solved through order {state.solved_through}")
    phi = state.phi.truncate(N)
    m = len(phi.variables)
    h02 = obstruction.vector_dolbeault(model, 2)
    reps, classes = {}, {}
    for idx in multi_indices(m, N + 1):
        rhs = _bracket_sum(model, phi, idx)
        vec = model.vform_to_vector(rhs, 0, 2)
        if any(model.vdelbar_matrix(2).apply(vec)):
            raise EquivalenceViolation(f"obstruction representative at {idx} is not delbar-closed")
        reps[idx] = rhs
        classes[idx] = h02.quotient.coords(vec)
    return ObstructionClass(N + 1, reps, classes)


def obstruction_in_ker_mu(model: Model, state: MCState, p: int, q: int, N: int) -> bool:
    """Whether every obstruction class of order N+1 lies in ker mu_{p,q}."""
    obs = obstruction_class(model, state, N)
    return all(obstruction.in_ker_mu(model, rep, p, q) for rep in obs.representatives.values())


# --------------------------------------------------------------------------
# parallelisable construction


def _holomorphic_01(model: Model) -> Subspace:
    return kernel(model.delbar_matrix(0, 1))


def h02_d(model: Model):
    """(ker d cap A^{0,2}) / (d A^{0,1} cap A^{0,2}), in A^{0,2} coordinates."""
    dim = model.dim(0, 2)
    cyc = kernel(model.del_matrix(0, 2)).intersect(kernel(model.delbar_matrix(0, 2)))
    # d x lies in A^{0,2} exactly when del x = 0
    closed_part = kernel(model.del_matrix(0, 1))
    bnd = closed_part.image_under(model.delbar_matrix(0, 1)) if dim else Subspace.zero(0)
    return cyc, bnd


def _solve_d(model: Model, rhs: Form) -> Form:
    """Minimal-norm x in A^{0,1} with delbar x = rhs and del x = 0."""
    top = model.delbar_matrix(0, 1)
    bottom = model.del_matrix(0, 1)
    system = Matrix.vstack([top, bottom], model.dim(0, 1))
    b = list(model.to_vector(rhs, 0, 2)) + [ZERO] * bottom.rows
    return model.from_vector(solve_min_norm(system, b), 0, 1)


def _frame_nilpotent_2step(model: Model) -> bool:
    n = model.n
    for a in range(n):
        for b in range(n):
            inner = model.frame_bracket(a, b)
            for c in range(n):
                acc = {}
                for p, e in inner.items():
                    for r, f in model.frame_bracket(p, c).items():
                        acc[r] = acc.get(r, ZERO) + e * f
                if any(acc.values()):
                    return False
    return True


def parallelisable_mc(model: Model, order: int) -> MCState:
    """Maurer-Cartan solution for models with a holomorphic frame and d-closed holomorphic (0,1)-forms."""
    n = model.n
    if not model.is_delbar_flat():
        raise HypothesisFailed("frame: the holomorphic frame is not delbar-flat")
    for a in range(n):
        if not model.vector_admissible(0, a):
            raise HypothesisFailed(
                f"frame: theta{a + 1} is not a vector field of the model, the tangent bundle is not trivialised"
            )
    hol = _holomorphic_01(model)
    for v in hol.vectors():
        if any(model.del_matrix(0, 1).apply(v)):
            raise HypothesisFailed("closedness: some holomorphic (0,1)-form is not d-closed")
    cyc, bnd = h02_d(model)
    h02_vanishes = cyc.dim == bnd.dim
    abelian_frame = not model.brackets
    nilpotent = _frame_nilpotent_2step(model)

    # psi_i: harmonic representatives of H^{0,1}
    dim01 = model.dim(0, 1)
    d0 = model.delbar_matrix(0, 0)
    harm = hol.intersect(kernel(d0.conj_transpose())) if dim01 else Subspace.zero(0)
    psis = [model.from_vector(v, 0, 1) for v in harm.vectors()]

    # [H^{0,1}, H^{0,1}] trivial in H^{0,2}_d, unless every frame bracket vanishes
    psi_ik = {}
    products_trivial = True
    for i in range(len(psis)):
        for k in range(i + 1, len(psis)):
            w = model.wedge(psis[i], psis[k])
            vec = model.to_vector(w, 0, 2)
            if bnd.contains_vector(vec):
                psi_ik[(i, k)] = _solve_d(model, w)
            else:
                products_trivial = False
    if not abelian_frame and not (h02_vanishes or products_trivial):
        raise HypothesisFailed(
            "cohomology: H^{0,2}_d is nonzero and [H^{0,1}, H^{0,1}] has a nontrivial class there"
        )
    if not abelian_frame and not nilpotent and not h02_vanishes:
        raise HypothesisFailed(
            "cohomology: the frame algebra is not 2-step nilpotent and H^{0,2}_d is nonzero"
        )

    # directions psi_i (x) theta_j, ordered by frame index then psi index
    dirs = [(i, j) for j in range(n) for i in range(len(psis))]
    m = len(dirs)
    variables = [f"t{i + 1}" for i in range(m)]
    directions = [model.frame_vector(j, psis[i]) for i, j in dirs]
    coeffs = {_unit(m, nu): eta for nu, eta in enumerate(directions)}
    status = {1: "solved"} if order >= 1 else {}
    route = "abelian" if abelian_frame else ("nilpotent" if nilpotent else "induction")

    if order >= 2 and not abelian_frame:
        # phi_2 = 1/2 sum t_ij t_kl psi_ik [theta_j, theta_l]
        for nu in range(m):
            for mu_ in range(nu, m):
                (i, j), (k, l) = dirs[nu], dirs[mu_]
                br = model.frame_bracket(j, l)
                if i == k or not br:
                    continue
                a, b = (i, k) if i < k else (k, i)
                if (a, b) not in psi_ik:
                    raise NotSolvable(f"no solution of delbar psi = psi_{a + 1} ^ psi_{b + 1} with del psi = 0")
                psi = psi_ik[(a, b)] if i < k else -psi_ik[(a, b)]
                idx = tuple(
                    (1 if x == nu else 0) + (1 if x == mu_ else 0) for x in range(m)
                )
                # t_nu t_mu appears twice in the double sum when nu != mu
                acc = coeffs.get(idx, VectorForm.zero(n))
                for p_, c in br.items():
                    acc = acc + model.frame_vector(p_, psi.scale(c))
                coeffs[idx] = acc
        status[2] = "solved"
    elif order >= 2:
        status[2] = "solved"

    for k in range(3, order + 1):
        if abelian_frame or nilpotent:
            status[k] = "solved"
            continue
        phi = Series(variables, k - 1, coeffs, "vform")
        for idx in multi_indices(m, k):
            rhs = _bracket_sum(model, phi, idx)
            if not rhs:
                continue
            comps = rhs.components()
            new = VectorForm.zero(n)
            for p_, beta_rhs in sorted(comps.items()):
                try:
                    beta = _solve_d(model, beta_rhs)
                except NoSolution:
                    raise NotSolvable(f"no beta_{p_ + 1} at order {k}, multi-index {idx}") from None
                new = new + model.frame_vector(p_, beta.scale(HALF))
            if new:
                coeffs[idx] = new
        status[k] = "solved"

    phi = Series(variables, order, {i: v for i, v in coeffs.items() if v}, "vform")
    state = MCState(directions, phi, order, status, order, {})
    if not mc_residual(model, state).is_zero():
        raise NotSolvable("the constructed series does not solve the Maurer-Cartan equation")
    state.info = {
        "route": route,
        "h02_d_dim": cyc.dim - bnd.dim,
        "psi": {f"{i + 1},{k + 1}": model.form_to_json(v) for (i, k), v in sorted(psi_ik.items())},
    }
    return state


# --------------------------------------------------------------------------
# form extension


def contract_series(model: Model, phi: Series, alpha: Series, order: int) -> Series:
    """i_phi alpha as a truncated series."""
    out = {}
    for i, v in phi.coeffs.items():
        for j, f in alpha.coeffs.items():
            idx = tuple(a + b for a, b in zip(i, j))
            if sum(idx) > order:
                continue
            t = model._contract_vform(v, f)
            if t:
                out[idx] = out[idx] + t if idx in out else t
    return Series(alpha.variables, order, out, "form")


def exp_contract_series(model: Model, phi: Series, alpha: Series, order: int) -> Series:
    """e^{i_phi} alpha truncated at ``order``; phi has no constant term."""
    total = alpha.truncate(order)
    term = alpha.truncate(order)
    k = 0
    while not term.is_zero():
        k += 1
        term = contract_series(model, phi, term, order).scale(Scalar(1) / k)
        total = total + term
    return total


def d_series(model: Model, s: Series) -> Series:
    return Series(s.variables, s.order, {i: model.d(c) for i, c in s.coeffs.items()}, "form")


def delbar_phi_series(model: Model, phi: Series, alpha: Series, order: int) -> Series:
    """(delbar_phi + del) alpha = d alpha + del(i_phi alpha) - i_phi(del alpha)."""
    a = d_series(model, alpha)
    b = Series(alpha.variables, order,
               {i: model.partial(c) for i, c in contract_series(model, phi, alpha, order).coeffs.items()})
    dalpha = Series(alpha.variables, order, {i: model.partial(c) for i, c in alpha.coeffs.items()})
    c = contract_series(model, phi, dalpha, order)
    return (a + b) - c


def extend_form(model: Model, alpha0: Form, state: MCState, order: int,
                p: int | None = None, q: int | None = None) -> Series:
    """Extend a delbar-closed (p,q)-form to alpha(t) in F^p with d(e^{i_phi} alpha) = 0 mod t^{order+1}."""
    bds = alpha0.bidegrees()
    if p is None or q is None:
        if len(bds) != 1:
            raise HypothesisFailed("alpha0 must be a nonzero form of a single bidegree")
        p, q = bds.pop()
    elif bds and bds != {(p, q)}:
        raise HypothesisFailed(f"alpha0 is not of bidegree ({p},{q})")
    model.check_form(alpha0)
    if model.delbar(alpha0):
        raise HypothesisFailed("alpha0 is not delbar-closed")
    if state.solved_through < order:
        raise HypothesisFailed(f"Maurer-Cartan state is only solved through order {state.solved_through}")
    if not spectral.degeneration(model, p, q).verdict:
        raise HypothesisFailed(f"d_r^{{{p},{q}}} does not vanish for every r")
    if not spectral.filtration_condition(model, p - 1, q + 1):
        raise HypothesisFailed(f"the filtration condition at ({p - 1},{q + 1}) fails")

    k = p + q
    dk = model.d_matrix(k)
    # restrict d to F^p and F^{p+1} coordinates
    fp_idx = [i for pp, _, off, size in model.total_blocks(k) if pp >= p for i in range(off, off + size)]
    fp1_idx = [i for pp, _, off, size in model.total_blocks(k) if pp >= p + 1 for i in range(off, off + size)]
    d_fp = dk.select_columns(fp_idx)
    d_fp1 = dk.select_columns(fp1_idx)
    dim_k = model.total_dim(k)

    def embed(sol, idxs):
        v = [ZERO] * dim_k
        for i, x in zip(idxs, sol):
            v[i] = x
        return model.total_from_vector(v, k)

    phi = state.phi.truncate(order)
    variables = phi.variables
    m = len(variables)
    a0 = model.total_to_vector(alpha0, k)
    rhs0 = [-x for x in dk.apply(a0)]
    try:
        y = solve_min_norm(d_fp1, rhs0)
    except NoSolution:
        raise NotSolvable("order 0: alpha0 does not lift to a d-closed form in F^p") from None
    coeffs = {tuple([0] * m): alpha0 + embed(y, fp1_idx)}

    for n0 in range(order):
        alpha = Series(variables, n0, coeffs, "form")
        w = exp_contract_series(model, phi, alpha, n0 + 1)
        for idx in multi_indices(m, n0 + 1):
            c = w.get(idx)
            if not c:
                continue
            rhs = [-x for x in dk.apply(model.total_to_vector(c, k))]
            try:
                sol = solve_min_norm(d_fp, rhs)
            except NoSolution:
                raise NotSolvable(
                    f"order {n0 + 1}, multi-index {idx}: d((e^(i_phi) - 1) alpha) is not in d F^p"
                ) from None
            new = embed(sol, fp_idx)
            if new:
                coeffs[idx] = new

    alpha = Series(variables, order, coeffs, "form")
    lhs = d_series(model, exp_contract_series(model, phi, alpha, order))
    if not lhs.is_zero():
        raise EquivalenceViolation("d(e^(i_phi) alpha) does not vanish to the requested order")
    if not delbar_phi_series(model, phi, alpha, order).is_zero():
        raise EquivalenceViolation("(delbar_phi + del) alpha does not vanish to the requested order")
    return alpha
