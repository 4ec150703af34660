"""Frölicher spectral sequence of a model and related cohomologies.

Pages are computed from the zig-zag description: a (p,q)-form survives to
page r when it starts a chain alpha_0, ..., alpha_{r-1} of forms of bidegrees
(p+i, q-i) with delbar alpha_0 = 0 and del alpha_{i-1} + delbar alpha_i = 0.
An independent oracle computes the same dimensions from the Hodge filtration
F^s A^k = sum of A^{t,k-t} over t >= s, written in total-degree coordinates.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import EquivalenceViolation, NoSolution
from .exact_linalg import ZERO, Matrix, Quotient, Subspace, kernel, preimage, solve_min_norm
from .model import Form, Model

__all__ = [
    "PageEntry",
    "PageTable",
    "CohomologySpace",
    "page",
    "page_oracle",
    "differential",
    "page_table",
    "degeneration",
    "filtration_condition",
    "de_rham",
    "bott_chern",
    "aeppli",
    "dolbeault",
    "popovici_maps",
    "kodaira_predicates",
    "stable_page",
]


def stable_page(model: Model) -> int:
    """Index from which every differential leaves the bigraded range."""
    return model.n + 1


def _in_range(model: Model, p: int, q: int) -> bool:
    return 0 <= p <= model.n and 0 <= q <= model.n


def _cached(model: Model, key, fn):
    cache = model._cache_misc
    if key in cache:
        return cache[key]
    val = fn()
    cache[key] = val
    return val


def _op(model: Model, kind: str, p: int, q: int) -> Matrix:
    """del or delbar from (p,q), as a matrix with zero-size blocks outside the range."""
    if kind == "del":
        return model.del_matrix(p, q)
    return model.delbar_matrix(p, q)


def _stack(model: Model, slots: list, equations: list) -> Matrix:
    """Block matrix for a linear system on forms.

    ``slots`` lists the bidegrees of the unknowns; every equation is a target
    bidegree plus a list of ``(slot index, "del" | "delbar")`` terms.
    """
    col_dims = [model.dim(*s) for s in slots]
    row_dims = []
    grid = []
    for target, terms in equations:
        rd = model.dim(*target)
        row_dims.append(rd)
        row = [None] * len(slots)
        for idx, kind in terms:
            row[idx] = _op(model, kind, *slots[idx])
        grid.append(row)
    return Matrix.block(grid, row_dims, col_dims)


def _offsets(model: Model, slots: list) -> list:
    out = []
    off = 0
    for s in slots:
        d = model.dim(*s)
        out.append(range(off, off + d))
        off += d
    return out


# --------------------------------------------------------------------------
# zig-zag description


def _z_system(model: Model, r: int, p: int, q: int):
    slots = [(p + i, q - i) for i in range(r)]
    eqs = [((p, q + 1), [(0, "delbar")])]
    for i in range(1, r):
        eqs.append(((p + i, q - i + 1), [(i - 1, "del"), (i, "delbar")]))
    return slots, eqs


def z_tilde(model: Model, r: int, p: int, q: int) -> Subspace:
    def compute():
        slots, eqs = _z_system(model, r, p, q)
        k = kernel(_stack(model, slots, eqs))
        return k.project(list(_offsets(model, slots)[0]))

    return _cached(model, ("ztilde", r, p, q), compute)


def b_tilde(model: Model, r: int, p: int, q: int) -> Subspace:
    def compute():
        dim = model.dim(p, q)
        out = model.delbar_matrix(p, q - 1).columns()
        if r >= 2:
            # unknowns beta_i of bidegree (p-i, q+i-1), i = 1..r-1
            slots = [(p - i, q + i - 1) for i in range(1, r)]
            eqs = []
            for i in range(2, r):
                eqs.append(((p - i + 1, q + i - 1), [(i - 1, "del"), (i - 2, "delbar")]))
            eqs.append(((p - r + 1, q + r - 1), [(r - 2, "delbar")]))
            k = kernel(_stack(model, slots, eqs))
            first = k.project(list(_offsets(model, slots)[0]))
            out = out + list(first.image_under(model.del_matrix(p - 1, q)).vectors())
        return Subspace.span(out, dim)

    return _cached(model, ("btilde", r, p, q), compute)


@dataclass
class PageEntry:
    """One cell E_r^{p,q}."""

    r: int
    p: int
    q: int
    dim: int
    representatives: list
    witnesses: list
    quotient: Quotient = field(repr=False)
    d_matrix: Matrix | None = None

    def coords(self, model: Model, f: Form) -> tuple:
        """Coordinates of the class of a form in Z~_r in the representative basis."""
        return self.quotient.coords(model.to_vector(f, self.p, self.q))

    def to_json(self, model: Model) -> dict:
        out = {
            "r": self.r,
            "p": self.p,
            "q": self.q,
            "dim": self.dim,
            "representatives": [model.form_to_json(f) for f in self.representatives],
            "witnesses": [[model.form_to_json(f) for f in w] for w in self.witnesses],
        }
        if self.d_matrix is not None:
            out["d"] = self.d_matrix.to_json()
        return out


def _witness(model: Model, r: int, p: int, q: int, alpha0: tuple) -> list:
    """Minimal-norm tail (alpha_1, ..., alpha_{r-1}) for a class representative."""
    if r == 1:
        return []
    slots = [(p + i, q - i) for i in range(1, r)]
    eqs = [((p + 1, q), [(0, "delbar")])]
    for i in range(2, r):
        eqs.append(((p + i, q - i + 1), [(i - 2, "del"), (i - 1, "delbar")]))
    m = _stack(model, slots, eqs)
    first = [-x for x in model.del_matrix(p, q).apply(alpha0)]
    rhs = first + [ZERO] * (m.rows - len(first))
    y = solve_min_norm(m, rhs)
    out = []
    for (sp, sq), rng in zip(slots, _offsets(model, slots)):
        out.append(tuple(y[i] for i in rng))
    return out


def _core(model: Model, r: int, p: int, q: int) -> PageEntry:
    def compute():
        dim = model.dim(p, q) if _in_range(model, p, q) else 0
        if dim == 0:
            quo = Quotient(Subspace.zero(0), Subspace.zero(0))
            return PageEntry(r, p, q, 0, [], [], quo)
        quo = Quotient(z_tilde(model, r, p, q), b_tilde(model, r, p, q))
        reps = [model.from_vector(v, p, q) for v in quo.representatives]
        wit = []
        for v in quo.representatives:
            tail = _witness(model, r, p, q, v)
            wit.append([model.from_vector(t, p + i + 1, q - i - 1) for i, t in enumerate(tail)])
        return PageEntry(r, p, q, quo.dim, reps, wit, quo)

    return _cached(model, ("core", r, p, q), compute)


def _last_vector(model: Model, entry: PageEntry, j: int) -> tuple:
    r, p, q = entry.r, entry.p, entry.q
    if r == 1:
        return model.to_vector(entry.representatives[j], p, q)
    return model.to_vector(entry.witnesses[j][-1], p + r - 1, q - r + 1)


def differential(model: Model, r: int, p: int, q: int, verify: bool = False) -> Matrix:
    """Matrix of d_r: E_r^{p,q} -> E_r^{p+r, q-r+1} in representative bases."""

    def compute():
        src = _core(model, r, p, q)
        tp, tq = p + r, q - r + 1
        tgt = _core(model, r, tp, tq)
        if src.dim == 0 or tgt.dim == 0:
            return Matrix.zeros(tgt.dim, src.dim)
        dmat = model.del_matrix(p + r - 1, q - r + 1)
        cols = []
        for j in range(src.dim):
            image = dmat.apply(_last_vector(model, src, j))
            try:
                cols.append(tgt.quotient.coords(image))
            except NoSolution:
                raise EquivalenceViolation(
                    f"d_{r} image of class {j} at ({p},{q}) does not survive to E_{r}"
                ) from None
        return Matrix.from_columns(cols, tgt.dim)

    mat = _cached(model, ("dr", r, p, q), compute)
    if verify:
        _verify_well_defined(model, r, p, q)
    return mat


def _verify_well_defined(model: Model, r: int, p: int, q: int) -> None:
    """Perturbing a witness by a solution of the homogeneous system keeps the class."""
    if r == 1 or not _in_range(model, p, q):
        return
    tp, tq = p + r, q - r + 1
    if not _in_range(model, tp, tq):
        return
    slots = [(p + i, q - i) for i in range(1, r)]
    eqs = [((p + 1, q), [(0, "delbar")])]
    for i in range(2, r):
        eqs.append(((p + i, q - i + 1), [(i - 2, "del"), (i - 1, "delbar")]))
    hom = kernel(_stack(model, slots, eqs))
    last = list(_offsets(model, slots)[-1])
    target_b = b_tilde(model, r, tp, tq)
    dmat = model.del_matrix(p + r - 1, q - r + 1)
    for v in hom.vectors():
        tail = tuple(v[i] for i in last)
        if not target_b.contains_vector(dmat.apply(tail)):
            raise EquivalenceViolation(
                f"d_{r} at ({p},{q}) depends on the choice of zig-zag witness"
            )


def page(model: Model, r: int, p: int, q: int, verify: bool = False) -> PageEntry:
    """E_r^{p,q} with representatives, witnesses and the matrix of d_r."""
    if r < 1:
        raise ValueError("pages start at r = 1")
    core = _core(model, r, p, q)
    entry = PageEntry(core.r, core.p, core.q, core.dim, core.representatives, core.witnesses,
                      core.quotient)
    entry.d_matrix = differential(model, r, p, q, verify=verify)
    return entry


# --------------------------------------------------------------------------
# filtration oracle


def filtration(model: Model, s: int, k: int) -> Subspace:
    """F^s A^k as a coordinate subspace of total degree k."""
    idx = []
    for p, _, off, size in model.total_blocks(k):
        if p >= s:
            idx.extend(range(off, off + size))
    return Subspace.coordinate(model.total_dim(k), idx)


def _d_tot(model: Model, k: int) -> Matrix:
    if k < 0:
        return Matrix.zeros(model.total_dim(0), 0)
    return model.d_matrix(k)


def _z_classical(model: Model, r: int, s: int, k: int) -> Subspace:
    """Z_r^s = F^s A^k intersected with d^{-1}(F^{s+r} A^{k+1})."""
    return filtration(model, s, k).intersect(preimage(_d_tot(model, k), filtration(model, s + r, k + 1)))


def page_oracle(model: Model, r: int, p: int, q: int) -> int:
    """dim E_r^{p,q} = dim Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1}) in total degree p+q."""
    if r < 1:
        raise ValueError("pages start at r = 1")
    if not _in_range(model, p, q):
        return 0

    def compute():
        k = p + q
        z = _z_classical(model, r, p, k)
        z_next = _z_classical(model, r - 1, p + 1, k)
        if k >= 1:
            z_prev = _z_classical(model, r - 1, p - r + 1, k - 1)
            boundary = z_prev.image_under(model.d_matrix(k - 1))
        else:
            boundary = Subspace.zero(model.total_dim(k))
        denom = z_next + boundary
        if not z.contains(denom):
            raise EquivalenceViolation("filtration boundaries are not contained in the cycles")
        return z.dim - denom.dim

    return _cached(model, ("oracle", r, p, q), compute)


# --------------------------------------------------------------------------
# tables


@dataclass
class PageTable:
    n: int
    r_max: int
    dims: dict  # (r, p, q) -> int
    stabilization: int
    entries: dict = field(default_factory=dict, repr=False)

    def grid(self, r: int) -> list:
        return [[self.dims[(r, p, q)] for q in range(self.n + 1)] for p in range(self.n + 1)]

    def to_json(self) -> list:
        out = []
        for r in range(1, self.r_max + 1):
            cells = {f"{p},{q}": self.dims[(r, p, q)] for p in range(self.n + 1) for q in range(self.n + 1)}
            out.append({"r": r, "cells": cells})
        return out

    def to_text(self) -> str:
        lines = []
        width = max([len(str(v)) for v in self.dims.values()] + [1])
        for r in range(1, self.r_max + 1):
            lines.append(f"E_{r}  (rows p, columns q)")
            header = "p\\q " + " ".join(str(q).rjust(width) for q in range(self.n + 1))
            lines.append(header)
            for p in range(self.n + 1):
                row = " ".join(str(self.dims[(r, p, q)]).rjust(width) for q in range(self.n + 1))
                lines.append(f"{str(p).rjust(3)} {row}")
            lines.append("")
        return "\n".join(lines).rstrip() + "\n"


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SPECTRA_DEF_THREADS", "1")))
    except ValueError:
        return 1


def page_table(model: Model, r_max: int | None = None, verify: bool = False,
               threads: int | None = None) -> PageTable:
    n = model.n
    r_max = stable_page(model) if r_max is None else r_max
    cells = [(r, p, q) for r in range(1, r_max + 1) for p in range(n + 1) for q in range(n + 1)]
    threads = _threads() if threads is None else threads

    def work(cell):
        return cell, page(model, *cell, verify=verify)

    if threads > 1:
        # cells are independent; the table is assembled in a fixed order afterwards
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = dict(ex.map(work, cells))
    else:
        results = dict(map(work, cells))
    dims = {c: results[c].dim for c in cells}
    return PageTable(n, r_max, dims, stable_page(model), {c: results[c] for c in cells})


# --------------------------------------------------------------------------
# degeneration lemmas


@dataclass
class DegenerationReport:
    p: int
    q: int
    verdict: bool
    differentials_vanish: bool
    lifting: bool
    filtration_identity: bool
    nonzero_pages: list

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "verdict": self.verdict,
            "differentials_vanish": self.differentials_vanish,
            "lifting": self.lifting,
            "filtration_identity": self.filtration_identity,
            "nonzero_pages": self.nonzero_pages,
        }


def _filtration_identity(model: Model, s: int, k: int, source_s: int | None) -> bool:
    """F^s A^{k+1} cap d(F^t A^k) == d F^s A^k, where t = source_s (None: all of A^k)."""
    if k < 0:
        return True
    dk = model.d_matrix(k)
    dim_k = model.total_dim(k)
    src = Subspace.full(dim_k) if source_s is None else filtration(model, source_s, k)
    lhs = filtration(model, s, k + 1).intersect(src.image_under(dk))
    rhs = filtration(model, s, k).image_under(dk)
    return lhs == rhs


def degeneration(model: Model, p: int, q: int, verify: bool = False) -> DegenerationReport:
    """E_1-degeneration for (p,q)-forms, evaluated three independent ways."""

    def compute():
        nonzero = []
        for r in range(1, stable_page(model) + 1):
            if not differential(model, r, p, q, verify=verify).is_zero():
                nonzero.append(r)
        cond_i = not nonzero
        if _in_range(model, p, q):
            k = p + q
            closed = kernel(model.d_matrix(k)).intersect(filtration(model, p, k))
            blk = [b for b in model.total_blocks(k) if b[0] == p][0]
            proj = closed.project(list(range(blk[2], blk[2] + blk[3])))
            cond_ii = proj == kernel(model.delbar_matrix(p, q))
            cond_iii = _filtration_identity(model, p + 1, k, p)
        else:
            cond_ii = cond_iii = True
        if not (cond_i == cond_ii == cond_iii):
            raise EquivalenceViolation(
                f"degeneration conditions disagree at ({p},{q}): "
                f"differentials={cond_i}, lifting={cond_ii}, filtration={cond_iii}"
            )
        return DegenerationReport(p, q, cond_i, cond_i, cond_ii, cond_iii, nonzero)

    return _cached(model, ("degen", p, q, verify), compute)


@dataclass
class FiltrationReport:
    p: int
    q: int
    verdict: bool
    identity: bool
    differentials_vanish: bool
    nonzero: list  # [(r, p', q')]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "verdict": self.verdict,
            "identity": self.identity,
            "differentials_vanish": self.differentials_vanish,
            "nonzero": [list(x) for x in self.nonzero],
        }


def filtration_report(model: Model, p: int, q: int, verify: bool = False) -> FiltrationReport:
    """F^{p+1}A^{p+q+1} cap dA^{p+q} == dF^{p+1}A^{p+q}, and the matching vanishing of d_r."""

    def compute():
        k = p + q
        identity = _filtration_identity(model, p + 1, k, None)
        nonzero = []
        for r in range(1, stable_page(model) + 1):
            for i in range(r):
                a, b = p - i, q + i
                if not _in_range(model, a, b):
                    continue
                if not differential(model, r, a, b, verify=verify).is_zero():
                    nonzero.append((r, a, b))
        vanish = not nonzero
        if identity != vanish:
            raise EquivalenceViolation(
                f"filtration conditions disagree at ({p},{q}): identity={identity}, "
                f"differentials={vanish}"
            )
        return FiltrationReport(p, q, identity, identity, vanish, nonzero)

    return _cached(model, ("filt", p, q, verify), compute)


def filtration_condition(model: Model, p: int, q: int, verify: bool = False) -> bool:
    return filtration_report(model, p, q, verify=verify).verdict


# --------------------------------------------------------------------------
# cohomologies


@dataclass
class CohomologySpace:
    """A quotient of forms of one bidegree, with representatives."""

    kind: str
    p: int
    q: int
    quotient: Quotient = field(repr=False)
    representatives: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.quotient.dim

    def coords(self, model: Model, f: Form) -> tuple:
        return self.quotient.coords(model.to_vector(f, self.p, self.q))

    def contains_boundary(self, model: Model, f: Form) -> bool:
        return self.quotient.is_trivial(model.to_vector(f, self.p, self.q))

    def to_json(self, model: Model) -> dict:
        return {
            "kind": self.kind,
            "p": self.p,
            "q": self.q,
            "dim": self.dim,
            "representatives": [model.form_to_json(f) for f in self.representatives],
        }


def _space(model: Model, kind: str, p: int, q: int, cycles: Subspace, bounds: Subspace):
    quo = Quotient(cycles, bounds)
    reps = [model.from_vector(v, p, q) for v in quo.representatives]
    return CohomologySpace(kind, p, q, quo, reps)


def _empty_space(kind: str, p: int, q: int) -> CohomologySpace:
    return CohomologySpace(kind, p, q, Quotient(Subspace.zero(0), Subspace.zero(0)), [])


def dolbeault(model: Model, p: int, q: int) -> CohomologySpace:
    if not _in_range(model, p, q):
        return _empty_space("dolbeault", p, q)

    def compute():
        dim = model.dim(p, q)
        cyc = kernel(model.delbar_matrix(p, q))
        bnd = Subspace.span(model.delbar_matrix(p, q - 1).columns(), dim)
        return _space(model, "dolbeault", p, q, cyc, bnd)

    return _cached(model, ("dolbeault", p, q), compute)


def bott_chern(model: Model, p: int, q: int) -> CohomologySpace:
    """(ker del cap ker delbar) / im del delbar."""
    if not _in_range(model, p, q):
        return _empty_space("bott-chern", p, q)

    def compute():
        dim = model.dim(p, q)
        cyc = kernel(model.del_matrix(p, q)).intersect(kernel(model.delbar_matrix(p, q)))
        ddbar = model.del_matrix(p - 1, q) @ model.delbar_matrix(p - 1, q - 1)
        bnd = Subspace.span(ddbar.columns(), dim)
        return _space(model, "bott-chern", p, q, cyc, bnd)

    return _cached(model, ("bc", p, q), compute)


def aeppli(model: Model, p: int, q: int) -> CohomologySpace:
    """ker del delbar / (im del + im delbar)."""
    if not _in_range(model, p, q):
        return _empty_space("aeppli", p, q)

    def compute():
        dim = model.dim(p, q)
        ddbar = model.del_matrix(p, q + 1) @ model.delbar_matrix(p, q)
        cyc = kernel(ddbar)
        bnd = Subspace.span(
            model.del_matrix(p - 1, q).columns() + model.delbar_matrix(p, q - 1).columns(), dim
        )
        return _space(model, "aeppli", p, q, cyc, bnd)

    return _cached(model, ("aeppli", p, q), compute)


def de_rham(model: Model, k: int) -> int:
    if k < 0 or k > 2 * model.n:
        return 0
    closed = kernel(model.d_matrix(k)).dim
    exact = 0 if k == 0 else Subspace.span(model.d_matrix(k - 1).columns(), model.total_dim(k)).dim
    return closed - exact


# --------------------------------------------------------------------------
# Popovici maps


def _class_map(model: Model, src: CohomologySpace, tgt: CohomologySpace, op: Matrix,
               verify: bool, perturb: Subspace | None) -> Matrix:
    cols = []
    for f in src.representatives:
        img = op.apply(model.to_vector(f, src.p, src.q))
        try:
            cols.append(tgt.quotient.coords(img))
        except NoSolution:
            raise EquivalenceViolation("image of a class is not a cycle in the target") from None
    if verify and perturb is not None:
        for v in perturb.vectors():
            if not tgt.quotient.is_trivial(op.apply(v)):
                raise EquivalenceViolation("class map depends on the representative")
    if not cols:
        return Matrix.zeros(tgt.dim, 0)
    return Matrix.from_columns(cols, tgt.dim)


def popovici_maps(model: Model, verify: bool = False) -> tuple:
    """A1: H_delbar^{n-1,1} -> H_BC^{n,1} and A2: H_A^{n-2,2} -> H_BC^{n-1,2}, both [x] -> [del x]."""
    n = model.n
    src1 = dolbeault(model, n - 1, 1)
    tgt1 = bott_chern(model, n, 1)
    a1 = _class_map(model, src1, tgt1, model.del_matrix(n - 1, 1), verify,
                    src1.quotient.boundaries if src1.dim or verify else None)
    src2 = aeppli(model, n - 2, 2)
    tgt2 = bott_chern(model, n - 1, 2)
    a2 = _class_map(model, src2, tgt2, model.del_matrix(n - 2, 2), verify,
                    src2.quotient.boundaries if _in_range(model, n - 2, 2) else None)
    return a1, a2


# --------------------------------------------------------------------------
# Kodaira-principle predicates


@dataclass
class KodairaPredicates:
    p: int
    acyclic_del: bool
    acyclic_failures: list
    injective_to_previous: dict  # k -> bool, H^k(F^{p+1}) -> H^k(F^p)
    injective_to_total: dict  # k -> bool, H^k(F^{p+1}) -> H^k(A)
    consistent: bool

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "acyclic_del": self.acyclic_del,
            "acyclic_failures": [list(x) for x in self.acyclic_failures],
            "injective_to_previous": {str(k): v for k, v in sorted(self.injective_to_previous.items())},
            "injective_to_total": {str(k): v for k, v in sorted(self.injective_to_total.items())},
            "consistent": self.consistent,
        }


def _inclusion_injective(model: Model, s_small: int, s_big: int | None, k: int) -> bool:
    """Injectivity of H^k(F^{s_small}) -> H^k(F^{s_big}) computed from the kernel of the map."""
    dim_k = model.total_dim(k)
    small = filtration(model, s_small, k)
    closed = kernel(model.d_matrix(k)).intersect(small) if dim_k else Subspace.zero(0)
    if k == 0:
        return True
    dk1 = model.d_matrix(k - 1)
    big_src = Subspace.full(model.total_dim(k - 1)) if s_big is None else filtration(model, s_big, k - 1)
    killed = closed.intersect(big_src.image_under(dk1))
    own = filtration(model, s_small, k - 1).image_under(dk1)
    return killed.dim - own.dim == 0


def kodaira_predicates(model: Model, p: int) -> KodairaPredicates:
    n = model.n
    failures = []
    for a in range(n + 1):
        for b in range(n + 1):
            ker_dbar = kernel(model.delbar_matrix(a, b))
            im_del = Subspace.span(model.del_matrix(a - 1, b).columns(), model.dim(a, b))
            ddbar = model.del_matrix(a - 1, b) @ model.delbar_matrix(a - 1, b - 1)
            im_ddbar = Subspace.span(ddbar.columns(), model.dim(a, b))
            if ker_dbar.intersect(im_del) != im_ddbar:
                failures.append((a, b))
    inj_prev = {}
    inj_total = {}
    consistent = True
    for k in range(0, 2 * n + 1):
        q = k - 1 - p
        inj_prev[k] = _inclusion_injective(model, p + 1, p, k)
        inj_total[k] = _inclusion_injective(model, p + 1, None, k)
        if k >= 1:
            if inj_prev[k] != degeneration(model, p, q).filtration_identity:
                consistent = False
            if inj_total[k] != filtration_condition(model, p, q):
                consistent = False
    if not consistent:
        raise EquivalenceViolation("filtration injectivity disagrees with the degeneration lemmas")
    return KodairaPredicates(p, not failures, failures, inj_prev, inj_total, consistent)
