"""Shared helpers for the test suite."""

from __future__ import annotations

import random

from spectra_def.exact_linalg import ZERO, Matrix, Scalar, rank
from spectra_def.model import Form, Model, VectorForm

SMALL = [Scalar(0), Scalar(1), Scalar(-1), Scalar(0, 1), Scalar(1, 1), Scalar(2)]


def random_vform(model: Model, rng: random.Random, q: int = 1) -> VectorForm:
    out = VectorForm.zero(model.n)
    for mask, a in model.vbasis(0, q):
        c = rng.choice(SMALL)
        if not c.is_zero():
            out = out + model.frame_vector(a, Form(model.n, {mask: c}))
    return out


def random_form(model: Model, rng: random.Random, p: int, q: int) -> Form:
    return Form(model.n, {m: rng.choice(SMALL) for m in model.basis(p, q)})


def all_basis_forms(model: Model):
    for p in range(model.n + 1):
        for q in range(model.n + 1):
            for m in model.basis(p, q):
                yield Form(model.n, {m: Scalar(1)})


def class_matrix(space, model: Model, forms) -> Matrix:
    """Columns: coordinates of each form's class."""
    return Matrix.from_columns([space.coords(model, f) for f in forms], space.dim)


def spans_classes(space, model: Model, forms) -> bool:
    return space.dim == len(forms) and rank(class_matrix(space, model, forms)) == len(forms)


def nonzero(vec) -> bool:
    return any(x != ZERO for x in vec)
