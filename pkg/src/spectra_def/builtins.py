"""Built-in models: the Iwasawa manifold, the Nakamura solvmanifold, complex tori."""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

from .errors import SpecError
from .exact_linalg import I, ONE, Scalar
from .model import Model, ModelSpec, build_model

__all__ = ["iwasawa_spec", "nakamura_spec", "abelian_spec", "builtin", "BUILTINS", "nakamura_lambda"]


def iwasawa_spec() -> ModelSpec:
    holo = ["phi1", "phi2", "phi3"]
    anti = ["phibar1", "phibar2", "phibar3"]
    return ModelSpec(
        name="iwasawa",
        holo_generators=holo,
        antiholo_generators=anti,
        d_rules={
            "phi3": [(-ONE, ["phi1", "phi2"])],
            "phibar3": [(-ONE, ["phibar1", "phibar2"])],
        },
        conjugate=True,
    )


def nakamura_lambda(k: int) -> Scalar:
    """C + conj(C) - 2i for C = i/(2k); always -2i."""
    if k == 0:
        raise SpecError("the Nakamura parameter k must be a nonzero integer")
    c = Scalar(0, Fraction(1, 2 * k))
    return c + c.conj() - 2 * I


def nakamura_spec(k: int = 1) -> ModelSpec:
    lam = nakamura_lambda(k)
    data = json.loads(resources.files(__package__).joinpath("data/nakamura.json").read_text())
    basis = {}
    for key, mons in data["basis"].items():
        p, q = (int(x) for x in key.split(","))
        basis[(p, q)] = mons
    return ModelSpec(
        name=f"nakamura-k{k}",
        holo_generators=data["holo_generators"],
        antiholo_generators=data["antiholo_generators"],
        d_rules={
            "phi1": [(-lam, ["phi1", "phi3"])],
            "phi2": [(lam, ["phi2", "phi3"])],
            "phit1": [(lam, ["phi3", "phit1"])],
            "phit2": [(-lam, ["phi3", "phit2"])],
        },
        admissible_basis=basis,
        notes=data.get("notes", {}),
    )


def abelian_spec(n: int = 2) -> ModelSpec:
    if n < 0:
        raise SpecError("dimension must be non-negative")
    return ModelSpec(
        name=f"abelian-{n}",
        holo_generators=[f"z{i + 1}" for i in range(n)],
        antiholo_generators=[f"zbar{i + 1}" for i in range(n)],
        d_rules={},
        conjugate=True,
    )


BUILTINS = ("iwasawa", "nakamura", "abelian")


def builtin(name: str, k: int = 1, n: int = 2) -> Model:
    if name == "iwasawa":
        return build_model(iwasawa_spec())
    if name == "nakamura":
        return build_model(nakamura_spec(k))
    if name == "abelian":
        return build_model(abelian_spec(n))
    raise SpecError(f"unknown built-in manifold {name!r}")
