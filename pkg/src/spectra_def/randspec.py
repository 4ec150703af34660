"""Random small valid model specs, for property tests and oracle comparisons."""

from __future__ import annotations

import random
from itertools import combinations

from .errors import ModelError
from .exact_linalg import I, Scalar
from .model import Model, ModelSpec, build_model

COEFFS = (Scalar(1), Scalar(-1), I, -I, Scalar(2))


def _candidate(rng: random.Random, n: int, density: float, allow_mixed: bool) -> ModelSpec:
    holo = [f"a{i + 1}" for i in range(n)]
    anti = [f"b{i + 1}" for i in range(n)]
    rules = {}
    for g in range(n):
        terms = []
        # (2,0) part from earlier holomorphic generators
        for i, j in combinations(range(g), 2):
            if rng.random() < density:
                terms.append((rng.choice(COEFFS), [holo[i], holo[j]]))
        if allow_mixed:
            for i in range(g):
                for j in range(g):
                    if rng.random() < density / 2:
                        terms.append((rng.choice(COEFFS), [holo[i], anti[j]]))
        if terms:
            rules[holo[g]] = terms
        terms = []
        for i, j in combinations(range(g), 2):
            if rng.random() < density:
                terms.append((rng.choice(COEFFS), [anti[i], anti[j]]))
        if allow_mixed:
            for i in range(g):
                for j in range(g):
                    if rng.random() < density / 2:
                        terms.append((rng.choice(COEFFS), [holo[i], anti[j]]))
        if terms:
            rules[anti[g]] = terms
    return ModelSpec(name="random", holo_generators=holo, antiholo_generators=anti, d_rules=rules)


def random_model(rng: random.Random, n_choices=(1, 2, 3, 4), density: float = 0.35,
                 allow_mixed: bool = True, max_tries: int = 500) -> Model:
    """Rejection-sample a spec that builds (integrable, d^2 = 0, Jacobi)."""
    for _ in range(max_tries):
        n = rng.choice(n_choices)
        spec = _candidate(rng, n, density, allow_mixed)
        try:
            return build_model(spec)
        except ModelError:
            continue
    raise RuntimeError("no valid random model found")
