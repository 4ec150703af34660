"""Bigraded coframe models and their exterior-algebra operators.

A model is a finite exterior algebra on ``n`` generators of type (1,0) and
``n`` generators of type (0,1) with a differential fixed on generators and
extended by the graded Leibniz rule.  Monomials are bitmasks: holomorphic
generator ``a`` is bit ``a``, antiholomorphic generator ``b`` is bit ``n + b``,
and the canonical order of factors is increasing bit index.

Vector-valued forms ``sum tau_a (x) theta_a`` take values in the span of the
frame dual to the holomorphic generators.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .errors import (
    BasisNotClosed,
    FrameNotHolomorphic,
    IntegrabilityViolation,
    ModelClosure,
    NotClosed,
    SpecError,
)
from .exact_linalg import ONE, ZERO, Matrix, Scalar

log = logging.getLogger(__name__)

__all__ = [
    "ModelSpec",
    "Model",
    "Form",
    "VectorForm",
    "build_model",
    "popcount",
    "wedge_sign",
]


def popcount(m: int) -> int:
    return bin(m).count("1")


def bits(m: int) -> list[int]:
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return out


def wedge_sign(m1: int, m2: int) -> int:
    """Sign of moving ``m1 ^ m2`` factors into canonical order, 0 if they overlap."""
    if m1 & m2:
        return 0
    inv = 0
    for j in bits(m2):
        inv += popcount(m1 >> (j + 1))
    return -1 if inv & 1 else 1


def contract_sign(a: int, m: int) -> int:
    """Sign of theta_a applied to the monomial m (0 if the factor is absent)."""
    if not (m >> a) & 1:
        return 0
    return -1 if popcount(m & ((1 << a) - 1)) & 1 else 1


# --------------------------------------------------------------------------
# forms


class Form:
    """A sparse scalar form: monomial bitmask -> nonzero Scalar."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[int, Scalar] | None = None):
        self.n = n
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "Form":
        f = object.__new__(cls)
        f.n = n
        f.terms = terms
        return f

    @classmethod
    def zero(cls, n: int) -> "Form":
        return cls._raw(n, {})

    @classmethod
    def one(cls, n: int) -> "Form":
        return cls._raw(n, {0: ONE})

    def bidegree_of(self, m: int) -> tuple[int, int]:
        low = (1 << self.n) - 1
        return popcount(m & low), popcount(m >> self.n)

    def bidegrees(self) -> set:
        return {self.bidegree_of(m) for m in self.terms}

    @property
    def degree(self) -> int | None:
        degs = {popcount(m) for m in self.terms}
        if len(degs) > 1:
            raise ValueError("form is not homogeneous in total degree")
        return degs.pop() if degs else None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def component(self, p: int, q: int) -> "Form":
        return Form._raw(self.n, {m: c for m, c in self.terms.items() if self.bidegree_of(m) == (p, q)})

    def __add__(self, other: "Form") -> "Form":
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, ZERO) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Form._raw(self.n, out)

    def __neg__(self) -> "Form":
        return Form._raw(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, c) -> "Form":
        c = Scalar.coerce(c)
        if not c:
            return Form.zero(self.n)
        return Form._raw(self.n, {m: c * v for m, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self):
        body = " + ".join(f"({c})*m{m:b}" for m, c in sorted(self.terms.items()))
        return f"Form({body or '0'})"


class VectorForm:
    """A sparse vector-valued form: (monomial, frame index) -> nonzero Scalar."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[tuple, Scalar] | None = None):
        self.n = n
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "VectorForm":
        v = object.__new__(cls)
        v.n = n
        v.terms = terms
        return v

    @classmethod
    def zero(cls, n: int) -> "VectorForm":
        return cls._raw(n, {})

    @classmethod
    def from_components(cls, n: int, comps: Mapping[int, Form]) -> "VectorForm":
        terms = {}
        for a, f in comps.items():
            for m, c in f.terms.items():
                terms[(m, a)] = c
        return cls._raw(n, terms)

    def component(self, a: int) -> Form:
        return Form._raw(self.n, {m: c for (m, b), c in self.terms.items() if b == a})

    def components(self) -> dict:
        out: dict = {}
        for (m, a), c in self.terms.items():
            out.setdefault(a, {})[m] = c
        return {a: Form._raw(self.n, t) for a, t in out.items()}

    @property
    def degree(self) -> int | None:
        degs = {popcount(m) for m, _ in self.terms}
        if len(degs) > 1:
            raise ValueError("vector form is not homogeneous")
        return degs.pop() if degs else None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "VectorForm") -> "VectorForm":
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, ZERO) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return VectorForm._raw(self.n, out)

    def __neg__(self) -> "VectorForm":
        return VectorForm._raw(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "VectorForm") -> "VectorForm":
        return self + (-other)

    def scale(self, c) -> "VectorForm":
        c = Scalar.coerce(c)
        if not c:
            return VectorForm.zero(self.n)
        return VectorForm._raw(self.n, {k: c * v for k, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, VectorForm):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self):
        body = " + ".join(f"({c})*m{m:b}@{a}" for (m, a), c in sorted(self.terms.items()))
        return f"VectorForm({body or '0'})"


def _add_into(acc: dict, key, c: Scalar) -> None:
    v = acc.get(key)
    v = c if v is None else v + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


# --------------------------------------------------------------------------
# specs


@dataclass
class ModelSpec:
    """Plain description of a model, as read from JSON."""

    name: str
    holo_generators: list
    antiholo_generators: list
    d_rules: dict = field(default_factory=dict)  # gen -> list of (Scalar, [gens])
    admissible_basis: dict | None = None  # (p, q) -> list of [gens]
    frame_overrides: dict | None = None  # (j, l) 0-based -> {p: Scalar}
    conjugate: bool = False
    notes: dict = field(default_factory=dict)

    @classmethod
    def from_json(cls, obj) -> "ModelSpec":
        if isinstance(obj, (str, bytes)):
            obj = json.loads(obj)
        if not isinstance(obj, dict):
            raise SpecError("model description must be a JSON object")
        try:
            name = str(obj.get("name", "model"))
            holo = [str(g) for g in obj["holo_generators"]]
            anti = [str(g) for g in obj["antiholo_generators"]]
        except (KeyError, TypeError) as exc:
            raise SpecError(f"missing generator lists: {exc}") from None
        rules = {}
        for gen, terms in (obj.get("d") or {}).items():
            if not isinstance(terms, list):
                raise SpecError(f"d rule for {gen} must be a list")
            parsed = []
            for t in terms:
                if not isinstance(t, dict) or "coeff" not in t or "monomial" not in t:
                    raise SpecError(f"malformed term in d rule for {gen}: {t!r}")
                parsed.append((Scalar.from_json(t["coeff"]), [str(g) for g in t["monomial"]]))
            rules[str(gen)] = parsed
        basis = None
        if obj.get("basis") is not None:
            basis = {}
            for key, mons in obj["basis"].items():
                basis[_parse_pair(key)] = [[str(g) for g in mon] for mon in mons]
        overrides = None
        if obj.get("brackets") is not None:
            overrides = {}
            for key, vals in obj["brackets"].items():
                j, l = _parse_pair(key)
                overrides[(j - 1, l - 1)] = {
                    int(p) - 1: Scalar.from_json(c) for p, c in vals.items()
                }
        return cls(
            name=name,
            holo_generators=holo,
            antiholo_generators=anti,
            d_rules=rules,
            admissible_basis=basis,
            frame_overrides=overrides,
            conjugate=bool(obj.get("conjugate", False)),
            notes=dict(obj.get("notes") or {}),
        )

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "holo_generators": list(self.holo_generators),
            "antiholo_generators": list(self.antiholo_generators),
            "d": {
                g: [{"coeff": c.to_json(), "monomial": list(mon)} for c, mon in terms]
                for g, terms in self.d_rules.items()
            },
            "conjugate": self.conjugate,
        }
        if self.admissible_basis is not None:
            out["basis"] = {
                f"{p},{q}": [list(m) for m in mons]
                for (p, q), mons in sorted(self.admissible_basis.items())
            }
        if self.frame_overrides is not None:
            out["brackets"] = {
                f"{j + 1},{l + 1}": {str(p + 1): c.to_json() for p, c in sorted(vals.items())}
                for (j, l), vals in sorted(self.frame_overrides.items())
            }
        if self.notes:
            out["notes"] = self.notes
        return out


def _parse_pair(key: str) -> tuple[int, int]:
    try:
        a, b = key.split(",")
        return int(a), int(b)
    except ValueError:
        raise SpecError(f"expected a key of the form 'p,q', got {key!r}") from None


def build_model(spec: ModelSpec) -> "Model":
    return Model(spec)


# --------------------------------------------------------------------------
# the model


class Model:
    """A validated bicomplex with its exterior-algebra operators."""

    def __init__(self, spec: ModelSpec):
        self.spec = spec
        self.name = spec.name
        holo, anti = list(spec.holo_generators), list(spec.antiholo_generators)
        if len(holo) != len(anti):
            raise SpecError("holomorphic and antiholomorphic generator counts differ")
        names = holo + anti
        if len(set(names)) != len(names):
            raise SpecError("generator names must be distinct")
        self.n = n = len(holo)
        self.names = names
        self._bit = {g: i for i, g in enumerate(names)}
        self._holo_mask = (1 << n) - 1
        self._cache_d: dict = {}
        self._cache_mats: dict = {}
        self._cache_misc: dict = {}

        # generator differentials
        self._dgen: dict[int, dict] = {i: {} for i in range(2 * n)}
        for gen, terms in spec.d_rules.items():
            if gen not in self._bit:
                raise SpecError(f"d rule for unknown generator {gen!r}")
            g = self._bit[gen]
            for c, mon in terms:
                if len(mon) != 2:
                    raise SpecError(f"d rule for {gen} has a non-quadratic monomial {mon}")
                m = self._mask_canonical(mon)
                _add_into(self._dgen[g], m, Scalar.coerce(c))
        for g, t in self._dgen.items():
            for m in t:
                p, q = self.bidegree_of(m)
                if g < n and (p, q) == (0, 2):
                    raise IntegrabilityViolation(
                        f"d{names[g]} has a (0,2) component; the structure is not integrable"
                    )
                if g >= n and (p, q) == (2, 0):
                    raise IntegrabilityViolation(
                        f"d{names[g]} has a (2,0) component; the structure is not integrable"
                    )

        # d^2 on generators; d^2 is a derivation so this is enough on the free algebra
        for g in range(2 * n):
            dd = self._d_terms_free(self._dgen[g])
            if dd:
                raise NotClosed(f"d^2 {names[g]} != 0")

        # admissible basis
        self.explicit_basis = spec.admissible_basis is not None
        self._bases: dict = {}
        if self.explicit_basis:
            for (p, q), mons in spec.admissible_basis.items():
                masks = []
                for mon in mons:
                    m = self._mask_canonical(mon)
                    if self.bidegree_of(m) != (p, q):
                        raise SpecError(f"basis monomial {mon} is not of bidegree ({p},{q})")
                    masks.append(m)
                if len(set(masks)) != len(masks):
                    raise SpecError(f"repeated monomial in basis of bidegree ({p},{q})")
                self._bases[(p, q)] = sorted(masks, key=self._sort_key)
        else:
            for p in range(n + 1):
                for q in range(n + 1):
                    masks = [
                        sum(1 << i for i in h) | sum(1 << (n + j) for j in a)
                        for h in combinations(range(n), p)
                        for a in combinations(range(n), q)
                    ]
                    self._bases[(p, q)] = sorted(masks, key=self._sort_key)
        for p in range(n + 1):
            for q in range(n + 1):
                self._bases.setdefault((p, q), [])
        self._admissible = {m for ms in self._bases.values() for m in ms}
        self._index = {pq: {m: i for i, m in enumerate(ms)} for pq, ms in self._bases.items()}
        if self.explicit_basis:
            for m in self._admissible:
                for t in self._d_mono(m):
                    if t not in self._admissible:
                        raise BasisNotClosed(
                            f"d({self.monomial_name(m)}) leaves the admissible span via "
                            f"{self.monomial_name(t)}"
                        )

        # matrix identities on every bidegree
        for p in range(n + 1):
            for q in range(n + 1):
                dp = self.del_matrix(p, q)
                db = self.delbar_matrix(p, q)
                if p + 1 <= n and not (self.del_matrix(p + 1, q) @ dp).is_zero():
                    raise NotClosed(f"del^2 != 0 on bidegree ({p},{q})")
                if q + 1 <= n and not (self.delbar_matrix(p, q + 1) @ db).is_zero():
                    raise NotClosed(f"delbar^2 != 0 on bidegree ({p},{q})")
                if p + 1 <= n and q + 1 <= n:
                    mix = self.delbar_matrix(p + 1, q) @ dp + self.del_matrix(p, q + 1) @ db
                    if not mix.is_zero():
                        raise NotClosed(f"del delbar + delbar del != 0 on bidegree ({p},{q})")

        # frame brackets
        self.brackets = self._derive_brackets()
        if spec.frame_overrides:
            for (j, l), vals in spec.frame_overrides.items():
                if not (0 <= j < n and 0 <= l < n and 0 <= min(vals, default=0)
                        and max(vals, default=0) < n):
                    raise SpecError(f"bracket override index out of range: {(j + 1, l + 1)}")
                if j == l:
                    if any(vals.values()):
                        raise SpecError("a frame vector must commute with itself")
                    continue
                clean = {p: c for p, c in vals.items() if c}
                if j < l:
                    self.brackets[(j, l)] = clean
                else:
                    self.brackets[(l, j)] = {p: -c for p, c in clean.items()}
        self.brackets = {k: v for k, v in self.brackets.items() if v}
        self._check_jacobi()

        if spec.conjugate:
            self._lint_conjugation()

    # -- naming -------------------------------------------------------------
    def _sort_key(self, m: int):
        n = self.n
        return tuple(b for b in bits(m) if b < n), tuple(b for b in bits(m) if b >= n)

    def _mask_canonical(self, mon: Iterable[str]) -> int:
        idx = []
        for g in mon:
            if g not in self._bit:
                raise SpecError(f"unknown generator {g!r}")
            idx.append(self._bit[g])
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise SpecError(f"monomial {list(mon)} is not in canonical increasing order")
        m = 0
        for i in idx:
            m |= 1 << i
        return m

    def monomial_name(self, m: int) -> str:
        if m == 0:
            return "1"
        return "^".join(self.names[b] for b in bits(m))

    def monomial_names(self, m: int) -> list:
        return [self.names[b] for b in bits(m)]

    def format(self, f) -> str:
        if isinstance(f, VectorForm):
            parts = [
                f"({c})*{self.monomial_name(m)}@theta{a + 1}"
                for (m, a), c in sorted(f.terms.items(), key=lambda kv: (kv[0][1], self._sort_key(kv[0][0])))
            ]
        else:
            parts = [
                f"({c})*{self.monomial_name(m)}"
                for m, c in sorted(f.terms.items(), key=lambda kv: self._sort_key(kv[0]))
            ]
        return " + ".join(parts) if parts else "0"

    def bidegree_of(self, m: int) -> tuple[int, int]:
        return popcount(m & self._holo_mask), popcount(m >> self.n)

    # -- constructors -------------------------------------------------------------
    def zero(self) -> Form:
        return Form.zero(self.n)

    def one(self) -> Form:
        return Form.one(self.n)

    def gen(self, name: str) -> Form:
        if name not in self._bit:
            raise SpecError(f"unknown generator {name!r}")
        return Form._raw(self.n, {1 << self._bit[name]: ONE})

    def monomial(self, *names: str, coeff=1) -> Form:
        """The wedge of the named generators, in the given order."""
        out = Form._raw(self.n, {0: Scalar.coerce(coeff)})
        for g in names:
            out = self._wedge(out, self.gen(g))
        self.check_form(out)
        return out

    def form(self, terms: Mapping[int, Scalar]) -> Form:
        f = Form(self.n, {m: Scalar.coerce(c) for m, c in terms.items()})
        self.check_form(f)
        return f

    def frame_vector(self, a: int, coeff: Form | None = None) -> VectorForm:
        """The vector form ``coeff (x) theta_a`` (coefficient 1 by default)."""
        coeff = self.one() if coeff is None else coeff
        return VectorForm._raw(self.n, {(m, a): c for m, c in coeff.terms.items()})

    # -- admissibility -------------------------------------------------------------
    def basis(self, p: int, q: int) -> list:
        return self._bases.get((p, q), [])

    def dim(self, p: int, q: int) -> int:
        return len(self.basis(p, q))

    def is_admissible(self, m: int) -> bool:
        return m in self._admissible

    def check_form(self, f: Form) -> None:
        if not self.explicit_basis:
            return
        for m in f.terms:
            if m not in self._admissible:
                raise ModelClosure(f"monomial {self.monomial_name(m)} is outside the admissible basis")

    def omega_mask(self) -> int:
        return self._holo_mask

    def vector_admissible(self, m: int, a: int) -> bool:
        """Whether ``m (x) theta_a`` belongs to the model.

        With an explicit basis containing the top holomorphic monomial this
        means the contraction into that monomial is admissible; otherwise the
        coefficient itself must be admissible.
        """
        if not self.explicit_basis:
            return True
        omega = self._holo_mask
        if omega in self._admissible:
            inner = omega & ~(1 << a)
            if m & inner:
                return False
            return (m | inner) in self._admissible
        return m in self._admissible

    def check_vform(self, v: VectorForm) -> None:
        if not self.explicit_basis:
            return
        for m, a in v.terms:
            if not self.vector_admissible(m, a):
                raise ModelClosure(
                    f"vector term {self.monomial_name(m)}@theta{a + 1} is outside the model"
                )

    def vbasis(self, p: int, q: int) -> list:
        """Ordered basis of vector forms of coefficient bidegree (p,q)."""
        key = ("vbasis", p, q)
        if key not in self._cache_misc:
            n = self.n
            out = []
            for a in range(n):
                for h in combinations(range(n), p):
                    for s in combinations(range(n), q):
                        m = sum(1 << i for i in h) | sum(1 << (n + j) for j in s)
                        if self.vector_admissible(m, a):
                            out.append((m, a))
            out.sort(key=lambda ma: (ma[1], self._sort_key(ma[0])))
            self._cache_misc[key] = out
        return self._cache_misc[key]

    # -- coordinates -----------------------------------------------------------------
    def to_vector(self, f: Form, p: int, q: int) -> tuple:
        idx = self._index.get((p, q), {})
        v = [ZERO] * len(idx)
        for m, c in f.terms.items():
            i = idx.get(m)
            if i is None:
                raise ModelClosure(
                    f"monomial {self.monomial_name(m)} is not a basis element of bidegree ({p},{q})"
                )
            v[i] = c
        return tuple(v)

    def from_vector(self, v, p: int, q: int) -> Form:
        return Form._raw(self.n, {m: c for m, c in zip(self.basis(p, q), v) if c})

    def vform_to_vector(self, v: VectorForm, p: int, q: int) -> tuple:
        key = ("vindex", p, q)
        if key not in self._cache_misc:
            self._cache_misc[key] = {k: i for i, k in enumerate(self.vbasis(p, q))}
        idx = self._cache_misc[key]
        out = [ZERO] * len(idx)
        for k, c in v.terms.items():
            i = idx.get(k)
            if i is None:
                raise ModelClosure(f"vector term {k} is not in the basis of type ({p},{q})")
            out[i] = c
        return tuple(out)

    def vform_from_vector(self, vec, p: int, q: int) -> VectorForm:
        return VectorForm._raw(self.n, {k: c for k, c in zip(self.vbasis(p, q), vec) if c})

    def total_blocks(self, k: int) -> list:
        """[(p, q, offset, size)] for total degree k, p ascending."""
        out = []
        off = 0
        for p in range(max(0, k - self.n), min(k, self.n) + 1):
            q = k - p
            size = self.dim(p, q)
            out.append((p, q, off, size))
            off += size
        return out

    def total_dim(self, k: int) -> int:
        return sum(b[3] for b in self.total_blocks(k))

    def total_to_vector(self, f: Form, k: int) -> tuple:
        out = []
        for p, q, _, _ in self.total_blocks(k):
            out.extend(self.to_vector(f.component(p, q), p, q))
        extra = {bd for bd in f.bidegrees() if sum(bd) != k}
        if extra:
            raise ModelClosure(f"form has components outside total degree {k}")
        return tuple(out)

    def total_from_vector(self, v, k: int) -> Form:
        out = Form.zero(self.n)
        for p, q, off, size in self.total_blocks(k):
            out = out + self.from_vector(v[off: off + size], p, q)
        return out

    # -- algebra ---------------------------------------------------------------------
    def _wedge(self, f: Form, g: Form) -> Form:
        acc: dict = {}
        for m1, c1 in f.terms.items():
            for m2, c2 in g.terms.items():
                s = wedge_sign(m1, m2)
                if s:
                    _add_into(acc, m1 | m2, c1 * c2 if s > 0 else -(c1 * c2))
        return Form._raw(self.n, acc)

    def wedge(self, f: Form, g: Form) -> Form:
        out = self._wedge(f, g)
        self.check_form(out)
        return out

    def _d_terms_free(self, terms: Mapping[int, Scalar]) -> dict:
        acc: dict = {}
        for m, c in terms.items():
            for t, e in self._d_mono(m).items():
                _add_into(acc, t, c * e)
        return acc

    def _d_mono(self, m: int) -> dict:
        """d of a monomial on the free algebra, by the Leibniz rule."""
        cached = self._cache_d.get(m)
        if cached is not None:
            return cached
        acc: dict = {}
        bl = bits(m)
        for s, g in enumerate(bl):
            dg = self._dgen[g]
            if not dg:
                continue
            prefix = 0
            for b in bl[:s]:
                prefix |= 1 << b
            suffix = m & ~prefix & ~(1 << g)
            sign0 = -1 if s & 1 else 1
            for t, c in dg.items():
                s1 = wedge_sign(prefix, t)
                if not s1:
                    continue
                s2 = wedge_sign(prefix | t, suffix)
                if not s2:
                    continue
                sg = sign0 * s1 * s2
                _add_into(acc, prefix | t | suffix, c if sg > 0 else -c)
        self._cache_d[m] = acc
        return acc

    def d(self, f: Form) -> Form:
        return Form._raw(self.n, self._d_terms_free(f.terms))

    def _split(self, f: Form, shift: tuple) -> Form:
        acc: dict = {}
        for m, c in f.terms.items():
            p, q = self.bidegree_of(m)
            for t, e in self._d_mono(m).items():
                if self.bidegree_of(t) == (p + shift[0], q + shift[1]):
                    _add_into(acc, t, c * e)
        return Form._raw(self.n, acc)

    def partial(self, f: Form) -> Form:
        """The (1,0) part of d."""
        return self._split(f, (1, 0))

    # ``del`` is a keyword; keep a readable alias
    del_ = partial

    def delbar(self, f: Form) -> Form:
        """The (0,1) part of d."""
        return self._split(f, (0, 1))

    def _op_matrix(self, p: int, q: int, shift: tuple) -> Matrix:
        key = ("op", p, q, shift)
        cached = self._cache_mats.get(key)
        if cached is not None:
            return cached
        src = self.basis(p, q)
        tp, tq = p + shift[0], q + shift[1]
        tidx = self._index.get((tp, tq), {})
        cols = []
        for m in src:
            col = [ZERO] * len(tidx)
            for t, e in self._d_mono(m).items():
                if self.bidegree_of(t) == (tp, tq):
                    i = tidx.get(t)
                    if i is None:
                        raise BasisNotClosed(
                            f"d({self.monomial_name(m)}) leaves the admissible span"
                        )
                    col[i] = e
            cols.append(col)
        mat = Matrix.from_columns(cols, len(tidx)) if cols else Matrix.zeros(len(tidx), 0)
        self._cache_mats[key] = mat
        return mat

    def del_matrix(self, p: int, q: int) -> Matrix:
        """Matrix of del: A^{p,q} -> A^{p+1,q} in the ordered bases."""
        return self._op_matrix(p, q, (1, 0))

    def delbar_matrix(self, p: int, q: int) -> Matrix:
        return self._op_matrix(p, q, (0, 1))

    def d_matrix(self, k: int) -> Matrix:
        """Matrix of d on total degree k (blocks ordered by p ascending)."""
        key = ("dtot", k)
        cached = self._cache_mats.get(key)
        if cached is not None:
            return cached
        src = self.total_blocks(k)
        tgt = self.total_blocks(k + 1)
        grid = []
        for tp, tq, _, tsize in tgt:
            row = []
            for p, q, _, size in src:
                if (tp, tq) == (p + 1, q):
                    row.append(self.del_matrix(p, q))
                elif (tp, tq) == (p, q + 1):
                    row.append(self.delbar_matrix(p, q))
                else:
                    row.append(None)
            grid.append(row)
        mat = Matrix.block(grid, [b[3] for b in tgt], [b[3] for b in src])
        self._cache_mats[key] = mat
        return mat

    # -- frame -----------------------------------------------------------------------
    def _derive_brackets(self) -> dict:
        n = self.n
        out: dict = {}
        for p in range(n):
            for t, c in self._dgen[p].items():
                if self.bidegree_of(t) != (2, 0):
                    continue
                i, j = bits(t)
                out.setdefault((i, j), {})
                _add_into(out[(i, j)], p, -c)
        return out

    def frame_bracket(self, a: int, b: int) -> dict:
        """[theta_a, theta_b] as {p: coefficient}."""
        if a == b:
            return {}
        if a < b:
            return self.brackets.get((a, b), {})
        return {p: -c for p, c in self.brackets.get((b, a), {}).items()}

    def _check_jacobi(self) -> None:
        n = self.n
        for a, b, c in combinations(range(n), 3):
            acc: dict = {}
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                for p, e in self.frame_bracket(y, z).items():
                    for r, f in self.frame_bracket(x, p).items():
                        _add_into(acc, r, e * f)
            if acc:
                raise NotClosed(
                    f"frame brackets violate the Jacobi identity on theta{a + 1}, theta{b + 1}, theta{c + 1}"
                )

    def is_delbar_flat(self) -> bool:
        """True when no holomorphic generator has a (1,1) part in its differential."""
        return not any(
            self.bidegree_of(t) == (1, 1) for g in range(self.n) for t in self._dgen[g]
        )

    def require_flat(self) -> None:
        if not self.is_delbar_flat():
            raise FrameNotHolomorphic(
                "the holomorphic frame is not delbar-flat; vector-valued delbar is unavailable"
            )

    # -- contractions ----------------------------------------------------------------
    def contract(self, a: int, f: Form) -> Form:
        """theta_a contracted into f (antiderivation, theta_a on phi^b = delta)."""
        acc: dict = {}
        for m, c in f.terms.items():
            s = contract_sign(a, m)
            if s:
                acc[m ^ (1 << a)] = c if s > 0 else -c
        return Form._raw(self.n, acc)

    def _contract_vform(self, phi: VectorForm, f: Form) -> Form:
        acc: dict = {}
        for (tm, a), tc in phi.terms.items():
            for m, c in f.terms.items():
                s = contract_sign(a, m)
                if not s:
                    continue
                rest = m ^ (1 << a)
                s2 = wedge_sign(tm, rest)
                if not s2:
                    continue
                v = tc * c
                _add_into(acc, tm | rest, v if s * s2 > 0 else -v)
        return Form._raw(self.n, acc)

    def contract_vform(self, phi: VectorForm, f: Form) -> Form:
        """i_phi f = sum_a tau_a ^ (theta_a contracted into f)."""
        out = self._contract_vform(phi, f)
        self.check_form(out)
        return out

    def exp_contract(self, phi: VectorForm, f: Form, sign: int = 1) -> Form:
        """sum_k (sign i_phi)^k f / k!; terminates since i_phi lowers holomorphic degree."""
        phi = phi if sign > 0 else -phi
        out = f
        term = f
        k = 0
        while term:
            k += 1
            # term_k = i_phi^k f / k!
            term = self._contract_vform(phi, term).scale(Scalar(1) / k)
            out = out + term
        self.check_form(out)
        return out

    # -- Lie derivatives and brackets ------------------------------------------------
    def lie10(self, phi: VectorForm, f: Form) -> Form:
        """[i_phi, del] = i_phi del - (-1)^(k-1) del i_phi for phi of degree k."""
        k = phi.degree or 0
        a = self._contract_vform(phi, self.partial(f))
        b = self.partial(self._contract_vform(phi, f))
        return a - b if (k - 1) % 2 == 0 else a + b

    def lie01(self, phi: VectorForm, f: Form) -> Form:
        """[i_phi, delbar] with the same graded sign."""
        k = phi.degree or 0
        a = self._contract_vform(phi, self.delbar(f))
        b = self.delbar(self._contract_vform(phi, f))
        return a - b if (k - 1) % 2 == 0 else a + b

    def bracket(self, phi: VectorForm, psi: VectorForm) -> VectorForm:
        """Bracket of vector forms with (0,*) coefficients.

        On decomposables:
        [a (x) theta_i, b (x) theta_j] = a^b (x) [theta_i, theta_j]
            + a ^ (theta_i in del b) (x) theta_j
            - (-1)^(kl) b ^ (theta_j in del a) (x) theta_i.
        """
        acc: dict = {}
        n = self.n
        for (m1, a), c1 in phi.terms.items():
            k = popcount(m1)
            alpha = Form._raw(n, {m1: c1})
            dalpha = self.partial(alpha)
            for (m2, b), c2 in psi.terms.items():
                l = popcount(m2)
                beta = Form._raw(n, {m2: c2})
                s = wedge_sign(m1, m2)
                if s:
                    ab = c1 * c2 if s > 0 else -(c1 * c2)
                    for p, e in self.frame_bracket(a, b).items():
                        _add_into(acc, (m1 | m2, p), ab * e)
                t1 = self._wedge(alpha, self.contract(a, self.partial(beta)))
                for m, c in t1.terms.items():
                    _add_into(acc, (m, b), c)
                t2 = self._wedge(beta, self.contract(b, dalpha))
                sg = -1 if (k * l) % 2 == 0 else 1
                for m, c in t2.terms.items():
                    _add_into(acc, (m, a), c if sg > 0 else -c)
        out = VectorForm._raw(n, acc)
        self.check_vform(out)
        return out

    fn_bracket = bracket

    def delbar_vform(self, phi: VectorForm) -> VectorForm:
        self.require_flat()
        acc: dict = {}
        for (m, a), c in phi.terms.items():
            for t, e in self._d_mono(m).items():
                p, q = self.bidegree_of(m)
                if self.bidegree_of(t) == (p, q + 1):
                    _add_into(acc, (t, a), c * e)
        return VectorForm._raw(self.n, acc)

    def delbar_phi(self, phi: VectorForm, f: Form) -> Form:
        """delbar + [del, i_phi] = delbar f + del(i_phi f) - i_phi(del f)."""
        self.require_flat()
        out = self.delbar(f) + self.partial(self._contract_vform(phi, f)) - self._contract_vform(
            phi, self.partial(f)
        )
        self.check_form(out)
        return out

    delbar_phi_op = delbar_phi

    def vdelbar_matrix(self, q: int) -> Matrix:
        """Matrix of delbar on vector forms of type (0,q) -> (0,q+1)."""
        key = ("vdelbar", q)
        cached = self._cache_mats.get(key)
        if cached is not None:
            return cached
        self.require_flat()
        src = self.vbasis(0, q)
        tgt = self.vbasis(0, q + 1)
        cols = [
            self.vform_to_vector(self.delbar_vform(VectorForm._raw(self.n, {k: ONE})), 0, q + 1)
            for k in src
        ]
        mat = Matrix.from_columns(cols, len(tgt)) if cols else Matrix.zeros(len(tgt), 0)
        self._cache_mats[key] = mat
        return mat

    # -- conjugation lint ----------------------------------------------------------------
    def _conj_mask(self, m: int) -> tuple[int, int]:
        """Conjugate monomial (swap holo i with antiholo i) with its reordering sign."""
        n = self.n
        factors = [(b + n) if b < n else (b - n) for b in bits(m)]
        sign = 1
        out = 0
        for f in factors:
            s = wedge_sign(out, 1 << f)
            sign *= s
            out |= 1 << f
        return out, sign

    def conjugate_form(self, f: Form) -> Form:
        acc: dict = {}
        for m, c in f.terms.items():
            t, s = self._conj_mask(m)
            _add_into(acc, t, c.conj() if s > 0 else -c.conj())
        return Form._raw(self.n, acc)

    def conjugation_mismatches(self) -> list:
        bad = []
        n = self.n
        for i in range(n):
            expect = self.conjugate_form(Form._raw(n, dict(self._dgen[i])))
            if Form._raw(n, dict(self._dgen[n + i])) != expect:
                bad.append(self.names[n + i])
        return bad

    def _lint_conjugation(self) -> None:
        for g in self.conjugation_mismatches():
            log.warning("model %s: d%s is not the conjugate of its holomorphic rule", self.name, g)

    # -- serialization --------------------------------------------------------------------
    def form_to_json(self, f: Form) -> list:
        return [
            {"monomial": self.monomial_names(m), "coeff": c.to_json()}
            for m, c in sorted(f.terms.items(), key=lambda kv: self._sort_key(kv[0]))
        ]

    def vform_to_json(self, v: VectorForm) -> list:
        return [
            {"monomial": self.monomial_names(m), "frame": a + 1, "coeff": c.to_json()}
            for (m, a), c in sorted(v.terms.items(), key=lambda kv: (kv[0][1], self._sort_key(kv[0][0])))
        ]

    def form_from_json(self, items) -> Form:
        acc: dict = {}
        for it in items:
            _add_into(acc, self._mask_canonical(it["monomial"]), Scalar.from_json(it["coeff"]))
        return self.form(acc)

    def vform_from_json(self, items) -> VectorForm:
        acc: dict = {}
        for it in items:
            _add_into(acc, (self._mask_canonical(it["monomial"]), int(it["frame"]) - 1),
                      Scalar.from_json(it["coeff"]))
        v = VectorForm._raw(self.n, acc)
        self.check_vform(v)
        return v
