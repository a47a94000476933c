"""Canonical polynomial expressions on the space of infinite jets.

Coordinates come in three kinds: base variables x^i, jet coordinates
p^j_sigma (the fiber variables u^j and all their derivative coordinates,
indexed by a multi-index sigma), and named parameters, which behave as
constants under every derivative.  A PolyExpr is a finite sum of monomials
in these coordinates with exact rational coefficients, kept in a canonical
form (sorted variables, no zero coefficients, reduced fractions) so that
equality of values is equality of representations and every identity check
reduces to a zero test.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, NamedTuple, Optional, Sequence, Union

from .multiindex import MAX_BASE_DIM, MultiIndex

Rational = Union[int, Fraction]

# Coordinate kinds; the numeric values fix the canonical variable order:
# parameters, then base variables, then jet coordinates.
PARAM, BASE, JET = 0, 1, 2


class SignatureMismatchError(ValueError):
    """Values over different bundle signatures were combined."""


class EvaluationError(LookupError):
    """A coordinate required by evaluate() was not assigned."""


class JetCoordinate(NamedTuple):
    """A single coordinate on jet space.

    kind is one of PARAM, BASE, JET; index is the parameter/base/fiber
    index (0-based); sigma is the derivative multi-index and is empty for
    parameters and base variables.  p^j with sigma == 0 is the fiber
    variable u^j itself.
    """

    kind: int
    index: int
    sigma: MultiIndex = MultiIndex(())


def _as_coeff(q) -> Rational:
    """Normalize a rational coefficient; integral fractions collapse to int."""
    if isinstance(q, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(q, int):
        return q
    if isinstance(q, Fraction):
        return q.numerator if q.denominator == 1 else q
    raise TypeError(f"expected int or Fraction, got {type(q).__name__}")


@dataclass(frozen=True)
class Bundle:
    """Bundle signature: base variable, fiber variable and parameter names.

    Declared once and carried by every value; mixing signatures raises
    SignatureMismatchError rather than coercing.
    """

    base: tuple[str, ...]
    fiber: tuple[str, ...]
    params: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(self.base))
        object.__setattr__(self, "fiber", tuple(self.fiber))
        object.__setattr__(self, "params", tuple(self.params))
        if not 1 <= len(self.base) <= MAX_BASE_DIM:
            raise ValueError(f"need between 1 and {MAX_BASE_DIM} base variables")
        if len(self.fiber) < 1:
            raise ValueError("need at least one fiber variable")
        names = self.base + self.fiber + self.params
        for name in names:
            if not name.isidentifier() or "_" in name:
                raise ValueError(f"bad variable name {name!r}: must be an identifier without underscores")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate names in signature: {names}")

    @property
    def n(self) -> int:
        return len(self.base)

    @property
    def r(self) -> int:
        return len(self.fiber)

    # -- coordinates ------------------------------------------------------

    def base_coord(self, i: int) -> JetCoordinate:
        if not 0 <= i < self.n:
            raise ValueError(f"base index {i} out of range")
        return JetCoordinate(BASE, i)

    def jet_coord(self, j: int, sigma) -> JetCoordinate:
        if not 0 <= j < self.r:
            raise ValueError(f"fiber index {j} out of range")
        sigma = sigma if isinstance(sigma, MultiIndex) else MultiIndex(sigma)
        if len(sigma) != self.n:
            raise ValueError(f"multi-index {sigma} has wrong length for {self.n} base variables")
        return JetCoordinate(JET, j, sigma)

    def fiber_coord(self, j: int) -> JetCoordinate:
        return self.jet_coord(j, MultiIndex.zero(self.n))

    def param_coord(self, name: str) -> JetCoordinate:
        try:
            k = self.params.index(name)
        except ValueError:
            raise ValueError(f"unknown parameter {name!r}") from None
        return JetCoordinate(PARAM, k)

    def zero_index(self) -> MultiIndex:
        return MultiIndex.zero(self.n)

    def unit_index(self, i: int) -> MultiIndex:
        return MultiIndex.unit(self.n, i)

    def jet_coordinates_up_to(self, max_order: int) -> list[JetCoordinate]:
        """All p^j_sigma with |sigma| <= max_order, fibers outermost, sigma lex."""
        out = []
        for j in range(self.r):
            for sigma in indices_up_to(self.n, max_order):
                out.append(JetCoordinate(JET, j, sigma))
        return out

    def coord_name(self, v: JetCoordinate) -> str:
        if v.kind == PARAM:
            return self.params[v.index]
        if v.kind == BASE:
            return self.base[v.index]
        from .printing import jet_text

        return jet_text(self, v.index, v.sigma)

    # -- expression constructors ------------------------------------------

    def const(self, q: Rational) -> "PolyExpr":
        q = _as_coeff(q)
        return PolyExpr._make(self, {(): q} if q else {})

    def zero(self) -> "PolyExpr":
        return PolyExpr._make(self, {})

    def one(self) -> "PolyExpr":
        return self.const(1)

    def base_var(self, i: int) -> "PolyExpr":
        return PolyExpr._make(self, {((self.base_coord(i), 1),): 1})

    def jet(self, j: int, sigma) -> "PolyExpr":
        return PolyExpr._make(self, {((self.jet_coord(j, sigma), 1),): 1})

    def fiber_var(self, j: int) -> "PolyExpr":
        return self.jet(j, MultiIndex.zero(self.n))

    def param(self, name: str) -> "PolyExpr":
        return PolyExpr._make(self, {((self.param_coord(name), 1),): 1})

    def coord_var(self, v: JetCoordinate) -> "PolyExpr":
        _check_coord(self, v)
        return PolyExpr._make(self, {((v, 1),): 1})

    def to_json(self) -> dict:
        return {"base": list(self.base), "fiber": list(self.fiber), "params": list(self.params)}

    @classmethod
    def from_json(cls, data: Mapping) -> "Bundle":
        return cls(tuple(data["base"]), tuple(data["fiber"]), tuple(data.get("params", ())))


def indices_up_to(n: int, max_order: int) -> list[MultiIndex]:
    """All multi-indices of length n with order <= max_order, lex sorted."""
    out = [
        MultiIndex._unchecked(entries)
        for entries in product(range(max_order + 1), repeat=n)
        if sum(entries) <= max_order
    ]
    return out


def _check_coord(bundle: Bundle, v: JetCoordinate) -> None:
    if v.kind == PARAM:
        ok = 0 <= v.index < len(bundle.params) and len(v.sigma) == 0
    elif v.kind == BASE:
        ok = 0 <= v.index < bundle.n and len(v.sigma) == 0
    elif v.kind == JET:
        ok = 0 <= v.index < bundle.r and len(v.sigma) == bundle.n
    else:
        ok = False
    if not ok:
        raise ValueError(f"coordinate {v} does not belong to signature {bundle}")


# Monomials are tuples of (JetCoordinate, power) pairs, sorted by coordinate.

def _mono_mul(m1: tuple, m2: tuple) -> tuple:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    while i < len(m1) and j < len(m2):
        v1, k1 = m1[i]
        v2, k2 = m2[j]
        if v1 == v2:
            out.append((v1, k1 + k2))
            i += 1
            j += 1
        elif v1 < v2:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def _mono_insert(mono: tuple, v: JetCoordinate) -> tuple:
    """Multiply a monomial by a single coordinate."""
    for pos, (w, k) in enumerate(mono):
        if w == v:
            return mono[:pos] + ((v, k + 1),) + mono[pos + 1:]
        if v < w:
            return mono[:pos] + ((v, 1),) + mono[pos:]
    return mono + ((v, 1),)


def _mono_drop_power(mono: tuple, pos: int) -> tuple:
    v, k = mono[pos]
    if k == 1:
        return mono[:pos] + mono[pos + 1:]
    return mono[:pos] + ((v, k - 1),) + mono[pos + 1:]


def _acc(acc: dict, mono: tuple, coeff) -> None:
    cur = acc.get(mono)
    if cur is None:
        acc[mono] = coeff
    else:
        acc[mono] = cur + coeff


class PolyExpr:
    """A polynomial over the jet coordinates of one bundle, in canonical form.

    Values are immutable; all arithmetic returns new instances.  The usual
    operators work, with ints and Fractions coerced to constants.
    """

    __slots__ = ("bundle", "terms", "_jet_order")

    def __init__(self, bundle: Bundle, terms: Optional[Mapping] = None):
        cleaned: dict = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = _as_coeff(coeff if isinstance(coeff, (int, Fraction)) else Fraction(coeff))
                norm: dict = {}
                for v, k in mono:
                    if not isinstance(v, JetCoordinate):
                        raise TypeError(f"monomial variable {v!r} is not a JetCoordinate")
                    _check_coord(bundle, v)
                    if not isinstance(k, int) or k <= 0:
                        raise ValueError(f"monomial power must be a positive int, got {k!r}")
                    norm[v] = norm.get(v, 0) + k
                key = tuple(sorted(norm.items()))
                _acc(cleaned, key, coeff)
        for mono in [m for m, c in cleaned.items() if c == 0]:
            del cleaned[mono]
        self.bundle = bundle
        self.terms = cleaned
        self._jet_order = None

    @classmethod
    def _make(cls, bundle: Bundle, terms: dict) -> "PolyExpr":
        # Trusted constructor: keys are canonical monomials, values may be 0.
        self = object.__new__(cls)
        for mono in [m for m, c in terms.items() if c == 0]:
            del terms[mono]
        self.bundle = bundle
        self.terms = terms
        self._jet_order = None
        return self

    # -- structure ---------------------------------------------------------

    @property
    def jet_order(self) -> int:
        """Highest |sigma| among jet coordinates present; 0 if none."""
        if self._jet_order is None:
            order = 0
            for mono in self.terms:
                for v, _ in mono:
                    if v.kind == JET and v.sigma.order > order:
                        order = v.sigma.order
            self._jet_order = order
        return self._jet_order

    @property
    def degree(self) -> int:
        """Total degree of the largest monomial; 0 for constants and zero."""
        return max((sum(k for _, k in mono) for mono in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not mono for mono in self.terms)

    def constant_value(self) -> Rational:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get((), 0)

    def coordinates(self) -> set[JetCoordinate]:
        return {v for mono in self.terms for v, _ in mono}

    def jet_coordinates(self) -> set[JetCoordinate]:
        return {v for v in self.coordinates() if v.kind == JET}

    # -- ring operations ----------------------------------------------------

    def _coerce(self, other) -> Optional["PolyExpr"]:
        if isinstance(other, PolyExpr):
            if other.bundle != self.bundle:
                raise SignatureMismatchError(
                    f"cannot combine values over {self.bundle} and {other.bundle}"
                )
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.bundle.const(other)
        return None

    def __add__(self, other) -> "PolyExpr":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        acc = dict(self.terms)
        for mono, c in other.terms.items():
            _acc(acc, mono, c)
        return PolyExpr._make(self.bundle, acc)

    __radd__ = __add__

    def __neg__(self) -> "PolyExpr":
        return PolyExpr._make(self.bundle, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "PolyExpr":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        acc = dict(self.terms)
        for mono, c in other.terms.items():
            _acc(acc, mono, -c)
        return PolyExpr._make(self.bundle, acc)

    def __rsub__(self, other) -> "PolyExpr":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other) -> "PolyExpr":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        acc: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                _acc(acc, _mono_mul(m1, m2), c1 * c2)
        return PolyExpr._make(self.bundle, acc)

    __rmul__ = __mul__

    def scale(self, q: Rational) -> "PolyExpr":
        q = _as_coeff(q)
        if q == 0:
            return self.bundle.zero()
        return PolyExpr._make(self.bundle, {m: c * q for m, c in self.terms.items()})

    def __pow__(self, k: int) -> "PolyExpr":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        out = self.bundle.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyExpr):
            if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
                return self.is_constant() and self.constant_value() == other
            return NotImplemented
        return self.bundle == other.bundle and self.terms == other.terms

    __hash__ = None  # mutable-looking container; equality is structural

    # -- calculus -----------------------------------------------------------

    def partial(self, v: JetCoordinate) -> "PolyExpr":
        """Formal partial derivative with respect to a single coordinate."""
        _check_coord(self.bundle, v)
        acc: dict = {}
        for mono, c in self.terms.items():
            for pos, (w, k) in enumerate(mono):
                if w == v:
                    _acc(acc, _mono_drop_power(mono, pos), k * c)
                    break
        return PolyExpr._make(self.bundle, acc)

    def total_derivative(self, i: int) -> "PolyExpr":
        """Total derivative along base variable i:
        d/dx^i plus the shift p^j_sigma -> p^j_{sigma+1_i} through the chain rule.
        """
        if not 0 <= i < self.bundle.n:
            raise ValueError(f"base index {i} out of range")
        acc: dict = {}
        for mono, c in self.terms.items():
            for pos, (v, k) in enumerate(mono):
                if v.kind == PARAM:
                    continue
                if v.kind == BASE:
                    if v.index != i:
                        continue
                    _acc(acc, _mono_drop_power(mono, pos), k * c)
                else:
                    shifted = JetCoordinate(JET, v.index, v.sigma.bump(i))
                    _acc(acc, _mono_insert(_mono_drop_power(mono, pos), shifted), k * c)
        return PolyExpr._make(self.bundle, acc)

    def total_derivative_multi(self, sigma) -> "PolyExpr":
        """Iterated total derivative D_sigma; order of iteration is immaterial."""
        sigma = sigma if isinstance(sigma, MultiIndex) else MultiIndex(sigma)
        if len(sigma) != self.bundle.n:
            raise ValueError(f"multi-index {sigma} has wrong length")
        out = self
        for i, reps in enumerate(sigma):
            for _ in range(reps):
                out = out.total_derivative(i)
        return out

    def substitute(self, mapping: Mapping[JetCoordinate, "PolyExpr"]) -> "PolyExpr":
        """Replace coordinates by expressions; unmapped coordinates stay."""
        out = self.bundle.zero()
        for mono, c in self.terms.items():
            term = self.bundle.const(c)
            for v, k in mono:
                rep = mapping.get(v)
                if rep is None:
                    factor = self.bundle.coord_var(v)
                else:
                    factor = rep if isinstance(rep, PolyExpr) else self.bundle.const(rep)
                    if factor.bundle != self.bundle:
                        raise SignatureMismatchError("substitution value over a different signature")
                term = term * factor ** k
            out = out + term
        return out

    def evaluate(self, point: Mapping[JetCoordinate, Rational]) -> Rational:
        """Exact value at a full assignment of coordinates to rationals."""
        total = Fraction(0)
        for mono, c in self.terms.items():
            val = Fraction(c)
            for v, k in mono:
                if v not in point:
                    raise EvaluationError(f"coordinate {self.bundle.coord_name(v)} is not assigned")
                val *= Fraction(point[v]) ** k
            total += val
        return _as_coeff(total)

    def embed(self, target: Bundle) -> "PolyExpr":
        """Re-home onto a bundle with the same base/fiber names and a superset of parameters."""
        if target.base != self.bundle.base or target.fiber != self.bundle.fiber:
            raise SignatureMismatchError("embed requires identical base and fiber names")
        for name in self.bundle.params:
            if name not in target.params:
                raise SignatureMismatchError(f"target signature lacks parameter {name!r}")
        out: dict = {}
        for mono, c in self.terms.items():
            new = []
            for v, k in mono:
                if v.kind == PARAM:
                    v = target.param_coord(self.bundle.params[v.index])
                new.append((v, k))
            out[tuple(sorted(new))] = c
        return PolyExpr._make(target, out)

    # -- serialization and display -------------------------------------------

    def to_json(self) -> dict:
        from .printing import coord_token, display_order

        monos = []
        for mono in display_order(self.terms):
            coeff = self.terms[mono]
            monos.append(
                {
                    "coeff": str(Fraction(coeff)),
                    "vars": [{"var": coord_token(self.bundle, v), "pow": k} for v, k in mono],
                }
            )
        return {"monomials": monos}

    @classmethod
    def from_json(cls, data: Mapping, bundle: Bundle) -> "PolyExpr":
        from .printing import parse_coord_token

        acc: dict = {}
        for entry in data["monomials"]:
            coeff = _as_coeff(Fraction(entry["coeff"]))
            mono: dict = {}
            for var in entry.get("vars", ()):
                v = parse_coord_token(bundle, var["var"])
                mono[v] = mono.get(v, 0) + int(var["pow"])
            _acc(acc, tuple(sorted(mono.items())), coeff)
        return PolyExpr._make(bundle, acc)

    def __str__(self) -> str:
        from .printing import poly_text

        return poly_text(self)

    def __repr__(self) -> str:
        return f"PolyExpr({self})"


def random_expr(
    bundle: Bundle,
    seed: int,
    max_jet_order: int = 2,
    max_degree: int = 2,
    coeff_pool: Sequence[Rational] = (-2, -1, 1, 2),
    max_terms: int = 4,
) -> PolyExpr:
    """Deterministic random polynomial within the stated bounds.

    The same seed always yields the same expression; zero coefficients
    drawn from the pool simply thin the expression out.
    """
    if max_jet_order < 0 or max_degree < 0 or max_terms < 1 or not coeff_pool:
        raise ValueError("bounds must be positive and the coefficient pool non-empty")
    rng = random.Random(seed)
    pool: list[JetCoordinate] = []
    for k in range(len(bundle.params)):
        pool.append(JetCoordinate(PARAM, k))
    for i in range(bundle.n):
        pool.append(JetCoordinate(BASE, i))
    pool.extend(bundle.jet_coordinates_up_to(max_jet_order))
    acc: dict = {}
    for _ in range(rng.randint(1, max_terms)):
        coeff = _as_coeff(Fraction(rng.choice(list(coeff_pool))))
        if coeff == 0:
            continue
        deg = rng.randint(0, max_degree)
        mono: dict = {}
        for _ in range(deg):
            v = rng.choice(pool)
            mono[v] = mono.get(v, 0) + 1
        _acc(acc, tuple(sorted(mono.items())), coeff)
    return PolyExpr._make(bundle, acc)
