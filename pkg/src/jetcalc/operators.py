"""Matrix total-derivative operators and their algebra.

A CDiffOperator is a rows-by-cols matrix whose (i, j) entry is a finite
sum of coefficient * D_sigma terms, the coefficients being jet-space
polynomials.  Equality is decided on the canonical coefficient maps: the
iterated total derivatives D_sigma are independent over the coefficient
ring, so two operators agree as maps iff their coefficient maps agree.
Composition expands eagerly through the generalized Leibniz rule

    D_sigma (f . ) = sum over kappa <= sigma of
                     binom_product(sigma, kappa) * D_kappa(f) * D_{sigma-kappa}

so every result is again in canonical form and zero-testable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional

from .expressions import Bundle, PolyExpr, Rational, SignatureMismatchError
from .multiindex import MultiIndex, binom_product, sub_indices
from .vectorops import VectorOperator


class ShapeMismatchError(ValueError):
    """Operator shapes are incompatible for the requested operation."""


def _decrement(sigma: MultiIndex, i: int) -> MultiIndex:
    return MultiIndex._unchecked(tuple(e - 1 if k == i else e for k, e in enumerate(sigma)))


def _chain_derivative(e: PolyExpr, sigma: MultiIndex, memo: dict) -> PolyExpr:
    """D_sigma(e) computed through memoized single-step derivatives."""
    got = memo.get(sigma)
    if got is not None:
        return got
    if sigma.order == 0:
        memo[sigma] = e
        return e
    i = next(k for k, v in enumerate(sigma) if v)
    out = _chain_derivative(e, _decrement(sigma, i), memo).total_derivative(i)
    memo[sigma] = out
    return out


class CDiffOperator:
    __slots__ = ("bundle", "rows", "cols", "_entries")

    def __init__(self, bundle: Bundle, rows: int, cols: int, entries: Optional[Mapping] = None):
        if rows < 1 or cols < 1:
            raise ValueError("operator shape must be at least 1x1")
        cleaned: dict = {}
        if entries:
            for (i, j), terms in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise ValueError(f"entry ({i},{j}) outside shape {rows}x{cols}")
                cell: dict = {}
                for sigma, coeff in terms.items():
                    sigma = sigma if isinstance(sigma, MultiIndex) else MultiIndex(sigma)
                    if len(sigma) != bundle.n:
                        raise ValueError(f"multi-index {sigma} has wrong length")
                    if not isinstance(coeff, PolyExpr):
                        coeff = bundle.const(coeff)
                    if coeff.bundle != bundle:
                        raise SignatureMismatchError("coefficient over a different signature")
                    if coeff:
                        prev = cell.get(sigma)
                        cell[sigma] = coeff if prev is None else prev + coeff
                cell = {s: c for s, c in cell.items() if c}
                if cell:
                    cleaned[(i, j)] = cell
        self.bundle = bundle
        self.rows = rows
        self.cols = cols
        self._entries = cleaned

    @classmethod
    def _make(cls, bundle: Bundle, rows: int, cols: int, entries: dict) -> "CDiffOperator":
        # Trusted constructor; prunes zeros but skips validation.
        self = object.__new__(cls)
        cleaned = {}
        for key, cell in entries.items():
            cell = {s: c for s, c in cell.items() if c}
            if cell:
                cleaned[key] = cell
        self.bundle = bundle
        self.rows = rows
        self.cols = cols
        self._entries = cleaned
        return self

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, bundle: Bundle, rows: Optional[int] = None, cols: Optional[int] = None) -> "CDiffOperator":
        rows = bundle.r if rows is None else rows
        cols = rows if cols is None else cols
        return cls._make(bundle, rows, cols, {})

    @classmethod
    def identity(cls, bundle: Bundle, size: Optional[int] = None) -> "CDiffOperator":
        size = bundle.r if size is None else size
        zero = MultiIndex.zero(bundle.n)
        return cls._make(bundle, size, size, {(i, i): {zero: bundle.one()} for i in range(size)})

    @classmethod
    def single(cls, bundle: Bundle, rows: int, cols: int, i: int, j: int, sigma, coeff) -> "CDiffOperator":
        """One term coeff * D_sigma in entry (i, j)."""
        return cls(bundle, rows, cols, {(i, j): {sigma: coeff}})

    @classmethod
    def total_derivative(cls, bundle: Bundle, sigma, size: int = 1) -> "CDiffOperator":
        """D_sigma times the identity of the given size."""
        sigma = sigma if isinstance(sigma, MultiIndex) else MultiIndex(sigma)
        one = bundle.one()
        return cls(bundle, size, size, {(i, i): {sigma: one} for i in range(size)})

    @classmethod
    def multiplication(cls, e: PolyExpr, size: int = 1) -> "CDiffOperator":
        """The zero-order operator e times the identity."""
        zero = MultiIndex.zero(e.bundle.n)
        return cls(e.bundle, size, size, {(i, i): {zero: e} for i in range(size)})

    # -- structure -------------------------------------------------------------

    def entry(self, i: int, j: int) -> dict:
        """Coefficient map of entry (i, j); treat as read-only."""
        return self._entries.get((i, j), {})

    @property
    def order(self) -> int:
        """Max |sigma| over stored terms; 0 for the zero operator."""
        return max((s.order for cell in self._entries.values() for s in cell), default=0)

    def is_zero(self) -> bool:
        return not self._entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, CDiffOperator):
            return NotImplemented
        return (
            self.bundle == other.bundle
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self._entries == other._entries
        )

    __hash__ = None

    def _check_same_shape(self, other: "CDiffOperator") -> None:
        if not isinstance(other, CDiffOperator):
            raise TypeError(f"expected CDiffOperator, got {type(other).__name__}")
        if other.bundle != self.bundle:
            raise SignatureMismatchError("operators carry different signatures")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatchError(
                f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )

    # -- linear structure --------------------------------------------------------

    def __add__(self, other) -> "CDiffOperator":
        self._check_same_shape(other)
        acc = {key: dict(cell) for key, cell in self._entries.items()}
        for key, cell in other._entries.items():
            mine = acc.setdefault(key, {})
            for sigma, coeff in cell.items():
                prev = mine.get(sigma)
                mine[sigma] = coeff if prev is None else prev + coeff
        return CDiffOperator._make(self.bundle, self.rows, self.cols, acc)

    def __sub__(self, other) -> "CDiffOperator":
        return self + (-other)

    def __neg__(self) -> "CDiffOperator":
        acc = {
            key: {sigma: -coeff for sigma, coeff in cell.items()}
            for key, cell in self._entries.items()
        }
        return CDiffOperator._make(self.bundle, self.rows, self.cols, acc)

    def scale(self, q: Rational) -> "CDiffOperator":
        acc = {
            key: {sigma: coeff.scale(q) for sigma, coeff in cell.items()}
            for key, cell in self._entries.items()
        }
        return CDiffOperator._make(self.bundle, self.rows, self.cols, acc)

    def __rmul__(self, q) -> "CDiffOperator":
        if isinstance(q, (int, Fraction)) and not isinstance(q, bool):
            return self.scale(q)
        return NotImplemented

    # -- action and composition -----------------------------------------------------

    def apply(self, g: VectorOperator) -> VectorOperator:
        """Act on a vector operator: (Theta g)_i = sum a^{ij}_sigma D_sigma(g_j)."""
        if g.bundle != self.bundle:
            raise SignatureMismatchError("operand carries a different signature")
        if g.rank != self.cols:
            raise ShapeMismatchError(f"operator has {self.cols} columns, operand rank {g.rank}")
        memos = [dict() for _ in range(self.cols)]
        comps = [self.bundle.zero() for _ in range(self.rows)]
        for (i, j), cell in self._entries.items():
            for sigma, coeff in cell.items():
                comps[i] = comps[i] + coeff * _chain_derivative(g[j], sigma, memos[j])
        return VectorOperator(comps)

    def compose(self, other: "CDiffOperator") -> "CDiffOperator":
        """Operator product self after other, expanded to canonical form."""
        if not isinstance(other, CDiffOperator):
            raise TypeError(f"expected CDiffOperator, got {type(other).__name__}")
        if other.bundle != self.bundle:
            raise SignatureMismatchError("operators carry different signatures")
        if self.cols != other.rows:
            raise ShapeMismatchError(
                f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}"
            )
        acc: dict = {}
        for (i, j), left_cell in self._entries.items():
            for (j2, l), right_cell in other._entries.items():
                if j2 != j:
                    continue
                out_cell = acc.setdefault((i, l), {})
                for tau, b in right_cell.items():
                    memo: dict = {}
                    for sigma, a in left_cell.items():
                        for kappa in sub_indices(sigma):
                            db = _chain_derivative(b, kappa, memo)
                            if not db:
                                continue
                            mult = binom_product(sigma, kappa)
                            term = a * db if mult == 1 else (a * db).scale(mult)
                            key = sigma.checked_sub(kappa) + tau
                            prev = out_cell.get(key)
                            out_cell[key] = term if prev is None else prev + term
        return CDiffOperator._make(self.bundle, self.rows, other.cols, acc)

    def __mul__(self, other):
        if isinstance(other, CDiffOperator):
            return self.compose(other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def commutator(self, other: "CDiffOperator") -> "CDiffOperator":
        """[self, other] = self other - other self; both must be square and equal-shaped."""
        self._check_same_shape(other)
        if self.rows != self.cols:
            raise ShapeMismatchError("commutator needs square operators")
        return self.compose(other) - other.compose(self)

    # -- serialization and display ------------------------------------------------------

    def to_json(self) -> dict:
        entries = []
        for (i, j) in sorted(self._entries):
            cell = self._entries[(i, j)]
            entries.append(
                {
                    "i": i + 1,
                    "j": j + 1,
                    "terms": [
                        {"sigma": list(sigma), "coeff": cell[sigma].to_json()}
                        for sigma in sorted(cell, key=lambda s: (s.order, s), reverse=True)
                    ],
                }
            )
        return {
            "shape": [self.rows, self.cols],
            "signature": self.bundle.to_json(),
            "entries": entries,
        }

    @classmethod
    def from_json(cls, data: Mapping, bundle: Optional[Bundle] = None) -> "CDiffOperator":
        if bundle is None:
            bundle = Bundle.from_json(data["signature"])
        rows, cols = data["shape"]
        entries: dict = {}
        for rec in data.get("entries", ()):
            cell = entries.setdefault((rec["i"] - 1, rec["j"] - 1), {})
            for term in rec["terms"]:
                sigma = MultiIndex(tuple(term["sigma"]))
                coeff = PolyExpr.from_json(term["coeff"], bundle)
                cell[sigma] = cell.get(sigma, bundle.zero()) + coeff
        return cls(bundle, rows, cols, entries)

    def __str__(self) -> str:
        from .printing import cdiff_text

        return cdiff_text(self)

    def __repr__(self) -> str:
        return f"CDiffOperator({self})"
