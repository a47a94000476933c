"""Text, LaTeX and JSON-token printers with stable, pinned ordering.

Terms print highest total degree first, ties broken by the canonical
coordinate order (parameters, base variables, jet coordinates).  Jet
coordinates use the suffix notation u_xxy whenever every base variable
name is a single letter, and the explicit form u[2,1] otherwise; both
forms are accepted back by the DSL parser.
"""

from __future__ import annotations

from fractions import Fraction

from .multiindex import MultiIndex


def _coord_display_key(v):
    return (v.kind, v.index, v.sigma.order, v.sigma)


def display_order(terms) -> list:
    """Monomials in print order: total degree descending, then by coordinate
    rank with higher derivative order first, so derivatives lead and
    constants trail."""

    def key(mono):
        return (
            sum(k for _, k in mono),
            tuple((_coord_display_key(v), k) for v, k in mono),
        )

    return sorted(terms, key=key, reverse=True)


def _suffix_ok(bundle) -> bool:
    return all(len(name) == 1 for name in bundle.base)


def jet_text(bundle, j: int, sigma: MultiIndex) -> str:
    name = bundle.fiber[j]
    if sigma.order == 0:
        return name
    if _suffix_ok(bundle):
        return name + "_" + "".join(bundle.base[i] * e for i, e in enumerate(sigma))
    return name + "[" + ",".join(str(e) for e in sigma) + "]"


def multiindex_text(sigma: MultiIndex) -> str:
    return "(" + ",".join(str(e) for e in sigma) + ")"


def total_derivative_text(bundle, sigma: MultiIndex) -> str:
    if _suffix_ok(bundle):
        return "D_" + "".join(bundle.base[i] * e for i, e in enumerate(sigma))
    return "D[" + ",".join(str(e) for e in sigma) + "]"


def coord_token(bundle, v) -> str:
    """Positional token used in JSON documents."""
    from .expressions import BASE, PARAM

    if v.kind == PARAM:
        return bundle.params[v.index]
    if v.kind == BASE:
        return f"x[{v.index + 1}]"
    return f"p[{v.index + 1}]^(" + ",".join(str(e) for e in v.sigma) + ")"


def parse_coord_token(bundle, token: str):
    """Inverse of coord_token."""

    if token.startswith("x[") and token.endswith("]"):
        i = int(token[2:-1]) - 1
        return bundle.base_coord(i)
    if token.startswith("p[") and "]^(" in token and token.endswith(")"):
        head, tail = token.split("]^(", 1)
        j = int(head[2:]) - 1
        body = tail[:-1]
        entries = tuple(int(s) for s in body.split(",")) if body else ()
        return bundle.jet_coord(j, MultiIndex(entries))
    if token in bundle.params:
        return bundle.param_coord(token)
    raise ValueError(f"unrecognized coordinate token {token!r}")


def _coeff_text(q) -> str:
    return str(Fraction(q))


def _term_pieces(bundle, mono: tuple, coeff):
    """(sign, body) for one monomial term."""
    neg = coeff < 0
    mag = -coeff if neg else coeff
    parts = []
    if not mono or mag != 1:
        parts.append(_coeff_text(mag))
    for v, k in mono:
        name = bundle.coord_name(v)
        parts.append(name if k == 1 else f"{name}^{k}")
    return neg, "*".join(parts)


def poly_text(e) -> str:
    if e.is_zero():
        return "0"
    bundle = e.bundle
    chunks = []
    for mono in display_order(e.terms):
        neg, body = _term_pieces(bundle, mono, e.terms[mono])
        if not chunks:
            chunks.append("-" + body if neg else body)
        else:
            chunks.append((" - " if neg else " + ") + body)
    return "".join(chunks)


def vector_text(v) -> str:
    return "[" + ", ".join(poly_text(c) for c in v.components) + "]"


def _cdiff_entry_text(bundle, terms: dict) -> str:
    if not terms:
        return "0"
    chunks = []
    for sigma in sorted(terms, key=lambda s: (s.order, s), reverse=True):
        coeff = terms[sigma]
        dword = total_derivative_text(bundle, sigma) if sigma.order else None
        if len(coeff.terms) == 1:
            ((mono, c),) = coeff.terms.items()
            neg, body = _term_pieces(bundle, mono, c)
            if dword is not None:
                body = dword if (body == "1") else body + "*" + dword
        else:
            neg, body = False, "(" + poly_text(coeff) + ")"
            if dword is not None:
                body += "*" + dword
        if not chunks:
            chunks.append("-" + body if neg else body)
        else:
            chunks.append((" - " if neg else " + ") + body)
    return "".join(chunks)


def cdiff_text(op) -> str:
    if op.rows == 1 and op.cols == 1:
        return _cdiff_entry_text(op.bundle, op.entry(0, 0))
    rows = []
    for i in range(op.rows):
        cells = [_cdiff_entry_text(op.bundle, op.entry(i, j)) for j in range(op.cols)]
        rows.append("[" + ", ".join(cells) + "]")
    return "[" + ", ".join(rows) + "]"


# -- LaTeX ------------------------------------------------------------------


def _coeff_latex(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    sign = "-" if q < 0 else ""
    return sign + r"\tfrac{%d}{%d}" % (abs(q.numerator), q.denominator)


def jet_latex(bundle, j: int, sigma: MultiIndex) -> str:
    name = bundle.fiber[j]
    if sigma.order == 0:
        return name
    if _suffix_ok(bundle):
        return name + "_{" + "".join(bundle.base[i] * e for i, e in enumerate(sigma)) + "}"
    return name + "_{(" + ",".join(str(e) for e in sigma) + ")}"


def coord_latex(bundle, v) -> str:
    from .expressions import JET, PARAM

    if v.kind == JET:
        return jet_latex(bundle, v.index, v.sigma)
    name = bundle.params[v.index] if v.kind == PARAM else bundle.base[v.index]
    return name if len(name) == 1 else r"\mathit{%s}" % name


def _term_latex(bundle, mono: tuple, coeff):
    neg = coeff < 0
    mag = -coeff if neg else coeff
    parts = []
    if not mono or mag != 1:
        parts.append(_coeff_latex(mag))
    for v, k in mono:
        name = coord_latex(bundle, v)
        parts.append(name if k == 1 else name + "^{%d}" % k)
    return neg, r"\,".join(parts)


def poly_latex(e) -> str:
    if e.is_zero():
        return "0"
    chunks = []
    for mono in display_order(e.terms):
        neg, body = _term_latex(e.bundle, mono, e.terms[mono])
        if not chunks:
            chunks.append("-" + body if neg else body)
        else:
            chunks.append((" - " if neg else " + ") + body)
    return "".join(chunks)


def vector_latex(v) -> str:
    return r"\begin{pmatrix}" + r" \\ ".join(poly_latex(c) for c in v.components) + r"\end{pmatrix}"


def total_derivative_latex(bundle, sigma: MultiIndex) -> str:
    if _suffix_ok(bundle):
        return r"\mathcal{D}_{" + "".join(bundle.base[i] * e for i, e in enumerate(sigma)) + "}"
    return r"\mathcal{D}_{(" + ",".join(str(e) for e in sigma) + ")}"


def _cdiff_entry_latex(bundle, terms: dict) -> str:
    if not terms:
        return "0"
    chunks = []
    for sigma in sorted(terms, key=lambda s: (s.order, s), reverse=True):
        coeff = terms[sigma]
        dword = total_derivative_latex(bundle, sigma) if sigma.order else None
        if len(coeff.terms) == 1:
            ((mono, c),) = coeff.terms.items()
            neg, body = _term_latex(bundle, mono, c)
            if dword is not None:
                body = dword if body == "1" else body + r"\," + dword
        else:
            neg, body = False, r"\left(" + poly_latex(coeff) + r"\right)"
            if dword is not None:
                body += r"\," + dword
        if not chunks:
            chunks.append("-" + body if neg else body)
        else:
            chunks.append((" - " if neg else " + ") + body)
    return "".join(chunks)


def cdiff_latex(op) -> str:
    if op.rows == 1 and op.cols == 1:
        return _cdiff_entry_latex(op.bundle, op.entry(0, 0))
    rows = []
    for i in range(op.rows):
        rows.append(" & ".join(_cdiff_entry_latex(op.bundle, op.entry(i, j)) for j in range(op.cols)))
    return r"\begin{pmatrix}" + r" \\ ".join(rows) + r"\end{pmatrix}"


def latex(obj) -> str:
    """LaTeX form of a PolyExpr, VectorOperator or CDiffOperator."""
    from .expressions import PolyExpr
    from .operators import CDiffOperator
    from .vectorops import VectorOperator

    if isinstance(obj, PolyExpr):
        return poly_latex(obj)
    if isinstance(obj, VectorOperator):
        return vector_latex(obj)
    if isinstance(obj, CDiffOperator):
        return cdiff_latex(obj)
    raise TypeError(f"cannot render {type(obj).__name__} as LaTeX")
