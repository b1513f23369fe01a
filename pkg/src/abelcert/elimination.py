"""Sylvester resultants of bivariate polynomials.

The determinant is evaluated by fraction-free (Bareiss) elimination over
Z[t] after clearing denominators column by column.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import flint

from .algebra import BiPoly, UniPoly
from .algebra.errors import AlgebraError


class DegenerateElimination(AlgebraError):
    """An input has degree zero in the variable being eliminated."""


@dataclass(frozen=True)
class SylvesterMatrix:
    """(m+n) x (m+n) matrix; column j < n holds p's coefficients shifted down j rows,
    column n + j holds q's coefficients shifted down j rows (leading coefficients first)."""

    entries: tuple[tuple[UniPoly, ...], ...]
    var: str

    @property
    def dimension(self) -> int:
        return len(self.entries)


def sylvester_matrix(p: BiPoly, q: BiPoly, eliminate: str) -> SylvesterMatrix:
    if p.vars != q.vars:
        raise ValueError(f"variable pairs differ: {p.vars} vs {q.vars}")
    survivor = p.vars[1 - p.vars.index(eliminate)]
    m, n = p.degree(eliminate), q.degree(eliminate)
    if m < 1 or n < 1:
        raise DegenerateElimination(f"degrees in {eliminate} are {m} and {n}; both must be positive")
    a = list(reversed(p.coeffs_in(eliminate)))  # a_0 leading
    b = list(reversed(q.coeffs_in(eliminate)))
    zero = UniPoly((), survivor)
    size = m + n
    rows = [[zero] * size for _ in range(size)]
    for j in range(n):
        for i, c in enumerate(a):
            rows[i + j][j] = c.with_var(survivor)
    for j in range(m):
        for i, c in enumerate(b):
            rows[i + j][n + j] = c.with_var(survivor)
    return SylvesterMatrix(tuple(tuple(r) for r in rows), survivor)


def _clear_columns(entries) -> tuple[list[list[flint.fmpz_poly]], flint.fmpz]:
    """Integer matrix and the product of column scalings applied."""
    size = len(entries)
    scale = flint.fmpz(1)
    out = [[None] * size for _ in range(size)]
    for j in range(size):
        lcm = flint.fmpz(1)
        for i in range(size):
            e = entries[i][j]
            if not e.is_zero():
                lcm = lcm.lcm(e.flint.denom())
        scale *= lcm
        for i in range(size):
            out[i][j] = flint.fmpz_poly((entries[i][j].flint * lcm).numer().coeffs()) \
                if not entries[i][j].is_zero() else flint.fmpz_poly([])
    return out, scale


def bareiss_determinant(M: SylvesterMatrix | list) -> UniPoly:
    """Fraction-free Gaussian elimination with row pivoting."""
    entries = M.entries if isinstance(M, SylvesterMatrix) else M
    var = M.var if isinstance(M, SylvesterMatrix) else _infer_var(entries)
    size = len(entries)
    if size == 0:
        return UniPoly.constant(1, var)
    a, scale = _clear_columns(entries)
    sign = 1
    prev = flint.fmpz_poly([1])
    for k in range(size - 1):
        if a[k][k].degree() < 0:
            pivot = next((i for i in range(k + 1, size) if a[i][k].degree() >= 0), None)
            if pivot is None:
                return UniPoly((), var)
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        akk = a[k][k]
        row_k = a[k]
        for i in range(k + 1, size):
            row_i = a[i]
            aik = row_i[k]
            if aik.degree() < 0:
                for j in range(k + 1, size):
                    if row_i[j].degree() >= 0:
                        row_i[j] = (akk * row_i[j]) / prev
            else:
                for j in range(k + 1, size):
                    val = akk * row_i[j] - aik * row_k[j]
                    row_i[j] = val / prev if val.degree() >= 0 else val
            row_i[k] = flint.fmpz_poly([])
        prev = akk
    det = a[size - 1][size - 1]
    if sign < 0:
        det = -det
    result = flint.fmpq_poly(det) / flint.fmpq(scale)
    return UniPoly.from_flint(result, var)


def cofactor_determinant(entries) -> UniPoly:
    """Leibniz expansion; an independent oracle for small matrices."""
    var = entries.var if isinstance(entries, SylvesterMatrix) else _infer_var(entries)
    rows = entries.entries if isinstance(entries, SylvesterMatrix) else entries
    size = len(rows)
    total = UniPoly((), var)
    for perm in permutations(range(size)):
        inv = sum(1 for i in range(size) for j in range(i + 1, size) if perm[i] > perm[j])
        term = UniPoly.constant(1, var)
        for i, j in enumerate(perm):
            term = term * rows[i][j].with_var(var)
            if term.is_zero():
                break
        total = total - term if inv % 2 else total + term
    return total


def _infer_var(entries) -> str:
    for row in entries:
        for e in row:
            if e.degree() > 0:
                return e.var
    return entries[0][0].var if entries and entries[0] else "x"


resultant_det_strategy = bareiss_determinant


def resultant(p: BiPoly, q: BiPoly, eliminate: str, strategy: str = "bareiss") -> UniPoly:
    """Res(p, q, eliminate) as a polynomial in the surviving variable."""
    if strategy == "bareiss":
        return bareiss_determinant(sylvester_matrix(p, q, eliminate))
    if strategy == "reduced":
        return _reduced_resultant(p, q, eliminate)
    raise ValueError(f"unknown strategy {strategy!r}")


def _reduced_resultant(p: BiPoly, q: BiPoly, eliminate: str) -> UniPoly:
    """Alternate backend: replace the larger operand by its remainder modulo the
    smaller one (in the eliminated variable, over Q(survivor)), then take a
    Sylvester determinant of the much smaller pair.

    Uses Res(A, B) = lc(B)^(deg A - deg R) * Res(R, B) * (-1)^(...)
    with A = S*B + R computed by pseudo-division: lc(B)^delta * A = S*B + R,
    hence Res(lc^delta A, B) = lc^(delta*deg B) Res(A, B).
    """
    m, n = p.degree(eliminate), q.degree(eliminate)
    if m < 1 or n < 1:
        raise DegenerateElimination(f"degrees in {eliminate} are {m} and {n}; both must be positive")
    if m < n:
        r = _reduced_resultant(q, p, eliminate)
        return r * (-1) ** (m * n)
    survivor = p.vars[1 - p.vars.index(eliminate)]
    a = list(reversed(p.coeffs_in(eliminate)))
    b = list(reversed(q.coeffs_in(eliminate)))
    lcb = b[0].with_var(survivor)
    # pseudo-remainder: lcb^delta * A mod B, delta = m - n + 1
    rem = [c.with_var(survivor) for c in a]
    bb = [c.with_var(survivor) for c in b]
    delta = m - n + 1
    for _ in range(delta):
        if len(rem) < len(bb):
            rem = [c * lcb for c in rem]
            continue
        lead = rem[0]
        rem = [rem[i] * lcb - (lead * bb[i] if i < len(bb) else 0) for i in range(len(rem))][1:]
    # strip leading zeros of the remainder
    while rem and rem[0].is_zero():
        rem = rem[1:]
    if not rem:
        return UniPoly((), survivor)
    deg_r = len(rem) - 1
    # Res(lcb^delta A, B) = lcb^(delta*n) Res(A,B)
    # Res(lcb^delta A, B) = (-1)^(m n) Res(B, lcb^delta A) = (-1)^(m n) lc(B)^(m - deg_r) Res(B, R)
    if deg_r == 0:
        res_br = rem[0] ** n
    else:
        rb = BiPoly.from_coeffs_in(eliminate, [c.with_var(survivor) for c in reversed(rem)], p.vars)
        res_br = bareiss_determinant(sylvester_matrix(q, rb, eliminate))
    numer = res_br * lcb ** (m - deg_r) * (-1) ** (m * n)
    return numer.exact_div(lcb ** (delta * n))


def content_normalize(r: UniPoly) -> tuple[UniPoly, flint.fmpq]:
    """(primitive part with positive leading coefficient, the signed content removed)."""
    if r.is_zero():
        return r, flint.fmpq(0)
    c = r.content()
    if r.lc() < 0:
        c = -c
    return r / c, c


def common_factor_check(p: BiPoly, q: BiPoly, eliminate: str | None = None) -> bool:
    """True iff the resultant vanishes identically."""
    eliminate = eliminate or p.vars[1]
    try:
        return resultant(p, q, eliminate).is_zero()
    except DegenerateElimination:
        return not p.gcd(q).is_constant()
