"""Exact integration of top-degree and boundary forms on calibrated complexes.

The polynomial-over-simplex kernel triangulates each bounded cell, maps
every simplex affinely onto the standard simplex and integrates
monomials there in closed form, so every integral of a polynomial form
is an exact rational number.
"""

from dataclasses import dataclass
from math import factorial

from .calibration import _face_contributions
from .errors import BidegreeMismatch, NotSymmetric, UnboundedCell
from .forms import (
    Superform,
    contract_dsecond,
    d_prime,
    d_prime_d_second,
    d_second,
    interleave_sign,
    is_symmetric,
    span_parametrization,
    pullback,
    wedge,
)
from .linalg import QZERO, det, vsub
from .polyhedra import triangulate_cell


@dataclass(frozen=True)
class IntegralResult:
    """Total value together with the per-cell breakdown."""

    value: object
    per_cell: dict

    def __post_init__(self):
        assert self.value == sum(self.per_cell.values(), QZERO)


def integrate_monomials_over_simplex(poly, tvertices):
    """Exact integral of a polynomial over a simplex given in coordinates.

    Uses the Dirichlet formula int_simplex t^a dt = prod a_i! / (d+sum a_i)!.
    """
    d = len(tvertices) - 1
    if d == 0:
        return poly.evaluate(tvertices[0])
    v0 = tvertices[0]
    matrix = [[tvertices[j + 1][i] - v0[i] for j in range(d)] for i in range(d)]
    jac = abs(det(tuple(tuple(r) for r in matrix)))
    if jac == 0:
        return QZERO
    comp = poly.compose_affine(v0, matrix)
    total = QZERO
    for mono, c in comp.terms.items():
        num = 1
        for e in mono:
            num *= factorial(e)
        total += c * num / factorial(d + sum(mono))
    return jac * total


def integrate_polynomial_over_cell(poly, cell):
    """Exact integral of a polynomial in span coordinates over a bounded cell."""
    if not cell.is_bounded:
        raise UnboundedCell("integration requires bounded cells")
    total = QZERO
    for simplex in triangulate_cell(cell):
        tverts = tuple(cell.to_span_coords(v) for v in simplex)
        total += integrate_monomials_over_simplex(poly, tverts)
    return total


def integrate_top(form, cal):
    """Integral of an (n,n)-form against a calibration, cell by cell.

    Cells carrying the zero vector-volume contribute 0 without being
    touched; all others must be bounded.
    """
    n = cal.n
    if form.bidegree != (n, n):
        raise BidegreeMismatch("expected an (%d,%d)-form" % (n, n))
    cx = cal.complex
    sign = interleave_sign(n)
    per_cell = {}
    for i, vv in sorted(cal.assignment.items()):
        if vv.is_zero():
            per_cell[i] = QZERO
            continue
        cell = cx.cells[i]
        if not cell.is_bounded:
            raise UnboundedCell("cannot integrate over an unbounded cell")
        rep = Superform(form.ambient_dim, n, n, form.representative(i))
        restricted = pullback(span_parametrization(cell), rep)
        full = tuple(range(n))
        poly = restricted.terms.get((full, full))
        if poly is None:
            per_cell[i] = QZERO
            continue
        a = vv.span_coefficient()
        per_cell[i] = a * sign * integrate_polynomial_over_cell(poly, cell)
    return IntegralResult(sum(per_cell.values(), QZERO), per_cell)


def integrate_boundary(form, cal):
    """Boundary integral of an (n-1,n)-form against the calibration's
    boundary data.

    The breakdown is keyed by codimension-one cell.  Each adjacent
    maximal cell pairs its own representative with its oriented
    multivector, so for global forms harmonious faces contribute 0.
    """
    n = cal.n
    if form.bidegree != (n - 1, n):
        raise BidegreeMismatch("expected an (%d,%d)-form" % (n - 1, n))
    cx = cal.complex
    per_face = {}
    for fi in cx.cells_of_dim(n - 1):
        face = cx.cells[fi]
        contributions = _face_contributions(cal, fi)
        if form.is_global():
            total_mv = None
            for _, mv in contributions:
                total_mv = mv if total_mv is None else tuple(
                    a + b for a, b in zip(total_mv, mv))
            if total_mv is None or all(x == 0 for x in total_mv):
                per_face[fi] = QZERO
                continue
            pieces = [(None, total_mv)]
        else:
            pieces = contributions
        acc = QZERO
        for ci, mv in pieces:
            if all(x == 0 for x in mv):
                continue
            if not face.is_bounded:
                raise UnboundedCell("cannot integrate over an unbounded face")
            terms = form.terms if ci is None else form.representative(ci)
            classical = contract_dsecond(terms, form.ambient_dim, n, mv)
            if not classical:
                continue
            as_form = Superform(form.ambient_dim, n - 1, 0,
                                {(idx, ()): poly for idx, poly in classical.items()})
            restricted = pullback(span_parametrization(face), as_form)
            poly = restricted.terms.get((tuple(range(n - 1)), ()))
            if poly is None:
                continue
            acc += integrate_polynomial_over_cell(poly, face)
        per_face[fi] = acc
    return IntegralResult(sum(per_face.values(), QZERO), per_face)


def stokes_residual(form, cal):
    """integral of d'(form) minus the boundary integral of form; always 0."""
    n = cal.n
    if form.bidegree != (n - 1, n):
        raise BidegreeMismatch("Stokes needs an (%d,%d)-form" % (n - 1, n))
    top = integrate_top(d_prime(form), cal)
    boundary = integrate_boundary(form, cal)
    return top.value - boundary.value


def green_residual(alpha, beta, cal):
    """Green identity residual for symmetric forms; always 0.

    alpha and beta are symmetric of types (p,p) and (q,q) with
    p + q = n - 1.
    """
    n = cal.n
    if not is_symmetric(alpha) or not is_symmetric(beta):
        raise NotSymmetric("Green's formula needs symmetric forms")
    if alpha.p + beta.p != n - 1:
        raise BidegreeMismatch("bidegrees must satisfy p + q = n - 1")
    interior = wedge(alpha, d_prime_d_second(beta)) \
        - wedge(d_prime_d_second(alpha), beta)
    boundary = wedge(alpha, d_second(beta)) - wedge(d_second(alpha), beta)
    return integrate_top(interior, cal).value \
        - integrate_boundary(boundary, cal).value
