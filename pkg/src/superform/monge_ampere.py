"""Tropical polynomials and their Monge-Ampere measures.

A tropical polynomial is a finite max of rational affine forms
f(x) = max_i(<m_i, x> + c_i).  Its Monge-Ampere measure is atomic,
supported on the vertices of the linearity complex, with mass
n! times the lattice volume of the local gradient hull; the mixed
version is obtained by polarization.  A floating-point log-sum-exp
density provides the smooth cross-validation oracle.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial

import numpy as np

from .calibration import canonical_calibration, discordance
from .errors import (
    ArityMismatch,
    EmptyCell,
    NonPositiveEpsilon,
    UnboundedCell,
)
from .linalg import QZERO, frac, primitive_integer, rank, vec, vsub
from .polyhedra import (
    AffineForm,
    WeightedComplex,
    build_cell,
    cell_complex,
    hull_volume,
)


class TropicalPolynomial:
    """Finite max of affine forms; terms are (exponent vector, coefficient).

    Duplicate exponents are merged keeping the larger coefficient.
    """

    __slots__ = ("ambient_dim", "terms")

    def __init__(self, ambient_dim, terms):
        merged = {}
        for m, c in terms:
            m, c = vec(m), frac(c)
            if len(m) != ambient_dim:
                raise ValueError("exponent arity mismatch")
            if m not in merged or c > merged[m]:
                merged[m] = c
        if not merged:
            raise ValueError("a tropical polynomial needs at least one term")
        self.ambient_dim = ambient_dim
        self.terms = tuple(sorted(merged.items()))

    def __repr__(self):
        return "TropicalPolynomial(n=%d, terms=%d)" % (
            self.ambient_dim, len(self.terms))

    def __eq__(self, other):
        return (isinstance(other, TropicalPolynomial)
                and self.ambient_dim == other.ambient_dim
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ambient_dim, self.terms))

    def evaluate(self, x):
        return max(sum((a * b for a, b in zip(m, x)), QZERO) + c
                   for m, c in self.terms)

    def __add__(self, other):
        """Pointwise sum of the max functions (tropical product)."""
        if other.ambient_dim != self.ambient_dim:
            raise ArityMismatch("ambient dimensions differ")
        merged = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(a + b for a, b in zip(m1, m2))
                c = c1 + c2
                if m not in merged or c > merged[m]:
                    merged[m] = c
        return TropicalPolynomial(self.ambient_dim,
                                  tuple(merged.items()))

    def is_affine(self):
        return len(self.terms) == 1

    def translate(self, t):
        """f(. - t)."""
        t = vec(t)
        return TropicalPolynomial(
            self.ambient_dim,
            [(m, c - sum((a * b for a, b in zip(m, t)), QZERO))
             for m, c in self.terms])

    def scale_exponents(self, k):
        return TropicalPolynomial(
            self.ambient_dim,
            [(tuple(k * a for a in m), c) for m, c in self.terms])

    def add_affine(self, direction, offset):
        """f + (<direction, .> + offset) as functions."""
        d, o = vec(direction), frac(offset)
        return TropicalPolynomial(
            self.ambient_dim,
            [(tuple(a + b for a, b in zip(m, d)), c + o)
             for m, c in self.terms])

    def newton_points(self):
        return tuple(m for m, _ in self.terms)


def _region(f, i):
    """Closed domain where term i realizes the max."""
    m_i, c_i = f.terms[i]
    halfspaces = []
    for j, (m_j, c_j) in enumerate(f.terms):
        if j == i:
            continue
        halfspaces.append(AffineForm(vsub(m_i, m_j), c_i - c_j))
    if not halfspaces:
        # single term: whole space
        halfspaces = [AffineForm(tuple(QZERO for _ in range(f.ambient_dim)),
                                 QZERO)]
    return build_cell(halfspaces, f.ambient_dim)


def _full_regions(f):
    """(term index, region) for every term whose region is full-dimensional."""
    out = []
    for i in range(len(f.terms)):
        try:
            cell = _region(f, i)
        except EmptyCell:
            continue
        if cell.dim == f.ambient_dim:
            out.append((i, cell))
    return out


def prune_inessential(f):
    """Drop terms that never win on a full-dimensional set."""
    keep = [i for i, _ in _full_regions(f)]
    if not keep:
        # all regions are lower-dimensional ties; keep everything
        return f
    return TropicalPolynomial(f.ambient_dim, [f.terms[i] for i in keep])


def active_indices(f, x):
    """Indices of the terms achieving the max at x."""
    values = [sum((a * b for a, b in zip(m, x)), QZERO) + c
              for m, c in f.terms]
    top = max(values)
    return frozenset(i for i, v in enumerate(values) if v == top)


def linearity_complex(f):
    """Polyhedral complex of linearity domains with active term labels.

    Regions of inessential terms are pruned before subdividing; the
    active sets refer to the term list of the input polynomial.
    """
    pruned = prune_inessential(f)
    regions = [cell for _, cell in _full_regions(pruned)]
    if not regions:
        regions = [_region(f, 0)]
    cx = cell_complex(regions)
    labels = {}
    for i, cell in enumerate(cx.cells):
        labels[i] = active_indices(f, cell.relative_interior_point())
    return cx, labels


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite sum of weighted Dirac masses; atoms sorted by position."""

    atoms: tuple

    @staticmethod
    def make(pairs):
        merged = {}
        for point, mass in pairs:
            point, mass = vec(point), frac(mass)
            merged[point] = merged.get(point, QZERO) + mass
        atoms = tuple(sorted((p, m) for p, m in merged.items() if m != 0))
        return AtomicMeasure(atoms)

    def total_mass(self):
        return sum((m for _, m in self.atoms), QZERO)

    def mass_at(self, point):
        point = vec(point)
        for p, m in self.atoms:
            if p == point:
                return m
        return QZERO

    def scale(self, c):
        c = frac(c)
        return AtomicMeasure.make([(p, c * m) for p, m in self.atoms])

    def __add__(self, other):
        return AtomicMeasure.make(self.atoms + other.atoms)

    def is_positive(self):
        return all(m > 0 for _, m in self.atoms)

    def pair_with(self, poly):
        """Exact pairing sum of mass * poly(point)."""
        return sum((m * poly.evaluate(p) for p, m in self.atoms), QZERO)


def _gradient_hull_mass(f, idx):
    """n! times the lattice volume of the hull of the given gradients."""
    n = f.ambient_dim
    grads = [f.terms[i][0] for i in sorted(idx)]
    base = grads[0]
    if rank(tuple(vsub(g, base) for g in grads[1:])) < n:
        return QZERO
    return factorial(n) * hull_volume(grads, n)


def ma_measure(f):
    """Atomic Monge-Ampere measure of a tropical polynomial.

    Atoms sit at the vertices of the linearity complex whose active
    gradients affinely span the ambient space; each mass is n! times
    the lattice volume of the local gradient hull.
    """
    n = f.ambient_dim
    pruned = prune_inessential(f)
    vertices = set()
    for _, cell in _full_regions(pruned):
        vertices.update(cell.vertices)
    atoms = []
    for x in sorted(vertices):
        idx = active_indices(f, x)
        mass = _gradient_hull_mass(f, idx)
        if mass != 0:
            atoms.append((x, mass))
    return AtomicMeasure.make(atoms)


def mixed_ma(polynomials):
    """Mixed Monge-Ampere measure by polarization.

    (1/n!) sum over nonempty S of (-1)^{n-|S|} MA(sum of f_i, i in S);
    symmetric, and equal to ma_measure on the diagonal.
    """
    polynomials = list(polynomials)
    if not polynomials:
        raise ArityMismatch("mixed measure needs at least one polynomial")
    n = polynomials[0].ambient_dim
    if len(polynomials) != n:
        raise ArityMismatch("mixed measure needs exactly %d polynomials" % n)
    if any(f.ambient_dim != n for f in polynomials):
        raise ArityMismatch("ambient dimensions differ")
    total = AtomicMeasure(())
    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            f = polynomials[subset[0]]
            for i in subset[1:]:
                f = f + polynomials[i]
            piece = ma_measure(f).scale(Fraction((-1) ** (n - size), factorial(n)))
            total = total + piece
    return total


@dataclass(frozen=True)
class TropicalHypersurface:
    """Weighted corner locus together with its dual Newton edges."""

    weighted: WeightedComplex
    dual_edges: dict

    @property
    def complex(self):
        return self.weighted.complex

    def interior_codim1_faces(self):
        """Faces of >= 2 maximal cells, where balancing is required."""
        cx = self.weighted.complex
        n = self.weighted.dim
        out = []
        for i in cx.cells_of_dim(n - 1):
            if len(cx.parents_of(i)) >= 2:
                out.append(i)
        return tuple(out)

    def unbalanced_faces(self):
        if not self.weighted.complex.cells:
            return ()
        cal = canonical_calibration(self.weighted)
        bad = []
        for i in self.interior_codim1_faces():
            if not discordance(cal, i).is_zero():
                bad.append(i)
        return tuple(bad)

    def is_balanced(self):
        return not self.unbalanced_faces()


class _EmptyComplex:
    """Stand-in for the corner locus of an affine tropical polynomial."""

    cells = ()
    maximal_cells = ()
    face_lattice = ()
    dim = -1

    def __init__(self, ambient_dim):
        self.ambient_dim = ambient_dim

    def cells_of_dim(self, d):
        return ()

    def is_pure(self, n=None):
        return True


def corner_locus(f):
    """The weighted tropical hypersurface of f.

    Codimension-one cells of the linearity complex, each weighted by
    the lattice length of its dual Newton edge; balanced at every
    interior face.
    """
    n = f.ambient_dim
    pruned = prune_inessential(f)
    if pruned.is_affine():
        empty = _EmptyComplex(n)
        return TropicalHypersurface(WeightedComplex(empty, {}), {})
    regions = [cell for _, cell in _full_regions(pruned)]
    walls = {}
    for cell in regions:
        for facet in cell.facets():
            walls.setdefault(facet.signature, facet)
    cx = cell_complex(walls.values())
    weights = {}
    dual_edges = {}
    for i in cx.maximal_cells:
        cell = cx.cells[i]
        idx = sorted(active_indices(f, cell.relative_interior_point()))
        grads = [f.terms[j][0] for j in idx]
        direction = next(g for g in (vsub(g, grads[0]) for g in grads[1:])
                         if any(x != 0 for x in g))
        prim = primitive_integer(direction)
        unit = next((d / p for d, p in zip(direction, prim) if p != 0))
        heights = [sum((a * b for a, b in zip(g, prim)), QZERO) for g in grads]
        lo = min(range(len(grads)), key=lambda k: heights[k])
        hi = max(range(len(grads)), key=lambda k: heights[k])
        span = vsub(grads[hi], grads[lo])
        weight = next((d / p for d, p in zip(span, prim) if p != 0))
        weights[i] = weight
        dual_edges[i] = (grads[lo], grads[hi])
    return TropicalHypersurface(WeightedComplex(cx, weights), dual_edges)


# ---------------------------------------------------------------------------
# log-sum-exp smoothing oracle (floating point)

def _lse_weights(f, eps, points):
    """Softmax weights of the scaled log-sum-exp at an array of points."""
    exps = np.array([[float(a) for a in m] for m, _ in f.terms])
    offs = np.array([float(c) for _, c in f.terms])
    scores = points @ exps.T / eps + offs
    scores -= scores.max(axis=-1, keepdims=True)
    w = np.exp(scores)
    w /= w.sum(axis=-1, keepdims=True)
    return w, exps


def lse_density(f, eps, x):
    """n! det Hessian of the log-sum-exp smoothing of f at a point.

    The Hessian comes from the closed softmax form
    H = (sum w_i m_i m_i^T - g g^T) / eps with g = sum w_i m_i.
    """
    if eps <= 0:
        raise NonPositiveEpsilon("eps must be positive")
    n = f.ambient_dim
    pts = np.asarray([float(v) for v in x], dtype=float).reshape(1, n)
    w, exps = _lse_weights(f, eps, pts)
    g = w @ exps
    second = np.einsum("pi,ij,ik->pjk", w, exps, exps)
    hess = (second - np.einsum("pj,pk->pjk", g, g)) / eps
    return float(factorial(n) * np.linalg.det(hess)[0])


def lse_ma_quadrature(f, phi, eps, box, grid):
    """Midpoint tensor-grid approximation of int phi * lse_density.

    ``box`` is a bounded cell whose bounding box is the integration
    domain; the value converges to the atomic pairing sum of
    mass * phi(atom) as eps -> 0+ and the grid is refined.
    """
    if eps <= 0:
        raise NonPositiveEpsilon("eps must be positive")
    if grid < 2:
        raise ValueError("grid must be at least 2")
    if not box.is_bounded:
        raise UnboundedCell("quadrature needs a bounded box")
    n = f.ambient_dim
    lo = [min(float(v[i]) for v in box.vertices) for i in range(n)]
    hi = [max(float(v[i]) for v in box.vertices) for i in range(n)]
    axes = [lo[i] + (hi[i] - lo[i]) * (np.arange(grid) + 0.5) / grid
            for i in range(n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.reshape(-1) for m in mesh], axis=-1)
    w, exps = _lse_weights(f, eps, pts)
    g = w @ exps
    second = np.einsum("pi,ij,ik->pjk", w, exps, exps)
    hess = (second - np.einsum("pj,pk->pjk", g, g)) / eps
    dens = factorial(n) * np.linalg.det(hess)
    phivals = np.array([phi.evaluate_float(p) for p in pts]) \
        if not phi.is_constant() else float(phi.constant_value()) * np.ones(len(pts))
    volume_element = math.prod((hi[i] - lo[i]) / grid for i in range(n))
    return float(np.sum(dens * phivals) * volume_element)
