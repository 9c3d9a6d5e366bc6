"""Exact rational polyhedral geometry.

Cells are non-empty intersections of closed affine half-spaces in Q^r,
kept in both representations: the defining half-spaces and the computed
vertices/recession rays.  All computations are exact; sizes are meant
for desk scale (ambient dimension <= 4, a few dozen half-spaces).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import EmptyCell, NotADecomposition, SuperformError, UnboundedCell
from .linalg import (
    Q,
    QONE,
    QZERO,
    det,
    dot,
    frac,
    inverse,
    is_zero_vec,
    lattice_basis_of_span,
    nullspace,
    primitive_integer,
    rank,
    rref,
    solve,
    vec,
    vsub,
)


@dataclass(frozen=True)
class AffineForm:
    """Affine functional <direction, x> + offset; as a constraint it means >= 0."""

    direction: tuple
    offset: Fraction

    @staticmethod
    def make(direction, offset):
        return AffineForm(vec(direction), frac(offset))

    def value(self, x):
        return dot(self.direction, x) + self.offset

    def negated(self):
        return AffineForm(tuple(-a for a in self.direction), -self.offset)

    def primitive(self):
        """Scale so that (direction, offset) is a primitive integer vector."""
        row = self.direction + (self.offset,)
        if is_zero_vec(row):
            return self
        prim = primitive_integer(row)
        # primitive_integer keeps the ray direction, so the constraint set is unchanged
        return AffineForm(tuple(Q(a) for a in prim[:-1]), Q(prim[-1]))


# ---------------------------------------------------------------------------
# double description

def dd_cone(rows, dim):
    """Extreme rays and lineality of the cone {y in Q^dim : r.y >= 0 for all r}.

    Returns (lineality_basis, rays).  The rays are primitive integer
    vectors of the pointed quotient, lifted back through the canonical
    complement of the lineality space; together with +/- the lineality
    basis they generate the cone.
    """
    rows = [tuple(frac(x) for x in r) for r in rows]
    nonzero = [r for r in rows if not is_zero_vec(r)]
    if not nonzero:
        full = nullspace((), dim)
        return tuple(primitive_integer(v) for v in full), ()
    lineality = nullspace(tuple(nonzero), dim)
    lineality = tuple(primitive_integer(v) for v in lineality)
    # canonical complement of the lineality: the constraint row space
    comp, _ = rref(tuple(nonzero))
    dprime = len(comp)
    if dprime == 0:
        return lineality, ()
    zrows = [tuple(dot(r, e) for e in comp) for r in nonzero]

    # initial simplicial cone from a maximal independent subset
    init_idx = []
    chosen = []
    for i, zr in enumerate(zrows):
        if rank(tuple(chosen + [zr])) > len(chosen):
            chosen.append(zr)
            init_idx.append(i)
            if len(chosen) == dprime:
                break
    inv = inverse(tuple(chosen))
    rays = []
    active = []
    for j in range(dprime):
        col = tuple(inv[i][j] for i in range(dprime))
        rays.append(col)
        active.append(frozenset(init_idx[i] for i in range(dprime) if i != j))

    def adjacent(a_i, a_j):
        common = active[a_i] & active[a_j]
        for s in range(len(rays)):
            if s != a_i and s != a_j and common <= active[s]:
                return False
        return True

    processed = set(init_idx)
    for k, zr in enumerate(zrows):
        if k in init_idx:
            continue
        vals = [dot(zr, r) for r in rays]
        if all(v >= 0 for v in vals):
            processed.add(k)
            active = [a | {k} if v == 0 else a for a, v in zip(active, vals)]
            continue
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        new_rays = []
        new_active = []
        for i in pos:
            for j in neg:
                if not adjacent(i, j):
                    continue
                r_new = tuple(vals[i] * b - vals[j] * a
                              for a, b in zip(rays[i], rays[j]))
                new_rays.append(tuple(x for x in r_new))
                new_active.append((active[i] & active[j]) | {k})
        rays = [rays[i] for i in pos] + [rays[i] for i in zer] + new_rays
        active = ([active[i] for i in pos]
                  + [active[i] | {k} for i in zer]
                  + new_active)
        processed.add(k)

    lifted = []
    for r in rays:
        y = tuple(sum((r[j] * comp[j][i] for j in range(dprime)), QZERO)
                  for i in range(dim))
        lifted.append(primitive_integer(y))
    lifted = sorted(set(lifted))
    return lineality, tuple(lifted)


# ---------------------------------------------------------------------------
# cells

class Cell:
    """A non-empty rational polyhedron with both representations.

    Do not call the constructor directly; use build_cell or
    cell_from_points, which run the double description and fill the
    computed fields canonically.
    """

    __slots__ = ("ambient_dim", "h_rep", "vertices", "rays", "dim",
                 "span_base", "lattice_basis", "_signature", "_to_span",
                 "_triangulation")

    def __init__(self, ambient_dim, h_rep, vertices, rays):
        self.ambient_dim = ambient_dim
        self.h_rep = tuple(h_rep)
        self.vertices = tuple(sorted(vertices))
        self.rays = tuple(sorted(set(rays)))
        base = self.vertices[0]
        dirs = [vsub(v, base) for v in self.vertices[1:]]
        dirs += [vec(r) for r in self.rays]
        basis = lattice_basis_of_span(dirs, ambient_dim)
        self.lattice_basis = tuple(vec(b) for b in basis)
        self.dim = len(self.lattice_basis)
        self.span_base = base
        self._signature = (self.ambient_dim, self.vertices, self.rays)
        self._to_span = None
        self._triangulation = None

    @property
    def signature(self):
        return self._signature

    def __eq__(self, other):
        return isinstance(other, Cell) and self._signature == other._signature

    def __hash__(self):
        return hash(self._signature)

    def __repr__(self):
        return "Cell(dim=%d, vertices=%d, rays=%d)" % (
            self.dim, len(self.vertices), len(self.rays))

    @property
    def is_bounded(self):
        return not self.rays

    def contains_point(self, x):
        return all(h.value(x) >= 0 for h in self.h_rep)

    def contains_cell(self, other):
        """Set containment test via the half-space description."""
        for h in self.h_rep:
            if any(h.value(v) < 0 for v in other.vertices):
                return False
            if any(dot(h.direction, r) < 0 for r in other.rays):
                return False
        return True

    def relative_interior_point(self):
        k = len(self.vertices)
        p = tuple(sum((v[i] for v in self.vertices), QZERO) / k
                  for i in range(self.ambient_dim))
        for r in self.rays:
            p = tuple(a + b for a, b in zip(p, r))
        return p

    def to_span_coords(self, x):
        """Coordinates of x in the stored span frame (base + lattice basis)."""
        if self.dim == 0:
            return ()
        if self._to_span is None:
            cols = tuple(tuple(b[i] for b in self.lattice_basis)
                         for i in range(self.ambient_dim))
            self._to_span = cols
        t = solve(self._to_span, vsub(x, self.span_base))
        if t is None:
            raise SuperformError("point is not in the affine span of the cell")
        return t

    def from_span_coords(self, t):
        x = list(self.span_base)
        for coef, b in zip(t, self.lattice_basis):
            for i in range(self.ambient_dim):
                x[i] += coef * b[i]
        return tuple(x)

    def facets(self):
        """Codimension-one faces, deduplicated."""
        seen = {}
        for h in self.h_rep:
            try:
                cand = build_cell(self.h_rep + (h.negated(),), self.ambient_dim)
            except EmptyCell:
                continue
            if cand.dim == self.dim - 1:
                seen[cand.signature] = cand
        return tuple(seen[s] for s in sorted(seen))

    def faces(self, codim):
        return faces(self, codim)

    def all_faces(self):
        """Every face of every codimension, including the cell itself."""
        out = {self.signature: self}
        frontier = [self]
        while frontier:
            nxt = []
            for c in frontier:
                if c.dim == 0:
                    continue
                for f in c.facets():
                    if f.signature not in out:
                        out[f.signature] = f
                        nxt.append(f)
            frontier = nxt
        return tuple(out[s] for s in sorted(out))


def build_cell(halfspaces, ambient_dim=None):
    """Cell from a list of AffineForm constraints (each meaning >= 0)."""
    halfspaces = tuple(halfspaces)
    if ambient_dim is None:
        if not halfspaces:
            raise ValueError("ambient_dim is required when no half-space is given")
        ambient_dim = len(halfspaces[0].direction)
    for h in halfspaces:
        if len(h.direction) != ambient_dim:
            raise ValueError("half-space of wrong dimension")
    hom_rows = [h.direction + (h.offset,) for h in halfspaces]
    hom_rows.append((QZERO,) * ambient_dim + (QONE,))
    lineality, rays = dd_cone(hom_rows, ambient_dim + 1)
    vertices = []
    recession = []
    for r in rays:
        t = r[-1]
        if t > 0:
            vertices.append(tuple(frac(x) / t for x in r[:-1]))
        else:
            recession.append(primitive_integer(r[:-1]))
    for l in lineality:
        v = primitive_integer(l[:-1])
        recession.append(v)
        recession.append(tuple(-a for a in v))
    if not vertices:
        raise EmptyCell("the half-spaces have empty intersection")
    hrep = tuple(dict.fromkeys(h.primitive() for h in halfspaces))
    return Cell(ambient_dim, hrep, vertices, recession)


def cell_from_points(points, rays=(), ambient_dim=None):
    """Cell conv(points) + cone(rays); the half-spaces come from dual DD."""
    points = [vec(p) for p in points]
    if ambient_dim is None:
        if not points:
            raise ValueError("need at least one point")
        ambient_dim = len(points[0])
    gens = [p + (QONE,) for p in points]
    gens += [vec(r) + (QZERO,) for r in rays]
    lineality, dual_rays = dd_cone(gens, ambient_dim + 1)
    constraints = []
    for r in dual_rays:
        a, b = r[:-1], r[-1]
        if is_zero_vec(a):
            continue
        constraints.append(AffineForm(vec(a), frac(b)))
    for l in lineality:
        a, b = l[:-1], l[-1]
        if is_zero_vec(a):
            continue
        h = AffineForm(vec(a), frac(b))
        constraints.append(h)
        constraints.append(h.negated())
    if not constraints:
        # the generators fill the ambient space; only possible when r == 0
        if ambient_dim == 0:
            return Cell(0, (), [()], [])
        raise ValueError("unconstrained point set")
    return build_cell(constraints, ambient_dim)


def faces(cell, codim):
    """All faces of the given codimension."""
    if codim < 0 or codim > cell.dim:
        raise ValueError("codim must lie between 0 and dim")
    layer = {cell.signature: cell}
    for _ in range(codim):
        nxt = {}
        for c in layer.values():
            for f in c.facets():
                nxt[f.signature] = f
        layer = nxt
    return tuple(layer[s] for s in sorted(layer))


def cell_volume(cell, mode="lattice"):
    """Volume of a bounded cell inside its span.

    Both modes use the coordinates of the stored span frame, whose basis
    is the canonical lattice basis of the direction space; a primitive
    lattice simplex gets volume 1/dim!.
    """
    if mode not in ("lattice", "euclidean"):
        raise ValueError("mode must be 'lattice' or 'euclidean'")
    if not cell.is_bounded:
        raise UnboundedCell("volume requires a bounded cell")
    d = cell.dim
    if d == 0:
        return QONE
    total = QZERO
    for simplex in triangulate_cell(cell):
        pts = [cell.to_span_coords(v) for v in simplex]
        m = tuple(vsub(p, pts[0]) for p in pts[1:])
        total += abs(det(m))
    return total / factorial(d)


def triangulate_cell(cell):
    """Triangulation of a bounded cell into simplices (tuples of vertices).

    Cones from the lexicographically smallest vertex over recursively
    triangulated facets not containing it.
    """
    if not cell.is_bounded:
        raise UnboundedCell("triangulation requires a bounded cell")
    if cell._triangulation is not None:
        return cell._triangulation
    if cell.dim == 0:
        out = ((cell.vertices[0],),)
    else:
        v0 = cell.vertices[0]
        pieces = []
        for f in cell.facets():
            if v0 in f.vertices:
                continue
            for s in triangulate_cell(f):
                pieces.append((v0,) + s)
        out = tuple(pieces)
    cell._triangulation = out
    return out


def hull_volume(points, ambient_dim=None):
    """Top-dimensional lattice volume of the convex hull of rational points.

    Returns 0 when the hull does not have full dimension.
    """
    points = [vec(p) for p in points]
    if ambient_dim is None:
        ambient_dim = len(points[0])
    base = points[0]
    if rank(tuple(vsub(p, base) for p in points[1:])) < ambient_dim:
        return QZERO
    cell = cell_from_points(points, ambient_dim=ambient_dim)
    return cell_volume(cell, "lattice")


# ---------------------------------------------------------------------------
# complexes

class CellComplex:
    """A finite cellular decomposition: cells closed under faces, meeting
    pairwise in common faces."""

    __slots__ = ("ambient_dim", "cells", "maximal_cells", "face_lattice",
                 "_index")

    def __init__(self, ambient_dim, cells, maximal_cells, face_lattice):
        self.ambient_dim = ambient_dim
        self.cells = tuple(cells)
        self.maximal_cells = tuple(maximal_cells)
        self.face_lattice = tuple(face_lattice)
        self._index = {c.signature: i for i, c in enumerate(self.cells)}

    def __repr__(self):
        return "CellComplex(dim=%d, cells=%d, maximal=%d)" % (
            self.dim, len(self.cells), len(self.maximal_cells))

    @property
    def dim(self):
        return max((c.dim for c in self.cells), default=-1)

    def index_of(self, cell):
        return self._index.get(cell.signature)

    def cells_of_dim(self, d):
        return tuple(i for i, c in enumerate(self.cells) if c.dim == d)

    def is_pure(self, n=None):
        if n is None:
            n = self.dim
        return all(self.cells[i].dim == n for i in self.maximal_cells)

    def parents_of(self, i):
        """Indices of maximal cells having cell i as a face."""
        ci = self.cells[i]
        return tuple(m for m in self.maximal_cells
                     if self.cells[m].contains_cell(ci))


def _minimal_face_through(cell, point):
    tight = [h for h in cell.h_rep if h.value(point) == 0]
    constraints = cell.h_rep + tuple(h.negated() for h in tight)
    return build_cell(constraints, cell.ambient_dim)


def cell_complex(cells):
    """Build and validate a cellular decomposition from the given cells.

    The collection is closed under taking faces; pairwise intersections
    of maximal cells must be common faces, otherwise NotADecomposition
    is raised with the offending pair attached.
    """
    cells = list(cells)
    if cells:
        ambient = cells[0].ambient_dim
        if any(c.ambient_dim != ambient for c in cells):
            raise ValueError("cells live in different ambient spaces")
    else:
        ambient = 0
    pool = {}
    for c in cells:
        for f in c.all_faces():
            pool.setdefault(f.signature, f)
    ordered = [pool[s] for s in sorted(pool)]
    ordered.sort(key=lambda c: (c.dim, c.signature))
    index = {c.signature: i for i, c in enumerate(ordered)}

    maximal = []
    for i, c in enumerate(ordered):
        contained = any(j != i and ordered[j].contains_cell(c)
                        for j in range(len(ordered)))
        if not contained:
            maximal.append(i)

    for ai in range(len(maximal)):
        for bi in range(ai + 1, len(maximal)):
            ca = ordered[maximal[ai]]
            cb = ordered[maximal[bi]]
            try:
                inter = build_cell(ca.h_rep + cb.h_rep, ambient)
            except EmptyCell:
                continue
            pt = inter.relative_interior_point()
            fa = _minimal_face_through(ca, pt)
            fb = _minimal_face_through(cb, pt)
            if fa != inter or fb != inter:
                raise NotADecomposition(
                    "cells intersect in a set that is not a common face",
                    pair=(ca, cb))

    lattice = []
    for i, c in enumerate(ordered):
        if c.dim == 0:
            continue
        for f in c.facets():
            lattice.append((index[f.signature], i))
    return CellComplex(ambient, ordered, maximal, sorted(lattice))


def refine(complex_, cutters):
    """Refine a complex by cutting every cell along each hyperplane.

    Each cutter is an AffineForm; the cutting hyperplane is its zero set.
    """
    pieces = []
    for i in complex_.maximal_cells:
        parts = [complex_.cells[i]]
        for h in cutters:
            nxt = {}
            for p in parts:
                for side in (h, h.negated()):
                    try:
                        q = build_cell(p.h_rep + (side,), p.ambient_dim)
                    except EmptyCell:
                        continue
                    if q.dim == p.dim:
                        nxt[q.signature] = q
            parts = list(nxt.values())
        pieces.extend(parts)
    return cell_complex(pieces)


@dataclass(frozen=True)
class WeightedComplex:
    """A pure-dimensional complex with positive weights on maximal cells."""

    complex: CellComplex
    weights: dict

    def __post_init__(self):
        from .errors import NotPure
        cx = self.complex
        if cx.cells and not cx.is_pure():
            raise NotPure("weighted complex must be pure-dimensional")
        normalized = {}
        for i in cx.maximal_cells:
            if i not in self.weights:
                raise ValueError("missing weight for maximal cell %d" % i)
            w = frac(self.weights[i])
            if w <= 0:
                raise ValueError("weights must be positive")
            normalized[i] = w
        object.__setattr__(self, "weights", normalized)

    @property
    def dim(self):
        return self.complex.dim
