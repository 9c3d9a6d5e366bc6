"""Vector-volumes and calibrations on weighted complexes.

A vector-volume on an n-dimensional cell is the class of a pair
(orientation, n-multivector) under the simultaneous sign flip.  We fix
the orientation of the cell's stored span frame as reference, keep an
explicit sign relative to it, and canonicalize the class so that the
lexicographically first nonzero multivector coordinate is positive.
"""

from dataclasses import dataclass

from .errors import (
    IncompatibleDecompositions,
    NotCodimOne,
    NotPure,
    SuperformError,
)
from .linalg import (
    QZERO,
    det,
    exterior_apply,
    frac,
    index_subsets,
    is_zero_vec,
    mat_vec,
    solve,
    vec,
    vsub,
    wedge_coordinates,
)
from .polyhedra import cell_from_points


def _span_coeff(cell, multivector):
    """The scalar a with multivector = a * wedge(lattice basis of cell)."""
    base = wedge_coordinates(cell.lattice_basis, cell.ambient_dim)
    a = None
    for m, b in zip(multivector, base):
        if b != 0:
            a = m / b
            break
    if a is None:
        raise SuperformError("cell span is degenerate")
    for m, b in zip(multivector, base):
        if m != a * b:
            raise SuperformError("multivector does not lie in the cell's span")
    return a


@dataclass(frozen=True)
class VectorVolume:
    """Orientation class paired with a top multivector on a cell's span.

    ``multivector`` holds lexicographic exterior coordinates over the
    ambient space; ``orientation_sign`` is relative to the ordered span
    frame of the cell declared direct.
    """

    cell: object
    multivector: tuple
    orientation_sign: int = 1

    def __post_init__(self):
        mv = vec(self.multivector)
        sign = 1 if self.orientation_sign >= 0 else -1
        first = next((x for x in mv if x != 0), None)
        if first is not None and first < 0:
            mv = tuple(-x for x in mv)
            sign = -sign
        if first is not None:
            _span_coeff(self.cell, mv)
        object.__setattr__(self, "multivector", mv)
        object.__setattr__(self, "orientation_sign", sign)

    def is_zero(self):
        return is_zero_vec(self.multivector)

    def effective_multivector(self):
        """The representative paired with the span frame's own orientation."""
        s = self.orientation_sign
        return tuple(s * x for x in self.multivector)

    def span_coefficient(self):
        """Scalar a with effective multivector = a * wedge(span basis)."""
        if self.is_zero():
            return QZERO
        return _span_coeff(self.cell, self.effective_multivector())

    def scale(self, c):
        c = frac(c)
        return VectorVolume(self.cell,
                            tuple(c * x for x in self.multivector),
                            self.orientation_sign if c >= 0 else -self.orientation_sign)


@dataclass(frozen=True)
class Discordance:
    """Orientation class of the summed adjacent multivectors at a face."""

    face: object
    multivector: tuple
    orientation_sign: int = 1

    def __post_init__(self):
        mv = vec(self.multivector)
        sign = 1 if self.orientation_sign >= 0 else -1
        first = next((x for x in mv if x != 0), None)
        if first is not None and first < 0:
            mv = tuple(-x for x in mv)
            sign = -sign
        object.__setattr__(self, "multivector", mv)
        object.__setattr__(self, "orientation_sign", sign)

    def is_zero(self):
        return is_zero_vec(self.multivector)

    def effective_multivector(self):
        s = self.orientation_sign
        return tuple(s * x for x in self.multivector)


class Calibration:
    """Assignment of a vector-volume to each maximal cell of a pure complex.

    ``n`` may exceed the complex dimension, in which case the calibration
    is the zero family (every integral against it vanishes).
    """

    __slots__ = ("complex", "assignment", "n")

    def __init__(self, complex_, assignment, n=None):
        self.complex = complex_
        self.n = complex_.dim if n is None else n
        if self.n < complex_.dim:
            raise ValueError("n must be at least the dimension of the complex")
        if complex_.cells and not complex_.is_pure():
            raise NotPure("calibrations require a pure complex")
        self.assignment = {}
        if self.n == complex_.dim:
            for i in complex_.maximal_cells:
                if i not in assignment:
                    raise ValueError("maximal cell %d is not calibrated" % i)
                self.assignment[i] = assignment[i]
        elif assignment:
            raise ValueError("a complex of lower dimension carries only the "
                             "zero calibration")

    def __repr__(self):
        return "Calibration(n=%d, cells=%d)" % (self.n, len(self.assignment))

    def scale(self, c):
        return Calibration(self.complex,
                           {i: v.scale(c) for i, v in self.assignment.items()},
                           self.n)


def canonical_calibration(weighted):
    """weight x primitive lattice top-vector on each maximal cell."""
    cx = weighted.complex
    assignment = {}
    for i in cx.maximal_cells:
        cell = cx.cells[i]
        mv = wedge_coordinates(cell.lattice_basis, cx.ambient_dim)
        w = weighted.weights[i]
        assignment[i] = VectorVolume(cell, tuple(w * x for x in mv), 1)
    return Calibration(cx, assignment)


def _orientation_sign(cell, vectors):
    """Sign of det of the given vectors written in the cell's span frame."""
    coords = [cell.to_span_coords(tuple(a + b for a, b in zip(cell.span_base, v)))
              for v in vectors]
    return 1 if det(tuple(coords)) > 0 else -1


def _face_contributions(cal, face_index):
    """Pairs (maximal cell index, oriented n-vector) entering the
    discordance at the face, for the face frame's own orientation."""
    cx = cal.complex
    face = cx.cells[face_index]
    out = []
    for i in cx.maximal_cells:
        cell = cx.cells[i]
        if not cell.contains_cell(face):
            continue
        vv = cal.assignment[i]
        into = vsub(cell.relative_interior_point(),
                    face.relative_interior_point())
        outward = tuple(-x for x in into)
        s = _orientation_sign(cell, [outward] + list(face.lattice_basis))
        lam = vv.effective_multivector()
        out.append((i, tuple(s * x for x in lam)))
    return out


def discordance(cal, face, orientation_sign=1):
    """Oriented sum of the adjacent calibration multivectors at a face.

    ``face`` is a cell or an index into the carrier complex; it must be
    a codimension-one face of at least one maximal cell.  The result is
    a class under the simultaneous flip, so the optional orientation
    flip only changes the representative.
    """
    cx = cal.complex
    if isinstance(face, int):
        face_index = face
    else:
        face_index = cx.index_of(face)
        if face_index is None:
            raise NotCodimOne("face does not belong to the carrier complex")
    fc = cx.cells[face_index]
    if fc.dim != cal.n - 1:
        raise NotCodimOne("face has dimension %d, expected %d"
                          % (fc.dim, cal.n - 1))
    contributions = _face_contributions(cal, face_index)
    if not contributions:
        raise NotCodimOne("face is not contained in any maximal cell")
    total = [QZERO] * len(index_subsets(cx.ambient_dim, cal.n))
    for _, mv in contributions:
        total = [a + b for a, b in zip(total, mv)]
    if orientation_sign < 0:
        total = [-x for x in total]
    return Discordance(fc, tuple(total), orientation_sign)


def boundary_data(cal):
    """Discordance at every codimension-one cell of the carrier."""
    cx = cal.complex
    return {i: discordance(cal, i) for i in cx.cells_of_dim(cal.n - 1)}


def is_harmonious(cal, face):
    return discordance(cal, face).is_zero()


def image_cell(affine_map, cell):
    """Image of a cell under an affine map, as a cell."""
    points = [affine_map(v) for v in cell.vertices]
    rays = []
    for r in cell.rays:
        img = mat_vec(affine_map.matrix, vec(r))
        if not is_zero_vec(img):
            rays.append(img)
    return cell_from_points(points, rays, affine_map.dim_out)


def pushforward_calibration(affine_map, cal, target):
    """Transport a calibration along an affine map onto a target complex.

    Every maximal source cell must map onto a cell of the target (refine
    first if needed); cells collapsing to lower dimension contribute
    nothing.
    """
    cx = cal.complex
    n = cal.n
    target_assignment = {}
    target_max = {target.cells[i].signature: i
                  for i in target.maximal_cells
                  if target.cells[i].dim == n}
    sums = {i: [QZERO] * len(index_subsets(target.ambient_dim, n))
            for i in target_max.values()}
    for i in cx.maximal_cells:
        cell = cx.cells[i]
        img = image_cell(affine_map, cell)
        if img.dim < n:
            continue
        j = target_max.get(img.signature)
        if j is None:
            raise IncompatibleDecompositions(
                "image of a source cell is not a cell of the target complex")
        tcell = target.cells[j]
        pushed_basis = [mat_vec(affine_map.matrix, vec(b))
                        for b in cell.lattice_basis]
        s = _orientation_sign(tcell, pushed_basis)
        lam = cal.assignment[i].effective_multivector()
        pushed = exterior_apply(affine_map.matrix, lam, n,
                                cx.ambient_dim, target.ambient_dim)
        sums[j] = [a + s * b for a, b in zip(sums[j], pushed)]
    if target.dim < n:
        return Calibration(target, {}, n)
    for j in target.maximal_cells:
        if target.cells[j].dim != n:
            raise NotPure("target complex is not pure of the expected dimension")
        target_assignment[j] = VectorVolume(target.cells[j], tuple(sums[j]), 1)
    return Calibration(target, target_assignment, n)
