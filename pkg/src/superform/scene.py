"""Scene files: JSON descriptions of complexes, forms and tropical data.

A scene is a single JSON object.  Exact numbers are written as integers
or strings like "3/4"; floats are rejected everywhere except in the
``parameters`` block.  All library invariants are re-validated on load.

Keys (all optional except ambient_dim):

* ``schema``      -- format version, currently 1
* ``ambient_dim`` -- dimension of the ambient space
* ``complex``     -- list of maximal cells; a cell is either a bare list
  of vertices or {"name": ..., "vertices": [...], "rays": [...]}
  (in one dimension a vertex may be a bare number)
* ``weights``     -- list aligned with ``complex`` or map name -> weight
* ``calibration`` -- map name -> multivector coordinates (lexicographic
  exterior basis), overriding the canonical weight calibration
* ``cells``       -- named standalone cells (e.g. quadrature boxes)
* ``forms``       -- name -> {"bidegree": [p,q], "terms": [{"dprime":
  [...], "dsecond": [...], "coefficient": [{"powers": [...],
  "coeff": ...}]}]}
* ``polynomials`` -- name -> tropical polynomial, a list of
  {"exponent": [...], "coefficient": ...}
* ``functions``   -- name -> ordinary polynomial (list of monomials)
* ``parameters``  -- free-form defaults for the CLI (eps, grid, box, ...)
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .calibration import Calibration, VectorVolume, canonical_calibration
from .errors import ParseError, SuperformError, ValidationError
from .forms import Polynomial, Superform
from .linalg import frac, vec
from .monge_ampere import AtomicMeasure, TropicalPolynomial
from .polyhedra import WeightedComplex, cell_complex, cell_from_points

SCHEMA_VERSION = 1


def format_scalar(x):
    x = frac(x)
    return "%d/%d" % (x.numerator, x.denominator)


def format_vector(v):
    return [format_scalar(x) for x in v]


def _exact(value, where):
    try:
        return frac(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError("%s: %s" % (where, exc)) from exc


@dataclass
class Scene:
    ambient_dim: int
    complex: object = None
    weighted: object = None
    calibration: object = None
    forms: dict = field(default_factory=dict)
    polynomials: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)
    named_cells: dict = field(default_factory=dict)
    cell_labels: dict = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)

    def require_calibration(self):
        if self.calibration is None:
            raise ValidationError("scene provides no complex/weights to calibrate")
        return self.calibration

    def label_of(self, cell_index):
        return self.cell_labels.get(cell_index, "cell?%d" % cell_index)


def _parse_vertex(entry, ambient_dim, where):
    if isinstance(entry, (int, str)):
        if ambient_dim != 1:
            raise ValidationError(
                "%s: bare numbers are only vertices in one dimension" % where)
        return (_exact(entry, where),)
    if isinstance(entry, float):
        raise ValidationError("%s: floats are not exact; write '%r' as a "
                              "fraction string" % (where, entry))
    return tuple(_exact(x, where) for x in entry)


def _parse_cell_spec(spec, ambient_dim, default_name, where):
    if isinstance(spec, dict):
        name = spec.get("name", default_name)
        vertices = spec.get("vertices", [])
        rays = spec.get("rays", [])
    else:
        name = default_name
        vertices = spec
        rays = []
    vs = [_parse_vertex(v, ambient_dim, where) for v in vertices]
    rs = [_parse_vertex(r, ambient_dim, where) for r in rays]
    if not vs:
        raise ValidationError("%s: a cell needs at least one vertex" % where)
    for v in vs + rs:
        if len(v) != ambient_dim:
            raise ValidationError("%s: vertex arity does not match ambient_dim"
                                  % where)
    try:
        cell = cell_from_points(vs, rs, ambient_dim)
    except SuperformError as exc:
        raise ValidationError("%s: %s" % (where, exc)) from exc
    return name, cell


def _parse_polynomial(spec, ambient_dim, where):
    terms = {}
    for mono in spec:
        powers = tuple(int(e) for e in mono["powers"])
        if len(powers) != ambient_dim:
            raise ValidationError("%s: monomial arity mismatch" % where)
        coeff = _exact(mono["coeff"], where)
        terms[powers] = terms.get(powers, Fraction(0)) + coeff
    return Polynomial(ambient_dim, terms)


def _parse_form(spec, ambient_dim, where):
    p, q = (int(x) for x in spec["bidegree"])
    terms = {}
    for term in spec.get("terms", []):
        idx_i = tuple(int(i) for i in term.get("dprime", []))
        idx_j = tuple(int(j) for j in term.get("dsecond", []))
        poly = _parse_polynomial(term["coefficient"], ambient_dim, where)
        key = (idx_i, idx_j)
        terms[key] = terms[key] + poly if key in terms else poly
    try:
        return Superform(ambient_dim, p, q, terms)
    except (ValueError, SuperformError) as exc:
        raise ValidationError("%s: %s" % (where, exc)) from exc


def _parse_tropical(spec, ambient_dim, where):
    terms = []
    for term in spec:
        m = tuple(_exact(x, where) for x in term["exponent"])
        if len(m) != ambient_dim:
            raise ValidationError("%s: exponent arity mismatch" % where)
        terms.append((m, _exact(term["coefficient"], where)))
    try:
        return TropicalPolynomial(ambient_dim, terms)
    except (ValueError, SuperformError) as exc:
        raise ValidationError("%s: %s" % (where, exc)) from exc


def scene_from_dict(data):
    if not isinstance(data, dict):
        raise ValidationError("scene must be a JSON object")
    version = data.get("schema", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ValidationError("unknown schema version %r" % (version,))
    if "ambient_dim" not in data:
        raise ValidationError("scene is missing ambient_dim")
    ambient_dim = int(data["ambient_dim"])
    scene = Scene(ambient_dim=ambient_dim)
    scene.parameters = dict(data.get("parameters", {}))

    for name, spec in data.get("cells", {}).items():
        _, cell = _parse_cell_spec(spec, ambient_dim, name, "cells[%s]" % name)
        scene.named_cells[name] = cell

    raw_complex = data.get("complex")
    names = []
    members = []
    if raw_complex is not None:
        for pos, spec in enumerate(raw_complex):
            name, cell = _parse_cell_spec(spec, ambient_dim, "cell%d" % pos,
                                          "complex[%d]" % pos)
            names.append(name)
            members.append(cell)
        try:
            scene.complex = cell_complex(members)
        except SuperformError as exc:
            raise ValidationError("NotADecomposition: %s" % exc) from exc
        for name, cell in zip(names, members):
            idx = scene.complex.index_of(cell)
            if idx is not None:
                scene.cell_labels[idx] = name

    raw_weights = data.get("weights")
    if raw_weights is not None:
        if scene.complex is None:
            raise ValidationError("weights given without a complex")
        by_name = {}
        if isinstance(raw_weights, dict):
            by_name = {n: _exact(w, "weights[%s]" % n)
                       for n, w in raw_weights.items()}
        else:
            if len(raw_weights) != len(members):
                raise ValidationError("weights list does not match the complex")
            by_name = {n: _exact(w, "weights[%s]" % n)
                       for n, w in zip(names, raw_weights)}
        weight_map = {}
        for i in scene.complex.maximal_cells:
            label = scene.cell_labels.get(i)
            if label is None or label not in by_name:
                raise ValidationError(
                    "missing weight for maximal cell %s" % (label or i))
            weight_map[i] = by_name[label]
        try:
            scene.weighted = WeightedComplex(scene.complex, weight_map)
        except (ValueError, SuperformError) as exc:
            raise ValidationError("NotPure: %s" % exc) from exc

    raw_cal = data.get("calibration")
    if raw_cal is not None:
        if scene.complex is None:
            raise ValidationError("calibration given without a complex")
        assignment = {}
        label_to_index = {v: k for k, v in scene.cell_labels.items()}
        for name, coords in raw_cal.items():
            if name not in label_to_index:
                raise ValidationError("calibration names unknown cell %r" % name)
            idx = label_to_index[name]
            mv = vec([_exact(x, "calibration[%s]" % name) for x in coords])
            try:
                assignment[idx] = VectorVolume(scene.complex.cells[idx], mv, 1)
            except SuperformError as exc:
                raise ValidationError("calibration[%s]: %s" % (name, exc)) from exc
        try:
            scene.calibration = Calibration(scene.complex, assignment)
        except (ValueError, SuperformError) as exc:
            raise ValidationError("calibration: %s" % exc) from exc
    elif scene.weighted is not None:
        scene.calibration = canonical_calibration(scene.weighted)

    for name, spec in data.get("forms", {}).items():
        scene.forms[name] = _parse_form(spec, ambient_dim, "forms[%s]" % name)
    for name, spec in data.get("polynomials", {}).items():
        scene.polynomials[name] = _parse_tropical(spec, ambient_dim,
                                                  "polynomials[%s]" % name)
    for name, spec in data.get("functions", {}).items():
        scene.functions[name] = _parse_polynomial(spec, ambient_dim,
                                                  "functions[%s]" % name)
    return scene


def load_scene(path):
    """Parse and fully validate a scene file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise ParseError("line %d column %d: %s"
                         % (exc.lineno, exc.colno, exc.msg)) from exc
    return scene_from_dict(data)


def dump_report(report):
    """Canonical byte-stable serialization of a report."""
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def save_result(report, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_report(report))


def load_result(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError("line %d column %d: %s"
                         % (exc.lineno, exc.colno, exc.msg)) from exc


def measure_to_report(measure):
    return [{"point": format_vector(p), "mass": format_scalar(m)}
            for p, m in measure.atoms]


def measure_from_report(entries):
    return AtomicMeasure.make([(tuple(frac(x) for x in e["point"]),
                                frac(e["mass"])) for e in entries])
