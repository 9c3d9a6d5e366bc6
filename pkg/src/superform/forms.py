"""The bigraded algebra of forms with doubled cotangent variables.

A form of bidegree (p,q) on Q^r is stored as a sparse map from index
pairs (I,J) -- strictly increasing tuples with |I|=p, |J|=q -- to
polynomial coefficients, meaning  sum  c_{I,J}(x) d'x_I ^ d''x_J.
Every reordering sign is absorbed at construction, under the Koszul
rule that any two single generators anticommute.

A form may optionally be carried by a cell complex, with one
coefficient map per maximal cell; representatives must agree on shared
faces after restriction.
"""

import enum
from fractions import Fraction
from itertools import combinations

from .errors import (
    AmbientMismatch,
    SuperformError,
    UnsupportedBidegree,
    ValidationError,
)
from .linalg import QONE, QZERO, det, frac, vec


# ---------------------------------------------------------------------------
# polynomials

class Polynomial:
    """Sparse multivariate polynomial over Q.

    terms maps exponent tuples to nonzero Fraction coefficients.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        clean = {}
        for mono, c in (terms or {}).items():
            c = frac(c)
            if c != 0:
                clean[tuple(mono)] = clean.get(tuple(mono), QZERO) + c
        self.terms = {m: c for m, c in clean.items() if c != 0}

    @staticmethod
    def constant(nvars, value):
        return Polynomial(nvars, {(0,) * nvars: frac(value)})

    @staticmethod
    def coordinate(nvars, i):
        mono = tuple(1 if j == i else 0 for j in range(nvars))
        return Polynomial(nvars, {mono: QONE})

    @staticmethod
    def affine(nvars, coeffs, offset):
        terms = {(0,) * nvars: frac(offset)}
        for i, c in enumerate(coeffs):
            mono = tuple(1 if j == i else 0 for j in range(nvars))
            terms[mono] = frac(c)
        return Polynomial(nvars, terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(all(e == 0 for e in m) for m in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise SuperformError("polynomial is not constant")
        return self.terms.get((0,) * self.nvars, QZERO)

    def degree(self):
        return max((sum(m) for m in self.terms), default=0)

    def __eq__(self, other):
        return (isinstance(other, Polynomial) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.terms.items()))))

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, QZERO) + c
        return Polynomial(self.nvars, out)

    def __neg__(self):
        return Polynomial(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, QZERO) + c1 * c2
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def scale(self, c):
        c = frac(c)
        return Polynomial(self.nvars, {m: c * v for m, v in self.terms.items()})

    def diff(self, i):
        out = {}
        for m, c in self.terms.items():
            if m[i] == 0:
                continue
            m2 = m[:i] + (m[i] - 1,) + m[i + 1:]
            out[m2] = out.get(m2, QZERO) + c * m[i]
        return Polynomial(self.nvars, out)

    def power(self, k):
        out = Polynomial.constant(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def evaluate(self, point):
        total = QZERO
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                for _ in range(e):
                    v *= x
            total += v
        return total

    def evaluate_float(self, point):
        total = 0.0
        for m, c in self.terms.items():
            v = float(c)
            for x, e in zip(point, m):
                v *= x ** e
            total += v
        return total

    def compose_affine(self, translation, matrix):
        """Substitute x_i = translation_i + sum_j matrix[i][j] t_j.

        The result is a polynomial in len(matrix[0]) variables (or in
        zero variables for an empty matrix row length).
        """
        nvars_out = len(matrix[0]) if matrix and len(matrix) and len(matrix[0]) else 0
        if matrix and len(matrix[0]) == 0:
            nvars_out = 0
        subs = [Polynomial.affine(nvars_out, matrix[i] if matrix else (),
                                  translation[i])
                for i in range(self.nvars)]
        powers = [{0: Polynomial.constant(nvars_out, 1)} for _ in range(self.nvars)]

        def pw(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = pw(i, e - 1) * subs[i]
            return cache[e]

        out = Polynomial(nvars_out, {})
        for m, c in self.terms.items():
            term = Polynomial.constant(nvars_out, c)
            for i, e in enumerate(m):
                if e:
                    term = term * pw(i, e)
            out = out + term
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join("x%d^%d" % (i, e) for i, e in enumerate(m) if e)
            bits.append(str(c) + ("*" + mono if mono else ""))
        return " + ".join(bits)


# ---------------------------------------------------------------------------
# index bookkeeping

def merge_indices(a, b):
    """Merge two strictly increasing tuples; returns (merged, sign) or None."""
    merged = list(a)
    sign = 1
    for x in b:
        pos = len(merged)
        for k, y in enumerate(merged):
            if x == y:
                return None
            if x < y:
                pos = k
                break
        sign *= (-1) ** (len(merged) - pos)
        merged.insert(pos, x)
    return tuple(merged), sign


def insert_index(i, idx):
    """Prepend generator i to the sorted block idx; (new block, sign) or None."""
    if i in idx:
        return None
    smaller = sum(1 for j in idx if j < i)
    new = tuple(sorted(idx + (i,)))
    return new, (-1) ** smaller


def interleave_sign(n):
    """Sign relating d'x_1^d''x_1^...^d'x_n^d''x_n to the (I|J) ordering."""
    return (-1) ** (n * (n - 1) // 2)


# ---------------------------------------------------------------------------
# affine maps

class AffineMap:
    """Affine map t -> translation + matrix @ t from Q^dim_in to Q^dim_out."""

    __slots__ = ("matrix", "translation", "dim_in", "dim_out")

    def __init__(self, matrix, translation):
        self.translation = vec(translation)
        self.dim_out = len(self.translation)
        self.matrix = tuple(vec(row) for row in matrix)
        if len(self.matrix) != self.dim_out:
            raise ValueError("matrix/translation size mismatch")
        self.dim_in = len(self.matrix[0]) if self.matrix and self.matrix[0] else (
            len(self.matrix[0]) if self.matrix else 0)

    @staticmethod
    def identity(n):
        rows = [[QONE if j == i else QZERO for j in range(n)] for i in range(n)]
        return AffineMap(rows, [QZERO] * n)

    def __call__(self, t):
        return tuple(self.translation[i]
                     + sum((self.matrix[i][j] * t[j] for j in range(self.dim_in)),
                           QZERO)
                     for i in range(self.dim_out))

    def compose(self, other):
        """self o other."""
        rows = [[sum((self.matrix[i][k] * other.matrix[k][j]
                      for k in range(self.dim_in)), QZERO)
                 for j in range(other.dim_in)]
                for i in range(self.dim_out)]
        trans = self(other.translation)
        return AffineMap(rows, trans)


def span_parametrization(cell):
    """Affine map from span coordinates of a cell into the ambient space."""
    d = cell.dim
    rows = [[cell.lattice_basis[j][i] for j in range(d)]
            for i in range(cell.ambient_dim)]
    return AffineMap(rows, cell.span_base)


# ---------------------------------------------------------------------------
# superforms

class PositivityKind(enum.Enum):
    POSITIVE = "positive"
    WEAKLY_POSITIVE = "weakly_positive"
    STRONGLY_POSITIVE = "strongly_positive"


class Superform:
    """A (p,q)-form with polynomial coefficients, global or cellwise."""

    __slots__ = ("ambient_dim", "p", "q", "terms", "carrier", "cell_terms")

    def __init__(self, ambient_dim, p, q, terms=None, carrier=None,
                 cell_terms=None):
        if p < 0 or q < 0:
            raise ValueError("bidegree must be non-negative")
        self.ambient_dim = ambient_dim
        self.p = p
        self.q = q
        self.carrier = carrier
        if carrier is None:
            self.terms = _clean_terms(ambient_dim, p, q, terms or {})
            self.cell_terms = None
        else:
            self.terms = None
            self.cell_terms = {
                i: _clean_terms(ambient_dim, p, q, t)
                for i, t in (cell_terms or {}).items()
            }
            for i in carrier.maximal_cells:
                if i not in self.cell_terms:
                    self.cell_terms[i] = {}

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(ambient_dim, p, q):
        return Superform(ambient_dim, p, q)

    @staticmethod
    def function(poly):
        return Superform(poly.nvars, 0, 0, {((), ()): poly})

    @staticmethod
    def constant(ambient_dim, value):
        return Superform.function(Polynomial.constant(ambient_dim, value))

    @staticmethod
    def dprime_generator(ambient_dim, i):
        one = Polynomial.constant(ambient_dim, 1)
        return Superform(ambient_dim, 1, 0, {((i,), ()): one})

    @staticmethod
    def dsecond_generator(ambient_dim, i):
        one = Polynomial.constant(ambient_dim, 1)
        return Superform(ambient_dim, 0, 1, {((), (i,)): one})

    @staticmethod
    def on_complex(complex_, cell_terms, p, q, validate=True):
        """Cellwise form on a complex; representatives are checked to agree
        on shared faces of maximal cells."""
        form = Superform(complex_.ambient_dim, p, q, carrier=complex_,
                         cell_terms=cell_terms)
        if validate:
            _validate_carrier(form)
        return form

    # -- basic structure ----------------------------------------------

    @property
    def bidegree(self):
        return (self.p, self.q)

    def is_global(self):
        return self.carrier is None

    def representative(self, cell_index):
        """Global terms, or the coefficient map on the given maximal cell."""
        if self.is_global():
            return self.terms
        if cell_index in self.cell_terms:
            return self.cell_terms[cell_index]
        raise SuperformError("no representative stored for cell %d" % cell_index)

    def is_zero(self):
        if self.is_global():
            return not self.terms
        return all(not t for t in self.cell_terms.values())

    def __eq__(self, other):
        if not isinstance(other, Superform):
            return NotImplemented
        if (self.ambient_dim, self.p, self.q) != (other.ambient_dim, other.p, other.q):
            return False
        if self.is_global() != other.is_global():
            return False
        if self.is_global():
            return self.terms == other.terms
        return self.carrier is other.carrier and self.cell_terms == other.cell_terms

    def __hash__(self):
        raise TypeError("Superform is not hashable")

    def __add__(self, other):
        self._check_compatible(other)
        if (self.p, self.q) != (other.p, other.q):
            raise SuperformError("cannot add forms of different bidegrees")
        return self._zip(other, lambda a, b: _add_terms(a, b))

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = frac(c)
        return self._map(lambda t: {k: p.scale(c) for k, p in t.items()})

    def _check_compatible(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch("forms live in different ambient spaces")
        if not self.is_global() and not other.is_global() \
                and self.carrier is not other.carrier:
            raise AmbientMismatch("forms are carried by different complexes")

    def _map(self, fn, p=None, q=None):
        p = self.p if p is None else p
        q = self.q if q is None else q
        if self.is_global():
            return Superform(self.ambient_dim, p, q, fn(self.terms))
        new = {i: fn(t) for i, t in self.cell_terms.items()}
        return Superform(self.ambient_dim, p, q, carrier=self.carrier,
                         cell_terms=new)

    def _zip(self, other, fn, p=None, q=None):
        p = self.p if p is None else p
        q = self.q if q is None else q
        if self.is_global() and other.is_global():
            return Superform(self.ambient_dim, p, q, fn(self.terms, other.terms))
        if self.is_global():
            carrier = other.carrier
            new = {i: fn(self.terms, t) for i, t in other.cell_terms.items()}
        elif other.is_global():
            carrier = self.carrier
            new = {i: fn(t, other.terms) for i, t in self.cell_terms.items()}
        else:
            carrier = self.carrier
            new = {i: fn(t, other.cell_terms[i]) for i, t in self.cell_terms.items()}
        return Superform(self.ambient_dim, p, q, carrier=carrier, cell_terms=new)

    def __repr__(self):
        kind = "global" if self.is_global() else "cellwise"
        return "Superform(%s, n=%d, bidegree=(%d,%d))" % (
            kind, self.ambient_dim, self.p, self.q)


def _clean_terms(ambient_dim, p, q, terms):
    out = {}
    for (idx_i, idx_j), poly in terms.items():
        idx_i, idx_j = tuple(idx_i), tuple(idx_j)
        if len(idx_i) != p or len(idx_j) != q:
            raise ValueError("index tuple lengths do not match the bidegree")
        if list(idx_i) != sorted(set(idx_i)) or list(idx_j) != sorted(set(idx_j)):
            raise ValueError("index tuples must be strictly increasing")
        if any(i < 0 or i >= ambient_dim for i in idx_i + idx_j):
            raise ValueError("index out of range")
        if poly.nvars != ambient_dim:
            raise ValueError("coefficient arity does not match the ambient space")
        if not poly.is_zero():
            key = (idx_i, idx_j)
            out[key] = out[key] + poly if key in out else poly
    return {k: v for k, v in out.items() if not v.is_zero()}


def _add_terms(a, b):
    out = dict(a)
    for k, p in b.items():
        out[k] = out[k] + p if k in out else p
    return out


def _wedge_terms(a, b):
    out = {}
    for (i1, j1), p1 in a.items():
        for (i2, j2), p2 in b.items():
            mi = merge_indices(i1, i2)
            if mi is None:
                continue
            mj = merge_indices(j1, j2)
            if mj is None:
                continue
            sign = ((-1) ** (len(j1) * len(i2))) * mi[1] * mj[1]
            key = (mi[0], mj[0])
            poly = (p1 * p2).scale(sign)
            out[key] = out[key] + poly if key in out else poly
    return out


def wedge(a, b):
    """Exterior product; single generators anticommute across both blocks."""
    a._check_compatible(b)
    return a._zip(b, _wedge_terms, p=a.p + b.p, q=a.q + b.q)


def _dprime_terms(ambient_dim):
    def fn(terms):
        out = {}
        for (idx_i, idx_j), poly in terms.items():
            for v in range(ambient_dim):
                dp = poly.diff(v)
                if dp.is_zero():
                    continue
                ins = insert_index(v, idx_i)
                if ins is None:
                    continue
                key = (ins[0], idx_j)
                contrib = dp.scale(ins[1])
                out[key] = out[key] + contrib if key in out else contrib
        return out
    return fn


def _dsecond_terms(ambient_dim, p):
    def fn(terms):
        out = {}
        for (idx_i, idx_j), poly in terms.items():
            for v in range(ambient_dim):
                dp = poly.diff(v)
                if dp.is_zero():
                    continue
                ins = insert_index(v, idx_j)
                if ins is None:
                    continue
                key = (idx_i, ins[0])
                contrib = dp.scale(ins[1] * (-1) ** p)
                out[key] = out[key] + contrib if key in out else contrib
        return out
    return fn


def d_prime(form):
    """Derivation of bidegree (1,0)."""
    return form._map(_dprime_terms(form.ambient_dim), p=form.p + 1)


def d_second(form):
    """Derivation of bidegree (0,1); carries the (-1)^p block-crossing sign."""
    return form._map(_dsecond_terms(form.ambient_dim, form.p), q=form.q + 1)


def d_prime_d_second(form):
    return d_prime(d_second(form))


def involution_J(form):
    """Swap the two blocks: (I,J) -> (J,I) with the (-1)^{pq} sign."""
    sign = (-1) ** (form.p * form.q)

    def fn(terms):
        return {(j, i): poly.scale(sign) for (i, j), poly in terms.items()}

    return form._map(fn, p=form.q, q=form.p)


def is_symmetric(form):
    """Jw = (-1)^p w, equivalently c_{I,J} = c_{J,I}, for (p,p)-forms."""
    if form.p != form.q:
        return False
    return involution_J(form) == form.scale((-1) ** form.p)


def pullback(affine_map, form):
    """Pull a form on the target of the map back to its source.

    An algebra morphism commuting with d', d'' and J.
    """
    if form.ambient_dim != affine_map.dim_out:
        raise AmbientMismatch("map target does not match the form's space")
    if not form.is_global():
        raise SuperformError("pullback of a cellwise form is cell-dependent; "
                             "restrict to a cell first")
    m = affine_map.matrix
    dim_in = affine_map.dim_in

    def block_minors(idx, out_subsets):
        res = {}
        for sub in out_subsets:
            minor = tuple(tuple(m[i][j] for j in sub) for i in idx)
            d = det(minor) if idx else QONE
            if d != 0:
                res[sub] = d
        return res

    p_subsets = tuple(combinations(range(dim_in), form.p))
    q_subsets = tuple(combinations(range(dim_in), form.q))
    out = {}
    for (idx_i, idx_j), poly in form.terms.items():
        comp = poly.compose_affine(affine_map.translation, m)
        if comp.is_zero():
            continue
        mi = block_minors(idx_i, p_subsets)
        mj = block_minors(idx_j, q_subsets)
        for si, di in mi.items():
            for sj, dj in mj.items():
                key = (si, sj)
                contrib = comp.scale(di * dj)
                out[key] = out[key] + contrib if key in out else contrib
    return Superform(dim_in, form.p, form.q, out)


def restrict(form, cell):
    """Canonical representative on a cell, in its span coordinates.

    A zero result means the form lies in the ideal of forms vanishing
    along the cell.
    """
    if cell.ambient_dim != form.ambient_dim:
        raise AmbientMismatch("cell and form live in different spaces")
    if form.is_global():
        ambient_terms = form.terms
    else:
        ambient_terms = _carried_representative(form, cell)
    param = span_parametrization(cell)
    tmp = Superform(form.ambient_dim, form.p, form.q, ambient_terms)
    return pullback(param, tmp)


def _carried_representative(form, cell):
    cx = form.carrier
    idx = cx.index_of(cell)
    if idx is not None and idx in form.cell_terms:
        return form.cell_terms[idx]
    for i in cx.maximal_cells:
        if cx.cells[i].contains_cell(cell):
            return form.cell_terms[i]
    raise SuperformError("cell is not part of the carrier complex")


def _validate_carrier(form):
    cx = form.carrier
    maximal = list(cx.maximal_cells)
    for a in range(len(maximal)):
        for b in range(a + 1, len(maximal)):
            ca, cb = cx.cells[maximal[a]], cx.cells[maximal[b]]
            shared = [c for c in cx.cells
                      if ca.contains_cell(c) and cb.contains_cell(c)]
            for face in shared:
                ra = pullback(span_parametrization(face),
                              Superform(form.ambient_dim, form.p, form.q,
                                        form.cell_terms[maximal[a]]))
                rb = pullback(span_parametrization(face),
                              Superform(form.ambient_dim, form.p, form.q,
                                        form.cell_terms[maximal[b]]))
                if ra != rb:
                    raise ValidationError(
                        "cellwise representatives disagree on a shared face")


# ---------------------------------------------------------------------------
# contraction and positivity

def sharp_coefficient(form):
    """The function g with  form = g * d'x_1^d''x_1^...^d'x_n^d''x_n."""
    n = form.ambient_dim
    if (form.p, form.q) != (n, n):
        raise SuperformError("sharp coefficient needs an (n,n)-form")
    full = tuple(range(n))
    poly = form.terms.get((full, full), Polynomial(n, {}))
    return poly.scale(interleave_sign(n))


def contract_dsecond(terms, ambient_dim, n, multivector):
    """Contract the d'' block of a (p,n)-form by an n-multivector.

    ``multivector`` holds lexicographic exterior coordinates over
    Q^ambient_dim.  Returns the classical p-form as a map I -> Polynomial,
    normalized so that contracting the interleaved volume form by the
    standard n-vector gives dx_1^...^dx_n.
    """
    subsets = tuple(combinations(range(ambient_dim), n))
    coeff = dict(zip(subsets, multivector))
    sign = interleave_sign(n)
    out = {}
    for (idx_i, idx_j), poly in terms.items():
        lam = coeff.get(idx_j, QZERO)
        if lam == 0:
            continue
        contrib = poly.scale(sign * lam)
        out[idx_i] = out[idx_i] + contrib if idx_i in out else contrib
    return {k: v for k, v in out.items() if not v.is_zero()}


def _constant_matrix(form):
    n = form.ambient_dim
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            poly = form.terms.get(((i,), (j,)))
            row.append(poly.constant_value() if poly is not None else QZERO)
        rows.append(tuple(row))
    return tuple(rows)


def _is_psd(matrix):
    """Exact PSD test: symmetry plus non-negative principal minors."""
    n = len(matrix)
    for i in range(n):
        for j in range(n):
            if matrix[i][j] != matrix[j][i]:
                return False
    idx = range(n)
    for size in range(1, n + 1):
        for sub in combinations(idx, size):
            minor = tuple(tuple(matrix[i][j] for j in sub) for i in sub)
            if det(minor) < 0:
                return False
    return True


def check_positivity(form, kind=PositivityKind.POSITIVE):
    """Exact positivity test for constant-coefficient forms.

    Supported bidegrees are (0,0), (1,1), (n-1,n-1) and (n,n), where
    the three positivity notions coincide; the kind argument therefore
    selects no separate test.
    """
    if not isinstance(kind, PositivityKind):
        kind = PositivityKind(kind)
    if not form.is_global():
        raise SuperformError("positivity test expects a global form")
    n = form.ambient_dim
    p, q = form.p, form.q
    for poly in form.terms.values():
        if not poly.is_constant():
            raise SuperformError("positivity test needs constant coefficients")
    if (p, q) == (0, 0):
        c = form.terms.get(((), ()), Polynomial(n, {}))
        return (c.constant_value() if form.terms else QZERO) >= 0
    if (p, q) == (n, n):
        val = sharp_coefficient(form)
        return (val.constant_value() if not val.is_zero() else QZERO) >= 0
    if (p, q) == (1, 1):
        return _is_psd(_constant_matrix(form))
    if (p, q) == (n - 1, n - 1) and n >= 2:
        rows = []
        for k in range(n):
            row = []
            dk = Superform.dprime_generator(n, k)
            for l in range(n):
                dl = Superform.dsecond_generator(n, l)
                prod = wedge(form, wedge(dk, dl))
                val = sharp_coefficient(prod)
                row.append(val.constant_value() if not val.is_zero() else QZERO)
            rows.append(tuple(row))
        return _is_psd(tuple(rows))
    raise UnsupportedBidegree(
        "positivity is only decided in bidegrees (0,0), (1,1), (n-1,n-1), (n,n)")
