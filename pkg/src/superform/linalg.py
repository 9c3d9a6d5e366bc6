"""Exact linear algebra over the rationals.

Vectors are tuples of ``Fraction``, matrices are tuples of row tuples.
Everything here is pure and allocation-light; sizes stay at desk scale
(ambient dimension <= 4, a few dozen rows), so plain fraction Gaussian
elimination is fast enough and always exact.
"""

from fractions import Fraction
from itertools import combinations
from math import gcd

Q = Fraction

QZERO = Q(0)
QONE = Q(1)


def frac(x):
    """Coerce ints, strings like '3/4' and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Q(x)
    if isinstance(x, str):
        return Q(x)
    if isinstance(x, float):
        raise TypeError("floats are not allowed in exact data: %r" % (x,))
    raise TypeError("cannot interpret %r as a rational" % (x,))


def vec(xs):
    return tuple(frac(x) for x in xs)


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u):
    return tuple(c * a for a in u)


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), QZERO)


def is_zero_vec(u):
    return all(a == 0 for a in u)


def mat_vec(m, v):
    return tuple(dot(row, v) for row in m)


def transpose(m):
    return tuple(zip(*m)) if m else ()


def rref(rows):
    """Reduced row echelon form.  Returns (rref rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return (), ()
    nrows, ncols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def rank(rows):
    return len(rref(rows)[0])


def nullspace(rows, ncols=None):
    """Basis of {x : rows . x = 0} as tuples of Fractions."""
    if not rows:
        if ncols is None:
            raise ValueError("ncols needed for empty matrix")
        return tuple(tuple(QONE if j == i else QZERO for j in range(ncols))
                     for i in range(ncols))
    ncols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [QZERO] * ncols
        v[f] = QONE
        for i, p in enumerate(pivots):
            v[p] = -red[i][f]
        basis.append(tuple(v))
    return tuple(basis)


def solve(rows, rhs):
    """One exact solution of rows . x = rhs, or None if inconsistent."""
    if not rows:
        return None
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    for row in red:
        if all(x == 0 for x in row[:-1]) and row[-1] != 0:
            return None
    x = [QZERO] * ncols
    for i, p in enumerate(pivots):
        if p == ncols:
            return None
        x[p] = red[i][-1]
    return tuple(x)


def det(rows):
    """Determinant by fraction Gaussian elimination."""
    n = len(rows)
    m = [list(r) for r in rows]
    d = QONE
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pr is None:
            return QZERO
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            d = -d
        d *= m[c][c]
        inv = QONE / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return d


def inverse(rows):
    n = len(rows)
    aug = [list(r) + [QONE if j == i else QZERO for j in range(n)]
           for i, r in enumerate(rows)]
    red, pivots = rref(aug)
    if list(pivots) != list(range(n)):
        raise ValueError("matrix is singular")
    return tuple(tuple(row[n:]) for row in red)


def primitive_integer(v):
    """Scale a rational vector to a primitive integer vector (same ray)."""
    if is_zero_vec(v):
        return tuple(0 for _ in v)
    lcm = 1
    for x in v:
        lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in v]
    g = 0
    for a in ints:
        g = gcd(g, abs(a))
    return tuple(a // g for a in ints)


def scale_to_integer(rows):
    """Clear denominators of each row, returning integer rows."""
    out = []
    for r in rows:
        lcm = 1
        for x in r:
            lcm = lcm * x.denominator // gcd(lcm, x.denominator)
        out.append(tuple(int(x * lcm) for x in r))
    return tuple(out)


# ---------------------------------------------------------------------------
# integer lattice routines (Hermite normal form)

def _col_reduce(m, ncols):
    """Column-style HNF; returns (H, U) with M @ U = H, U unimodular."""
    nrows = len(m)
    h = [list(r) for r in m]
    u = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def col_op_swap(a, b):
        for row in h:
            row[a], row[b] = row[b], row[a]
        for row in u:
            row[a], row[b] = row[b], row[a]

    def col_op_add(dst, src, k):
        for row in h:
            row[dst] += k * row[src]
        for row in u:
            row[dst] += k * row[src]

    def col_op_neg(c):
        for row in h:
            row[c] = -row[c]
        for row in u:
            row[c] = -row[c]

    pivot_col = 0
    for r in range(nrows):
        while True:
            nz = [c for c in range(pivot_col, ncols) if h[r][c] != 0]
            if not nz:
                break
            if len(nz) == 1:
                c = nz[0]
                if c != pivot_col:
                    col_op_swap(c, pivot_col)
                if h[r][pivot_col] < 0:
                    col_op_neg(pivot_col)
                pivot_col += 1
                break
            c0 = min(nz, key=lambda c: abs(h[r][c]))
            for c in nz:
                if c != c0:
                    col_op_add(c, c0, -(h[r][c] // h[r][c0]))
        if pivot_col == ncols:
            break
    return h, u


def integer_kernel(int_rows, ncols):
    """Basis of the saturated lattice {x in Z^ncols : int_rows . x = 0}."""
    if not int_rows:
        return tuple(tuple(1 if j == i else 0 for j in range(ncols))
                     for i in range(ncols))
    h, u = _col_reduce(int_rows, ncols)
    kernel = []
    for c in range(ncols):
        if all(h[r][c] == 0 for r in range(len(h))):
            kernel.append(tuple(u[r][c] for r in range(ncols)))
    return tuple(kernel)


def row_hnf(int_rows):
    """Row-style Hermite normal form; canonical basis of the row lattice."""
    rows = [list(r) for r in int_rows if any(x != 0 for x in r)]
    if not rows:
        return ()
    ncols = len(rows[0])
    out = []
    col = 0
    while rows and col < ncols:
        sel = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        if not sel:
            col += 1
            continue
        while len(sel) > 1:
            sel.sort(key=lambda r: abs(r[col]))
            base = sel[0]
            reduced = [base]
            for r in sel[1:]:
                k = r[col] // base[col]
                r2 = [a - k * b for a, b in zip(r, base)]
                if r2[col] != 0:
                    reduced.append(r2)
                elif any(x != 0 for x in r2):
                    rest.append(r2)
            sel = reduced
        pivot = sel[0]
        if pivot[col] < 0:
            pivot = [-x for x in pivot]
        out.append(pivot)
        rows = rest
        col += 1
    # reduce entries above each pivot for uniqueness
    for i in range(len(out) - 1, -1, -1):
        pc = next(j for j, x in enumerate(out[i]) if x != 0)
        pv = out[i][pc]
        for k in range(i):
            q = out[k][pc] // pv
            if q:
                out[k] = [a - q * b for a, b in zip(out[k], out[i])]
    return tuple(tuple(r) for r in out)


def lattice_basis_of_span(direction_vectors, ambient_dim):
    """Canonical basis of span(direction_vectors) intersected with Z^r.

    The span is taken over Q; the returned primitive integer vectors
    generate the saturated lattice, in Hermite-normal order.
    """
    dirs = [v for v in direction_vectors if not is_zero_vec(v)]
    if not dirs:
        return ()
    # orthogonal complement of the span, as integer rows
    comp = nullspace(tuple(dirs), ambient_dim)
    comp_int = scale_to_integer(comp)
    kernel = integer_kernel(comp_int, ambient_dim)
    return tuple(tuple(x) for x in row_hnf(kernel))


# ---------------------------------------------------------------------------
# exterior algebra coordinates

def index_subsets(r, n):
    """Strictly increasing n-subsets of range(r), lexicographic."""
    return tuple(combinations(range(r), n))


def wedge_coordinates(vectors, ambient_dim):
    """Coordinates of v1 ^ ... ^ vn in the lexicographic exterior basis."""
    n = len(vectors)
    coords = []
    for subset in index_subsets(ambient_dim, n):
        minor = tuple(tuple(v[i] for i in subset) for v in vectors)
        coords.append(det(minor) if n else QONE)
    return tuple(coords)


def exterior_apply(matrix, coords, n, dim_in, dim_out):
    """Apply the n-th exterior power of a linear map to a multivector.

    ``matrix`` is dim_out x dim_in; ``coords`` are coordinates in the
    lexicographic exterior basis of Lambda^n(Q^dim_in).
    """
    in_subsets = index_subsets(dim_in, n)
    out = []
    for ksub in index_subsets(dim_out, n):
        acc = QZERO
        for c, jsub in zip(coords, in_subsets):
            if c == 0:
                continue
            minor = tuple(tuple(matrix[i][j] for j in jsub) for i in ksub)
            acc += c * det(minor)
        out.append(acc)
    return tuple(out)
