"""Dense exact linear algebra over the rationals.

Matrices are lists of rows, entries are Fraction (ints are accepted and
coerced).  Everything here is small and dense; no pivoting heuristics beyond
"first nonzero".
"""

from fractions import Fraction

F = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def zeros(r, c):
    return [[ZERO] * c for _ in range(r)]


def _primitive(row, gcd):
    g = 0
    for x in row:
        if x:
            ax = -x if x < 0 else x
            if ax == 1:
                return row
            g = gcd(g, ax)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


def identity(n):
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = ONE
    return m


def copy_mat(a):
    return [row[:] for row in a]


def shape(a):
    return (len(a), len(a[0]) if a else 0)


def mat_mul(a, b):
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        if ca == 0 or rb == 0:
            # a zero dimension was flattened away; the product is zero
            return zeros(ra, cb)
        raise ValueError(f"shape mismatch {ra}x{ca} * {rb}x{cb}")
    out = zeros(ra, cb)
    for i in range(ra):
        ai = a[i]
        oi = out[i]
        for k in range(ca):
            x = ai[k]
            if x:
                bk = b[k]
                for j in range(cb):
                    if bk[j]:
                        oi[j] += x * bk[j]
    return out


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scal(c, a):
    c = frac(c)
    return [[c * x for x in row] for row in a]


def mat_neg(a):
    return [[-x for x in row] for row in a]


def transpose(a):
    r, c = shape(a)
    return [[a[i][j] for i in range(r)] for j in range(c)]


def is_zero_mat(a):
    return all(not x for row in a for x in row)


def mat_eq(a, b):
    return shape(a) == shape(b) and all(ra == rb for ra, rb in zip(a, b))


def mat_vec(a, v):
    return [sum((x * y for x, y in zip(row, v)), ZERO) for row in a]


def hstack(mats):
    mats = [m for m in mats if shape(m)[1] > 0 or shape(m)[0] > 0]
    if not mats:
        return []
    r = len(mats[0])
    out = []
    for i in range(r):
        row = []
        for m in mats:
            row.extend(m[i])
        out.append(row)
    return out


def vstack(mats):
    out = []
    for m in mats:
        out.extend(copy_mat(m))
    return out


def block_matrix(blocks):
    """Assemble from a grid of blocks (lists of lists of matrices)."""
    rows = []
    for brow in blocks:
        rows.append(hstack(brow))
    return vstack([r for r in rows])


def rref(a):
    """Row-reduce a copy of `a`; return (reduced matrix, pivot column list).

    Rows are scaled to primitive integer vectors and eliminated
    fraction-free (Bareiss); the reduced form is reconstituted in Fractions
    at the end.  The canonical RREF is invariant under row scaling.
    """
    from math import gcd
    r = len(a)
    c = len(a[0]) if a else 0
    if r == 0 or c == 0:
        return [list(row) for row in a], []
    m = []
    for row in a:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                d = x.denominator
                if d != 1:
                    den = den * d // gcd(den, d)
        iv = [int(x * den) if den != 1 else int(x) for x in row]
        g = 0
        for x in iv:
            if x:
                g = gcd(g, abs(x))
        if g > 1:
            iv = [x // g for x in iv]
        m.append(iv)
    pivots = []
    pr = 0
    for pc in range(c):
        pivot_row = None
        for i in range(pr, r):
            if m[i][pc]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[pr], m[pivot_row] = m[pivot_row], m[pr]
        p = m[pr][pc]
        mp = m[pr]
        for i in range(pr + 1, r):
            q = m[i][pc]
            if q:
                mi = m[i]
                new = [p * mi[j] - q * mp[j] for j in range(c)]
                m[i] = _primitive(new, gcd)
        pivots.append(pc)
        pr += 1
        if pr == r:
            break
    # trim coefficient growth and back-substitute upwards in Fractions
    out = [[ZERO] * c for _ in range(r)]
    reduced = []
    for k in range(len(pivots) - 1, -1, -1):
        pc = pivots[k]
        row = m[k]
        g = 0
        for x in row:
            if x:
                g = gcd(g, abs(x))
        if g > 1:
            row = [x // g for x in row]
        frow = [Fraction(x, row[pc]) for x in row]
        for (pc2, frow2) in reduced:
            f = frow[pc2]
            if f:
                frow = [x - f * y for x, y in zip(frow, frow2)]
        reduced.append((pc, frow))
    reduced.reverse()
    for k, (pc, frow) in enumerate(reduced):
        out[k] = frow
    return out, pivots


def rank(a):
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a):
    """Basis (list of vectors) of the right kernel of `a`."""
    r, c = shape(a)
    if c == 0:
        return []
    if r == 0:
        return [[ONE if j == i else ZERO for j in range(c)] for i in range(c)]
    m, pivots = rref(a)
    pivset = set(pivots)
    free = [j for j in range(c) if j not in pivset]
    basis = []
    for fcol in free:
        v = [ZERO] * c
        v[fcol] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fcol]
        basis.append(v)
    return basis


def solve(a, b):
    """One solution x of A x = b (vectors), or None."""
    r, c = shape(a)
    if len(b) != r:
        raise ValueError("rhs length mismatch")
    aug = [a[i][:] + [frac(b[i])] for i in range(r)]
    m, pivots = rref(aug)
    if c in pivots:
        return None
    x = [ZERO] * c
    for i, pc in enumerate(pivots):
        x[pc] = m[i][c]
    return x


def solve_matrix(a, b):
    """One solution X of A X = B (matrix rhs), or None."""
    r, c = shape(a)
    rb, cb = shape(b)
    if rb != r:
        raise ValueError("rhs shape mismatch")
    cols = []
    aug = [a[i][:] + [frac(x) for x in b[i]] for i in range(r)]
    m, pivots = rref(aug)
    if any(p >= c for p in pivots):
        return None
    x = zeros(c, cb)
    for i, pc in enumerate(pivots):
        for j in range(cb):
            x[pc][j] = m[i][c + j]
    return x


def inverse(a):
    r, c = shape(a)
    if r != c:
        return None
    aug = [a[i][:] + identity(r)[i] for i in range(r)]
    m, pivots = rref(aug)
    if pivots != list(range(r)):
        return None
    return [row[r:] for row in m]


def det(a):
    r, c = shape(a)
    if r != c:
        raise ValueError("det of non-square matrix")
    m = [[frac(x) for x in row] for row in a]
    d = ONE
    for pc in range(r):
        piv = None
        for i in range(pc, r):
            if m[i][pc]:
                piv = i
                break
        if piv is None:
            return ZERO
        if piv != pc:
            m[pc], m[piv] = m[piv], m[pc]
            d = -d
        d *= m[pc][pc]
        inv = ONE / m[pc][pc]
        for i in range(pc + 1, r):
            if m[i][pc]:
                f = m[i][pc] * inv
                for j in range(pc, r):
                    m[i][j] -= f * m[pc][j]
    return d


class RowSpace:
    """A subspace of Q^n kept in reduced row echelon form.

    Supports incremental span growth, membership tests and coordinates of a
    vector relative to an explicit generating list.
    """

    def __init__(self, n, rows=None):
        self.n = n
        self.rows = []       # rref rows
        self.pivots = []
        if rows:
            for v in rows:
                self.add(v)

    @property
    def dim(self):
        return len(self.rows)

    def reduce(self, v):
        """Reduce v against current rows; returns the remainder."""
        v = [frac(x) for x in v]
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                f = v[p]
                for j in range(self.n):
                    if row[j]:
                        v[j] -= f * row[j]
        return v

    def add(self, v):
        """Add v to the span; returns True if the dimension grew."""
        v = self.reduce(v)
        p = next((j for j, x in enumerate(v) if x), None)
        if p is None:
            return False
        inv = ONE / v[p]
        v = [x * inv for x in v]
        for row in self.rows:
            if row[p]:
                f = row[p]
                for j in range(self.n):
                    if v[j]:
                        row[j] -= f * v[j]
        k = 0
        while k < len(self.pivots) and self.pivots[k] < p:
            k += 1
        self.rows.insert(k, v)
        self.pivots.insert(k, p)
        return True

    def contains(self, v):
        return all(not x for x in self.reduce(v))

    def basis(self):
        return [row[:] for row in self.rows]


def coords_in_span(gens, v):
    """Coordinates of v in the span of `gens` (list of vectors), or None."""
    if not gens:
        return None if any(frac(x) for x in v) else []
    a = transpose(gens)
    return solve(a, v)


def intersect_rowspaces(a_rows, b_rows, n):
    """Basis of the intersection of two row-span subspaces of Q^n."""
    if not a_rows or not b_rows:
        return []
    stacked = [list(r) for r in a_rows] + [list(r) for r in b_rows]
    ker = nullspace(transpose(stacked))
    out = RowSpace(n)
    for lam in ker:
        v = [ZERO] * n
        for c, row in zip(lam[: len(a_rows)], a_rows):
            if c:
                for j in range(n):
                    v[j] += c * row[j]
        out.add(v)
    return out.basis()
