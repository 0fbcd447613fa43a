"""Bounded complexes of projectives over linear A_n (arrows i+1 -> i).

Hom(P_i, P_j) is one-dimensional exactly when i <= j, spanned by the
canonical inclusion M[1,i] -> M[1,j]; canonical generators compose to
canonical generators.  A complex is a dict degree -> list of labels
(label i means P_i) plus differential matrices of scalars whose (r, c)
entry may be nonzero only when label[c] <= label[r].

This is the computational model of the bounded derived category: every
indecomposable is (up to shift) the two-term resolution of an interval
module, and mapping cones are honest mapping cones.
"""

from fractions import Fraction

from . import ratlin as rl
from . import cover
from .quiver import AlgebraError

F = Fraction


class Complex:
    def __init__(self, n, terms, diffs, check=True):
        self.n = n
        self.terms = {d: list(t) for d, t in terms.items() if t}
        self.diffs = {}
        for d in self.terms:
            if d + 1 in self.terms:
                m = diffs.get(d)
                if m is None:
                    m = rl.zeros(len(self.terms[d + 1]), len(self.terms[d]))
                self.diffs[d] = m
        if check:
            self.validate()

    def degrees(self):
        return sorted(self.terms)

    def rank(self, d):
        return len(self.terms.get(d, []))

    def diff(self, d):
        if d in self.diffs:
            return self.diffs[d]
        return rl.zeros(self.rank(d + 1), self.rank(d))

    def is_zero(self):
        return not self.terms

    def total_rank(self):
        return sum(len(t) for t in self.terms.values())

    def validate(self):
        for d, m in self.diffs.items():
            src, tgt = self.terms[d], self.terms.get(d + 1, [])
            assert rl.shape(m) == (len(tgt), len(src)), f"diff shape at {d}"
            for r in range(len(tgt)):
                for c in range(len(src)):
                    if m[r][c] and src[c] > tgt[r]:
                        raise AlgebraError("differential violates Hom support")
        for d in self.terms:
            if d + 2 in self.terms and d + 1 in self.terms:
                if not rl.is_zero_mat(rl.mat_mul(self.diff(d + 1), self.diff(d))):
                    raise AlgebraError("d^2 != 0")

    def shift(self, k):
        """X[k]: degree d gets X^{d+k}; differential picks up (-1)^k."""
        terms = {d - k: t for d, t in self.terms.items()}
        sgn = F(-1) ** (k % 2)
        diffs = {d - k: rl.mat_scal(sgn, m) for d, m in self.diffs.items()}
        return Complex(self.n, terms, diffs, check=False)

    def direct_sum(self, other):
        terms = {}
        diffs = {}
        degs = set(self.terms) | set(other.terms)
        for d in degs:
            terms[d] = self.terms.get(d, []) + other.terms.get(d, [])
        for d in degs:
            if d + 1 in terms:
                r1, c1 = self.rank(d + 1), self.rank(d)
                r2, c2 = other.rank(d + 1), other.rank(d)
                m = rl.zeros(r1 + r2, c1 + c2)
                a, b = self.diff(d), other.diff(d)
                for i in range(r1):
                    for j in range(c1):
                        m[i][j] = a[i][j]
                for i in range(r2):
                    for j in range(c2):
                        m[r1 + i][c1 + j] = b[i][j]
                diffs[d] = m
        return Complex(self.n, terms, diffs, check=False)

    def __repr__(self):
        return "Cx(" + ", ".join(f"{d}:{t}" for d, t in sorted(self.terms.items())) + ")"


class ChainMap:
    """Degreewise matrices f[d]: X^d -> Y^d."""

    def __init__(self, src, tgt, comps, check=True):
        self.src = src
        self.tgt = tgt
        self.comps = {}
        for d in src.terms:
            m = comps.get(d)
            if m is None:
                m = rl.zeros(tgt.rank(d), src.rank(d))
            self.comps[d] = m
        if check:
            assert self.is_chain_map()

    def comp(self, d):
        if d in self.comps:
            return self.comps[d]
        return rl.zeros(self.tgt.rank(d), self.src.rank(d))

    def is_chain_map(self):
        for d in set(list(self.src.terms) + list(self.tgt.terms)):
            lhs = rl.mat_mul(self.comp(d + 1), self.src.diff(d))
            rhs = rl.mat_mul(self.tgt.diff(d), self.comp(d))
            if not rl.mat_eq(lhs, rhs):
                return False
        return True

    def compose(self, other):
        comps = {}
        for d in other.src.terms:
            if (other.src.rank(d) == 0 or self.tgt.rank(d) == 0
                    or other.tgt.rank(d) == 0):
                comps[d] = rl.zeros(self.tgt.rank(d), other.src.rank(d))
            else:
                comps[d] = rl.mat_mul(self.comp(d), other.comp(d))
        return ChainMap(other.src, self.tgt, comps, check=False)

    def add(self, other):
        comps = {d: rl.mat_add(self.comp(d), other.comp(d)) for d in self.src.terms}
        return ChainMap(self.src, self.tgt, comps, check=False)

    def scal(self, c):
        return ChainMap(self.src, self.tgt,
                        {d: rl.mat_scal(c, m) for d, m in self.comps.items()},
                        check=False)

    def is_zero(self):
        return all(rl.is_zero_mat(m) for m in self.comps.values())

    def shift(self, k):
        comps = {d - k: m for d, m in self.comps.items()}
        return ChainMap(self.src.shift(k), self.tgt.shift(k), comps, check=False)

    def flatten(self):
        out = []
        for d in sorted(self.src.terms):
            for row in self.comp(d):
                out.extend(row)
        return out


def zero_chain_map(X, Y):
    return ChainMap(X, Y, {}, check=False)


def identity_chain_map(X):
    return ChainMap(X, X, {d: rl.identity(X.rank(d)) for d in X.terms}, check=False)


def chain_map_from_flat(X, Y, flat):
    comps = {}
    k = 0
    for d in sorted(X.terms):
        r, c = Y.rank(d), X.rank(d)
        m = rl.zeros(r, c)
        for i in range(r):
            for j in range(c):
                m[i][j] = flat[k]
                k += 1
        comps[d] = m
    return ChainMap(X, Y, comps, check=False)


def _entry_unknowns(X, Y):
    """Index map for the entries of a degreewise map, with support mask."""
    idx = {}
    k = 0
    for d in sorted(X.terms):
        for i in range(Y.rank(d)):
            for j in range(X.rank(d)):
                idx[(d, i, j)] = k
                k += 1
    return idx, k


def chain_maps(X, Y):
    """Basis of honest chain maps X -> Y."""
    idx, nunk = _entry_unknowns(X, Y)
    if nunk == 0:
        return []
    rows = []
    # support constraints
    for (d, i, j), k in idx.items():
        if X.terms[d][j] > Y.terms.get(d, [0] * (i + 1))[i]:
            row = [F(0)] * nunk
            row[k] = F(1)
            rows.append(row)
    # commutation with differentials
    for d in sorted(set(list(X.terms) + [dd - 1 for dd in Y.terms])):
        dx, dy = X.diff(d), Y.diff(d)
        for i in range(Y.rank(d + 1)):
            for j in range(X.rank(d)):
                row = [F(0)] * nunk
                for l in range(X.rank(d + 1)):
                    if dx[l][j] and (d + 1, i, l) in idx:
                        row[idx[(d + 1, i, l)]] += dx[l][j]
                for l in range(Y.rank(d)):
                    if dy[i][l] and (d, l, j) in idx:
                        row[idx[(d, l, j)]] -= dy[i][l]
                if any(row):
                    rows.append(row)
    sols = rl.nullspace(rows) if rows else rl.identity(nunk)
    out = []
    for v in sols:
        comps = {}
        for d in sorted(X.terms):
            r, c = Y.rank(d), X.rank(d)
            m = rl.zeros(r, c)
            for i in range(r):
                for j in range(c):
                    m[i][j] = v[idx[(d, i, j)]]
            comps[d] = m
        out.append(ChainMap(X, Y, comps, check=False))
    return out


def homotopy_span(X, Y):
    """Spanning chain maps of the null-homotopic subspace of Hom(X, Y)."""
    out = []
    for d in sorted(X.terms):
        for i in range(Y.rank(d - 1)):
            for j in range(X.rank(d)):
                if X.terms[d][j] > Y.terms[d - 1][i]:
                    continue
                # elementary homotopy h: X^d -> Y^{d-1} at (i, j)
                comps = {}
                for e in X.terms:
                    m = rl.zeros(Y.rank(e), X.rank(e))
                    comps[e] = m
                # d_Y h part: at degree d
                dy = Y.diff(d - 1)
                for r in range(Y.rank(d)):
                    if dy[r][i]:
                        comps[d][r][j] += dy[r][i]
                # h d_X part: at degree d-1
                dx = X.diff(d - 1)
                if d - 1 in X.terms:
                    for c in range(X.rank(d - 1)):
                        if dx[j][c]:
                            comps[d - 1][i][c] += dx[j][c]
                out.append(ChainMap(X, Y, comps, check=False))
    return out


class HomSpace:
    """Hom in the homotopy category: chain maps modulo null-homotopic."""

    def __init__(self, X, Y):
        self.X = X
        self.Y = Y
        all_maps = chain_maps(X, Y)
        htp = homotopy_span(X, Y)
        nflat = len(all_maps[0].flatten()) if all_maps else 0
        hspace = rl.RowSpace(nflat)
        for h in htp:
            hspace.add(h.flatten())
        self.basis = []
        self._span = rl.RowSpace(nflat)
        for h in htp:
            self._span.add(h.flatten())
        self._h_dim = self._span.dim
        for f in all_maps:
            if self._span.add(f.flatten()):
                self.basis.append(f)
        self._gens_flat = [f.flatten() for f in self.basis]
        self._hbasis = hspace.basis()

    @property
    def dim(self):
        return len(self.basis)

    def coords(self, f):
        """Coordinates of a chain map in the chosen basis, mod homotopy."""
        if not self.basis:
            return []
        gens = self._hbasis + self._gens_flat
        c = rl.coords_in_span(gens, f.flatten())
        if c is None:
            raise AlgebraError("map does not lie in the hom space")
        return c[len(self._hbasis):]

    def from_coords(self, coords):
        f = zero_chain_map(self.X, self.Y)
        for c, b in zip(coords, self.basis):
            if c:
                f = f.add(b.scal(c))
        return f


def cone(f):
    """Mapping cone with the canonical triangle maps.

    Returns (C, incl: Y -> C, proj: C -> X[1]).
    """
    X, Y = f.src, f.tgt
    n = X.n
    degs = sorted(set([d - 1 for d in X.terms] + list(Y.terms)))
    terms = {}
    for d in degs:
        terms[d] = list(X.terms.get(d + 1, [])) + list(Y.terms.get(d, []))
    diffs = {}
    for d in degs:
        if d + 1 not in terms:
            continue
        rX, cX = X.rank(d + 2), X.rank(d + 1)
        rY, cY = Y.rank(d + 1), Y.rank(d)
        m = rl.zeros(rX + rY, cX + cY)
        dx = X.diff(d + 1)
        for i in range(rX):
            for j in range(cX):
                m[i][j] = -dx[i][j]
        ff = f.comp(d + 1)
        for i in range(rY):
            for j in range(cX):
                m[rX + i][j] = ff[i][j]
        dy = Y.diff(d)
        for i in range(rY):
            for j in range(cY):
                m[rX + i][cX + j] = dy[i][j]
        diffs[d] = m
    C = Complex(n, terms, diffs, check=False)
    incl_comps = {}
    for d in Y.terms:
        m = rl.zeros(C.rank(d), Y.rank(d))
        off = X.rank(d + 1)
        for i in range(Y.rank(d)):
            m[off + i][i] = F(1)
        incl_comps[d] = m
    incl = ChainMap(Y, C, incl_comps, check=False)
    X1 = X.shift(1)
    proj_comps = {}
    for d in C.terms:
        m = rl.zeros(X1.rank(d), C.rank(d))
        for i in range(X.rank(d + 1)):
            m[i][i] = F(1)
        proj_comps[d] = m
    proj = ChainMap(C, X1, proj_comps, check=False)
    return C, incl, proj


def minimalize(X):
    """(X_red, f: X_red -> X, p: X -> X_red), homotopy equivalence.

    Gaussian elimination of invertible differential entries (same label,
    nonzero scalar).
    """
    cur = X
    f = identity_chain_map(X)
    p = identity_chain_map(X)
    while True:
        pivot = None
        for d in sorted(cur.terms):
            if d + 1 not in cur.terms:
                continue
            m = cur.diff(d)
            for r in range(cur.rank(d + 1)):
                for c in range(cur.rank(d)):
                    if m[r][c] and cur.terms[d][c] == cur.terms[d + 1][r]:
                        pivot = (d, r, c)
                        break
                if pivot:
                    break
            if pivot:
                break
        if pivot is None:
            return cur, f, p
        d, r, c = pivot
        red, fstep, pstep = _eliminate(cur, d, r, c)
        cur = red
        f = f.compose(fstep)
        p = pstep.compose(p)


def _eliminate(X, d, r, c):
    """Remove summand c of X^d and r of X^{d+1} along an invertible entry."""
    n = X.n
    m = X.diff(d)
    a = m[r][c]
    ainv = F(1) / a
    keep_c = [j for j in range(X.rank(d)) if j != c]
    keep_r = [i for i in range(X.rank(d + 1)) if i != r]
    terms = {e: list(t) for e, t in X.terms.items()}
    terms[d] = [X.terms[d][j] for j in keep_c]
    terms[d + 1] = [X.terms[d + 1][i] for i in keep_r]
    diffs = {}
    for e in X.terms:
        if e + 1 not in X.terms:
            continue
        de = X.diff(e)
        if e == d:
            new = rl.zeros(len(keep_r), len(keep_c))
            for ii, i in enumerate(keep_r):
                for jj, j in enumerate(keep_c):
                    new[ii][jj] = de[i][j] - de[i][c] * ainv * de[r][j]
            diffs[e] = new
        elif e == d - 1:
            new = [row[:] for row in de]
            new = [new[j] for j in keep_c]
            diffs[e] = new
        elif e == d + 1:
            new = [[row[i] for i in keep_r] for row in de]
            diffs[e] = new
        else:
            diffs[e] = [row[:] for row in de]
    red = Complex(n, terms, diffs, check=False)
    # f: red -> X
    fcomps = {}
    for e in red.terms:
        mm = rl.zeros(X.rank(e), red.rank(e))
        if e == d:
            for jj, j in enumerate(keep_c):
                mm[j][jj] = F(1)
                mm[c][jj] = -ainv * X.diff(d)[r][j]
        elif e == d + 1:
            for ii, i in enumerate(keep_r):
                mm[i][ii] = F(1)
        else:
            for i in range(X.rank(e)):
                mm[i][i] = F(1)
        fcomps[e] = mm
    fstep = ChainMap(red, X, fcomps, check=False)
    # p: X -> red
    pcomps = {}
    for e in X.terms:
        mm = rl.zeros(red.rank(e), X.rank(e))
        if e == d:
            for jj, j in enumerate(keep_c):
                mm[jj][j] = F(1)
        elif e == d + 1:
            for ii, i in enumerate(keep_r):
                mm[ii][i] = F(1)
                mm[ii][r] = -X.diff(d)[i][c] * ainv if False else mm[ii][r]
            # correction: p(t, r') = r' - c a^{-1} t on the X^{d+1} side
            for ii, i in enumerate(keep_r):
                mm[ii][r] = -X.diff(d)[i][c] * ainv
        else:
            for i in range(X.rank(e)):
                mm[i][i] = F(1)
        pcomps[e] = mm
    pstep = ChainMap(X, red, pcomps, check=False)
    return red, fstep, pstep


# ------------------------------------------------------------ indecomposables

def resolution_of_vertex(n, v):
    """Minimal complex of projectives for the ZA_n vertex v."""
    (a, b), d = cover.coord_to_interval(n, v)
    # module M[a,b] in degree 0: P_{a-1} -> P_b, then shift by d: degree -d
    terms = {}
    diffs = {}
    if a == 1:
        terms[-d] = [b]
    else:
        terms[-d - 1] = [a - 1]
        terms[-d] = [b]
        diffs[-d - 1] = [[F(1)]]
    return Complex(n, terms, diffs, check=False)


def classify_indecomposable(X):
    """ZA_n vertex of a minimal indecomposable complex."""
    degs = X.degrees()
    if len(degs) == 1:
        d = degs[0]
        assert X.rank(d) == 1
        b = X.terms[d][0]
        return cover.interval_to_coord(X.n, (1, b), -d)
    assert len(degs) == 2 and degs[1] == degs[0] + 1
    d0, d1 = degs
    assert X.rank(d0) == 1 and X.rank(d1) == 1
    x, b = X.terms[d0][0], X.terms[d1][0]
    assert X.diff(d0)[0][0] != 0 and x < b
    return cover.interval_to_coord(X.n, (x + 1, b), -d1)


def decompose_complex(X):
    """Split a minimal complex into indecomposables.

    Returns list of (vertex, u: piece -> X, v: X -> piece, piece).
    For our minimal complexes over A_n every indecomposable piece is a
    one- or two-term interval resolution.
    """
    if X.is_zero():
        return []
    pieces = _split_chain(X)
    out = []
    for (P, u, v) in pieces:
        out.append((classify_indecomposable(P), u, v, P))
    return out


def _split_chain(X, _depth=0):
    if _depth > 200:
        raise AlgebraError("complex splitting recursion too deep")
    if X.is_zero():
        return []
    ends = chain_maps(X, X)
    hs = HomSpace(X, X)
    # endomorphism algebra mod homotopy
    nb = hs.dim
    if nb == 1 and X.total_rank() <= 2:
        return [(X, identity_chain_map(X), identity_chain_map(X))]
    if nb == 1:
        # indecomposable but with more than 2 terms: unexpected over A_n
        raise AlgebraError("indecomposable complex with >2 terms")
    e = _find_chain_idempotent(X, hs)
    if e is None:
        raise AlgebraError("no splitting idempotent for complex")
    one = identity_chain_map(X)
    out = []
    for idem in (e, one.add(e.scal(F(-1)))):
        piece, u, v = _image_summand(X, idem)
        for (Q, u2, v2) in _split_chain(piece, _depth + 1):
            out.append((Q, u.compose(u2), v2.compose(v)))
    return out


def _find_chain_idempotent(X, hs):
    """Nontrivial honest idempotent chain endomorphism of X."""
    from .polyq import min_poly_of_matrix, squarefree_part, rational_roots, splitting_poly
    import random
    one = identity_chain_map(X)
    basis = hs.basis
    cands = list(basis)
    for i in range(min(4, len(basis))):
        for j in range(i + 1, min(5, len(basis))):
            cands.append(basis[i].add(basis[j]))
    rng = random.Random(11)
    for _ in range(40):
        f = zero_chain_map(X, X)
        for b in basis:
            cc = rng.randint(-2, 2)
            if cc:
                f = f.add(b.scal(F(cc)))
        cands.append(f)
    for x in cands:
        B = _total_endo_matrix(x)
        mp = min_poly_of_matrix(B)
        sf = squarefree_part(mp)
        for root in rational_roots(sf):
            coeffs = splitting_poly(sf, root)
            if coeffs is None:
                continue
            e = zero_chain_map(X, X)
            power = one
            for ccf in coeffs:
                if ccf:
                    e = e.add(power.scal(ccf))
                power = x.compose(power)
            e = _refine_chain_idempotent(e)
            if e is None or e.is_zero():
                continue
            if one.add(e.scal(F(-1))).is_zero():
                continue
            return e
    return None


def _refine_chain_idempotent(e, max_iter=80):
    for _ in range(max_iter):
        e2 = e.compose(e)
        if e2.add(e.scal(F(-1))).is_zero():
            return e
        e3 = e2.compose(e)
        e = e2.scal(F(3)).add(e3.scal(F(-2)))
    return None


def _total_endo_matrix(f):
    degs = sorted(f.src.terms)
    sizes = [f.src.rank(d) for d in degs]
    ntot = sum(sizes)
    B = rl.zeros(ntot, ntot)
    off = 0
    for d, s in zip(degs, sizes):
        m = f.comp(d)
        for i in range(s):
            for j in range(s):
                B[off + i][off + j] = m[i][j]
        off += s
    return B


def _image_summand(X, e):
    """(piece, u: piece -> X, v: X -> piece) for an idempotent chain map e."""
    n = X.n
    sel = {}
    terms = {}
    for d in X.terms:
        labels = X.terms[d]
        m = e.comp(d)
        # per-label top blocks are idempotent scalar matrices; select
        # independent columns labelwise
        chosen = []
        for lab in sorted(set(labels)):
            rows = [i for i, l in enumerate(labels) if l == lab]
            cols = rows
            block = [[m[i][j] for j in cols] for i in rows]
            space = rl.RowSpace(len(rows))
            for jj, j in enumerate(cols):
                colv = [block[ii][jj] for ii in range(len(rows))]
                if space.add(colv):
                    chosen.append(j)
        chosen.sort()
        sel[d] = chosen
        terms[d] = [labels[j] for j in chosen]
    # u = e[:, chosen]
    ucomps = {}
    for d in X.terms:
        m = e.comp(d)
        ucomps[d] = [[m[i][j] for j in sel[d]] for i in range(X.rank(d))]
    # v: solve v u = id with support mask, then v := v e
    vcomps = {}
    for d in X.terms:
        u = ucomps[d]
        k = len(sel[d])
        if k == 0:
            vcomps[d] = rl.zeros(0, X.rank(d))
            continue
        # unknown v is k x rank(d); v u = id_k
        nu = X.rank(d)
        rows = []
        rhs = []
        for i in range(k):
            for j in range(k):
                row = [F(0)] * (k * nu)
                for l in range(nu):
                    if u[l][j]:
                        row[i * nu + l] += u[l][j]
                rows.append(row)
                rhs.append(F(1) if i == j else F(0))
        # support: piece label terms[d][i] must be >= X label for nonzero entry
        for i in range(k):
            for l in range(nu):
                if X.terms[d][l] > terms[d][i]:
                    row = [F(0)] * (k * nu)
                    row[i * nu + l] = F(1)
                    rows.append(row)
                    rhs.append(F(0))
        aug = [rows[t] + [rhs[t]] for t in range(len(rows))]
        mrr, piv = rl.rref(aug)
        if (k * nu) in piv:
            raise AlgebraError("no retraction for image summand")
        flat = [F(0)] * (k * nu)
        for t, pc in enumerate(piv):
            flat[pc] = mrr[t][k * nu]
        vcomps[d] = [[flat[i * nu + l] for l in range(nu)] for i in range(k)]
    piece_diffs = {}
    for d in terms:
        if d + 1 in terms:
            # d_piece = v_{d+1} d_X u_d
            piece_diffs[d] = rl.mat_mul(vcomps[d + 1],
                                        rl.mat_mul(X.diff(d), ucomps[d]))
    piece = Complex(n, terms, piece_diffs, check=False)
    u = ChainMap(piece, X, {d: ucomps[d] for d in piece.terms}, check=False)
    vraw = ChainMap(X, piece, vcomps, check=False)
    v = vraw.compose(e)
    return piece, u, v


# ----------------------------------------------------------------- functors

def nu_complex(X):
    """Nakayama functor: P_i -> (P_{i-1} -> P_n), totalized."""
    n = X.n
    # layout: for column (d, c) with label i: P_n at total degree d (slot A),
    # P_{i-1} at degree d-1 (slot B, absent for i = 1)
    slots = {}   # (d, c, 'A'|'B') -> (degree, position)
    terms = {}
    for d in sorted(X.terms):
        for c, lab in enumerate(X.terms[d]):
            terms.setdefault(d, []).append((d, c, "A"))
            if lab > 1:
                terms.setdefault(d - 1, []).append((d, c, "B"))
    deg_lists = {e: terms[e] for e in terms}
    labels = {}
    pos = {}
    final_terms = {}
    for e in sorted(deg_lists):
        final_terms[e] = []
        for slot in deg_lists[e]:
            d, c, kind = slot
            lab = X.terms[d][c]
            final_terms[e].append(n if kind == "A" else lab - 1)
            pos[slot] = (e, len(final_terms[e]) - 1)
    diffs = {}
    for e in sorted(final_terms):
        if e + 1 not in final_terms:
            continue
        diffs[e] = rl.zeros(len(final_terms[e + 1]), len(final_terms[e]))

    def add_entry(src_slot, tgt_slot, val):
        (es, ps), (et, pt) = pos[src_slot], pos[tgt_slot]
        assert et == es + 1
        diffs[es][pt][ps] += val

    for d in sorted(X.terms):
        m = X.diff(d)
        for c, lab in enumerate(X.terms[d]):
            # vertical: B -> A with sign (-1)^d
            if lab > 1:
                add_entry((d, c, "B"), (d, c, "A"), F(-1) ** (d % 2))
            # horizontal nu(d): to (d+1, r)
            if d + 1 in X.terms:
                for r, lab2 in enumerate(X.terms[d + 1]):
                    val = m[r][c]
                    if val:
                        add_entry((d, c, "A"), (d + 1, r, "A"), val)
                        if lab > 1 and lab2 > 1:
                            add_entry((d, c, "B"), (d + 1, r, "B"), val)
    out = Complex(n, final_terms, diffs, check=False)
    return out, pos


def nu_chain_map(f):
    """nu applied to a chain map, compatible with nu_complex layouts."""
    X, Y = f.src, f.tgt
    nX, posX = nu_complex(X)
    nY, posY = nu_complex(Y)
    comps = {e: rl.zeros(nY.rank(e), nX.rank(e)) for e in nX.terms}
    for d in X.terms:
        m = f.comp(d)
        for c, lab in enumerate(X.terms[d]):
            for r, lab2 in enumerate(Y.terms.get(d, [])):
                val = m[r][c]
                if not val:
                    continue
                eA, pA = posX[(d, c, "A")]
                eA2, pA2 = posY[(d, r, "A")]
                comps[eA][pA2][pA] += val
                if lab > 1 and lab2 > 1:
                    eB, pB = posX[(d, c, "B")]
                    eB2, pB2 = posY[(d, r, "B")]
                    comps[eB][pB2][pB] += val
    return ChainMap(nX, nY, comps, check=False)


def tau_complex(X):
    """tau = Sigma^{-1} nu (positive direction only)."""
    nX, _ = nu_complex(X)
    return nX.shift(-1)


def tau_chain_map(f):
    return nu_chain_map(f).shift(-1)


class OrbitFunctor:
    """F = tau^a Sigma^b with a >= 0, applied to complexes and chain maps."""

    def __init__(self, n, a, b):
        assert a >= 0
        self.n = n
        self.a = a
        self.b = b

    def vertex(self, v):
        v = cover.tau(self.n, v, self.a)
        return cover.sigma_pow(self.n, v, self.b)

    def on_complex(self, X):
        for _ in range(self.a):
            X = tau_complex(X)
        return X.shift(self.b)

    def on_map(self, f):
        for _ in range(self.a):
            f = tau_chain_map(f)
        return f.shift(self.b)
