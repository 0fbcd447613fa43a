"""Quiver algebras over Q and their finite-dimensional modules.

Paths are tuples of arrow indices in traversal order; the trivial path at
vertex v is Path(v, (), v).  Algebra multiplication mul(x, y) means "y then
x", matching composition of the matrices acting on modules.

Relations must be homogeneous in path length (every algebra used here is
length-graded); the basis is computed degreewise by row-reducing the relation
ideal, which is the "path rewriting to normal forms" of the interface: each
path gets a normal form supported on the non-pivot paths of its layer.
"""

from fractions import Fraction

from . import ratlin as rl
from .ratlin import RowSpace
from .polyq import min_poly_of_matrix, squarefree_part, rational_roots, splitting_poly

F = Fraction


class AlgebraError(Exception):
    pass


class InfiniteDimensional(AlgebraError):
    pass


class NotSelfInjective(AlgebraError):
    pass


class NonSplitField(AlgebraError):
    pass


class Path:
    __slots__ = ("src", "arrows", "tgt")

    def __init__(self, src, arrows, tgt):
        self.src = src
        self.arrows = tuple(arrows)
        self.tgt = tgt

    def __eq__(self, other):
        return self.src == other.src and self.arrows == other.arrows

    def __hash__(self):
        return hash((self.src, self.arrows))

    def __len__(self):
        return len(self.arrows)

    def __repr__(self):
        return f"Path({self.src}->{self.tgt}:{self.arrows})"


class QuiverAlgebra:
    """Path algebra of a finite quiver modulo homogeneous admissible relations."""

    def __init__(self, vertices, arrows, relations=(), max_path_len=64):
        self.vertex_names = list(vertices)
        self.nv = len(self.vertex_names)
        self._vidx = {v: i for i, v in enumerate(self.vertex_names)}
        self.arrow_names = []
        self.arrow_src = []
        self.arrow_tgt = []
        for (name, s, t) in arrows:
            self.arrow_names.append(name)
            self.arrow_src.append(self._vidx[s])
            self.arrow_tgt.append(self._vidx[t])
        self._aidx = {a: i for i, a in enumerate(self.arrow_names)}
        self.relations = []
        for rel in relations:
            self.relations.append(self._parse_relation(rel))
        self.max_path_len = max_path_len
        self._build_basis()
        self._selfinj = None
        self._proj_cache = {}
        self._inj_cache = {}

    def _parse_relation(self, rel):
        terms = {}
        length = src = tgt = None
        for path_names, coef in rel.items():
            arrs = tuple(self._aidx[a] for a in path_names)
            if len(arrs) < 2:
                raise AlgebraError("relations must lie in the arrow-ideal squared")
            for k in range(len(arrs) - 1):
                if self.arrow_tgt[arrs[k]] != self.arrow_src[arrs[k + 1]]:
                    raise AlgebraError("non-composable path in relation")
            p = Path(self.arrow_src[arrs[0]], arrs, self.arrow_tgt[arrs[-1]])
            if length is None:
                length, src, tgt = len(arrs), p.src, p.tgt
            elif (length, src, tgt) != (len(arrs), p.src, p.tgt):
                raise AlgebraError("relation terms must be parallel and length-homogeneous")
            terms[p] = terms.get(p, F(0)) + rl.frac(coef)
        return terms

    # ------------------------------------------------------------------ basis

    def _extend_paths(self, prev):
        out = []
        for p in prev:
            for a in range(len(self.arrow_names)):
                if self.arrow_src[a] == p.tgt:
                    out.append(Path(p.src, p.arrows + (a,), self.arrow_tgt[a]))
        return out

    def _build_basis(self):
        self.basis = []
        self.basis_by_len = []
        self._nf = {}
        self._layer_paths = [[Path(v, (), v) for v in range(self.nv)]]
        l = 0
        while True:
            cur = self._layer_paths[l]
            if len(cur) > 500000:
                raise InfiniteDimensional("path layer explosion")
            if l < 2:
                for p in cur:
                    self._nf[p] = [(len(self.basis), F(1))]
                    self.basis.append(p)
                self.basis_by_len.append(list(cur))
                layer_basis = cur
            else:
                index = {p: i for i, p in enumerate(cur)}
                space = RowSpace(len(cur))
                for rel in self.relations:
                    self._add_ideal_layer(space, rel, l, index)
                pivset = set(space.pivots)
                layer_basis = []
                pos_of = {}
                for i, p in enumerate(cur):
                    if i not in pivset:
                        pos_of[i] = len(self.basis) + len(layer_basis)
                        layer_basis.append(p)
                for i, p in enumerate(cur):
                    if i in pivset:
                        e = [F(0)] * len(cur)
                        e[i] = F(1)
                        rem = space.reduce(e)
                        self._nf[p] = [(pos_of[j], c) for j, c in enumerate(rem) if c]
                    else:
                        self._nf[p] = [(pos_of[i], F(1))]
                self.basis.extend(layer_basis)
                self.basis_by_len.append(layer_basis)
            if l >= 2 and not layer_basis:
                self.basis_by_len.pop()
                break
            l += 1
            if l > self.max_path_len:
                raise InfiniteDimensional(
                    f"normal forms did not close below length {self.max_path_len}")
            self._layer_paths.append(self._extend_paths(cur))
        self.dim = len(self.basis)
        self.basis_index = {p: i for i, p in enumerate(self.basis)}

    def _add_ideal_layer(self, space, rel, l, index):
        rel_len = len(next(iter(rel)).arrows)
        some = next(iter(rel))
        for llen in range(0, l - rel_len + 1):
            rlen = l - rel_len - llen
            if llen >= len(self._layer_paths) or rlen >= len(self._layer_paths):
                continue
            for left in self._layer_paths[llen]:
                if left.src != some.tgt:
                    continue
                for right in self._layer_paths[rlen]:
                    if right.tgt != some.src:
                        continue
                    vec = [F(0)] * len(index)
                    hit = False
                    for p, c in rel.items():
                        whole = Path(right.src, right.arrows + p.arrows + left.arrows,
                                     left.tgt)
                        if whole in index:
                            vec[index[whole]] += c
                            hit = True
                    if hit:
                        space.add(vec)

    # ------------------------------------------------------------- arithmetic

    def vertex_index(self, name):
        return self._vidx[name]

    def normal_form(self, path):
        """Normal form of a raw path as {basis_index: coef}."""
        if path in self._nf:
            return dict(self._nf[path])
        head = Path(path.src, path.arrows[:-1], self.arrow_src[path.arrows[-1]])
        out = {}
        for i, c in self.normal_form(head).items():
            bp = self.basis[i]
            ext = Path(bp.src, bp.arrows + (path.arrows[-1],), path.tgt)
            for j, c2 in self.normal_form(ext).items():
                out[j] = out.get(j, F(0)) + c * c2
        return {j: c for j, c in out.items() if c}

    def mul_basis(self, i, j):
        """basis[i] * basis[j] = (path j then path i), as {basis_index: coef}."""
        p, q = self.basis[i], self.basis[j]
        if q.tgt != p.src:
            return {}
        return self.normal_form(Path(q.src, q.arrows + p.arrows, p.tgt))

    def check_associative(self):
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.mul_basis(i, j)
                for k in range(self.dim):
                    lhs = {}
                    for t, c in ij.items():
                        for u, d in self.mul_basis(t, k).items():
                            lhs[u] = lhs.get(u, F(0)) + c * d
                    rhs = {}
                    for t, c in self.mul_basis(j, k).items():
                        for u, d in self.mul_basis(i, t).items():
                            rhs[u] = rhs.get(u, F(0)) + c * d
                    if {a: b for a, b in lhs.items() if b} != \
                       {a: b for a, b in rhs.items() if b}:
                        return False
        return True

    # ------------------------------------------------- distinguished modules

    def projective(self, v):
        """Left projective P_v, basis: paths with source v."""
        if v in self._proj_cache:
            return self._proj_cache[v]
        vert_basis = [[] for _ in range(self.nv)]
        for i, p in enumerate(self.basis):
            if p.src == v:
                vert_basis[p.tgt].append(i)
        dims = [len(b) for b in vert_basis]
        pos = [{bi: k for k, bi in enumerate(bs)} for bs in vert_basis]
        mats = {}
        for a in range(len(self.arrow_names)):
            s, t = self.arrow_src[a], self.arrow_tgt[a]
            m = rl.zeros(dims[t], dims[s])
            for k, bi in enumerate(vert_basis[s]):
                bp = self.basis[bi]
                for j, c in self.normal_form(Path(v, bp.arrows + (a,), t)).items():
                    m[pos[t][j]][k] = c
            mats[a] = m
        M = Module(self, dims, mats, check=False)
        M.proj_parts = [v]
        self._proj_cache[v] = M
        return M

    def injective(self, v):
        """Left injective I_v = D(paths with target v)."""
        if v in self._inj_cache:
            return self._inj_cache[v]
        into = [[] for _ in range(self.nv)]
        for i, p in enumerate(self.basis):
            if p.tgt == v:
                into[p.src].append(i)
        dims = [len(b) for b in into]
        pos = [{bi: k for k, bi in enumerate(bs)} for bs in into]
        mats = {}
        for a in range(len(self.arrow_names)):
            s, t = self.arrow_src[a], self.arrow_tgt[a]
            # dual of T: paths(t->v) -> paths(s->v), q -> (a then q)
            rm = rl.zeros(dims[s], dims[t])
            for col, q_idx in enumerate(into[t]):
                q = self.basis[q_idx]
                for j, c in self.normal_form(Path(s, (a,) + q.arrows, v)).items():
                    rm[pos[s][j]][col] = c
            mats[a] = rl.transpose(rm)
        M = Module(self, dims, mats, check=False)
        self._inj_cache[v] = M
        return M

    def simple(self, v):
        dims = [0] * self.nv
        dims[v] = 1
        return Module(self, dims, {}, check=False)

    def zero_module(self):
        return Module(self, [0] * self.nv, {}, check=False)

    def regular_module(self):
        return direct_sum_modules(self, [self.projective(v) for v in range(self.nv)])

    def is_self_injective(self):
        if self._selfinj is None:
            ok = True
            for v in range(self.nv):
                P = self.projective(v)
                if sum(P.socle_dims()) != 1:
                    ok = False
                    break
                I, m = inj_hull(P)
                if not m.is_iso():
                    ok = False
                    break
            self._selfinj = ok
        return self._selfinj


class Module:
    """Finite-dimensional left module: per-vertex dims, per-arrow matrices."""

    def __init__(self, algebra, dims, mats, check=True):
        self.algebra = algebra
        self.dims = list(dims)
        self.mats = {}
        for a in range(len(algebra.arrow_names)):
            s, t = algebra.arrow_src[a], algebra.arrow_tgt[a]
            m = mats.get(a) if mats else None
            if m is None:
                m = rl.zeros(self.dims[t], self.dims[s])
            self.mats[a] = m
        self.proj_parts = None    # set for explicit sums of projectives
        if check and not self.satisfies_relations():
            raise AlgebraError("module does not satisfy the algebra relations")

    @property
    def total_dim(self):
        return sum(self.dims)

    def is_zero(self):
        return self.total_dim == 0

    def act_path(self, path):
        A = self.algebra
        src_d = self.dims[path.src]
        cur = path.src
        m = rl.identity(src_d)
        for a in path.arrows:
            if self.dims[cur] == 0:
                return rl.zeros(self.dims[path.tgt], src_d)
            m = rl.mat_mul(self.mats[a], m)
            cur = A.arrow_tgt[a]
        return m

    def act_element(self, elem, src, tgt):
        """Matrix of a {basis_index: coef} element with fixed src/tgt."""
        A = self.algebra
        acc = rl.zeros(self.dims[tgt], self.dims[src])
        for i, c in elem.items():
            acc = rl.mat_add(acc, rl.mat_scal(c, self.act_path(A.basis[i])))
        return acc

    def satisfies_relations(self):
        for rel in self.algebra.relations:
            some = next(iter(rel))
            acc = rl.zeros(self.dims[some.tgt], self.dims[some.src])
            for p, c in rel.items():
                acc = rl.mat_add(acc, rl.mat_scal(c, self.act_path(p)))
            if not rl.is_zero_mat(acc):
                return False
        return True

    def socle_basis(self):
        """Per-vertex basis vectors of the socle."""
        A = self.algebra
        out = []
        for v in range(A.nv):
            rows = []
            for a in self.mats:
                if A.arrow_src[a] == v:
                    rows.extend(self.mats[a])
            if not rows:
                out.append(rl.identity(self.dims[v]))
            else:
                out.append(rl.nullspace(rows))
        return out

    def socle_dims(self):
        return [len(b) for b in self.socle_basis()]

    def top_free_positions(self):
        """Per-vertex coordinate positions spanning M/rad M."""
        A = self.algebra
        out = []
        for v in range(A.nv):
            space = RowSpace(self.dims[v])
            for a in self.mats:
                if A.arrow_tgt[a] == v and self.dims[A.arrow_src[a]]:
                    for col in rl.transpose(self.mats[a]):
                        space.add(col)
            pivset = set(space.pivots)
            out.append([j for j in range(self.dims[v]) if j not in pivset])
        return out

    def direct_sum(self, other):
        assert self.algebra is other.algebra
        A = self.algebra
        dims = [a + b for a, b in zip(self.dims, other.dims)]
        mats = {}
        for a in self.mats:
            s, t = A.arrow_src[a], A.arrow_tgt[a]
            m = rl.zeros(dims[t], dims[s])
            m1, m2 = self.mats[a], other.mats[a]
            for i in range(self.dims[t]):
                for j in range(self.dims[s]):
                    m[i][j] = m1[i][j]
            for i in range(other.dims[t]):
                for j in range(other.dims[s]):
                    m[self.dims[t] + i][self.dims[s] + j] = m2[i][j]
            mats[a] = m
        out = Module(A, dims, mats, check=False)
        if self.proj_parts is not None and other.proj_parts is not None:
            out.proj_parts = self.proj_parts + other.proj_parts
        return out

    def dim_vector(self):
        return tuple(self.dims)

    def __repr__(self):
        return f"Module{tuple(self.dims)}"


def direct_sum_modules(algebra, mods):
    out = algebra.zero_module()
    out.proj_parts = []
    for m in mods:
        out = out.direct_sum(m)
    return out


class ModuleMap:
    """Morphism of modules: one (tgt_dim x src_dim) matrix per vertex."""

    def __init__(self, src, tgt, mats, check=True):
        self.src = src
        self.tgt = tgt
        self.mats = [m if m is not None else rl.zeros(tgt.dims[v], src.dims[v])
                     for v, m in enumerate(mats)]
        if check and not self.commutes():
            raise AlgebraError("module map does not commute with arrow actions")

    def commutes(self):
        A = self.src.algebra
        for a in range(len(A.arrow_names)):
            s, t = A.arrow_src[a], A.arrow_tgt[a]
            lhs = rl.mat_mul(self.tgt.mats[a], self.mats[s])
            rhs = rl.mat_mul(self.mats[t], self.src.mats[a])
            if not rl.mat_eq(lhs, rhs):
                return False
        return True

    def compose(self, other):
        """self after other."""
        mats = []
        for v in range(len(self.mats)):
            if (other.src.dims[v] == 0 or self.tgt.dims[v] == 0
                    or other.tgt.dims[v] == 0):
                mats.append(rl.zeros(self.tgt.dims[v], other.src.dims[v]))
            else:
                mats.append(rl.mat_mul(self.mats[v], other.mats[v]))
        return ModuleMap(other.src, self.tgt, mats, check=False)

    def add(self, other):
        return ModuleMap(self.src, self.tgt,
                         [rl.mat_add(a, b) for a, b in zip(self.mats, other.mats)],
                         check=False)

    def scal(self, c):
        return ModuleMap(self.src, self.tgt,
                         [rl.mat_scal(c, m) for m in self.mats], check=False)

    def is_zero(self):
        return all(rl.is_zero_mat(m) for m in self.mats)

    def is_injective(self):
        return all(len(rl.nullspace(m)) == 0 if self.src.dims[v] else True
                   for v, m in enumerate(self.mats))

    def is_surjective(self):
        return all(rl.rank(m) == self.tgt.dims[v] for v, m in enumerate(self.mats))

    def is_iso(self):
        if self.src.dims != self.tgt.dims:
            return False
        return all((not m) or rl.det(m) != 0 for m in self.mats)

    def flatten(self):
        out = []
        for m in self.mats:
            for row in m:
                out.extend(row)
        return out

    def __repr__(self):
        return f"ModuleMap({self.src}->{self.tgt})"


def zero_map(src, tgt):
    return ModuleMap(src, tgt, [None] * len(src.dims), check=False)


def identity_map(m):
    return ModuleMap(m, m, [rl.identity(d) for d in m.dims], check=False)


def map_from_flat(src, tgt, flat):
    mats = []
    k = 0
    for v in range(len(src.dims)):
        r, c = tgt.dims[v], src.dims[v]
        m = rl.zeros(r, c)
        for i in range(r):
            for j in range(c):
                m[i][j] = flat[k]
                k += 1
        mats.append(m)
    return ModuleMap(src, tgt, mats, check=False)


def combine_maps(maps, coeffs):
    out = zero_map(maps[0].src, maps[0].tgt)
    for f, c in zip(maps, coeffs):
        if c:
            out = out.add(f.scal(c))
    return out


def hom_modules(M, N):
    """Basis of Hom(M, N)."""
    A = M.algebra
    nunk = sum(N.dims[v] * M.dims[v] for v in range(A.nv))
    if nunk == 0:
        return []
    offs = []
    k = 0
    for v in range(A.nv):
        offs.append(k)
        k += N.dims[v] * M.dims[v]

    def unk(v, i, j):
        return offs[v] + i * M.dims[v] + j

    rows = []
    for a in range(len(A.arrow_names)):
        s, t = A.arrow_src[a], A.arrow_tgt[a]
        Ma, Na = M.mats[a], N.mats[a]
        for i in range(N.dims[t]):
            for j in range(M.dims[s]):
                row = [F(0)] * nunk
                for l in range(N.dims[s]):
                    if Na[i][l]:
                        row[unk(s, l, j)] += Na[i][l]
                for l in range(M.dims[t]):
                    if Ma[l][j]:
                        row[unk(t, i, l)] -= Ma[l][j]
                if any(row):
                    rows.append(row)
    if not rows:
        sols = rl.identity(nunk)
    else:
        sols = rl.nullspace(rows)
    return [map_from_flat(M, N, v) for v in sols]


def kernel(f):
    """(K, incl: K -> src f)."""
    M = f.src
    A = M.algebra
    bases = []
    for v in range(A.nv):
        if M.dims[v] == 0:
            bases.append([])
        else:
            bases.append(rl.nullspace(f.mats[v]) if f.tgt.dims[v]
                         else rl.identity(M.dims[v]))
    dims = [len(b) for b in bases]
    incl = [rl.transpose(b) if b else rl.zeros(M.dims[v], 0)
            for v, b in enumerate(bases)]
    mats = {}
    for a in range(len(A.arrow_names)):
        s, t = A.arrow_src[a], A.arrow_tgt[a]
        if dims[s] and dims[t]:
            mats[a] = rl.solve_matrix(incl[t], rl.mat_mul(M.mats[a], incl[s]))
        else:
            mats[a] = rl.zeros(dims[t], dims[s])
    K = Module(A, dims, mats, check=False)
    return K, ModuleMap(K, M, incl, check=False)


def cokernel(f):
    """(C, proj: tgt f -> C)."""
    N = f.tgt
    A = N.algebra
    projs, secs, dims = [], [], []
    for v in range(A.nv):
        space = RowSpace(N.dims[v])
        if f.src.dims[v]:
            for col in rl.transpose(f.mats[v]):
                space.add(col)
        pivset = set(space.pivots)
        free = [j for j in range(N.dims[v]) if j not in pivset]
        dims.append(len(free))
        pm = rl.zeros(len(free), N.dims[v])
        for j in range(N.dims[v]):
            e = [F(0)] * N.dims[v]
            e[j] = F(1)
            red = space.reduce(e)
            for r, fc in enumerate(free):
                pm[r][j] = red[fc]
        projs.append(pm)
        sm = rl.zeros(N.dims[v], len(free))
        for r, fc in enumerate(free):
            sm[fc][r] = F(1)
        secs.append(sm)
    mats = {}
    for a in range(len(A.arrow_names)):
        s, t = A.arrow_src[a], A.arrow_tgt[a]
        mats[a] = rl.mat_mul(projs[t], rl.mat_mul(N.mats[a], secs[s]))
    C = Module(A, dims, mats, check=False)
    return C, ModuleMap(N, C, projs, check=False)


def image_module(f):
    """(I, incl: I -> tgt, proj: src -> I) for the image of f."""
    N = f.tgt
    A = N.algebra
    bases = []
    for v in range(A.nv):
        space = RowSpace(N.dims[v])
        if f.src.dims[v]:
            for col in rl.transpose(f.mats[v]):
                space.add(col)
        bases.append(space.basis())
    dims = [len(b) for b in bases]
    incl = [rl.transpose(b) if b else rl.zeros(N.dims[v], 0)
            for v, b in enumerate(bases)]
    mats = {}
    for a in range(len(A.arrow_names)):
        s, t = A.arrow_src[a], A.arrow_tgt[a]
        if dims[s] and dims[t]:
            mats[a] = rl.solve_matrix(incl[t], rl.mat_mul(N.mats[a], incl[s]))
        else:
            mats[a] = rl.zeros(dims[t], dims[s])
    I = Module(A, dims, mats, check=False)
    proj = [rl.solve_matrix(incl[v], f.mats[v]) if dims[v]
            else rl.zeros(0, f.src.dims[v]) for v in range(A.nv)]
    return I, ModuleMap(I, N, incl, check=False), ModuleMap(f.src, I, proj, check=False)


# ------------------------------------------------------------ covers & hulls

def proj_cover(M):
    """(P, epi P -> M), minimal; P carries proj_parts."""
    A = M.algebra
    reps = M.top_free_positions()
    parts, vecs = [], []
    for v in range(A.nv):
        for j in reps[v]:
            e = [F(0)] * M.dims[v]
            e[j] = F(1)
            parts.append(v)
            vecs.append((v, e))
    P = direct_sum_modules(A, [A.projective(v) for v in parts])
    mats = [rl.zeros(M.dims[w], P.dims[w]) for w in range(A.nv)]
    col_off = [0] * A.nv
    for k, v in enumerate(parts):
        Pk = A.projective(v)
        _, vec = vecs[k]
        idx = [0] * A.nv
        for bp in A.basis:
            if bp.src == v:
                w = bp.tgt
                img = rl.mat_vec(M.act_path(bp), vec)
                for r in range(M.dims[w]):
                    mats[w][r][col_off[w] + idx[w]] = img[r]
                idx[w] += 1
        for w in range(A.nv):
            col_off[w] += Pk.dims[w]
    return P, ModuleMap(P, M, mats, check=False)


def inj_hull(M):
    """(I, mono M -> I), essential."""
    A = M.algebra
    soc = M.socle_basis()
    parts, funcs = [], []
    for v in range(A.nv):
        if not soc[v]:
            continue
        space = RowSpace(M.dims[v])
        chosen = []
        for b in soc[v]:
            if space.add(b):
                chosen.append(b)
        ext = list(chosen)
        for j in range(M.dims[v]):
            e = [F(0)] * M.dims[v]
            e[j] = F(1)
            if space.add(e):
                ext.append(e)
        Binv = rl.inverse(rl.transpose(ext))
        for k in range(len(chosen)):
            parts.append(v)
            funcs.append((v, Binv[k]))
    I = direct_sum_modules(A, [A.injective(v) for v in parts])
    mats = [rl.zeros(I.dims[w], M.dims[w]) for w in range(A.nv)]
    row_off = [0] * A.nv
    for k, v in enumerate(parts):
        Ik = A.injective(v)
        _, xi = funcs[k]
        idx = [0] * A.nv
        for bp in A.basis:
            if bp.tgt == v:
                w = bp.src
                qm = M.act_path(bp)
                for c in range(M.dims[w]):
                    val = sum((xi[r] * qm[r][c] for r in range(M.dims[v])), F(0))
                    mats[w][row_off[w] + idx[w]][c] = val
                idx[w] += 1
        for w in range(A.nv):
            row_off[w] += Ik.dims[w]
    return I, ModuleMap(M, I, mats, check=False)


def proj_presentation(M):
    """Minimal presentation P1 --d--> P0 -> M -> 0."""
    P0, p0 = proj_cover(M)
    K, incl = kernel(p0)
    P1, p1 = proj_cover(K)
    return P1, P0, incl.compose(p1), p0


# ------------------------------------------------------------------ Nakayama

def _proj_sum_layout(P):
    """offsets[(summand k, basis path index)] -> row index at the path target."""
    A = P.algebra
    offs = {}
    cur = [0] * A.nv
    for k, v in enumerate(P.proj_parts):
        for i, bp in enumerate(A.basis):
            if bp.src == v:
                offs[(k, i)] = cur[bp.tgt]
                cur[bp.tgt] += 1
    return offs


def _inj_sum_layout(A, parts):
    offs = {}
    cur = [0] * A.nv
    for k, v in enumerate(parts):
        for i, bp in enumerate(A.basis):
            if bp.tgt == v:
                offs[(k, i)] = cur[bp.src]
                cur[bp.src] += 1
    return offs


def nu_of_proj_map(d):
    """Nakayama functor on a map between explicit sums of projectives."""
    A = d.src.algebra
    src_parts = d.src.proj_parts
    tgt_parts = d.tgt.proj_parts
    assert src_parts is not None and tgt_parts is not None
    soff = _proj_sum_layout(d.src)
    toff = _proj_sum_layout(d.tgt)
    triv = [A.basis_index[Path(v, (), v)] for v in range(A.nv)]
    elems = []
    for r, tv in enumerate(tgt_parts):
        row = []
        for c, sv in enumerate(src_parts):
            coef = {}
            gcol = soff[(c, triv[sv])]
            for i, bp in enumerate(A.basis):
                if bp.src == tv and bp.tgt == sv:
                    x = d.mats[sv][toff[(r, i)]][gcol]
                    if x:
                        coef[i] = x
            row.append(coef)
        elems.append(row)
    nu_src = direct_sum_modules(A, [A.injective(v) for v in src_parts])
    nu_tgt = direct_sum_modules(A, [A.injective(v) for v in tgt_parts])
    ioff_s = _inj_sum_layout(A, src_parts)
    ioff_t = _inj_sum_layout(A, tgt_parts)
    mats = [rl.zeros(nu_tgt.dims[w], nu_src.dims[w]) for w in range(A.nv)]
    for r, tv in enumerate(tgt_parts):
        for c, sv in enumerate(src_parts):
            lam = elems[r][c]
            if not lam:
                continue
            for i, bp in enumerate(A.basis):
                if bp.tgt == tv:
                    w = bp.src
                    acc = {}
                    for li, lc in lam.items():
                        lp = A.basis[li]
                        whole = Path(w, bp.arrows + lp.arrows, lp.tgt)
                        for j, c2 in A.normal_form(whole).items():
                            acc[j] = acc.get(j, F(0)) + lc * c2
                    for j, val in acc.items():
                        if val:
                            mats[w][ioff_t[(r, i)]][ioff_s[(c, j)]] += val
    return ModuleMap(nu_src, nu_tgt, mats, check=False)


def nakayama(M):
    """nu(M) = D Lambda tensor M, via a minimal projective presentation."""
    A = M.algebra
    if M.is_zero():
        return A.zero_module()
    P1, P0, d, _ = proj_presentation(M)
    if P1.is_zero():
        C, _ = cokernel(zero_map(A.zero_module(), nu_of_proj_map_target(P0)))
        return C
    nu_d = nu_of_proj_map(d)
    C, _ = cokernel(nu_d)
    return C


def nu_of_proj_map_target(P0):
    A = P0.algebra
    return direct_sum_modules(A, [A.injective(v) for v in P0.proj_parts])


# --------------------------------------------------------------- decompose

def trace_form_radical(end_maps):
    """Coordinates (in the given basis) of the radical of End(M)."""
    n = len(end_maps)
    if n == 0:
        return []
    gram = rl.zeros(n, n)
    for i in range(n):
        for j in range(i, n):
            comp = end_maps[i].compose(end_maps[j])
            tr = F(0)
            for m in comp.mats:
                for k in range(len(m)):
                    tr += m[k][k]
            gram[i][j] = tr
            gram[j][i] = tr
    return rl.nullspace(gram)


def _total_matrix(f):
    n = sum(f.src.dims)
    B = rl.zeros(n, n)
    off = 0
    for v in range(len(f.src.dims)):
        d = f.src.dims[v]
        for i in range(d):
            for j in range(d):
                B[off + i][off + j] = f.mats[v][i][j]
        off += d
    return B


def _eval_poly_on_map(x, coeffs, one):
    out = zero_map(x.src, x.tgt)
    power = one
    for c in coeffs:
        if c:
            out = out.add(power.scal(c))
        power = x.compose(power)
    return out


def _idempotent_refine(e, max_iter=60):
    for _ in range(max_iter):
        e2 = e.compose(e)
        if e2.add(e.scal(F(-1))).is_zero():
            return e
        e3 = e2.compose(e)
        e = e2.scal(F(3)).add(e3.scal(F(-2)))
    return None


def _try_split_element(M, x, one):
    mp = min_poly_of_matrix(_total_matrix(x))
    sf = squarefree_part(mp)
    roots = rational_roots(sf)
    for root in roots:
        coeffs = splitting_poly(sf, root)
        if coeffs is None:
            continue
        e = _eval_poly_on_map(x, coeffs, one)
        e = _idempotent_refine(e)
        if e is None or e.is_zero():
            continue
        if one.add(e.scal(F(-1))).is_zero():
            continue
        return e
    return None


def _find_idempotent(M, end):
    import random
    one = identity_map(M)
    candidates = list(end)
    for i in range(min(len(end), 8)):
        for j in range(i + 1, min(len(end), 8)):
            candidates.append(end[i].add(end[j]))
    rng = random.Random(17)
    for _ in range(60):
        f = zero_map(M, M)
        for g in end:
            c = rng.randint(-3, 3)
            if c:
                f = f.add(g.scal(F(c)))
        candidates.append(f)
    for x in candidates:
        e = _try_split_element(M, x, one)
        if e is not None:
            return e
    return None


def _split_indecomposable(M, _depth=0):
    """List of (piece, incl, proj) with proj∘incl = id and sum incl∘proj = 1."""
    if _depth > 64:
        raise AlgebraError("decomposition recursion too deep")
    if M.is_zero():
        return []
    end = hom_modules(M, M)
    rad = trace_form_radical(end)
    if len(end) - len(rad) == 1:
        return [(M, identity_map(M), identity_map(M))]
    e = _find_idempotent(M, end)
    if e is None:
        raise NonSplitField("no rational splitting idempotent found")
    one = identity_map(M)
    out = []
    for idem in (e, one.add(e.scal(F(-1)))):
        I, incl, proj = image_module(idem)
        for (N, i2, p2) in _split_indecomposable(I, _depth + 1):
            out.append((N, incl.compose(i2), p2.compose(proj)))
    return out


def is_indecomposable(M):
    if M.is_zero():
        return False
    end = hom_modules(M, M)
    return len(end) - len(trace_form_radical(end)) == 1


def modules_isomorphic(M, N):
    """Exact isomorphism test (dims + invertible hom search)."""
    if M.dims != N.dims:
        return False
    if M.is_zero():
        return True
    return _an_isomorphism(M, N) is not None


def _an_isomorphism(M, N):
    """An isomorphism M -> N or None.

    If both are indecomposable a basis element of Hom is invertible whenever
    any isomorphism exists (the non-isomorphisms form a subspace); otherwise
    fall back to a seeded search over small combinations.
    """
    if M.dims != N.dims:
        return None
    homs = hom_modules(M, N)
    for f in homs:
        if f.is_iso():
            return f
    import random
    rng = random.Random(23)
    for bound in (1, 2, 5):
        for _ in range(80):
            coeffs = [F(rng.randint(-bound, bound)) for _ in homs]
            if not any(coeffs):
                continue
            f = combine_maps(homs, coeffs)
            if f.is_iso():
                return f
    return None


def decompose(M):
    """[(indecomposable, multiplicity)], iso: M -> ordered direct sum."""
    A = M.algebra
    if M.is_zero():
        return [], identity_map(M)
    pieces = _split_indecomposable(M)
    groups = []   # (rep, [(incl, proj-into-rep)])
    for (N, incl, proj) in pieces:
        placed = False
        for g in groups:
            f = _an_isomorphism(N, g[0])
            if f is not None:
                g[1].append((incl, f.compose(proj)))
                placed = True
                break
        if not placed:
            groups.append((N, [(incl, proj)]))
    parts = [(rep, len(lst)) for rep, lst in groups]
    blocks = [p for rep, lst in groups for p in lst]
    S = direct_sum_modules(A, [rep for rep, lst in groups for _ in lst])
    mats = []
    for v in range(A.nv):
        stacked = [b[1].mats[v] for b in blocks]
        mats.append(rl.vstack(stacked) if stacked else rl.zeros(0, M.dims[v]))
    iso = ModuleMap(M, S, mats, check=False)
    return parts, iso


def is_projective_module(N):
    if N.is_zero():
        return False
    P, pc = proj_cover(N)
    return P.dims == N.dims and pc.is_iso()


def strip_projectives(M):
    """(M', incl: M' -> M, proj: M -> M') removing projective summands."""
    A = M.algebra
    if M.is_zero():
        return M, identity_map(M), identity_map(M)
    parts, iso = decompose(M)
    flags, blocks = [], []
    for (N, mult) in parts:
        pj = is_projective_module(N)
        flags.extend([not pj] * mult)
        blocks.extend([N] * mult)
    if all(flags):
        return M, identity_map(M), identity_map(M)
    sel = _block_selector(A, blocks, flags)
    emb = ModuleMap(sel.tgt, sel.src, [rl.transpose(m) for m in sel.mats], check=False)
    iso_inv = ModuleMap(iso.tgt, iso.src, [rl.inverse(m) if m else []
                                           for m in iso.mats], check=False)
    proj = sel.compose(iso)
    incl = iso_inv.compose(emb)
    return sel.tgt, incl, proj


def _block_selector(A, blocks, flags):
    total = direct_sum_modules(A, blocks)
    kept = direct_sum_modules(A, [b for b, fl in zip(blocks, flags) if fl])
    mats = []
    for v in range(A.nv):
        m = rl.zeros(kept.dims[v], total.dims[v])
        r0 = c0 = 0
        for b, fl in zip(blocks, flags):
            d = b.dims[v]
            if fl:
                for i in range(d):
                    m[r0 + i][c0 + i] = F(1)
                r0 += d
            c0 += d
        mats.append(m)
    return ModuleMap(total, kept, mats, check=False)


# ------------------------------------------------------- stable operations

def syzygy(M):
    if not M.algebra.is_self_injective():
        raise NotSelfInjective("syzygy needs a self-injective algebra")
    if M.is_zero():
        return M.algebra.zero_module()
    P, pc = proj_cover(M)
    K, _ = kernel(pc)
    if K.is_zero():
        return K
    S, _, _ = strip_projectives(K)
    return S


def cosyzygy(M):
    if not M.algebra.is_self_injective():
        raise NotSelfInjective("cosyzygy needs a self-injective algebra")
    if M.is_zero():
        return M.algebra.zero_module()
    I, ih = inj_hull(M)
    C, _ = cokernel(ih)
    if C.is_zero():
        return C
    S, _, _ = strip_projectives(C)
    return S


def ar_translate(M):
    """tau M = Omega^2 nu M (self-injective)."""
    if not M.algebra.is_self_injective():
        raise NotSelfInjective("tau needs a self-injective algebra")
    return syzygy(syzygy(nakayama(M)))


# ------------------------------------------------------------- factorization

def factor_left(p, f):
    """g with p∘g = f, or None."""
    homs = hom_modules(f.src, p.src)
    if not homs:
        return None if not f.is_zero() else zero_map(f.src, p.src)
    cols = [p.compose(g).flatten() for g in homs]
    c = rl.coords_in_span(cols, f.flatten())
    if c is None:
        return None
    return combine_maps(homs, c)


def factor_right(i, f):
    """g with g∘i = f, or None."""
    homs = hom_modules(i.tgt, f.tgt)
    if not homs:
        return None if not f.is_zero() else zero_map(i.tgt, f.tgt)
    cols = [g.compose(i).flatten() for g in homs]
    c = rl.coords_in_span(cols, f.flatten())
    if c is None:
        return None
    return combine_maps(homs, c)
