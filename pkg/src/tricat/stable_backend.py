"""Catalog backend: stable module category of a self-injective algebra.

Indecomposables are enumerated by closing simples and radical/socle layers
of projectives under syzygy, cosyzygy and the Nakayama functor; stable Hom
spaces are module Homs modulo maps factoring through the injective hull of
the source; cones come from the injective-hull pushout.
"""

from fractions import Fraction

from . import quiver as qv
from . import ratlin as rl
from .catalog import Catalog, StObject, StMorphism, Triangle, EngineError

F = Fraction


class StableBackend(Catalog):
    def __init__(self, algebra, max_objects=200, check_triangles=True):
        super().__init__()
        if not algebra.is_self_injective():
            raise qv.NotSelfInjective("stable category needs a self-injective algebra")
        self.algebra = algebra
        self.check_triangles = check_triangles
        self.reps = self._enumerate(max_objects)
        self._sigma = [self._identify(qv.cosyzygy(m)) for m in self.reps]
        self._tau = [self._identify(qv.ar_translate(m)) for m in self.reps]
        self._pair_cache = {}
        self._obj_extra = {}

    # ------------------------------------------------------------ enumeration
    def _enumerate(self, max_objects):
        A = self.algebra
        found = []

        def add(M):
            if M.is_zero() or qv.is_projective_module(M):
                return False
            for N in found:
                if N.dims == M.dims and qv.modules_isomorphic(N, M):
                    return False
            found.append(M)
            return True

        seeds = [A.simple(v) for v in range(A.nv)]
        for v in range(A.nv):
            P = A.projective(v)
            # radical and top-quotient layers
            top_positions = P.top_free_positions()
            rad_incl = None
            K, _ = qv.kernel(_top_projection(P))
            for (N, mult) in qv.decompose(K)[0]:
                seeds.append(N)
            Csoc, _ = qv.cokernel(_socle_inclusion(P))
            for (N, mult) in qv.decompose(Csoc)[0]:
                seeds.append(N)
        work = []
        for s in seeds:
            for (N, _) in qv.decompose(s)[0] if not s.is_zero() else []:
                if add(N):
                    work.append(N)
        while work:
            M = work.pop()
            for op in (qv.cosyzygy, qv.syzygy, qv.nakayama):
                N = op(M)
                if N.is_zero():
                    continue
                for (piece, _) in qv.decompose(N)[0]:
                    if add(piece):
                        work.append(piece)
            if len(found) > max_objects:
                raise EngineError("catalog enumeration exceeded bound")
        order = sorted(range(len(found)),
                       key=lambda i: (found[i].total_dim, found[i].dim_vector()))
        return [found[i] for i in order]

    def _identify(self, M):
        """Catalog id of an indecomposable module."""
        for i, N in enumerate(self.reps):
            if N.dims == M.dims and qv.modules_isomorphic(N, M):
                return i
        raise EngineError(f"module {M} not in catalog")

    def identify_with_iso(self, M):
        for i, N in enumerate(self.reps):
            if N.dims == M.dims:
                f = qv._an_isomorphism(M, N)
                if f is not None:
                    return i, f
        raise EngineError(f"module {M} not in catalog")

    # ------------------------------------------------------------- primitives
    @property
    def n_objects(self):
        return len(self.reps)

    def sigma(self, i):
        return self._sigma[i]

    def tau(self, i):
        return self._tau[i]

    def _object_data(self, x):
        """Injective-hull data of the catalog representative of x."""
        if x in self._obj_extra:
            return self._obj_extra[x]
        M = self.reps[x]
        I, hull = qv.inj_hull(M)
        C, projC = qv.cokernel(hull)
        S, inclS, projS = qv.strip_projectives(C)
        # identification of the stripped cosyzygy with the catalog rep
        sid = self._sigma[x]
        u = qv._an_isomorphism(S, self.reps[sid])
        if u is None:
            raise EngineError("cosyzygy identification failed")
        data = (I, hull, C, projC, S, inclS, projS, u)
        self._obj_extra[x] = data
        return data

    def _pair(self, x, y):
        key = (x, y)
        if key in self._pair_cache:
            return self._pair_cache[key]
        Mx, My = self.reps[x], self.reps[y]
        full = qv.hom_modules(Mx, My)
        I, hull = self._object_data(x)[0:2]
        proj_span = []
        n = sum(My.dims[v] * Mx.dims[v] for v in range(self.algebra.nv))
        span = rl.RowSpace(n)
        for g in qv.hom_modules(I, My):
            v = g.compose(hull).flatten()
            if span.add(v):
                proj_span.append(v)
        reps = []
        for f in full:
            if span.add(f.flatten()):
                reps.append(f)
        data = (reps, proj_span)
        self._pair_cache[key] = data
        return data

    def _hom_dim(self, x, y):
        return len(self._pair(x, y)[0])

    def stable_coords(self, x, y, f):
        """Coordinates of a ModuleMap in the stable basis of (x, y)."""
        reps, proj_span = self._pair(x, y)
        flat = f.flatten()
        if not any(flat):
            return [F(0)] * len(reps)
        gens = proj_span + [r.flatten() for r in reps]
        c = rl.coords_in_span(gens, flat)
        if c is None:
            raise EngineError("stable coordinates failed")
        return c[len(proj_span):]

    def rep_map(self, x, y, coords):
        reps, _ = self._pair(x, y)
        f = qv.zero_map(self.reps[x], self.reps[y])
        for c, r in zip(coords, reps):
            if c:
                f = f.add(r.scal(c))
        return f

    def _compose_tensor(self, x, y, z):
        rxy, _ = self._pair(x, y)
        ryz, _ = self._pair(y, z)
        T = []
        for g in ryz:
            row = []
            for f in rxy:
                row.append(self.stable_coords(x, z, g.compose(f)))
            T.append(row)
        return T

    def _identity_coords(self, x):
        return self.stable_coords(x, x, qv.identity_map(self.reps[x]))

    def suspend_rep_map(self, x, y, f):
        """Sigma on a module-level representative map."""
        Ix, hullx = self._object_data(x)[0:2]
        Iy, hully = self._object_data(y)[0:2]
        # E: I_x -> I_y with E.hull_x = hull_y.f
        homs = qv.hom_modules(Ix, Iy)
        cols = [e.compose(hullx).flatten() for e in homs]
        tgt = hully.compose(f).flatten()
        c = rl.coords_in_span(cols, tgt)
        if c is None:
            raise EngineError("injective extension failed")
        E = qv.combine_maps(homs, c) if any(c) else qv.zero_map(Ix, Iy)
        # induced on cokernels
        _, _, Cx, projCx, Sx, inclSx, _, ux = self._object_data(x)
        _, _, Cy, projCy, Sy, _, projSy, uy = self._object_data(y)
        phi = _descend(projCx, projCy.compose(E), Cx, Cy)
        comp = uy.compose(projSy).compose(phi).compose(inclSx)
        ux_inv = qv.ModuleMap(ux.tgt, ux.src,
                              [rl.inverse(m) if m else [] for m in ux.mats],
                              check=False)
        return comp.compose(ux_inv)

    def _suspend_tensor(self, x, y):
        rxy, _ = self._pair(x, y)
        sx, sy = self._sigma[x], self._sigma[y]
        S = []
        for f in rxy:
            sf = self.suspend_rep_map(x, y, f)
            S.append(self.stable_coords(sx, sy, sf))
        return rl.transpose(S) if S else []

    # ------------------------------------------------------------ conversions
    def module_of(self, X):
        return qv.direct_sum_modules(self.algebra, [self.reps[i] for i in X.items])

    def module_map_of(self, f):
        Xm = self.module_of(f.src)
        Ym = self.module_of(f.tgt)
        mats = [rl.zeros(Ym.dims[v], Xm.dims[v]) for v in range(self.algebra.nv)]
        soffs = _offsets([self.reps[i] for i in f.src.items], self.algebra.nv)
        toffs = _offsets([self.reps[i] for i in f.tgt.items], self.algebra.nv)
        for (si, ti), coords in f.blocks.items():
            g = self.rep_map(f.src.items[si], f.tgt.items[ti], coords)
            for v in range(self.algebra.nv):
                m = g.mats[v]
                for r in range(len(m)):
                    for c in range(len(m[0]) if m else 0):
                        if m[r][c]:
                            mats[v][toffs[ti][v] + r][soffs[si][v] + c] += m[r][c]
        return qv.ModuleMap(Xm, Ym, mats, check=False)

    def stmorphism_of(self, X, Y, g):
        """Block-coordinatize a module map between sums of catalog reps."""
        out = StMorphism(self, X, Y)
        soffs = _offsets([self.reps[i] for i in X.items], self.algebra.nv)
        toffs = _offsets([self.reps[i] for i in Y.items], self.algebra.nv)
        for si, xi in enumerate(X.items):
            for ti, yj in enumerate(Y.items):
                Mx, My = self.reps[xi], self.reps[yj]
                mats = []
                for v in range(self.algebra.nv):
                    sub = [[g.mats[v][toffs[ti][v] + r][soffs[si][v] + c]
                            for c in range(Mx.dims[v])] for r in range(My.dims[v])]
                    mats.append(sub)
                comp = qv.ModuleMap(Mx, My, mats, check=False)
                coords = self.stable_coords(xi, yj, comp)
                out.set_block(si, ti, coords)
        return out

    def decompose_to_stobject(self, M):
        """(StObject, split epi M -> module_of(StObject), section).

        Projective summands are dropped; the stable class is unchanged.
        """
        if M.is_zero():
            return StObject(()), qv.identity_map(M), qv.identity_map(M)
        S, incl, proj = qv.strip_projectives(M)
        parts, iso = qv.decompose(S)
        ids = []
        blocks = []
        expanded = [rep for (rep, mult) in parts for _ in range(mult)]
        for rep in expanded:
            i, u = self.identify_with_iso(rep)
            ids.append(i)
            blocks.append((i, u))
        # order blocks to match the sorted StObject
        order = sorted(range(len(ids)), key=lambda k: ids[k])
        X = StObject(tuple(ids[k] for k in order))
        # assemble iso: S -> sum reps(sorted)
        offs_src = _offsets(expanded, self.algebra.nv)
        tgt_mods = [self.reps[ids[k]] for k in order]
        offs_tgt = _offsets(tgt_mods, self.algebra.nv)
        Ssum = qv.direct_sum_modules(self.algebra, expanded)
        Xm = qv.direct_sum_modules(self.algebra, tgt_mods)
        mats = [rl.zeros(Xm.dims[v], Ssum.dims[v]) for v in range(self.algebra.nv)]
        for new_pos, k in enumerate(order):
            u = blocks[k][1]
            for v in range(self.algebra.nv):
                m = u.mats[v]
                for r in range(len(m)):
                    for c in range(len(m[0]) if m else 0):
                        if m[r][c]:
                            mats[v][offs_tgt[new_pos][v] + r][offs_src[k][v] + c] = m[r][c]
        perm_iso = qv.ModuleMap(Ssum, Xm, mats, check=False)
        total = perm_iso.compose(iso).compose(proj)
        iso_inv = qv.ModuleMap(iso.tgt, iso.src,
                               [rl.inverse(m) if m else [] for m in iso.mats],
                               check=False)
        perm_inv = qv.ModuleMap(Xm, Ssum,
                                [rl.inverse(m) if m else []
                                 for m in perm_iso.mats], check=False)
        section = incl.compose(iso_inv).compose(perm_inv)
        return X, total, section

    # ----------------------------------------------------------------- cones
    def cone(self, f):
        """Triangle X -> Y -> Z -> Sigma X via the injective-hull pushout."""
        from .catalog import triangle_checks
        X, Y = f.src, f.tgt
        if X.is_zero():
            g = self.identity(Y)
            return Triangle(X, Y, Y, f, g,
                            self.zero_morphism(Y, self.suspend_obj(X)))
        Xm = self.module_of(X)
        Ym = self.module_of(Y)
        Fm = self.module_map_of(f)
        hulls = [self._object_data(i)[1] for i in X.items]
        Ixs = [self._object_data(i)[0] for i in X.items]
        IX = qv.direct_sum_modules(self.algebra, Ixs)
        hull = _block_diag_map(self.algebra, [self.reps[i] for i in X.items],
                               Ixs, hulls, Xm, IX)
        # (F, hull): X -> Y + I_X
        YI = Ym.direct_sum(IX)
        mats = []
        for v in range(self.algebra.nv):
            m = rl.zeros(YI.dims[v], Xm.dims[v])
            for r in range(Ym.dims[v]):
                for c in range(Xm.dims[v]):
                    m[r][c] = Fm.mats[v][r][c]
            for r in range(IX.dims[v]):
                for c in range(Xm.dims[v]):
                    m[Ym.dims[v] + r][c] = hull.mats[v][r][c]
            mats.append(m)
        emb = qv.ModuleMap(Xm, YI, mats, check=False)
        C, projC = qv.cokernel(emb)
        Z, theta, theta_sec = self.decompose_to_stobject(C)
        Zm = self.module_of(Z)
        # g: Y -> Z
        inclY = _inclusion(self.algebra, Ym, YI, [0] * self.algebra.nv)
        gmod = theta.compose(projC).compose(inclY)
        g = self.stmorphism_of(Y, Z, gmod)
        # h: Z -> Sigma X, via the quotient map I_X -> Sigma X
        SX = self.suspend_obj(X)
        SXm = self.module_of(SX)
        tx_ids = [self._sigma[i] for i in X.items]
        tx_mods = [self.reps[i] for i in tx_ids]
        TXm = qv.direct_sum_modules(self.algebra, tx_mods)
        qparts = []
        for i in X.items:
            _, _, Cx, projCx, Sx, _, projSx, ux = self._object_data(i)
            qparts.append(ux.compose(projSx).compose(projCx))
        qmap0 = _block_diag_map(self.algebra, Ixs, tx_mods, qparts, IX, TXm)
        qmap = _sorting_perm_map(self.algebra, tx_mods, tx_ids, TXm, SXm).compose(qmap0)
        # psi: Y + I_X -> Sigma X ; vanishes on the image of emb
        psi_mats = []
        for v in range(self.algebra.nv):
            m = rl.zeros(SXm.dims[v], YI.dims[v])
            for r in range(SXm.dims[v]):
                for c in range(IX.dims[v]):
                    m[r][Ym.dims[v] + c] = qmap.mats[v][r][c]
            psi_mats.append(m)
        psi = qv.ModuleMap(YI, SXm, psi_mats, check=False)
        hfull = _descend(projC, psi, C, SXm)
        hmod = hfull.compose(theta_sec)
        h = self.stmorphism_of(Z, SX, hmod)
        tri = Triangle(X, Y, Z, f, g, h)
        if self.check_triangles and not triangle_checks(self, tri):
            raise EngineError("cone failed the triangle identities")
        return tri


def _top_projection(P):
    """P -> P/rad P as a ModuleMap."""
    A = P.algebra
    tops = P.top_free_positions()
    dims = [len(t) for t in tops]
    # quotient by radical: reuse cokernel of the radical inclusion
    # build radical as image of all arrows
    mats = []
    spaces = []
    for v in range(A.nv):
        sp = rl.RowSpace(P.dims[v])
        for a in P.mats:
            if A.arrow_tgt[a] == v and P.dims[A.arrow_src[a]]:
                for col in rl.transpose(P.mats[a]):
                    sp.add(col)
        spaces.append(sp)
    projs = []
    dims = []
    for v in range(A.nv):
        pivset = set(spaces[v].pivots)
        free = [j for j in range(P.dims[v]) if j not in pivset]
        dims.append(len(free))
        pm = rl.zeros(len(free), P.dims[v])
        for j in range(P.dims[v]):
            e = [F(0)] * P.dims[v]
            e[j] = F(1)
            red = spaces[v].reduce(e)
            for r, fc in enumerate(free):
                pm[r][j] = red[fc]
        projs.append(pm)
    T = qv.Module(A, dims, {}, check=False)
    return qv.ModuleMap(P, T, projs, check=False)


def _socle_inclusion(P):
    A = P.algebra
    soc = P.socle_basis()
    dims = [len(s) for s in soc]
    S = qv.Module(A, dims, {}, check=False)
    mats = [rl.transpose(soc[v]) if soc[v] else rl.zeros(P.dims[v], 0)
            for v in range(A.nv)]
    return qv.ModuleMap(S, P, mats, check=False)


def _descend(proj, psi, C, W):
    """phi with phi.proj = psi, given proj surjective."""
    A = psi.src.algebra
    mats = []
    for v in range(A.nv):
        if C.dims[v] == 0:
            mats.append(rl.zeros(psi.tgt.dims[v], 0))
            continue
        if psi.tgt.dims[v] == 0:
            mats.append(rl.zeros(0, C.dims[v]))
            continue
        # solve phi_v . proj_v = psi_v  <=> proj_v^T phi_v^T = psi_v^T
        pt = rl.transpose(proj.mats[v])
        st = rl.transpose(psi.mats[v])
        sol = rl.solve_matrix(pt, st)
        if sol is None:
            raise EngineError("descend failed")
        mats.append(rl.transpose(sol))
    return qv.ModuleMap(C, psi.tgt, mats, check=False)


def _offsets(mods, nv):
    offs = []
    cur = [0] * nv
    for m in mods:
        offs.append(list(cur))
        for v in range(nv):
            cur[v] += m.dims[v]
    return offs


def _block_diag_map(A, srcs, tgts, maps, Smod, Tmod):
    soffs = _offsets(srcs, A.nv)
    toffs = _offsets(tgts, A.nv)
    mats = [rl.zeros(Tmod.dims[v], Smod.dims[v]) for v in range(A.nv)]
    for k, g in enumerate(maps):
        for v in range(A.nv):
            m = g.mats[v]
            for r in range(len(m)):
                for c in range(len(m[0]) if m else 0):
                    if m[r][c]:
                        mats[v][toffs[k][v] + r][soffs[k][v] + c] = m[r][c]
    return qv.ModuleMap(Smod, Tmod, mats, check=False)


def _inclusion(A, part, whole, offsets):
    """Inclusion of a direct summand given per-vertex row offsets."""
    mats = []
    for v in range(A.nv):
        m = rl.zeros(whole.dims[v], part.dims[v])
        for i in range(part.dims[v]):
            m[offsets[v] + i][i] = F(1)
        mats.append(m)
    return qv.ModuleMap(part, whole, mats, check=False)


def _sorting_perm_map(A, mods, ids, Smod, Tmod):
    """Permutation iso from sum-in-given-order to sum-in-sorted-id-order."""
    order = sorted(range(len(ids)), key=lambda k: (ids[k], k))
    soffs = _offsets(mods, A.nv)
    toffs = _offsets([mods[k] for k in order], A.nv)
    mats = [rl.zeros(Tmod.dims[v], Smod.dims[v]) for v in range(A.nv)]
    for new_pos, k in enumerate(order):
        for v in range(A.nv):
            for i in range(mods[k].dims[v]):
                mats[v][toffs[new_pos][v] + i][soffs[k][v] + i] = F(1)
    return qv.ModuleMap(Smod, Tmod, mats, check=False)
