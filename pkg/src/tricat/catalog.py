"""Finite triangulated category given by a catalog of indecomposables.

A Catalog knows its indecomposables (ids 0..n-1), the permutations Sigma,
tau, S = tau.Sigma, Hom dimensions with fixed bases, composition tensors,
suspension of morphisms, and mapping cones.  Everything else (ideals,
approximations, quotient categories, AR data) is generic linear algebra over
those tensors and lives here; the two backends only provide the primitives.

Objects are multisets of catalog ids in canonical sorted form, so two
StObjects are isomorphic iff they are equal.
"""

from fractions import Fraction

from . import ratlin as rl

F = Fraction


class EngineError(Exception):
    """Internal consistency failure that mathematically should never happen."""


class SerreViolation(Exception):
    pass


class StObject:
    __slots__ = ("items",)

    def __init__(self, items):
        self.items = tuple(sorted(items))

    def __eq__(self, other):
        return self.items == other.items

    def __hash__(self):
        return hash(self.items)

    def __len__(self):
        return len(self.items)

    def is_zero(self):
        return not self.items

    def is_basic(self):
        return len(set(self.items)) == len(self.items)

    def plus(self, other):
        return StObject(self.items + other.items)

    def summand_ids(self):
        return set(self.items)

    def __repr__(self):
        return f"St{list(self.items)}"


ZERO = StObject(())


class StMorphism:
    """Block coordinates over the catalog's chosen Hom bases."""

    __slots__ = ("cat", "src", "tgt", "blocks")

    def __init__(self, cat, src, tgt, blocks=None):
        self.cat = cat
        self.src = src
        self.tgt = tgt
        self.blocks = blocks if blocks is not None else {}

    def block(self, si, ti):
        d = self.cat.hom_dim(self.src.items[si], self.tgt.items[ti])
        b = self.blocks.get((si, ti))
        if b is None:
            return [F(0)] * d
        return b

    def set_block(self, si, ti, vec):
        if any(vec):
            self.blocks[(si, ti)] = list(vec)
        else:
            self.blocks.pop((si, ti), None)

    def is_zero(self):
        return all(not any(v) for v in self.blocks.values())

    def add(self, other):
        out = StMorphism(self.cat, self.src, self.tgt)
        keys = set(self.blocks) | set(other.blocks)
        for k in keys:
            a = self.blocks.get(k)
            b = other.blocks.get(k)
            if a is None:
                out.set_block(*k, list(b))
            elif b is None:
                out.set_block(*k, list(a))
            else:
                out.set_block(*k, [x + y for x, y in zip(a, b)])
        return out

    def scal(self, c):
        c = rl.frac(c)
        out = StMorphism(self.cat, self.src, self.tgt)
        for k, v in self.blocks.items():
            out.set_block(*k, [c * x for x in v])
        return out

    def flatten(self):
        out = []
        for ti in range(len(self.tgt.items)):
            for si in range(len(self.src.items)):
                out.extend(self.block(si, ti))
        return out

    def __repr__(self):
        return f"StMor({self.src}->{self.tgt})"


class Triangle:
    """x --f--> y --g--> z --h--> Sigma x."""

    def __init__(self, x, y, z, f, g, h):
        self.x, self.y, self.z = x, y, z
        self.f, self.g, self.h = f, g, h

    def __repr__(self):
        return f"Tri({self.x}->{self.y}->{self.z})"


class Catalog:
    """Base class; backends implement the _-prefixed primitives."""

    def __init__(self):
        self._hom_dim_cache = {}
        self._comp_cache = {}
        self._susp_cache = {}
        self._susp_inv_cache = {}
        self._id_cache = {}
        self.labels = {}      # label -> id
        self.id_labels = {}   # id -> label

    # -------------------------------------------------- backend primitives
    @property
    def n_objects(self):
        raise NotImplementedError

    def sigma(self, i):
        raise NotImplementedError

    def tau(self, i):
        raise NotImplementedError

    def _hom_dim(self, x, y):
        raise NotImplementedError

    def _compose_tensor(self, x, y, z):
        """T[j][i] = coords of e^{yz}_j . e^{xy}_i in the (x,z) basis."""
        raise NotImplementedError

    def _suspend_tensor(self, x, y):
        """Matrix S: Sigma(e^{xy}_i) = sum_k S[k][i] e^{Sx,Sy}_k."""
        raise NotImplementedError

    def _identity_coords(self, x):
        raise NotImplementedError

    def cone(self, f):
        """Complete f to a Triangle (backend specific)."""
        raise NotImplementedError

    # ------------------------------------------------------------- caching
    def hom_dim(self, x, y):
        key = (x, y)
        if key not in self._hom_dim_cache:
            self._hom_dim_cache[key] = self._hom_dim(x, y)
        return self._hom_dim_cache[key]

    def comp_tensor(self, x, y, z):
        key = (x, y, z)
        if key not in self._comp_cache:
            self._comp_cache[key] = self._compose_tensor(x, y, z)
        return self._comp_cache[key]

    def susp_tensor(self, x, y):
        key = (x, y)
        if key not in self._susp_cache:
            self._susp_cache[key] = self._suspend_tensor(x, y)
        return self._susp_cache[key]

    def susp_inv_tensor(self, x, y):
        """Inverse of susp_tensor from (x, y) back: Sigma^{-1} on morphisms."""
        key = (x, y)
        if key not in self._susp_inv_cache:
            sx, sy = self.sigma(x), self.sigma(y)
            # find (u, v) with sigma(u) = x: sigma is a permutation
            u = self.sigma_inv(x)
            v = self.sigma_inv(y)
            m = self.susp_tensor(u, v)
            inv = rl.inverse(m) if m else []
            if inv is None:
                raise EngineError("suspension tensor not invertible")
            self._susp_inv_cache[key] = inv
        return self._susp_inv_cache[key]

    def identity_coords(self, x):
        if x not in self._id_cache:
            self._id_cache[x] = self._identity_coords(x)
        return self._id_cache[x]

    def sigma_inv(self, i):
        if not hasattr(self, "_sigma_inv"):
            self._sigma_inv = [0] * self.n_objects
            for j in range(self.n_objects):
                self._sigma_inv[self.sigma(j)] = j
        return self._sigma_inv[i]

    def tau_inv(self, i):
        if not hasattr(self, "_tau_inv"):
            self._tau_inv = [0] * self.n_objects
            for j in range(self.n_objects):
                self._tau_inv[self.tau(j)] = j
        return self._tau_inv[i]

    def serre(self, i):
        return self.tau(self.sigma(i))

    # ----------------------------------------------------------- morphisms
    def obj(self, ids):
        return StObject(ids)

    def all_objects(self):
        return [StObject((i,)) for i in range(self.n_objects)]

    def zero_morphism(self, X, Y):
        return StMorphism(self, X, Y)

    def identity(self, X):
        f = StMorphism(self, X, X)
        used = {}
        for si, i in enumerate(X.items):
            # route multiplicity: pair equal summands by order of occurrence
            k = used.get((i, "s"), 0)
            used[(i, "s")] = k + 1
            # target index of the k-th copy of i
            seen = 0
            for ti, j in enumerate(X.items):
                if j == i:
                    if seen == k:
                        f.set_block(si, ti, self.identity_coords(i))
                        break
                    seen += 1
        return f

    def hom_total_dim(self, X, Y):
        return sum(self.hom_dim(i, j) for i in X.items for j in Y.items)

    def hom_basis_morphisms(self, X, Y):
        """Standard basis of Hom(X, Y) as StMorphisms."""
        out = []
        for ti, j in enumerate(Y.items):
            for si, i in enumerate(X.items):
                d = self.hom_dim(i, j)
                for k in range(d):
                    f = StMorphism(self, X, Y)
                    vec = [F(0)] * d
                    vec[k] = F(1)
                    f.set_block(si, ti, vec)
                    out.append(f)
        return out

    def from_flat(self, X, Y, flat):
        f = StMorphism(self, X, Y)
        pos = 0
        for ti, j in enumerate(Y.items):
            for si, i in enumerate(X.items):
                d = self.hom_dim(i, j)
                f.set_block(si, ti, flat[pos:pos + d])
                pos += d
        return f

    def compose(self, g, f):
        """g after f."""
        assert f.tgt == g.src
        out = StMorphism(self, f.src, g.tgt)
        acc = {}
        for (si, mi), fv in f.blocks.items():
            if not any(fv):
                continue
            x = f.src.items[si]
            y = f.tgt.items[mi]
            for (mj, ti), gv in g.blocks.items():
                if mj != mi or not any(gv):
                    continue
                z = g.tgt.items[ti]
                T = self.comp_tensor(x, y, z)
                dxz = self.hom_dim(x, z)
                if dxz == 0:
                    continue
                cur = acc.setdefault((si, ti), [F(0)] * dxz)
                for jj, gc in enumerate(gv):
                    if not gc:
                        continue
                    row = T[jj]
                    for ii, fc in enumerate(fv):
                        if fc:
                            tv = row[ii]
                            for kk in range(dxz):
                                if tv[kk]:
                                    cur[kk] += gc * fc * tv[kk]
        for k, v in acc.items():
            out.set_block(*k, v)
        return out

    def suspend_obj(self, X):
        return StObject(tuple(self.sigma(i) for i in X.items))

    def suspend_obj_inv(self, X):
        return StObject(tuple(self.sigma_inv(i) for i in X.items))

    def suspend_morphism(self, f):
        sX = StObject(tuple(self.sigma(i) for i in f.src.items))
        sY = StObject(tuple(self.sigma(i) for i in f.tgt.items))
        # position maps: sorted orders may differ; track by stable sort
        smap = _position_map(f.src.items, sX.items, self.sigma)
        tmap = _position_map(f.tgt.items, sY.items, self.sigma)
        out = StMorphism(self, sX, sY)
        for (si, ti), v in f.blocks.items():
            x, y = f.src.items[si], f.tgt.items[ti]
            S = self.susp_tensor(x, y)
            nv = [sum((S[k][i] * v[i] for i in range(len(v))), F(0))
                  for k in range(len(S))]
            out.set_block(smap[si], tmap[ti], nv)
        return out

    def suspend_morphism_inv(self, f):
        pX = StObject(tuple(self.sigma_inv(i) for i in f.src.items))
        pY = StObject(tuple(self.sigma_inv(i) for i in f.tgt.items))
        smap = _position_map(f.src.items, pX.items, self.sigma_inv)
        tmap = _position_map(f.tgt.items, pY.items, self.sigma_inv)
        out = StMorphism(self, pX, pY)
        for (si, ti), v in f.blocks.items():
            x, y = f.src.items[si], f.tgt.items[ti]
            Sinv = self.susp_inv_tensor(x, y)
            nv = [sum((Sinv[k][i] * v[i] for i in range(len(v))), F(0))
                  for k in range(len(Sinv))]
            out.set_block(smap[si], tmap[ti], nv)
        return out

    # --------------------------------------------------- linear operators
    def left_compose_operator(self, g, X):
        """Matrix of (g . -): Hom(X, src g) -> Hom(X, tgt g)."""
        basis = self.hom_basis_morphisms(X, g.src)
        cols = [self.compose(g, b).flatten() for b in basis]
        rows = self.hom_total_dim(X, g.tgt)
        if not cols:
            return rl.zeros(rows, 0)
        return rl.transpose(cols)

    def right_compose_operator(self, g, Y):
        """Matrix of (- . g): Hom(tgt g, Y) -> Hom(src g, Y)."""
        basis = self.hom_basis_morphisms(g.tgt, Y)
        cols = [self.compose(b, g).flatten() for b in basis]
        rows = self.hom_total_dim(g.src, Y)
        if not cols:
            return rl.zeros(rows, 0)
        return rl.transpose(cols)

    def is_iso(self, f):
        if f.src.items != f.tgt.items:
            return False
        if f.src.is_zero():
            return True
        L = self.left_compose_operator(f, f.src)
        return rl.det(L) != 0

    def invert(self, f):
        """Inverse of an isomorphism."""
        X = f.src
        basis = self.hom_basis_morphisms(f.tgt, X)
        idv = self.identity(X).flatten()
        cols = [self.compose(f, b).flatten() for b in basis]  # f.g = id?
        # solve g with f.g = id_tgt? we want g.f = id and f.g = id
        tgt_id = self.identity(f.tgt).flatten()
        colsL = [self.compose(f, b).flatten() for b in basis]
        c = rl.coords_in_span(colsL, tgt_id)
        if c is None:
            raise EngineError("invert called on a non-isomorphism")
        g = self.zero_morphism(f.tgt, X)
        for ci, b in zip(c, basis):
            if ci:
                g = g.add(b.scal(ci))
        return g

    # --------------------------------------------------------------- ideals
    def ideal_subspace(self, X, Y, mids):
        """Spanning flats of {h.g : g: X->M, h: M->Y, M in add(mids)}."""
        G = StObject(tuple(sorted(set(mids))))
        if G.is_zero() or X.is_zero() or Y.is_zero():
            return []
        gs = self.hom_basis_morphisms(X, G)
        hs = self.hom_basis_morphisms(G, Y)
        span = rl.RowSpace(self.hom_total_dim(X, Y))
        out = []
        for g in gs:
            for h in hs:
                v = self.compose(h, g).flatten()
                if span.add(v):
                    out.append((g, h, v))
        return out

    def ideal_membership(self, f, mids):
        """(bool, witness pairs) for f in the ideal of maps through add(mids)."""
        data = self.ideal_subspace(f.src, f.tgt, mids)
        target = f.flatten()
        if not any(target):
            return True, []
        if not data:
            return False, None
        cols = [v for (_, _, v) in data]
        c = rl.coords_in_span(cols, target)
        if c is None:
            return False, None
        witness = [(data[i][0], data[i][1], ci) for i, ci in enumerate(c) if ci]
        return True, witness

    def ext1(self, X, Y):
        return self.hom_total_dim(X, self.suspend_obj(Y))

    # ------------------------------------------------------------- reports
    def serre_check(self):
        """Hom(X,Y) vs Hom(Y,SX) dimension symmetry on all pairs."""
        for x in range(self.n_objects):
            for y in range(self.n_objects):
                if self.hom_dim(x, y) != self.hom_dim(y, self.serre(x)):
                    raise SerreViolation(f"pair ({x},{y})")
        return True

    def rad_data(self, objects=None):
        """dim rad and rad^2 between catalog objects (for AR arrows)."""
        objs = list(range(self.n_objects)) if objects is None else list(objects)
        radd = {}
        for x in objs:
            for y in objs:
                d = self.hom_dim(x, y)
                radd[(x, y)] = d - (1 if x == y else 0)
        rad2 = {}
        for x in objs:
            for y in objs:
                span = rl.RowSpace(self.hom_dim(x, y))
                X, Y = StObject((x,)), StObject((y,))
                for m in objs:
                    M = StObject((m,))
                    for g in self._rad_basis(X, M):
                        for h in self._rad_basis(M, Y):
                            span.add(self.compose(h, g).flatten())
                rad2[(x, y)] = span.dim
        return radd, rad2

    def _rad_basis(self, X, Y):
        """Basis of rad(X, Y) for indecomposable X, Y (cached)."""
        x, y = X.items[0], Y.items[0]
        cache = getattr(self, "_radb_cache", None)
        if cache is None:
            cache = self._radb_cache = {}
        if (x, y) in cache:
            return cache[(x, y)]
        out = self._rad_basis_impl(X, Y)
        cache[(x, y)] = out
        return out

    def _rad_basis_impl(self, X, Y):
        x, y = X.items[0], Y.items[0]
        basis = self.hom_basis_morphisms(X, Y)
        if x != y:
            return basis
        # radical of local End: non-invertible elements; compute as the
        # kernel of the projection to End/rad via trace-like criterion:
        # f in rad iff f nilpotent (End local with split residue field)
        out = []
        span = rl.RowSpace(self.hom_dim(x, y))
        for f in basis:
            if not self.is_iso(f):
                if span.add(f.flatten()):
                    out.append(f)
            else:
                # subtract scalar multiple of identity to land in rad
                idc = self.identity(X)
                lam = self._scalar_part(f, idc)
                g = f.add(idc.scal(-lam))
                if not g.is_zero() and span.add(g.flatten()):
                    out.append(g)
        return out

    def _scalar_part(self, f, idm):
        """lambda with f - lambda.id in rad (End local, residue field Q)."""
        for lam_try in self._eigen_candidates(f, idm):
            g = f.add(idm.scal(-lam_try))
            if not self.is_iso(g):
                return lam_try
        raise EngineError("no scalar part found in local End")

    def _eigen_candidates(self, f, idm):
        from .polyq import min_poly_of_matrix, rational_roots
        L = self.left_compose_operator(f, f.src)
        mp = min_poly_of_matrix(L)
        return rational_roots(mp)

    def ar_quiver(self, objects=None):
        """[(x, y, multiplicity)] with multiplicity dim rad/rad^2."""
        objs = list(range(self.n_objects)) if objects is None else list(objects)
        radd, rad2 = self.rad_data(objs)
        out = []
        for x in objs:
            for y in objs:
                m = radd[(x, y)] - rad2[(x, y)]
                if m > 0:
                    out.append((x, y, m))
        return out

    # ------------------------------------------------------ quotient categories
    def quotient_category(self, objects, ideal_ids, name=""):
        """PresentedCategory of add(objects) modulo maps through add(ideal_ids)."""
        from .presented import PresentedCategory
        objs = [o for o in objects if o not in set(ideal_ids)]
        homs = {}
        bases = {}
        for x in objs:
            for y in objs:
                X, Y = StObject((x,)), StObject((y,))
                full = self.hom_basis_morphisms(X, Y)
                sub = self.ideal_subspace(X, Y, ideal_ids)
                span = rl.RowSpace(self.hom_total_dim(X, Y))
                for (_, _, v) in sub:
                    span.add(v)
                sub_dim0 = span.dim
                reps = []
                for f in full:
                    if span.add(f.flatten()):
                        reps.append(f)
                bases[(x, y)] = (reps, sub, sub_dim0)
                homs[(x, y)] = len(reps)
        comp = {}
        for x in objs:
            for y in objs:
                for z in objs:
                    repsxy = bases[(x, y)][0]
                    repsyz = bases[(y, z)][0]
                    T = []
                    for g in repsyz:
                        row = []
                        for f in repsxy:
                            h = self.compose(g, f)
                            row.append(self._quotient_coords(bases, x, z, h))
                        T.append(row)
                    comp[(x, y, z)] = T
        idc = {}
        for x in objs:
            idc[x] = self._quotient_coords(bases, x, x, self.identity(StObject((x,))))
        names = {o: self.id_labels.get(o, str(o)) for o in objs}
        pc = PresentedCategory(objs, homs, comp, idc, names=names, name=name)
        pc._bases = bases
        pc._cat = self
        return pc

    def _quotient_coords(self, bases, x, z, h):
        reps, sub, _ = bases[(x, z)]
        gens = [v for (_, _, v) in sub] + [r.flatten() for r in reps]
        tgt = h.flatten()
        if not any(tgt):
            return [F(0)] * len(reps)
        c = rl.coords_in_span(gens, tgt)
        if c is None:
            raise EngineError("quotient coordinates failed")
        return c[len(sub):]


def _position_map(src_items, tgt_items, perm):
    """Map positions of src_items to positions of their perm-images in tgt_items."""
    used = [False] * len(tgt_items)
    out = {}
    for si, i in enumerate(src_items):
        pi = perm(i)
        for ti, j in enumerate(tgt_items):
            if j == pi and not used[ti]:
                out[si] = ti
                used[ti] = True
                break
    return out


def rotate_triangle(cat, tri):
    """(y, z, Sigma x) with maps (g, h, -Sigma f)."""
    sf = cat.suspend_morphism(tri.f).scal(F(-1))
    return Triangle(tri.y, tri.z, cat.suspend_obj(tri.x), tri.g, tri.h, sf)


def triangle_checks(cat, tri):
    """g.f = 0, h.g = 0, (Sigma f).h = 0."""
    if not cat.compose(tri.g, tri.f).is_zero():
        return False
    if not cat.compose(tri.h, tri.g).is_zero():
        return False
    sf = cat.suspend_morphism(tri.f)
    if not cat.compose(sf, tri.h).is_zero():
        return False
    return True


def long_exact_check(cat, tri, probes=None):
    """Exactness of Hom(w, -) applied to the triangle, on all probes."""
    probes = probes if probes is not None else range(cat.n_objects)
    sf = cat.suspend_morphism(tri.f)
    for w in probes:
        W = StObject((w,))
        ops = [
            (cat.left_compose_operator(tri.f, W), cat.left_compose_operator(tri.g, W),
             cat.hom_total_dim(W, tri.y)),
            (cat.left_compose_operator(tri.g, W), cat.left_compose_operator(tri.h, W),
             cat.hom_total_dim(W, tri.z)),
            (cat.left_compose_operator(tri.h, W), cat.left_compose_operator(sf, W),
             cat.hom_total_dim(W, cat.suspend_obj(tri.x))),
        ]
        for A, B, mid in ops:
            BA = rl.mat_mul(B, A)
            if not rl.is_zero_mat(BA):
                return False
            if rl.rank(A) + rl.rank(B) != mid:
                return False
    return True
