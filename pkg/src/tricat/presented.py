"""Finite categories presented by Hom bases and composition tables.

This is the universal output model: quotient categories, module-category
models and localisation models are all shipped as PresentedCategory.  It
also hosts the small-graph isomorphism search used to compare quivers.
"""

from fractions import Fraction

from . import ratlin as rl

F = Fraction


class PresentedCategory:
    def __init__(self, objects, hom, comp, idc, names=None, name=""):
        self.objects = list(objects)
        self.hom = dict(hom)          # (x, y) -> dim
        self.comp = dict(comp)        # (x, y, z) -> T[j][i] -> coords over (x,z)
        self.idc = dict(idc)          # x -> coords of identity in (x, x)
        self.names = names or {o: str(o) for o in self.objects}
        self.name = name
        self._rad_cache = None

    def dim(self, x, y):
        return self.hom.get((x, y), 0)

    def compose_coords(self, x, y, z, g, f):
        T = self.comp[(x, y, z)]
        out = [F(0)] * self.dim(x, z)
        for j, gc in enumerate(g):
            if gc:
                for i, fc in enumerate(f):
                    if fc:
                        vec = T[j][i]
                        for k in range(len(out)):
                            if vec[k]:
                                out[k] += gc * fc * vec[k]
        return out

    def verify(self):
        """Identities behave as identities; composition associative."""
        for x in self.objects:
            for y in self.objects:
                d = self.dim(x, y)
                for i in range(d):
                    f = [F(1) if k == i else F(0) for k in range(d)]
                    if self.compose_coords(x, x, y, f, self.idc[x]) != f:
                        return False
                    if self.compose_coords(x, y, y, self.idc[y], f) != f:
                        return False
        for x in self.objects:
            for y in self.objects:
                if not self.dim(x, y):
                    continue
                for z in self.objects:
                    if not self.dim(y, z):
                        continue
                    for w in self.objects:
                        if not self.dim(z, w):
                            continue
                        for i in range(self.dim(x, y)):
                            f = _unit(self.dim(x, y), i)
                            for j in range(self.dim(y, z)):
                                g = _unit(self.dim(y, z), j)
                                gf = self.compose_coords(x, y, z, g, f)
                                for k in range(self.dim(z, w)):
                                    h = _unit(self.dim(z, w), k)
                                    l1 = self.compose_coords(x, z, w, h, gf)
                                    hg = self.compose_coords(y, z, w, h, g)
                                    l2 = self.compose_coords(x, y, w, hg, f)
                                    if l1 != l2:
                                        return False
        return True

    # ------------------------------------------------------------ radicals
    def _left_op(self, x, y, g):
        """Matrix of (g . -): Hom(x, x') -> ... on End(x) for iso test."""
        d = self.dim(x, y)
        dd = self.dim(x, x)
        m = rl.zeros(d and dd and dd or dd, dd)
        return m

    def is_iso_coords(self, x, y, coords):
        if x != y:
            # between distinct canonical objects nothing is an isomorphism
            # unless the category identifies them; detect via two-sided
            # composition search
            if self.dim(x, y) == 0 or self.dim(y, x) == 0:
                return False
            for g in _all_units(self.dim(y, x)):
                pass
            # solve g with g.f = id_x and f.g = id_y
            return self._two_sided_invertible(x, y, coords)
        d = self.dim(x, x)
        # left multiplication operator on End(x)
        L = rl.zeros(d, d)
        for i in range(d):
            col = self.compose_coords(x, x, x, coords, _unit(d, i))
            for r in range(d):
                L[r][i] = col[r]
        return rl.det(L) != 0

    def _two_sided_invertible(self, x, y, f):
        dyx = self.dim(y, x)
        cols = []
        for i in range(dyx):
            g = _unit(dyx, i)
            cols.append(self.compose_coords(x, y, x, g, f))
        c = rl.coords_in_span(cols, self.idc[x])
        if c is None:
            return False
        g = [F(0)] * dyx
        for i, ci in enumerate(c):
            g[i] += ci
        back = self.compose_coords(y, x, y, f, g)
        return back == list(self.idc[y])

    def rad_dims(self):
        if self._rad_cache is not None:
            return self._rad_cache
        radd = {}
        radbasis = {}
        for x in self.objects:
            for y in self.objects:
                d = self.dim(x, y)
                if x != y:
                    radd[(x, y)] = d
                    radbasis[(x, y)] = [_unit(d, i) for i in range(d)]
                    continue
                basis = []
                span = rl.RowSpace(d)
                for i in range(d):
                    f = _unit(d, i)
                    if not self.is_iso_coords(x, x, f):
                        if span.add(f):
                            basis.append(f)
                    else:
                        lam = self._scalar_part(x, f)
                        g = [a - lam * b for a, b in zip(f, self.idc[x])]
                        if any(g) and span.add(g):
                            basis.append(g)
                radd[(x, y)] = len(basis)
                radbasis[(x, y)] = basis
        rad2 = {}
        for x in self.objects:
            for y in self.objects:
                span = rl.RowSpace(self.dim(x, y))
                for m in self.objects:
                    for f in radbasis[(x, m)]:
                        for g in radbasis[(m, y)]:
                            span.add(self.compose_coords(x, m, y, g, f))
                rad2[(x, y)] = span.dim
        self._rad_cache = (radd, rad2)
        return self._rad_cache

    def _scalar_part(self, x, f):
        from .polyq import min_poly_of_matrix, rational_roots
        d = self.dim(x, x)
        L = rl.zeros(d, d)
        for i in range(d):
            col = self.compose_coords(x, x, x, f, _unit(d, i))
            for r in range(d):
                L[r][i] = col[r]
        for lam in rational_roots(min_poly_of_matrix(L)):
            g = [a - lam * b for a, b in zip(f, self.idc[x])]
            if not self.is_iso_coords(x, x, g):
                return lam
        raise RuntimeError("no scalar part in local endomorphism ring")

    def ar_arrows(self):
        radd, rad2 = self.rad_dims()
        out = []
        for x in self.objects:
            for y in self.objects:
                m = radd[(x, y)] - rad2[(x, y)]
                if m > 0:
                    out.append((x, y, m))
        return out

    # -------------------------------------------------------- constructions
    def restrict(self, objs, name=""):
        objs = [o for o in self.objects if o in set(objs)]
        hom = {(x, y): self.dim(x, y) for x in objs for y in objs}
        comp = {(x, y, z): self.comp[(x, y, z)]
                for x in objs for y in objs for z in objs
                if (x, y, z) in self.comp}
        idc = {x: self.idc[x] for x in objs}
        names = {x: self.names[x] for x in objs}
        return PresentedCategory(objs, hom, comp, idc, names=names, name=name)

    def quotient_by_objects(self, ideal_objs, name=""):
        """Quotient by the ideal of maps factoring through add(ideal_objs)."""
        ideal_objs = [o for o in ideal_objs if o in set(self.objects)]
        keep = [o for o in self.objects if o not in set(ideal_objs)]
        bases = {}
        for x in keep:
            for y in keep:
                d = self.dim(x, y)
                span = rl.RowSpace(d)
                sub = []
                for m in ideal_objs:
                    for i in range(self.dim(x, m)):
                        f = _unit(self.dim(x, m), i)
                        for j in range(self.dim(m, y)):
                            g = _unit(self.dim(m, y), j)
                            v = self.compose_coords(x, m, y, g, f)
                            if span.add(v):
                                sub.append(v)
                reps = []
                for i in range(d):
                    if span.add(_unit(d, i)):
                        reps.append(_unit(d, i))
                bases[(x, y)] = (sub, reps)

        def qcoords(x, y, v):
            sub, reps = bases[(x, y)]
            if not any(v):
                return [F(0)] * len(reps)
            c = rl.coords_in_span(sub + reps, v)
            return c[len(sub):]

        hom = {(x, y): len(bases[(x, y)][1]) for x in keep for y in keep}
        comp = {}
        for x in keep:
            for y in keep:
                for z in keep:
                    T = []
                    for g in bases[(y, z)][1]:
                        row = []
                        for f in bases[(x, y)][1]:
                            row.append(qcoords(x, z, self.compose_coords(x, y, z, g, f)))
                        T.append(row)
                    comp[(x, y, z)] = T
        idc = {x: qcoords(x, x, list(self.idc[x])) for x in keep}
        names = {x: self.names[x] for x in keep}
        return PresentedCategory(keep, hom, comp, idc, names=names, name=name)

    def opposite(self):
        hom = {(y, x): d for (x, y), d in self.hom.items()}
        comp = {}
        for (x, y, z), T in self.comp.items():
            # op: comp_op(z, y, x): f_op: z->y is f: y->z ...
            dyz = self.dim(y, z)
            dxy = self.dim(x, y)
            Top = [[None] * dyz for _ in range(dxy)]
            for j in range(dyz):
                for i in range(dxy):
                    Top[i][j] = T[j][i]
            comp[(z, y, x)] = Top
        return PresentedCategory(self.objects, hom, comp, dict(self.idc),
                                 names=dict(self.names), name=self.name + "^op")

    # ------------------------------------------------------------- exports
    def hom_table(self):
        return {(self.names[x], self.names[y]): self.dim(x, y)
                for x in self.objects for y in self.objects}

    def to_json_dict(self):
        return {
            "name": self.name,
            "objects": [self.names[o] for o in self.objects],
            "hom_dims": sorted(
                [[self.names[x], self.names[y], self.dim(x, y)]
                 for x in self.objects for y in self.objects if self.dim(x, y)]),
            "ar_arrows": sorted(
                [[self.names[x], self.names[y], m] for (x, y, m) in self.ar_arrows()]),
        }

    def dot(self, highlight=(), deleted=()):
        lines = [f'digraph "{self.name or "category"}" {{']
        hl = set(highlight)
        dl = set(deleted)
        for o in self.objects:
            attrs = []
            if o in hl:
                attrs.append("shape=doublecircle")
            if o in dl:
                attrs.append('color=gray, fontcolor=gray')
            a = (" [" + ", ".join(attrs) + "]") if attrs else ""
            lines.append(f'  "{self.names[o]}"{a};')
        for (x, y, m) in self.ar_arrows():
            for _ in range(m):
                lines.append(f'  "{self.names[x]}" -> "{self.names[y]}";')
        lines.append("}")
        return "\n".join(lines)


def _unit(d, i):
    return [F(1) if k == i else F(0) for k in range(d)]


def _all_units(d):
    return [_unit(d, i) for i in range(d)]


# ---------------------------------------------------------------- graph iso

def quiver_isomorphism(arrows1, nodes1, arrows2, nodes2, hom1=None, hom2=None):
    """Backtracking isomorphism of multi-digraphs; returns a dict or None.

    arrows are dicts (x, y) -> multiplicity.  If hom tables are given they
    must also match under the bijection.
    """
    if len(nodes1) != len(nodes2):
        return None

    def degrees(nodes, arrows):
        out = {}
        for v in nodes:
            ind = sum(m for (x, y), m in arrows.items() if y == v)
            outd = sum(m for (x, y), m in arrows.items() if x == v)
            out[v] = (ind, outd)
        return out

    d1, d2 = degrees(nodes1, arrows1), degrees(nodes2, arrows2)
    order = sorted(nodes1, key=lambda v: (-(d1[v][0] + d1[v][1]), str(v)))
    assignment = {}
    used = set()

    def consistent(v, w):
        if d1[v] != d2[w]:
            return False
        for (x, y), m in arrows1.items():
            if x == v and y in assignment:
                if arrows2.get((w, assignment[y]), 0) != m:
                    return False
            if y == v and x in assignment:
                if arrows2.get((assignment[x], w), 0) != m:
                    return False
        if hom1 is not None:
            for u, img in assignment.items():
                if hom1.get((v, u), 0) != hom2.get((w, img), 0):
                    return False
                if hom1.get((u, v), 0) != hom2.get((img, w), 0):
                    return False
            if hom1.get((v, v), 0) != hom2.get((w, w), 0):
                return False
        return True

    def backtrack(k):
        if k == len(order):
            # final full arrow check
            for (x, y), m in arrows1.items():
                if arrows2.get((assignment[x], assignment[y]), 0) != m:
                    return False
            for (x, y), m in arrows2.items():
                inv = {w: v for v, w in assignment.items()}
                if arrows1.get((inv[x], inv[y]), 0) != m:
                    return False
            return True
        v = order[k]
        for w in nodes2:
            if w in used or not consistent(v, w):
                continue
            assignment[v] = w
            used.add(w)
            if backtrack(k + 1):
                return True
            del assignment[v]
            used.discard(w)
        return False

    if backtrack(0):
        return dict(assignment)
    return None


def equivariant_quiver_isomorphism(nodes1, arrows1, perms1,
                                   nodes2, arrows2, perms2, hom1=None, hom2=None):
    """Isomorphism commuting with paired permutations (tau, Sigma, ...)."""
    if len(nodes1) != len(nodes2):
        return None
    perms1 = [dict(p) for p in perms1]
    perms2 = [dict(p) for p in perms2]

    def propagate(assignment, v, w):
        stack = [(v, w)]
        local = {}
        while stack:
            a, b = stack.pop()
            if a in assignment or a in local:
                cur = assignment.get(a, local.get(a))
                if cur != b:
                    return None
                continue
            local[a] = b
            for p1, p2 in zip(perms1, perms2):
                stack.append((p1[a], p2[b]))
        return local

    def arrows_ok(assignment):
        for (x, y), m in arrows1.items():
            if x in assignment and y in assignment:
                if arrows2.get((assignment[x], assignment[y]), 0) != m:
                    return False
        return True

    unassigned = list(nodes1)
    assignment = {}

    def backtrack():
        pending = [v for v in nodes1 if v not in assignment]
        if not pending:
            inv = {w: v for v, w in assignment.items()}
            if len(inv) != len(assignment):
                return False
            for (x, y), m in arrows2.items():
                if arrows1.get((inv[x], inv[y]), 0) != m:
                    return False
            if hom1 is not None:
                for v1 in nodes1:
                    for u1 in nodes1:
                        if hom1.get((v1, u1), 0) != \
                           hom2.get((assignment[v1], assignment[u1]), 0):
                            return False
            return True
        v = pending[0]
        for w in nodes2:
            if w in assignment.values():
                continue
            local = propagate(assignment, v, w)
            if local is None:
                continue
            if len(set(local.values())) != len(local):
                continue
            if any(u in assignment.values() for u in local.values()):
                continue
            assignment.update(local)
            if arrows_ok(assignment) and backtrack():
                return True
            for a in local:
                del assignment[a]
        return False

    if backtrack():
        return dict(assignment)
    return None
