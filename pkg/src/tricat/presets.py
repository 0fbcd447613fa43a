"""Preset categories: orbit specs, self-injective preset algebras, labels.

Two of the four shipped presets are stable module categories of explicit
self-injective algebras (flip-twisted trivial extensions of the zigzag A_n,
generated here and frozen as JSON data); the other two orbit quotients admit
no self-injective module model (see the decisions ledger), so their catalogs
are built combinatorially and validated against the independent cover
formulas.
"""

import json
import os

from . import cover
from . import quiver as qv


class PresetMismatch(Exception):
    pass


class UnknownPreset(Exception):
    pass


def strip_orbit_algebra(n, d):
    """Self-injective orbit algebra Â(zigzag A_n)/<flip . shift^d>, n odd.

    Layer arrows go from odd vertices to even ones; connectors return to the
    next layer; the last layer wraps with the diagram flip.  Relations:
    the two return routes through each diamond agree, straight-through
    length-2 paths vanish.
    """
    assert n % 2 == 1 and n >= 3 and d >= 1
    flip = lambda i: n + 1 - i

    def nxt(i, z):
        return (i, z + 1) if z + 1 < d else (flip(i), 0)

    vertices = [(i, z) for z in range(d) for i in range(1, n + 1)]
    arrows = []
    lname = {}
    cname = {}
    for z in range(d):
        for i in range(1, n + 1, 2):
            for j in (i - 1, i + 1):
                if 1 <= j <= n:
                    nm = f"a{i}_{j}_z{z}"
                    arrows.append((nm, (i, z), (j, z)))
                    lname[(i, j, z)] = nm
        for j in range(2, n + 1, 2):
            for i in (j - 1, j + 1):
                if 1 <= i <= n:
                    nm = f"c{j}_{i}_z{z}"
                    arrows.append((nm, (j, z), nxt(i, z)))
                    cname[(j, i, z)] = nm
    relations = []
    for z in range(d):
        # odd vertices: diamonds and straights through the layer arrows
        for i in range(1, n + 1, 2):
            routes = []
            for j in (i - 1, i + 1):
                if 1 <= j <= n:
                    routes.append((lname[(i, j, z)], cname[(j, i, z)]))
            if len(routes) == 2:
                relations.append({routes[0]: 1, routes[1]: -1})
            for j in (i - 1, i + 1):
                if not (1 <= j <= n):
                    continue
                for i2 in (j - 1, j + 1):
                    if 1 <= i2 <= n and i2 != i:
                        relations.append({(lname[(i, j, z)], cname[(j, i2, z)]): 1})
        # even vertices: diamonds and straights through the connectors
        for j in range(2, n + 1, 2):
            jimg, z2 = nxt(j, z)
            routes = []
            for i in (j - 1, j + 1):
                i2, zz = nxt(i, z)
                routes.append((cname[(j, i, z)], lname[(i2, jimg, zz)]))
            relations.append({routes[0]: 1, routes[1]: -1})
            for i in (j - 1, j + 1):
                i2, zz = nxt(i, z)
                for j2 in (i2 - 1, i2 + 1):
                    if 1 <= j2 <= n and j2 != jimg:
                        relations.append({(cname[(j, i, z)], lname[(i2, j2, zz)]): 1})
    return qv.QuiverAlgebra(vertices, arrows, relations)


def nakayama_algebra(m, l):
    """Cyclic Nakayama algebra: m vertices, radical^l = 0."""
    vertices = list(range(m))
    arrows = [(f"x{i}", i, (i + 1) % m) for i in range(m)]
    relations = []
    for i in range(m):
        path = tuple(f"x{(i + k) % m}" for k in range(l))
        relations.append({path: 1})
    return qv.QuiverAlgebra(vertices, arrows, relations)


# ------------------------------------------------------------------- labels

# Figure 1 grid labels (x, y), converted to (p, i) via p=(x-y)/2, i=y+1.
_FIG1_GRID = {
    "a": (0, 0), "b": (1, 1), "c": (2, 2), "d": (3, 3), "e": (4, 4),
    "f": (5, 5), "g": (2, 0), "h": (3, 1), "i": (4, 2), "j": (5, 3),
    "k": (6, 4), "l": (4, 0), "m": (5, 1), "n": (6, 2), "p": (7, 3),
    "q": (6, 0), "r": (7, 1), "s": (8, 2),
}

# Figure 5 grid labels; e is defined as Sigma a (the figure leaves it
# unlabelled), and c', d' are written cp, dp.
_FIG5_GRID = {
    "a": (2, 0), "b": (3, 1), "c": (5, 3), "d": (6, 4),
    "cp": (1, 3), "dp": (2, 2), "g": (7, 1), "h": (8, 2), "f": (9, 3),
}

# Intro examples: T-labels on the cluster categories of A_3 and A_4.
_INTRO_A3 = {"T1": (0, 1), "T2": (0, 2), "T3": (0, 3)}
_INTRO_A4 = {"T1": (0, 1), "T2": (0, 2), "T3": (0, 4)}


def _labels_fig1():
    return {k: cover.grid_to_coord(*v) for k, v in _FIG1_GRID.items()}


def _labels_fig5():
    out = {k: cover.grid_to_coord(*v) for k, v in _FIG5_GRID.items()}
    out["e"] = cover.sigma(5, out["a"])
    return out


PRESET_NAMES = ["A9_t3s1", "A5_tm2s1", "A3_tm1s1", "A4_tm1s1"]
ALIASES = {"cluster_A3": "A3_tm1s1", "cluster_A4": "A4_tm1s1"}

_PRESET_DEFS = {
    "A9_t3s1": dict(n=9, a=3, b=1, backend="orbit", labels=_labels_fig1),
    "A5_tm2s1": dict(n=5, a=-2, b=1, backend="module", strip=(5, 1),
                     labels=_labels_fig5),
    "A3_tm1s1": dict(n=3, a=-1, b=1, backend="module", strip=(3, 1),
                     labels=lambda: dict(_INTRO_A3)),
    "A4_tm1s1": dict(n=4, a=-1, b=1, backend="orbit",
                     labels=lambda: dict(_INTRO_A4)),
}

_CACHE = {}


def preset_spec(name):
    name = ALIASES.get(name, name)
    if name not in _PRESET_DEFS:
        raise UnknownPreset(name)
    d = _PRESET_DEFS[name]
    return cover.OrbitSpec(d["n"], d["a"], d["b"])


def preset_algebra(name):
    """The self-injective preset algebra (module-backed presets only)."""
    name = ALIASES.get(name, name)
    d = _PRESET_DEFS[name]
    if "strip" not in d:
        return None
    data_path = os.path.join(os.path.dirname(__file__), "data", f"{name}.json")
    if os.path.exists(data_path):
        with open(data_path) as fh:
            return load_algebra_json(json.load(fh))
    return strip_orbit_algebra(*d["strip"])


def load_preset(name, validate=True):
    """(catalog, spec, report) with labels transported onto the catalog."""
    name = ALIASES.get(name, name)
    if name in _CACHE:
        return _CACHE[name]
    if name not in _PRESET_DEFS:
        raise UnknownPreset(name)
    d = _PRESET_DEFS[name]
    spec = cover.OrbitSpec(d["n"], d["a"], d["b"])
    if d["backend"] == "module":
        from .stable_backend import StableBackend
        algebra = preset_algebra(name)
        cat = StableBackend(algebra)
    else:
        from .orbit_backend import OrbitBackend
        cat = OrbitBackend(spec)
    report = validate_preset(cat, spec, d["labels"]()) if validate else None
    _CACHE[name] = (cat, spec, report)
    return _CACHE[name]


def validate_preset(cat, spec, label_coords=None):
    """Translation-quiver isomorphism (with Sigma) plus Hom-table equality.

    On success, transports labels onto the catalog; raises PresetMismatch
    with the first disagreeing datum otherwise.
    """
    from .presented import equivariant_quiver_isomorphism
    verts = spec.vertices()
    if cat.n_objects != len(verts):
        raise PresetMismatch(
            f"vertex count: catalog {cat.n_objects} vs orbit {len(verts)}")
    ok, witness = spec.mesh_additive_check()
    if not ok:
        raise PresetMismatch(f"cover mesh additivity failed at {witness}")
    arrows_cat = {}
    for (x, y, m) in cat.ar_quiver():
        arrows_cat[(x, y)] = m
    arrows_orb = {}
    for (v, w) in spec.arrows():
        arrows_orb[(v, w)] = arrows_orb.get((v, w), 0) + 1
    perms_cat = [{i: cat.tau(i) for i in range(cat.n_objects)},
                 {i: cat.sigma(i) for i in range(cat.n_objects)}]
    perms_orb = [{v: spec.tau_map(v) for v in verts},
                 {v: spec.sigma_map(v) for v in verts}]
    hom_cat = {(x, y): cat.hom_dim(x, y)
               for x in range(cat.n_objects) for y in range(cat.n_objects)}
    hom_orb = {(v, w): spec.hom_dim(v, w) for v in verts for w in verts}
    iso = equivariant_quiver_isomorphism(
        list(range(cat.n_objects)), arrows_cat, perms_cat,
        verts, arrows_orb, perms_orb, hom1=hom_cat, hom2=hom_orb)
    if iso is None:
        raise PresetMismatch("no Sigma-equivariant translation-quiver isomorphism"
                             " matching the Hom tables")
    inv = {w: x for x, w in iso.items()}
    if label_coords:
        cat.labels = {}
        cat.id_labels = {}
        for lab, coords in label_coords.items():
            cid = inv[spec.canonical(coords)]
            cat.labels[lab] = cid
            cat.id_labels[cid] = lab
        for i in range(cat.n_objects):
            if i not in cat.id_labels:
                v = iso[i]
                cat.id_labels[i] = f"v{v[0]}_{v[1]}"
                cat.labels[cat.id_labels[i]] = i
    return {"iso": iso, "vertices": len(verts)}


# ------------------------------------------------------------------ JSON IO

def algebra_json(A):
    rels = []
    for rel in A.relations:
        terms = []
        for p, c in rel.items():
            terms.append({"coef": f"{c.numerator}/{c.denominator}",
                          "path": [A.arrow_names[a] for a in p.arrows]})
        rels.append({"terms": sorted(terms, key=lambda t: t["path"])})
    return {
        "vertices": [str(v) for v in A.vertex_names],
        "arrows": [{"id": A.arrow_names[k],
                    "src": str(A.vertex_names[A.arrow_src[k]]),
                    "tgt": str(A.vertex_names[A.arrow_tgt[k]])}
                   for k in range(len(A.arrow_names))],
        "relations": rels,
    }


def load_algebra_json(data):
    from fractions import Fraction
    verts = data["vertices"]
    arrows = [(a["id"], a["src"], a["tgt"]) for a in data["arrows"]]
    rels = []
    for rel in data["relations"]:
        d = {}
        for t in rel["terms"]:
            num, den = t["coef"].split("/")
            d[tuple(t["path"])] = Fraction(int(num), int(den))
        rels.append(d)
    return qv.QuiverAlgebra(verts, arrows, rels)
