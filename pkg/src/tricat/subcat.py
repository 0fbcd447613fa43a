"""Subcategory calculus: perpendiculars, star products, C(T) and Cbar(T)."""

from .catalog import StObject, EngineError
from . import rigid as rg


class UnsupportedShape(Exception):
    pass


def perp(cat, X, side="right"):
    """Set of catalog ids in the (right or left) Hom-perp of X."""
    ids = X.summand_ids() if isinstance(X, StObject) else set(X)
    if side == "right":
        return rg.right_perp_ids(cat, ids)
    return rg.left_perp_ids(cat, ids)


def _cocone_summands(cat, X, sub_ids):
    """Summands of the cocone of the minimal right add(sub)-approximation."""
    _, f = rg.minimal_right_approx(cat, X, sub_ids)
    tri = rg.cocone(cat, f)
    return tri.x.summand_ids(), tri


def _cone_summands(cat, X, sub_ids):
    _, f = rg.minimal_right_approx(cat, X, sub_ids)
    tri = cat.cone(f)
    return tri.z.summand_ids(), tri


def cat_t_membership(cat, T):
    """Ids of the indecomposables in C(T) = T * Sigma T."""
    out = set()
    tids = T.summand_ids()
    for x in range(cat.n_objects):
        s, _ = _cocone_summands(cat, StObject((x,)), tids)
        if s <= tids:
            out.add(x)
    return out


def cbart_membership(cat, T, Tbar, Tnew=None, cross_check=True):
    """Ids of the indecomposables in Cbar(T) = T * Sigma Tbar.

    Primary criterion: cocone of the minimal right add(T)-approximation lies
    in add Tbar.  Cross-checked against the Tbar * Sigma T' criterion when
    the mutation T' is supplied.
    """
    tids = T.summand_ids()
    tbids = Tbar.summand_ids()
    out = set()
    for x in range(cat.n_objects):
        s, _ = _cocone_summands(cat, StObject((x,)), tids)
        if s <= tbids:
            out.add(x)
    if cross_check and Tnew is not None:
        alt = set()
        sigma_tnew = {cat.sigma(i) for i in Tnew.items}
        for x in range(cat.n_objects):
            s, _ = _cone_summands(cat, StObject((x,)), tbids)
            if s <= sigma_tnew:
                alt.add(x)
        if alt != out:
            raise EngineError(
                f"Cbar(T) criteria disagree: {sorted(out)} vs {sorted(alt)}")
    return out


def star_membership(cat, X, A_ids, B_ids):
    """(bool, witness triangle) for X in A * B, supported shapes only.

    Supported means A together with Sigma^{-1} B is rigid (exactly the
    shapes used by the constructions here); anything else raises
    UnsupportedShape.
    """
    A_ids = set(A_ids)
    B_ids = set(B_ids)
    test = StObject(tuple(sorted(A_ids | {cat.sigma_inv(b) for b in B_ids})))
    if not rg.is_rigid(cat, test):
        raise UnsupportedShape("A u Sigma^{-1}B is not rigid")
    if X.is_zero():
        return True, None
    _, f = rg.minimal_right_approx(cat, X, A_ids)
    wit = cat.cone(f)
    if set(wit.z.items) <= B_ids:
        return True, wit
    return False, None
