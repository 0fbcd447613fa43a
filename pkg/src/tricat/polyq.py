"""Polynomials over Q (coefficient lists, lowest degree first).

Just enough for minimal polynomials and spectral idempotents: gcd,
squarefree part, rational roots, and the CRT polynomial that evaluates to a
projector onto one rational eigenvalue.
"""

from fractions import Fraction

from . import ratlin as rl

F = Fraction


def poly_trim(p):
    while p and not p[-1]:
        p.pop()
    return p


def poly_add(p, q):
    n = max(len(p), len(q))
    return poly_trim([(p[i] if i < len(p) else F(0)) + (q[i] if i < len(q) else F(0))
                      for i in range(n)])


def poly_scal(c, p):
    c = rl.frac(c)
    return poly_trim([c * x for x in p])


def poly_mul(p, q):
    if not p or not q:
        return []
    out = [F(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                if b:
                    out[i + j] += a * b
    return poly_trim(out)


def poly_divmod(p, q):
    p = list(p)
    q = poly_trim(list(q))
    if not q:
        raise ZeroDivisionError
    quot = [F(0)] * max(0, len(p) - len(q) + 1)
    while len(poly_trim(p)) >= len(q):
        p = poly_trim(p)
        shift = len(p) - len(q)
        c = p[-1] / q[-1]
        quot[shift] = c
        for i, b in enumerate(q):
            p[shift + i] -= c * b
    return poly_trim(quot), poly_trim(p)


def poly_gcd(p, q):
    p, q = poly_trim(list(p)), poly_trim(list(q))
    while q:
        _, r = poly_divmod(p, q)
        p, q = q, r
    if p:
        lead = p[-1]
        p = [x / lead for x in p]
    return p


def poly_derivative(p):
    return poly_trim([F(i) * p[i] for i in range(1, len(p))])


def poly_eval(p, x):
    acc = F(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def squarefree_part(p):
    d = poly_derivative(p)
    if not d:
        return p
    g = poly_gcd(p, d)
    if len(g) <= 1:
        return p
    q, _ = poly_divmod(p, g)
    if q:
        lead = q[-1]
        q = [x / lead for x in q]
    return q


def rational_roots(p):
    """All rational roots of p (exact, by the rational root theorem)."""
    p = poly_trim(list(p))
    if not p:
        return []
    roots = []
    while p and not p[0]:
        if F(0) not in roots:
            roots.append(F(0))
        p = p[1:]
    if len(p) <= 1:
        return roots
    # clear denominators
    from math import lcm
    den = 1
    for c in p:
        den = lcm(den, c.denominator)
    ip = [int(c * den) for c in p]
    a0, an = abs(ip[0]), abs(ip[-1])

    def divisors(n):
        out = []
        d = 1
        while d * d <= n:
            if n % d == 0:
                out.append(d)
                out.append(n // d)
            d += 1
        return sorted(set(out))

    for num in divisors(a0):
        for den2 in divisors(an):
            for sgn in (1, -1):
                cand = F(sgn * num, den2)
                if cand not in roots and poly_eval(p, cand) == 0:
                    roots.append(cand)
    return roots


def splitting_poly(sf, root):
    """Coefficients of e(x) = q(x)/q(root), q = sf/(x - root).

    e evaluates to a projector onto the root eigenspace modulo nilpotents.
    """
    q, r = poly_divmod(sf, [-root, F(1)])
    if poly_trim(list(r)):
        return None
    v = poly_eval(q, root)
    if not v:
        return None
    return [c / v for c in q]


def min_poly_of_matrix(B):
    """Minimal polynomial of a square matrix, lowest-first, monic."""
    n = len(B)
    if n == 0:
        return [F(0), F(1)]

    def flat(m):
        return [x for row in m for x in row]

    powers = [flat(rl.identity(n))]
    cur = rl.identity(n)
    for k in range(1, n + 2):
        cur = rl.mat_mul(B, cur)
        c = rl.coords_in_span(powers, flat(cur))
        if c is not None:
            coeffs = [-x for x in c] + [F(1)]
            return poly_trim(coeffs) if coeffs[-1] else coeffs
        powers.append(flat(cur))
    raise RuntimeError("minimal polynomial not found (unreachable)")
