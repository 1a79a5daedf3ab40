"""Integer column echelon form on sparse columns.

Used to decide membership in subgroups of finite direct sums of cyclic
groups.  A column is a pair ``(a, u)`` where ``a`` maps row keys to the
entries of the matrix column and ``u`` records the unimodular transform
(column index -> coefficient).
"""

from __future__ import annotations


def _combine(c, k, p):
    """Return column ``c + k*p``."""
    a = dict(c[0])
    for r, v in p[0].items():
        w = a.get(r, 0) + k * v
        if w:
            a[r] = w
        else:
            a.pop(r, None)
    u = dict(c[1])
    for i, v in p[1].items():
        w = u.get(i, 0) + k * v
        if w:
            u[i] = w
        else:
            u.pop(i, None)
    return a, u


def _negate(c):
    return {r: -v for r, v in c[0].items()}, {i: -v for i, v in c[1].items()}


def echelon(matrix_columns, rows):
    """Column echelon form of an integer matrix.

    ``matrix_columns`` is a list of ``{row: value}`` dicts.  Returns
    ``(pivots, kernel)``: ``pivots`` is a list of ``(row, column)`` with a
    positive pivot entry, ordered by ``rows``; ``kernel`` is a list of
    transform vectors spanning the integer kernel of the matrix.
    """
    active = [(dict(a), {j: 1}) for j, a in enumerate(matrix_columns)]
    pivots = []
    for r in rows:
        nz = [c for c in active if c[0].get(r, 0)]
        if not nz:
            continue
        rest = [c for c in active if not c[0].get(r, 0)]
        while len(nz) > 1:
            nz.sort(key=lambda c: abs(c[0][r]))
            p = nz[0]
            survivors = [p]
            for c in nz[1:]:
                c = _combine(c, -(c[0][r] // p[0][r]), p)
                (survivors if c[0].get(r, 0) else rest).append(c)
            nz = survivors
        p = nz[0]
        if p[0][r] < 0:
            p = _negate(p)
        pivots.append((r, p))
        active = rest
    # remaining columns have an all-zero matrix part
    return pivots, [u for _, u in active]


def solve(pivots, target):
    """Integer solution ``z`` of ``A z = target`` or ``None``."""
    residual = {r: v for r, v in target.items() if v}
    z = {}
    for r, (a, u) in pivots:
        v = residual.get(r, 0)
        if v % a[r]:
            return None
        q = v // a[r]
        if not q:
            continue
        for rr, vv in a.items():
            w = residual.get(rr, 0) - q * vv
            if w:
                residual[rr] = w
            else:
                residual.pop(rr, None)
        for i, vv in u.items():
            z[i] = z.get(i, 0) + q * vv
    if residual:
        return None
    return z


def gcd_combination(vectors, index):
    """Combine ``vectors`` so that coordinate ``index`` becomes their gcd.

    Returns ``(g, v)`` with ``g >= 0`` the gcd of the ``index`` entries and
    ``v`` an integer combination of ``vectors`` whose ``index`` entry is
    ``g``.
    """
    g, acc = 0, {}
    for vec in vectors:
        c = vec.get(index, 0)
        if not c:
            continue
        d, s, t = _xgcd(g, c)
        if d == g:
            continue
        merged = {}
        for i in set(acc) | set(vec):
            w = s * acc.get(i, 0) + t * vec.get(i, 0)
            if w:
                merged[i] = w
        g, acc = d, merged
    return g, acc


def _xgcd(a, b):
    """Return ``(d, s, t)`` with ``d = gcd(a, b) = s*a + t*b`` and ``d >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0
