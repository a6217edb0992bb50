"""Pure-Python counting kernels; same signatures as the compiled ``_ckernels``.

All field elements are table indices; ``add`` and ``mul`` are q x q tables.
"""
from __future__ import annotations

import numpy as np


def fiber_counts(coefs, add, mul, sqcount, four, start=0, stop=None):
    """Affine point counts of ``y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6``.

    ``coefs`` has one row ``(a1, a2, a3, a4, a6)`` per fiber; rows
    ``start:stop`` are counted. Odd characteristic only.
    """
    add = add.tolist()
    mul = mul.tolist()
    sq = sqcount.tolist()
    q = len(add)
    rows = coefs.tolist()
    stop = len(rows) if stop is None else stop
    out = np.zeros(len(rows), dtype=np.int64)
    for i in range(start, stop):
        a1, a2, a3, a4, a6 = rows[i]
        total = 0
        for x in range(q):
            x2 = mul[x][x]
            rhs = add[add[add[mul[x2][x]][mul[a2][x2]]][mul[a4][x]]][a6]
            b = add[mul[a1][x]][a3]
            total += sq[add[mul[b][b]][mul[four][rhs]]]
        out[i] = total
    return out


def jacobi_histogram(n, add, neg, logmod, minus_one, start=1, stop=None):
    """Histogram ``H[l1, l2, l3]`` of discrete logs mod n over ``v1 + v2 + v3 = -1``.

    ``v1`` runs over ``start:stop``; all three ``v_i`` nonzero.
    """
    add = add.tolist()
    neg = neg.tolist()
    lg = logmod.tolist()
    q = len(add)
    stop = q if stop is None else stop
    hist = np.zeros((n, n, n), dtype=np.int64)
    h = [[[0] * n for _ in range(n)] for _ in range(n)]
    for v1 in range(max(start, 1), stop):
        base = add[minus_one][neg[v1]]
        l1 = lg[v1]
        row = h[l1]
        for v2 in range(1, q):
            v3 = add[base][neg[v2]]
            if v3:
                row[lg[v2]][lg[v3]] += 1
    hist[:] = h
    return hist


def fermat_projective_count(add, pown, start=0, stop=None):
    """Projective points on ``x0^n + x1^n + x2^n + x3^n = 0``.

    Points are normalised so the first nonzero coordinate is 1; the pair
    ``(lead, first free coordinate)`` is flattened into a range of length
    ``4 * q`` and only ``start:stop`` of it is counted.
    """
    add = add.tolist()
    pw = pown.tolist()
    q = len(add)
    stop = 4 * q if stop is None else stop
    count = 0
    for job in range(start, stop):
        lead, a = divmod(job, q)
        # lead coordinate is 1, coordinates before it are 0
        free = 3 - lead
        if free == 0:
            if a == 0 and pw[1] == 0:
                count += 1
            continue
        s0 = add[pw[1]][pw[a]]
        if free == 1:
            count += s0 == 0
        elif free == 2:
            for b in range(q):
                count += add[s0][pw[b]] == 0
        else:
            for b in range(q):
                s1 = add[s0][pw[b]]
                for c in range(q):
                    count += add[s1][pw[c]] == 0
    return count
