"""Independent reference implementations used to cross-check the library.

The persistence oracle runs the textbook boundary-matrix reduction: columns
in filtration order, pivot = largest nonzero row, left-to-right elimination
over GF(p). No clearing, no coboundaries, no shared code with the package
beyond consuming the same Filtration object, so agreement is meaningful.
"""

import math


def _boundary(verts):
    # faces with alternating signs: d[v0..vk] = sum_i (-1)^i [.. no vi ..]
    faces = []
    for i in range(len(verts)):
        faces.append((verts[:i] + verts[i + 1:], (-1) ** i))
    return faces


def reduce_barcode(filtration, prime):
    """Barcode via naive full reduction: {dim: sorted [(birth, death)]}.

    Zero-length intervals are dropped; essential classes get death = inf.
    Dimensions up to maxdim - 1 are reliable (top-dimension positives are
    truncation artifacts and are reported anyway; callers slice what they
    trust).
    """
    p = int(prime)
    index_of = {vs: i for i, (vs, _) in enumerate(filtration.simplices)}
    dims = [len(vs) - 1 for vs, _ in filtration.simplices]
    diams = [d for _, d in filtration.simplices]
    inv = [0] * p
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)

    pivot_owner = {}   # row index -> reduced column owning that pivot
    columns = {}       # column index -> reduced column {row: coeff}
    positive = []      # columns that reduced to zero, in order
    pairs = []         # (birth simplex index, death simplex index)

    for j, (vs, _) in enumerate(filtration.simplices):
        if len(vs) == 1:
            positive.append(j)
            continue
        col = {}
        for face, sign in _boundary(vs):
            col[index_of[face]] = sign % p
        while col:
            low = max(col)
            owner = pivot_owner.get(low)
            if owner is None:
                break
            other = columns[owner]
            factor = (col[low] * inv[other[low]]) % p
            for row, val in other.items():
                nv = (col.get(row, 0) - factor * val) % p
                if nv:
                    col[row] = nv
                else:
                    col.pop(row, None)
        if col:
            low = max(col)
            pivot_owner[low] = j
            columns[j] = col
            pairs.append((low, j))
        else:
            positive.append(j)

    bars = {}
    paired_births = {b for b, _ in pairs}
    for b, d in pairs:
        if diams[d] > diams[b]:
            bars.setdefault(dims[b], []).append((diams[b], diams[d]))
    for j in positive:
        if j not in paired_births:
            bars.setdefault(dims[j], []).append((diams[j], math.inf))
    for q in bars:
        bars[q].sort()
    return bars


def library_bars(barcode, q):
    """Library bars of dimension q as a sorted [(birth, death)] list."""
    return sorted((bar.birth, bar.death) for bar in barcode.in_dim(q))
