"""Vietoris-Rips filtrations and persistent cohomology over a prime field.

The reduction processes coboundary columns in reverse filtration order with
clearing, which yields the same interval pairing as boundary-matrix reduction
while exposing representative 1-cocycles for the H1 bars.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import as_float_array, check_prime
from .errors import InvalidArgumentError


@dataclass(frozen=True)
class Filtration:
    """Simplices of dimensions 0..maxdim sorted by (diameter, dim, vertices)."""

    n_vertices: int
    simplices: tuple  # ((v0, ...), diameter) in filtration order
    rmax: float
    maxdim: int

    def edges(self, max_diam=None):
        out = []
        for verts, diam in self.simplices:
            if len(verts) == 2 and (max_diam is None or diam <= max_diam):
                out.append((verts, diam))
        return out

    def triangles(self, max_diam=None):
        out = []
        for verts, diam in self.simplices:
            if len(verts) == 3 and (max_diam is None or diam <= max_diam):
                out.append((verts, diam))
        return out


def rips_filtration(distances, rmax, maxdim=2):
    """All simplices with pairwise distances <= rmax, diam = max pair distance."""
    D = as_float_array(distances, "distances", ndim=2)
    n = D.shape[0]
    if D.shape[1] != n:
        raise InvalidArgumentError(f"distance matrix must be square, got {D.shape}")
    scale = 1.0 + (float(np.max(np.abs(D))) if n else 0.0)
    if n and float(np.max(np.abs(D - D.T))) > 1e-9 * scale:
        raise InvalidArgumentError("distance matrix must be symmetric")
    if n and float(np.max(np.abs(np.diag(D)))) > 1e-9 * scale:
        raise InvalidArgumentError("distance matrix must have a zero diagonal")
    D = np.triu(D, 1)
    D = D + D.T  # exactly symmetric from here on
    rmax = float(rmax)
    if rmax < 0 or not math.isfinite(rmax):
        raise InvalidArgumentError(f"rmax must be finite and nonnegative, got {rmax}")
    maxdim = int(maxdim)
    if not 0 <= maxdim <= 3:
        raise InvalidArgumentError(f"maxdim must be in [0, 3], got {maxdim}")

    simplices = [((v,), 0.0) for v in range(n)]
    adj = (D <= rmax) & ~np.eye(n, dtype=bool)
    edge_rows = []
    if maxdim >= 1:
        for i in range(n):
            for j in np.nonzero(adj[i])[0]:
                if j > i:
                    edge_rows.append(((int(i), int(j)), float(D[i, j])))
    simplices.extend(edge_rows)
    tri_rows = []
    if maxdim >= 2:
        for (i, j), dij in edge_rows:
            ks = np.nonzero(adj[i] & adj[j])[0]
            ks = ks[ks > j]
            if ks.size:
                diams = np.maximum(dij, np.maximum(D[i, ks], D[j, ks]))
                tri_rows.extend(
                    ((i, j, int(k)), float(dk)) for k, dk in zip(ks, diams)
                )
    simplices.extend(tri_rows)
    if maxdim >= 3:
        for (i, j, k), dijk in tri_rows:
            ls = np.nonzero(adj[i] & adj[j] & adj[k])[0]
            ls = ls[ls > k]
            if ls.size:
                diams = np.maximum(
                    dijk, np.maximum(D[i, ls], np.maximum(D[j, ls], D[k, ls]))
                )
                simplices.extend(
                    ((i, j, k, int(l)), float(dl)) for l, dl in zip(ls, diams)
                )
    simplices.sort(key=lambda s: (s[1], len(s[0]), s[0]))
    return Filtration(n, tuple(simplices), rmax, maxdim)


@dataclass(frozen=True)
class Bar:
    """A persistence interval [birth, death) with an optional representative
    cocycle valid on the complex at `scale`."""

    dim: int
    birth: float
    death: float  # math.inf for essential classes
    representative: dict | None = None
    scale: float | None = None

    @property
    def persistence(self):
        return self.death - self.birth

    @property
    def ratio(self):
        if self.death <= self.birth:
            return 0.0
        if self.birth <= 0.0 or math.isinf(self.death):
            return math.inf
        return self.death / self.birth


@dataclass(frozen=True)
class Barcode:
    prime: int
    rmax: float
    n_vertices: int
    bars: dict  # {0: tuple[Bar], 1: tuple[Bar]}

    def in_dim(self, q):
        return self.bars.get(q, ())

    @property
    def n_components(self):
        """Connected components of the complex at rmax."""
        return sum(1 for b in self.in_dim(0) if math.isinf(b.death))


def _axpy(col, other, factor, p):
    """col -= factor * other, mod p, dropping zeros."""
    for key, val in other.items():
        nv = (col.get(key, 0) - factor * val) % p
        if nv:
            col[key] = nv
        else:
            col.pop(key, None)


def compute_persistence(filtration, prime=47):
    """Barcode of H0 and H1 with representative 1-cocycles.

    Each finite H1 bar carries a representative restricted to the complex at
    the interval midpoint; essential bars carry one at rmax. Zero-length
    intervals are dropped.
    """
    p = check_prime(prime)
    inv = [0] * p
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)

    verts = []
    edges = []
    tris = []
    for idx, (vs, diam) in enumerate(filtration.simplices):
        if len(vs) == 1:
            verts.append((idx, vs, diam))
        elif len(vs) == 2:
            edges.append((idx, vs, diam))
        elif len(vs) == 3:
            tris.append((idx, vs, diam))

    edge_diam = {idx: diam for idx, _, diam in edges}
    edge_verts = {idx: vs for idx, vs, _ in edges}

    # vertex -> coboundary entries (edge index, coefficient of v in d(edge))
    vertex_cofacets = {idx: [] for idx, _, _ in verts}
    vert_index = {vs[0]: idx for idx, vs, _ in verts}
    for idx, (a, b), _ in edges:
        vertex_cofacets[vert_index[a]].append((idx, p - 1))
        vertex_cofacets[vert_index[b]].append((idx, 1))

    # edge -> coboundary entries (triangle index, coefficient of e in d(tri))
    edge_cofacets = {idx: [] for idx, _, _ in edges}
    edge_index = {vs: idx for idx, vs, _ in edges}
    for idx, (x, y, z), _ in tris:
        edge_cofacets[edge_index[(y, z)]].append((idx, 1))
        edge_cofacets[edge_index[(x, z)]].append((idx, p - 1))
        edge_cofacets[edge_index[(x, y)]].append((idx, 1))

    bars0 = []
    bars1 = []

    # phase 0: vertex columns in reverse order; pivots are H0 deaths
    stored0 = {}
    cleared = set()
    for idx, vs, _ in reversed(verts):
        col = dict(vertex_cofacets[idx])
        while col:
            piv = min(col)
            entry = stored0.get(piv)
            if entry is None:
                break
            factor = (col[piv] * inv[entry[piv]]) % p
            _axpy(col, entry, factor, p)
        if col:
            piv = min(col)
            stored0[piv] = col
            cleared.add(piv)
            death = edge_diam[piv]
            if death > 0.0:
                bars0.append(Bar(0, 0.0, death))
        else:
            bars0.append(Bar(0, 0.0, math.inf))

    # phase 1: uncleared edge columns in reverse order, tracking the cochain
    # combination so zero/pivot events yield representative cocycles
    stored1 = {}
    for idx, vs, diam in reversed(edges):
        if idx in cleared:
            continue
        col = dict(edge_cofacets[idx])
        vcol = {idx: 1}
        while col:
            piv = min(col)
            entry = stored1.get(piv)
            if entry is None:
                break
            ocol, ovcol = entry
            factor = (col[piv] * inv[ocol[piv]]) % p
            _axpy(col, ocol, factor, p)
            _axpy(vcol, ovcol, factor, p)
        if col:
            piv = min(col)
            stored1[piv] = (col, vcol)
            death = filtration.simplices[piv][1]
            if death > diam:
                scale = 0.5 * (diam + death)
                rep = {
                    edge_verts[e]: v
                    for e, v in vcol.items()
                    if edge_diam[e] <= scale
                }
                bars1.append(Bar(1, diam, death, rep, scale))
        else:
            rep = {edge_verts[e]: v for e, v in vcol.items()}
            bars1.append(Bar(1, diam, math.inf, rep, filtration.rmax))

    return Barcode(
        prime=p,
        rmax=filtration.rmax,
        n_vertices=filtration.n_vertices,
        bars={0: tuple(bars0), 1: tuple(bars1)},
    )


def ranked_h1(barcode):
    """H1 bars sorted by persistence (desc), then birth, then emission order."""
    bars = barcode.in_dim(1)
    order = sorted(
        range(len(bars)),
        key=lambda i: (-bars[i].persistence, bars[i].birth, i),
    )
    return [bars[i] for i in order]


def dominant_h1(barcode):
    """The most persistent H1 bar, or None when H1 is empty."""
    ranked = ranked_h1(barcode)
    return ranked[0] if ranked else None


def save_barcode_csv(barcode, path):
    with open(path, "w") as fh:
        fh.write("dim,birth,death\n")
        for q in sorted(barcode.bars):
            for bar in barcode.in_dim(q):
                death = "inf" if math.isinf(bar.death) else "%.17g" % bar.death
                fh.write("%d,%.17g,%s\n" % (q, bar.birth, death))


def save_cocycle_csv(representative, path):
    with open(path, "w") as fh:
        fh.write("edge_u,edge_v,value\n")
        for (a, b) in sorted(representative):
            fh.write("%d,%d,%d\n" % (a, b, representative[(a, b)]))
