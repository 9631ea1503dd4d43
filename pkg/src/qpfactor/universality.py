"""Comparisons between factorizations: refinement, equivalence, joins."""

from dataclasses import dataclass

import numpy as np

from ._validation import as_float_array, check_positive
from .circular import circular_distance, winding, wrap_unit
from .errors import InvalidArgumentError


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, a):
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


def _check_pair(theta_a, theta_b):
    theta_a = as_float_array(theta_a, "theta_a", ndim=1)
    theta_b = as_float_array(theta_b, "theta_b", ndim=1)
    if theta_a.shape[0] != theta_b.shape[0]:
        raise InvalidArgumentError(
            f"phase sequences differ in length: {theta_a.shape[0]} vs {theta_b.shape[0]}"
        )
    if theta_a.shape[0] == 0:
        raise InvalidArgumentError("phase sequences are empty")
    return theta_a, theta_b


def refines(theta_from, theta_to, tol=0.02, K=2.0):
    """Does theta_from refine theta_to at resolution tol?

    True iff samples indistinguishable under theta_from (circular distance
    below tol) stay indistinguishable under theta_to at K*tol, i.e. a
    Lipschitz-K map from the finer phase space to the coarser one is
    consistent with the samples. Returns (verdict, witness pair or None).
    """
    theta_from, theta_to = _check_pair(theta_from, theta_to)
    tol = check_positive(tol, "tol")
    K = check_positive(K, "K")
    n = theta_from.shape[0]
    block = max(1, int(2e6) // max(1, n))
    for start in range(0, n, block):
        stop = min(start + block, n)
        d_from = circular_distance(
            theta_from[start:stop, None], theta_from[None, :]
        )
        d_to = circular_distance(theta_to[start:stop, None], theta_to[None, :])
        bad = (d_from < tol) & (d_to >= K * tol)
        if np.any(bad):
            i_local, j = np.argwhere(bad)[0]
            return False, (int(start + i_local), int(j))
    return True, None


def equivalent(theta_a, theta_b, tol=0.02):
    """Mutual refinement at Lipschitz slack K=2 in both directions."""
    ok_ab, _ = refines(theta_a, theta_b, tol=tol, K=2.0)
    ok_ba, _ = refines(theta_b, theta_a, tol=tol, K=2.0)
    return ok_ab and ok_ba


def u_injective_on_bins(u_model, tol):
    """Sufficient universality certificate: all distinct bin values of U are
    separated by more than tol."""
    tol = check_positive(tol, "tol")
    bins = u_model.bins
    if bins.shape[0] < 2:
        return True
    diffs = bins[:, None, :] - bins[None, :, :]
    dists = np.linalg.norm(diffs, axis=2)
    iu = np.triu_indices(bins.shape[0], 1)
    return bool(np.all(dists[iu] > tol))


def circular_clusters(theta, link_tol):
    """Cluster circle values by linking gaps of at most link_tol.

    Returns (labels, n_clusters) with labels numbered by first occurrence in
    the input order. Clustering is circular: a run crossing 1.0 joins its two
    arcs.
    """
    theta = as_float_array(theta, "theta", ndim=1) % 1.0
    n = theta.shape[0]
    order = np.argsort(theta, kind="stable")
    sorted_vals = theta[order]
    cluster_of = np.empty(n, dtype=int)
    cluster_of[order[0]] = 0
    current = 0
    for k in range(1, n):
        if sorted_vals[k] - sorted_vals[k - 1] > link_tol:
            current += 1
        cluster_of[order[k]] = current
    n_clusters = current + 1
    if n_clusters > 1:
        gap = (sorted_vals[0] - sorted_vals[-1]) % 1.0
        if gap <= link_tol:
            cluster_of[cluster_of == current] = 0
            n_clusters -= 1
    # renumber by first appearance so labels are order-deterministic
    remap = {}
    labels = np.empty(n, dtype=int)
    for i in range(n):
        c = cluster_of[i]
        if c not in remap:
            remap[c] = len(remap)
        labels[i] = remap[c]
    return labels, n_clusters


def circular_mean(values):
    """Mean direction of circle values in [0, 1); falls back to the first
    value when the directions cancel."""
    values = as_float_array(values, "values", ndim=1)
    ang = 2.0 * np.pi * values
    s, c = float(np.sum(np.sin(ang))), float(np.sum(np.cos(ang)))
    if s * s + c * c < 1e-18:
        return float(values[0] % 1.0)
    return float((np.arctan2(s, c) / (2.0 * np.pi)) % 1.0)


@dataclass(frozen=True)
class QuotientPartition:
    """Discrete join of two factorizations: per-sample class labels for the
    quotient that identifies phases witnessed by a common sample."""

    labels: np.ndarray
    n_classes: int
    quotient_edges: tuple       # class adjacency from domain-consecutive samples
    winding_estimate: float
    cycle_rank: int
    class_positions: np.ndarray  # representative circle position per class
    n_clusters: tuple            # clusters found per input factor
    witness_pairs: tuple         # sample pairs that merged distinct classes

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=int)
        if labels.min(initial=0) < 0 or (labels.size and labels.max() >= self.n_classes):
            raise InvalidArgumentError("labels must lie in [0, n_classes)")
        object.__setattr__(self, "labels", labels)


def join(theta1, theta2, n_bins=60, link_tol=1e-9):
    """Common coarsening of two circle-valued phases.

    Values of each phase are deduplicated at resolution link_tol; a
    union-find over the value nodes merges the pair of values witnessed by
    each sample, so two phase values land in one class exactly when a chain
    of samples connects them. Classes closer than a bin (1/n_bins) on the
    quotient circle are then reported as one, which makes the class count a
    resolution-B summary rather than a raw component count.

    Positions on the quotient circle unwrap theta1 by its cover degree
    (value count / component count): a phase that runs d times slower than
    the quotient revisits each class at d antipodally spread values, and
    multiplying by d collapses them to the single class position. The
    winding estimate plays the class positions back over the sample order.
    """
    theta1, theta2 = _check_pair(theta1, theta2)
    B = int(n_bins)
    if B < 2:
        raise InvalidArgumentError(f"n_bins must be >= 2, got {n_bins}")
    link_tol = check_positive(link_tol, "link_tol")
    n = theta1.shape[0]
    labels1, k1 = circular_clusters(theta1, link_tol)
    labels2, k2 = circular_clusters(theta2, link_tol)

    uf = UnionFind(k1 + k2)
    witness_pairs = []
    first_sample = {}  # union-find root -> earliest sample touching its class
    for i in range(n):
        a, b = int(labels1[i]), int(k1 + labels2[i])
        ra, rb = uf.find(a), uf.find(b)
        pa, pb = first_sample.get(ra), first_sample.get(rb)
        if ra != rb:
            uf.union(a, b)
            if pa is not None and pb is not None and pa != pb:
                witness_pairs.append((min(pa, pb), max(pa, pb)))
            first_sample[uf.find(a)] = min(x for x in (pa, pb, i) if x is not None)
        else:
            first_sample[ra] = pa if pa is not None else i

    remap = {}
    comp = np.empty(n, dtype=int)
    for i in range(n):
        root = uf.find(int(labels1[i]))
        if root not in remap:
            remap[root] = len(remap)
        comp[i] = remap[root]
    n_comp = len(remap)

    degree = max(1, int(round(k1 / n_comp)))
    comp_pos = np.zeros(n_comp)
    for c in range(n_comp):
        comp_pos[c] = circular_mean((degree * theta1[comp == c]) % 1.0)

    # collapse components to bin resolution on the quotient circle; the
    # small nudge keeps positions sitting on a boundary in a fixed bin
    comp_bin = (np.floor(B * comp_pos + 1e-7) % B).astype(int)
    bin_remap = {}
    labels = np.empty(n, dtype=int)
    for i in range(n):
        b = int(comp_bin[comp[i]])
        if b not in bin_remap:
            bin_remap[b] = len(bin_remap)
        labels[i] = bin_remap[b]
    n_classes = len(bin_remap)

    positions = np.zeros(n_classes)
    for c in range(n_classes):
        positions[c] = circular_mean((degree * theta1[labels == c]) % 1.0)
    seq = positions[labels]
    w = winding(seq) if n >= 2 else 0.0

    edges = set()
    for i in range(n - 1):
        a, b = int(labels[i]), int(labels[i + 1])
        if a != b:
            edges.add((min(a, b), max(a, b)))
    # cycle rank of the quotient graph: E - V + number of components
    uf_q = UnionFind(n_classes)
    n_comp = n_classes
    for a, b in edges:
        if uf_q.union(a, b):
            n_comp -= 1
    cycle_rank = len(edges) - n_classes + n_comp

    return QuotientPartition(
        labels=labels,
        n_classes=n_classes,
        quotient_edges=tuple(sorted(edges)),
        winding_estimate=float(w),
        cycle_rank=int(cycle_rank),
        class_positions=positions,
        n_clusters=(int(k1), int(k2)),
        witness_pairs=tuple(witness_pairs[:50]),
    )
