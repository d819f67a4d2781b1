"""Bundle graph construction, grader assignment, and structural statistics.

A bundle graph is a k-regular bipartite graph with n element nodes (side U)
and n bundle nodes (side V): bundle v contains element-node u iff (u, v) is
an edge. Three families are provided:

* random k-regular graphs sampled as a union of k random perfect matchings,
* disjoint copies of a girth-6 incidence construction (one shared bundle per
  element pair inside a copy),
* disjoint copies of the complete bipartite graph K_{k,k} plus one circulant
  remainder component when k does not divide n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "BundleGraph",
    "Assignment",
    "random_k_regular",
    "girth6_graph",
    "girth6_copies",
    "kkk_copies",
    "assign",
    "shared_bundle_count",
    "shared_bundle_matrix",
    "overlap_energy",
    "overlap_energy_matrix",
    "overlap_index",
    "is_order_revealing",
    "girth_at_least_6",
    "dump_graph",
    "load_graph",
]


@dataclass(frozen=True)
class BundleGraph:
    """Immutable k-regular bipartite graph given by both adjacency sides."""

    n: int
    k: int
    adj_bundles: np.ndarray  # (n, k): bundles incident to each element node
    adj_elements: np.ndarray  # (n, k): element nodes inside each bundle

    def __post_init__(self):
        ab = np.asarray(self.adj_bundles, dtype=np.int64)
        ae = np.asarray(self.adj_elements, dtype=np.int64)
        n, k = self.n, self.k
        if ab.shape != (n, k) or ae.shape != (n, k):
            raise ValueError("adjacency arrays must both have shape (n, k)")
        for side, arr in (("bundle", ab), ("element", ae)):
            if arr.min() < 0 or arr.max() >= n:
                raise ValueError(f"{side} adjacency refers to nodes outside 0..{n - 1}")
            if (np.sort(arr, axis=1)[:, 1:] == np.sort(arr, axis=1)[:, :-1]).any():
                raise ValueError("parallel edges: graph must be simple")
        # mutual consistency: the two sides describe the same edge set
        eu = np.repeat(np.arange(n), k)
        edges_u = set(zip(eu.tolist(), ab.ravel().tolist()))
        edges_v = set(zip(ae.ravel().tolist(), eu.tolist()))
        if edges_u != edges_v:
            raise ValueError("adjacency lists are not mutually consistent")
        ab = ab.copy()
        ae = ae.copy()
        ab.setflags(write=False)
        ae.setflags(write=False)
        object.__setattr__(self, "adj_bundles", ab)
        object.__setattr__(self, "adj_elements", ae)

    @classmethod
    def from_bundles(cls, n: int, bundles: Sequence[Sequence[int]]) -> "BundleGraph":
        """Build from an explicit list of n bundles of equal size k."""
        if len(bundles) != n:
            raise ValueError(f"expected {n} bundles, got {len(bundles)}")
        k = len(bundles[0])
        ae = np.array([sorted(b) for b in bundles], dtype=np.int64)
        incident: list[list[int]] = [[] for _ in range(n)]
        for v, bundle in enumerate(bundles):
            for u in bundle:
                incident[u].append(v)
        if any(len(row) != k for row in incident):
            bad = next(u for u, row in enumerate(incident) if len(row) != k)
            raise ValueError(
                f"element node {bad} has degree {len(incident[bad])}, expected {k}"
            )
        ab = np.array(incident, dtype=np.int64)
        return cls(n=n, k=k, adj_bundles=ab, adj_elements=ae)

    def bundle(self, v: int) -> tuple[int, ...]:
        return tuple(int(u) for u in self.adj_elements[v])

    def incidence(self) -> np.ndarray:
        """(n, n) boolean element-by-bundle incidence matrix."""
        A = np.zeros((self.n, self.n), dtype=bool)
        A[np.repeat(np.arange(self.n), self.k), self.adj_bundles.ravel()] = True
        return A


@dataclass(frozen=True)
class Assignment:
    """Random element placement pi plus the bundle-to-grader matching.

    ``pi[u]`` is the element placed on element-node u; ``grader_of[v]`` is the
    student who grades bundle v. No grader's own element appears in her bundle.
    """

    graph: BundleGraph
    pi: np.ndarray
    grader_of: np.ndarray

    def __post_init__(self):
        n = self.graph.n
        pi = np.asarray(self.pi, dtype=np.int64)
        grader_of = np.asarray(self.grader_of, dtype=np.int64)
        for name, arr in (("pi", pi), ("grader_of", grader_of)):
            if sorted(arr.tolist()) != list(range(n)):
                raise ValueError(f"{name} must be a bijection over 0..{n - 1}")
        node_of = np.empty(n, dtype=np.int64)
        node_of[pi] = np.arange(n)
        own_node = node_of[grader_of]  # node holding each grader's element
        if (self.graph.adj_elements == own_node[:, None]).any():
            raise ValueError("assignment lets a student grade her own element")
        pi = pi.copy()
        grader_of = grader_of.copy()
        pi.setflags(write=False)
        grader_of.setflags(write=False)
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "grader_of", grader_of)

    def bundle_elements(self, v: int) -> np.ndarray:
        """Element ids inside bundle v under this placement."""
        return self.pi[self.graph.adj_elements[v]]


def random_k_regular(n: int, k: int, rng: np.random.Generator) -> BundleGraph:
    """Union of k random perfect matchings of K_{n,n}, retried on dead ends.

    Each matching is drawn greedily: element nodes pick a uniformly random
    remaining incident edge in turn. If a node runs out of usable edges
    (every remaining partner already matched this round, or only already-used
    edges left), the whole construction restarts, so the result is always a
    simple k-regular graph. The restart budget of 10*k*n turns pathological
    inputs into a clean error.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    budget = 10 * k * n
    for _ in range(budget + 1):
        used: list[set[int]] = [set() for _ in range(n)]
        adj: list[list[int]] = [[] for _ in range(n)]
        failed = False
        for _round in range(k):
            avail = list(range(n))  # bundles unmatched in this round
            for u in range(n):
                v = -1
                idx = -1
                if len(avail) > 2 * k:
                    # rejection sampling: nearly always hits on the first try
                    for _try in range(32):
                        j = int(rng.integers(len(avail)))
                        if avail[j] not in used[u]:
                            v, idx = avail[j], j
                            break
                if v < 0:
                    candidates = [w for w in avail if w not in used[u]]
                    if not candidates:
                        failed = True
                        break
                    v = candidates[int(rng.integers(len(candidates)))]
                    idx = avail.index(v)
                used[u].add(v)
                adj[u].append(v)
                avail[idx] = avail[-1]
                avail.pop()
            if failed:
                break
        if not failed:
            bundles: list[list[int]] = [[] for _ in range(n)]
            for u, row in enumerate(adj):
                for v in row:
                    bundles[v].append(u)
            return BundleGraph.from_bundles(n, bundles)
    raise RuntimeError(
        f"random_k_regular(n={n}, k={k}) exceeded the restart budget of {budget}"
    )


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def girth6_graph(p: int) -> BundleGraph:
    """Girth-6 bundle graph on p^2+p+1 nodes per side with degree k = p+1.

    Every pair of element nodes shares exactly one bundle. Requires p = 1
    (the 6-cycle) or p prime. Elements are indexed as: hub 0, spokes 1..p,
    then grid cells (i, j) -> 1 + p + i*p + j.
    """
    if p != 1 and not _is_prime(p):
        raise ValueError(f"p must be 1 or prime, got {p}")
    n = p * p + p + 1

    def w(i: int, j: int) -> int:
        return 1 + p + i * p + j

    bundles: list[list[int]] = [[0] + [1 + s for s in range(p)]]
    for i in range(p):
        bundles.append([0] + [w(i, j) for j in range(p)])
    for i in range(p):
        for s in range(p):
            bundles.append([1 + s] + [w(j, (i + j * s) % p) for j in range(p)])
    return BundleGraph.from_bundles(n, bundles)


def girth6_copies(target_n: int, p: int) -> BundleGraph:
    """Disjoint copies of girth6_graph(p) totalling target_n nodes per side."""
    base = girth6_graph(p)
    if target_n % base.n != 0:
        raise ValueError(
            f"target_n={target_n} is not divisible by the component size {base.n}"
        )
    copies = target_n // base.n
    bundles: list[list[int]] = []
    for c in range(copies):
        off = c * base.n
        for v in range(base.n):
            bundles.append([u + off for u in base.bundle(v)])
    return BundleGraph.from_bundles(target_n, bundles)


def kkk_copies(n: int, k: int) -> BundleGraph:
    """Copies of K_{k,k}, plus one k-regular circulant remainder component.

    Uses m = floor(n/k) copies, decrementing m until the remainder r = n - m*k
    is 0 or at least k; the remainder component puts element node i in bundles
    i, i+1, ..., i+k-1 (mod r).
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    m = n // k
    r = n - m * k
    while m > 0 and 0 < r < k:
        m -= 1
        r = n - m * k
    if 0 < r < k:
        raise ValueError(f"no valid decomposition for n={n}, k={k}")
    bundles: list[list[int]] = []
    for c in range(m):
        off = c * k
        block = list(range(off, off + k))
        bundles.extend([list(block) for _ in range(k)])
    if r:
        off = m * k
        for i in range(r):
            bundles.append([off + (i + d) % r for d in range(k)])
    return BundleGraph.from_bundles(n, bundles)


def _grader_matching(graph: BundleGraph, node_of: np.ndarray) -> np.ndarray:
    """Perfect matching student -> bundle in the "allowed to grade" graph.

    Student s may grade bundle v iff the node holding her element is not in
    bundle v. That graph is (n-k)-regular, so a perfect matching exists for
    k < n; greedy plus BFS augmenting paths finds it.
    """
    n = graph.n
    forbidden = [set(graph.adj_bundles[node_of[s]].tolist()) for s in range(n)]
    match_s = np.full(n, -1, dtype=np.int64)  # student -> bundle
    match_v = np.full(n, -1, dtype=np.int64)  # bundle -> student
    free: list[int] = list(range(n))
    leftovers: list[int] = []
    for s in range(n):
        picked = -1
        for j in range(len(free) - 1, -1, -1):
            v = free[j]
            if v not in forbidden[s]:
                picked = v
                free[j] = free[-1]
                free.pop()
                break
        if picked >= 0:
            match_s[s] = picked
            match_v[picked] = s
        else:
            leftovers.append(s)
    for s in leftovers:
        # BFS over alternating paths in the complement graph
        parent_v: dict[int, int] = {}
        queue = [s]
        seen_s = {s}
        found = -1
        while queue and found < 0:
            cur = queue.pop(0)
            for v in range(n):
                if v in parent_v or v in forbidden[cur]:
                    continue
                parent_v[v] = cur
                owner = int(match_v[v])
                if owner < 0:
                    found = v
                    break
                if owner not in seen_s:
                    seen_s.add(owner)
                    queue.append(owner)
        if found < 0:
            raise RuntimeError("no perfect grader matching exists (k must be < n)")
        v = found
        while v >= 0:
            s2 = parent_v[v]
            nxt = int(match_s[s2])
            match_s[s2] = v
            match_v[v] = s2
            v = nxt
    return match_v


def assign(graph: BundleGraph, rng: np.random.Generator) -> Assignment:
    """Uniform random element placement plus a valid grader matching."""
    if graph.k >= graph.n:
        raise ValueError("assignment needs k < n so nobody grades her own element")
    pi = rng.permutation(graph.n)
    node_of = np.empty(graph.n, dtype=np.int64)
    node_of[pi] = np.arange(graph.n)
    grader_of = _grader_matching(graph, node_of)
    return Assignment(graph=graph, pi=pi, grader_of=grader_of)


def shared_bundle_matrix(graph: BundleGraph) -> np.ndarray:
    """(n, n) matrix of shared-bundle counts between element nodes (diag 0)."""
    A = graph.incidence().astype(np.float64)
    L = (A @ A.T).astype(np.int64)
    np.fill_diagonal(L, 0)
    return L


def shared_bundle_count(graph: BundleGraph, u: int, v: int) -> int:
    """Number of bundles containing both element nodes u and v."""
    if u == v:
        raise ValueError("shared_bundle_count needs two distinct element nodes")
    return int(
        np.intersect1d(graph.adj_bundles[u], graph.adj_bundles[v]).size
    )


def _shared_row(graph: BundleGraph, u: int) -> np.ndarray:
    """Shared-bundle counts from node u to every node (entry u forced to 0)."""
    row = np.bincount(
        graph.adj_elements[graph.adj_bundles[u]].ravel(), minlength=graph.n
    )
    row[u] = 0
    return row.astype(np.int64)


def overlap_energy(graph: BundleGraph, u: int, v: int) -> int:
    """Squared-overlap mass around the pair (u, v).

    4 * sum over nodes z at distance two from u or v (excluding u, v) of
    (shared(u,z) + shared(v,z))^2. Controls how concentrated the score gap
    between the pair's elements is.
    """
    if u == v:
        raise ValueError("overlap_energy needs two distinct element nodes")
    lam = _shared_row(graph, u) + _shared_row(graph, v)
    lam[u] = 0
    lam[v] = 0
    return int(4 * np.sum(lam.astype(np.int64) ** 2))


def overlap_energy_matrix(graph: BundleGraph, L: np.ndarray | None = None) -> np.ndarray:
    """(n, n) matrix of overlap energies for all ordered pairs (diag 0)."""
    if L is None:
        L = shared_bundle_matrix(graph)
    Lf = L.astype(np.float64)
    s2 = np.sum(Lf * Lf, axis=1)
    Q = Lf @ Lf.T
    theta = 4.0 * (s2[:, None] + s2[None, :] + 2.0 * Q - 2.0 * Lf * Lf)
    np.fill_diagonal(theta, 0.0)
    return np.rint(theta).astype(np.int64)


def overlap_index(graph: BundleGraph, L: np.ndarray | None = None) -> float:
    """Mean of sqrt(overlap energy) over all n(n-1) ordered node pairs."""
    n = graph.n
    if n < 2:
        return 0.0
    theta = overlap_energy_matrix(graph, L)
    total = np.sum(np.sqrt(theta.astype(np.float64)))
    return float(total / (n * (n - 1)))


def is_order_revealing(graph: BundleGraph) -> bool:
    """True iff every pair of element nodes shares at least one bundle."""
    if graph.n < 2:
        return True
    L = shared_bundle_matrix(graph)
    off = L + np.eye(graph.n, dtype=np.int64)  # mask the zero diagonal
    return bool(off.min() >= 1)


def girth_at_least_6(graph: BundleGraph) -> bool:
    """True iff the graph has no 4-cycle (bipartite, so no odd cycles either).

    Equivalent to: no two element nodes share two bundles and no two bundles
    share two elements.
    """
    A = graph.incidence().astype(np.float64)
    LU = A @ A.T
    LV = A.T @ A
    np.fill_diagonal(LU, 0)
    np.fill_diagonal(LV, 0)
    return bool(LU.max() <= 1 and LV.max() <= 1)


def dump_graph(graph: BundleGraph) -> str:
    """Text dump: header "n k", then one "bundle_id: u_1 ... u_k" line each."""
    lines = [f"{graph.n} {graph.k}"]
    for v in range(graph.n):
        members = " ".join(str(u) for u in graph.adj_elements[v])
        lines.append(f"{v}: {members}")
    return "\n".join(lines) + "\n"


def load_graph(text: str) -> BundleGraph:
    """Parse the dump_graph text format back into a BundleGraph."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty graph dump")
    try:
        n, k = (int(tok) for tok in lines[0].split())
    except ValueError as exc:
        raise ValueError(f"bad header line {lines[0]!r}") from exc
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} bundle lines, got {len(lines) - 1}")
    bundles: list[list[int]] = [[] for _ in range(n)]
    for ln in lines[1:]:
        head, _, rest = ln.partition(":")
        v = int(head)
        members = [int(tok) for tok in rest.split()]
        if len(members) != k:
            raise ValueError(f"bundle {v} has {len(members)} members, expected {k}")
        bundles[v] = members
    return BundleGraph.from_bundles(n, bundles)
