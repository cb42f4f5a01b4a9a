"""Initial qubit placement: interaction graphs and spectral linear layout.

Two-qubit interactions are collected into a weighted graph where a gate on
{u, v} in layer l contributes 2^-l to the edge weight (weights of repeated
interactions sum). Placing the qubits on the 1D bus so that the weighted
sum of edge lengths is minimized is the (NP-hard) minimum linear
arrangement problem; the spectral heuristic orders qubits by their
component in the Laplacian's Fiedler vector. An exact enumerator over all
n! arrangements serves as the small-instance oracle.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .circuit import SlicedCircuit
from .rng import SplitMix64

_BRUTE_FORCE_LIMIT = 9
_PERM_CACHE: dict[int, np.ndarray] = {}


@dataclass(frozen=True, eq=False)
class InteractionGraph:
    """Symmetric nonnegative weight matrix over qubits, zero diagonal."""

    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"weights must be square, got shape {w.shape}")
        if not np.allclose(w, w.T, atol=0.0):
            raise ValueError("weights must be symmetric")
        if np.any(np.diag(w) != 0.0):
            raise ValueError("weights must have a zero diagonal")
        if np.any(w < 0.0):
            raise ValueError("weights must be nonnegative")

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def edges(self) -> list[tuple[int, int, float]]:
        """Edges (u, v, weight) with u < v and weight > 0, sorted."""
        u_idx, v_idx = np.nonzero(np.triu(self.weights, 1))
        return [(int(u), int(v), float(self.weights[u, v])) for u, v in zip(u_idx, v_idx)]

    def to_edge_csv(self) -> str:
        lines = ["u,v,weight"]
        lines += [f"{u},{v},{w!r}" for u, v, w in self.edges()]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Placement:
    """Bijection virtual qubit -> storage site: ``perm[qubit] = site``."""

    perm: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "perm", tuple(int(p) for p in self.perm))
        n = len(self.perm)
        if sorted(self.perm) != list(range(n)):
            raise ValueError(f"perm must be a bijection onto 0..{n - 1}, got {self.perm}")

    @property
    def n(self) -> int:
        return len(self.perm)

    def site_of(self, qubit: int) -> int:
        return self.perm[qubit]

    @staticmethod
    def identity(n: int) -> "Placement":
        return Placement(tuple(range(n)))


def build_interaction_graph(sc: SlicedCircuit) -> InteractionGraph:
    """Layer-discounted interaction graph of a sliced native circuit."""
    n = sc.circuit.num_qubits
    w = np.zeros((n, n))
    for layer_idx, layer in enumerate(sc.layers):
        decay = 2.0**-layer_idx
        for gate_idx in layer:
            g = sc.circuit.gates[gate_idx]
            if g.is_two_qubit:
                u, v = g.qubits
                w[u, v] += decay
                w[v, u] += decay
    return InteractionGraph(w)


def laplacian(g: InteractionGraph) -> np.ndarray:
    """Graph Laplacian D - A; rows sum to zero, positive semidefinite."""
    a = g.weights
    return np.diag(a.sum(axis=1)) - a


def jacobi_eigh(a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100):
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.

    Returns (eigenvalues, eigenvectors) sorted ascending, eigenvectors in
    columns. The off-diagonal threshold is ``tol`` relative to the largest
    input entry, which makes the whole rotation sequence invariant under
    scaling the input.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"need a square matrix, got shape {a.shape}")
    n = a.shape[0]
    v = np.eye(n)
    scale = float(np.max(np.abs(a))) if n else 0.0
    if scale == 0.0:
        return np.zeros(n), v
    thresh = tol * scale
    for _ in range(max_sweeps):
        off = np.abs(a - np.diag(np.diag(a))).max()
        if off <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= thresh:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                row_p, row_q = a[p].copy(), a[q].copy()
                a[p] = c * row_p - s * row_q
                a[q] = s * row_p + c * row_q
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    eigvals = np.diag(a).copy()
    order = np.argsort(eigvals, kind="stable")
    return eigvals[order], v[:, order]


def fiedler_vector(lap: np.ndarray) -> np.ndarray:
    """Unit eigenvector of the second-smallest Laplacian eigenvalue.

    The result is orthogonal to the all-ones vector (exact for connected
    graphs; enforced by projection in the degenerate disconnected case) and
    sign-fixed so its first nonzero component is positive.
    """
    lap = np.asarray(lap, dtype=float)
    n = lap.shape[0]
    if n < 2:
        raise ValueError(f"need at least 2 vertices, got {n}")
    eigvals, eigvecs = jacobi_eigh(lap)
    lam2 = float(eigvals[1])
    scale = max(float(np.max(np.abs(lap))), 1.0)
    x = eigvecs[:, 1]
    x = x - x.mean()
    if np.linalg.norm(x) < 1e-8:
        # the lam2 eigenspace column happened to align with all-ones; pick
        # the best-conditioned replacement from the same eigenspace
        gap = 1e-9 * scale
        candidates = [
            eigvecs[:, j] - eigvecs[:, j].mean()
            for j in range(n)
            if eigvals[j] <= lam2 + gap
        ]
        x = max(candidates, key=lambda c: float(np.linalg.norm(c)))
    x = x / np.linalg.norm(x)
    for component in x:
        if abs(component) > 1e-12:
            if component < 0:
                x = -x
            break
    return x


def spectral_placement(g: InteractionGraph) -> Placement:
    """Order qubits along the bus by Fiedler component (stable ties by index)."""
    if g.n < 2:
        raise ValueError(f"need at least 2 qubits, got {g.n}")
    if not g.edges():
        components = np.zeros(g.n)
    else:
        components = fiedler_vector(laplacian(g))
    order = np.argsort(components, kind="stable")
    perm = [0] * g.n
    for site, qubit in enumerate(order):
        perm[int(qubit)] = site
    return Placement(tuple(perm))


def random_placement(n: int, seed: int) -> Placement:
    """Uniformly random placement, deterministic per seed (SplitMix64)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    perm = list(range(n))
    SplitMix64(seed).shuffle(perm)
    return Placement(tuple(perm))


def minla_cost(g: InteractionGraph, p: Placement) -> float:
    """Weighted sum of site distances over all edges."""
    if p.n != g.n:
        raise ValueError(f"size mismatch: graph n={g.n}, placement n={p.n}")
    pos = np.asarray(p.perm)
    iu, iv = np.triu_indices(g.n, 1)
    return float(np.sum(g.weights[iu, iv] * np.abs(pos[iu] - pos[iv])))


def _all_permutations(n: int) -> np.ndarray:
    if n not in _PERM_CACHE:
        _PERM_CACHE[n] = np.array(
            list(itertools.permutations(range(n))), dtype=np.int64
        )
    return _PERM_CACHE[n]


def brute_force_minla(g: InteractionGraph) -> tuple[Placement, float]:
    """Exact MinLA by enumerating all n! arrangements (n <= 9).

    Ties resolve to the lexicographically smallest optimal permutation.
    """
    if g.n > _BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to n <= {_BRUTE_FORCE_LIMIT}, got {g.n}")
    perms = _all_permutations(g.n)
    costs = np.zeros(len(perms))
    for u, v, w in g.edges():
        costs += w * np.abs(perms[:, u] - perms[:, v])
    best = int(np.argmin(costs))  # first occurrence = lexicographically smallest
    return Placement(tuple(int(x) for x in perms[best])), float(costs[best])
