"""
First homology of surface complexes and finitely generated abelian groups.

Classes are stored as signed crossing counts on the edges outside a spanning
tree of the dual graph; the links of interior vertices are the relations.
Public coordinates are taken in a symplectic basis found by splitting the
intersection form into hyperbolic pairs.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import networkx as nx
import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from utility.curves import CombCurve, closed_curve, reduce, signed_intersection
from utility.errors import ArcInput, DifferentSurfaces
from utility.surface import Half, SurfaceComplex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AbelianGroup:
    free_rank: int
    torsion: Tuple[int, ...] = ()

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_free(self) -> bool:
        return not self.torsion

    def to_dict(self) -> Dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "text": str(self)}

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def abelian_group(relations: Sequence[Sequence[int]], n: int) -> AbelianGroup:
    """
    Z^n modulo the row span of relations, via Smith normal form.

    Args:
        relations: integer rows of length n
        n: number of generators
    """
    rows = [list(map(int, r)) for r in relations if any(r)]
    if n == 0:
        return AbelianGroup(0)
    if not rows:
        return AbelianGroup(n)
    size = max(len(rows), n)
    padded = [r + [0] * (size - n) for r in rows] + [[0] * size for _ in range(size - len(rows))]
    snf = smith_normal_form(Matrix(padded), domain=ZZ)
    diagonal = [abs(int(snf[i, i])) for i in range(size)]
    nonzero = [d for d in diagonal if d != 0]
    torsion = tuple(sorted(d for d in nonzero if d > 1))
    return AbelianGroup(n - len(nonzero), torsion)


class HomologyBasis:
    """Coordinate system and intersection matrix for H_1 of one surface."""

    def __init__(self, surface: SurfaceComplex):
        self.surface = surface
        tree_edges, self.parent_half = _bfs_tree(surface)
        self.nontree: List[int] = [e for e in range(len(surface.pairs)) if e not in tree_edges]
        self.position = {e: i for i, e in enumerate(self.nontree)}
        self.relations = np.array(
            [self.vector(link) for link in surface.interior_vertex_links], dtype=np.int64
        ).reshape(-1, len(self.nontree))
        self._pairing = None
        self._symplectic = None
        logger.debug(f"🔧 homology basis on {surface!r}: {len(self.nontree)} coordinates")

    @property
    def rank(self) -> int:
        return len(self.nontree)

    def vector(self, word: Sequence[Half]) -> np.ndarray:
        v = np.zeros(len(self.nontree), dtype=np.int64)
        for h in word:
            e, sign = self.surface.edge_index[h]
            if e in self.position:
                v[self.position[e]] += sign
        return v

    def path_from_root(self, p: int) -> List[Half]:
        path = []
        while p in self.parent_half:
            h = self.parent_half[p]
            path.append(h)
            p = h[0]
        return list(reversed(path))

    def fundamental_cycle(self, e: int) -> CombCurve:
        S = self.surface
        a, b = S.pairs[e]
        down = self.path_from_root(a[0])
        up = [S.partner(h) for h in reversed(self.path_from_root(b[0]))]
        return reduce(closed_curve(S, down + [a] + up, check=False))

    @property
    def pairing(self) -> np.ndarray:
        """J with <x, y> = x^T J y."""
        if self._pairing is None:
            cycles = [self.fundamental_cycle(e) for e in self.nontree]
            n = len(cycles)
            J = np.zeros((n, n), dtype=np.int64)
            for i in range(n):
                for j in range(i + 1, n):
                    J[i, j] = signed_intersection(cycles[i], cycles[j])
                    J[j, i] = -J[i, j]
            self._pairing = J
        return self._pairing

    @property
    def symplectic_basis(self) -> np.ndarray:
        """
        Rows a_1..a_g, b_1..b_g in chain coordinates with <a_i, b_j> = delta_ij
        and <a_i, a_j> = <b_i, b_j> = 0.
        """
        if self._symplectic is None:
            rows, factors = _hyperbolic_pairs(self.pairing)
            if any(d != 1 for d in factors):
                logger.warning(f"⚠️ intersection form on {self.surface!r} is not unimodular: {factors}")
            self._symplectic = rows
        return self._symplectic

    @property
    def genus(self) -> int:
        return len(self.symplectic_basis) // 2

    def symplectic_coordinates(self, v: np.ndarray) -> np.ndarray:
        """(alpha_1..alpha_g, beta_1..beta_g) of v; boundary classes project to zero."""
        B, J, g = self.symplectic_basis, self.pairing, self.genus
        return np.concatenate([-(B[g:] @ J @ v), B[:g] @ J @ v]).astype(np.int64)

    def group(self, extra: Sequence[np.ndarray] = ()) -> AbelianGroup:
        rows = [list(r) for r in self.relations] + [list(v) for v in extra]
        return abelian_group(rows, self.rank)

    def is_zero(self, v: np.ndarray) -> bool:
        return self.group() == self.group([v])


def _bfs_tree(surface: SurfaceComplex) -> Tuple[set, Dict[int, Half]]:
    """Spanning tree of the dual graph as (tree edges, half leading into each polygon)."""
    parent_half: Dict[int, Half] = {}
    tree_edges = set()
    for parent, child in nx.bfs_tree(surface.dual_graph, 0).edges():
        e = min(
            key for key, data in surface.dual_graph.get_edge_data(parent, child).items()
        )
        a, b = surface.pairs[e]
        h = a if a[0] == parent else b
        tree_edges.add(e)
        parent_half[child] = h
    return tree_edges, parent_half


def _hyperbolic_pairs(J: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """
    Integral change of basis splitting an alternating form into hyperbolic pairs.

    Returns the pair vectors as rows (all first members, then all second
    members) and the value of the form on each pair. Whatever is left over
    spans the radical.
    """
    n = J.shape[0]
    A = np.array(J, dtype=np.int64)
    P = np.eye(n, dtype=np.int64)

    def add(src: int, dst: int, k: int) -> None:
        # basis vector dst += k * basis vector src
        if k:
            P[:, dst] += k * P[:, src]
            A[:, dst] += k * A[:, src]
            A[dst, :] += k * A[src, :]

    def swap(i: int, j: int) -> None:
        if i != j:
            P[:, [i, j]] = P[:, [j, i]]
            A[:, [i, j]] = A[:, [j, i]]
            A[[i, j], :] = A[[j, i], :]

    firsts, seconds, factors = [], [], []
    t = 0
    while t + 1 < n:
        block = A[t:, t:]
        nonzero = np.argwhere(block != 0).tolist()
        if not nonzero:
            break
        i, j = min(nonzero, key=lambda ij: abs(int(block[ij[0], ij[1]])))
        i, j = i + t, j + t
        swap(t, i)
        if j == t:
            j = i
        swap(t + 1, j)
        if A[t, t + 1] < 0:
            swap(t, t + 1)
        d = int(A[t, t + 1])
        clean = True
        for k in range(t + 2, n):
            add(t + 1, k, -(int(A[t, k]) // d))
            add(t, k, int(A[t + 1, k]) // d)
            if A[t, k] or A[t + 1, k]:
                clean = False
        if not clean:
            continue
        bad = np.argwhere(A[t + 2:, t + 2:] % d != 0)
        if len(bad):
            # pull an entry the pivot does not divide into row t
            add(int(bad[0][0]) + t + 2, t, 1)
            continue
        firsts.append(P[:, t].copy())
        seconds.append(P[:, t + 1].copy())
        factors.append(d)
        t += 2
    rows = np.array(firsts + seconds, dtype=np.int64).reshape(-1, n)
    return rows, factors


@lru_cache(maxsize=64)
def homology_basis(surface: SurfaceComplex) -> HomologyBasis:
    return HomologyBasis(surface)


@dataclass(frozen=True)
class HomologyClass:
    """
    A class in H_1 of a surface.

    chain holds the signed crossing counts on the non-tree edges of the dual
    graph (the working representation); coordinates are the symplectic ones.
    """
    surface: SurfaceComplex
    chain: Tuple[int, ...]

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.chain, dtype=np.int64)

    @property
    def coordinates(self) -> Tuple[int, ...]:
        """Coordinates in the symplectic basis, length 2g."""
        return tuple(int(x) for x in homology_basis(self.surface).symplectic_coordinates(self.vector))

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        return HomologyClass(self.surface, tuple(int(x) for x in self.vector + other.vector))

    def __neg__(self) -> "HomologyClass":
        return HomologyClass(self.surface, tuple(-x for x in self.chain))

    def __sub__(self, other: "HomologyClass") -> "HomologyClass":
        return self + (-other)

    def is_zero(self) -> bool:
        return homology_basis(self.surface).is_zero(self.vector)


def homology_class(c: CombCurve) -> HomologyClass:
    if not c.is_closed:
        raise ArcInput("arcs have no homology class")
    basis = homology_basis(c.surface)
    return HomologyClass(c.surface, tuple(int(x) for x in basis.vector(c.path)))


def algebraic_intersection(x: HomologyClass, y: HomologyClass) -> int:
    if x.surface != y.surface:
        raise DifferentSurfaces("classes live on different surfaces")
    J = homology_basis(x.surface).pairing
    return int(x.vector @ J @ y.vector)


def quotient_by_curves(surface: SurfaceComplex, curves: Sequence[CombCurve]) -> AbelianGroup:
    """H_1(surface) modulo the classes of the given closed curves."""
    basis = homology_basis(surface)
    return basis.group([homology_class(c).vector for c in curves])
