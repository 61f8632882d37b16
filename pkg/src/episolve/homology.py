"""Connectivity and mod-2 homology of chromatic complexes up to dimension 2."""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from itertools import combinations
from typing import Literal

import numpy as np
import numpy.typing as npt

from episolve.equivalence import facet_label
from episolve.errors import DimensionTooHigh, EmptyGroup
from episolve.kripke import KripkeFrame, KripkeModel
from episolve.logic import group_components
from episolve.simplicial import ChromaticComplex, ChromaticMap, Vertex, skeleton_edges
from episolve.types import Lit
from episolve.unionfind import DisjointSet

logger = logging.getLogger(__name__)

Matrix = npt.NDArray[np.uint8]
MAX_DIMENSION = 2


def connected_components(
    subject: ChromaticComplex | KripkeFrame, group: Iterable[str] | None = None
) -> tuple[tuple[str, ...], ...]:
    """Facets (by state label) or states grouped into components.

    Facets are adjacent when they share a vertex colored by ``group``;
    states when some agent of ``group`` confuses them.
    """
    members = subject.agents.require(group) if group is not None else subject.agents.agents
    if isinstance(subject, KripkeFrame):
        return group_components(subject, members)
    if not members:
        raise EmptyGroup("Facet connectivity")
    components: DisjointSet[str] = DisjointSet(facet_label(subject, f) for f in subject.facets)
    by_vertex: dict[Vertex, list[str]] = {}
    for facet in subject.facets:
        for vertex in facet:
            if vertex.color in members:
                by_vertex.setdefault(vertex, []).append(facet_label(subject, facet))
    for labels in by_vertex.values():
        components.union_all(labels)
    return components.groups()


@dataclass(frozen=True)
class KnowledgeComponent:
    states: tuple[str, ...]
    common: frozenset[Lit]


def common_knowledge_report(
    model: KripkeModel, group: Iterable[str]
) -> list[KnowledgeComponent]:
    """Components for ``group`` with the literals true throughout each."""
    report = []
    for component in group_components(model.frame, group):
        common = frozenset.intersection(*(model.val[s] for s in component))
        report.append(KnowledgeComponent(states=component, common=common))
    return report


def _reduce(matrix: Matrix) -> tuple[Matrix, list[int]]:
    """Row-reduced echelon form over GF(2) with pivot columns."""
    reduced = matrix.copy() % 2
    rows, cols = reduced.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        candidates = np.nonzero(reduced[row:, col])[0]
        if candidates.size == 0:
            continue
        pivot = row + int(candidates[0])
        if pivot != row:
            reduced[[row, pivot]] = reduced[[pivot, row]]
        others = np.nonzero(reduced[:, col])[0]
        for other in others:
            if other != row:
                reduced[other] ^= reduced[row]
        pivots.append(col)
        row += 1
    return reduced, pivots


def gf2_rank(matrix: Matrix) -> int:
    if matrix.size == 0:
        return 0
    return len(_reduce(matrix)[1])


def gf2_nullspace(matrix: Matrix) -> Matrix:
    """Columns form a basis of the kernel."""
    cols = matrix.shape[1]
    if matrix.shape[0] == 0:
        return np.eye(cols, dtype=np.uint8)
    reduced, pivots = _reduce(matrix)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.uint8)
    for index, col in enumerate(free):
        basis[col, index] = 1
        for row, pivot in enumerate(pivots):
            basis[pivot, index] = reduced[row, col]
    return basis


class ChainComplexGF2:
    def __init__(self, complex_: ChromaticComplex) -> None:
        if complex_.dimension > MAX_DIMENSION:
            raise DimensionTooHigh(complex_.dimension)
        self.complex = complex_
        self.vertices: list[Vertex] = list(complex_.vertices)
        self.edges: list[tuple[Vertex, Vertex]] = skeleton_edges(complex_)
        self.triangles: list[tuple[Vertex, ...]] = sorted(
            tuple(sorted(f)) for f in complex_.facets if len(f) == 3
        )
        self._vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        self.boundary_1 = self._boundary_1()
        self.boundary_2 = self._boundary_2()

    def _boundary_1(self) -> Matrix:
        matrix = np.zeros((len(self.vertices), len(self.edges)), dtype=np.uint8)
        for col, (x, y) in enumerate(self.edges):
            matrix[self._vertex_index[x], col] = 1
            matrix[self._vertex_index[y], col] = 1
        return matrix

    def _boundary_2(self) -> Matrix:
        matrix = np.zeros((len(self.edges), len(self.triangles)), dtype=np.uint8)
        for col, triangle in enumerate(self.triangles):
            for x, y in combinations(triangle, 2):
                matrix[self.edge_index[(x, y)], col] = 1
        return matrix

    def is_chain_complex(self) -> bool:
        product = (self.boundary_1.astype(np.int64) @ self.boundary_2.astype(np.int64)) % 2
        return not product.any()

    def cycles(self) -> Matrix:
        return gf2_nullspace(self.boundary_1)

    def betti_numbers(self) -> tuple[int, int]:
        rank_1 = gf2_rank(self.boundary_1)
        rank_2 = gf2_rank(self.boundary_2)
        return len(self.vertices) - rank_1, len(self.edges) - rank_1 - rank_2


def betti_numbers(complex_: ChromaticComplex) -> tuple[int, int]:
    return ChainComplexGF2(complex_).betti_numbers()


def edge_chain_map(
    chromatic: ChromaticMap, source: ChainComplexGF2, target: ChainComplexGF2
) -> Matrix:
    matrix = np.zeros((len(target.edges), len(source.edges)), dtype=np.uint8)
    for col, (x, y) in enumerate(source.edges):
        u, v = chromatic(x), chromatic(y)
        matrix[target.edge_index[(u, v) if u < v else (v, u)], col] = 1
    return matrix


def induced_h1_rank(chromatic: ChromaticMap) -> int:
    """Rank of the map induced on first homology."""
    source = ChainComplexGF2(chromatic.source)
    target = ChainComplexGF2(chromatic.target)
    images = (edge_chain_map(chromatic, source, target).astype(np.int64) @ source.cycles()) % 2
    boundaries = target.boundary_2
    combined = np.concatenate([images.astype(np.uint8), boundaries], axis=1)
    return gf2_rank(combined) - gf2_rank(boundaries)


Verdict = Literal["OBSTRUCTED", "INCONCLUSIVE"]


@dataclass(frozen=True)
class ObstructionReport:
    verdict: Verdict
    projection_h1_rank: int
    task_betti: tuple[int, int]
    protocol_betti: tuple[int, int]

    def as_dict(self) -> dict[str, object]:
        return {
            "verdict": self.verdict,
            "projection_h1_rank": self.projection_h1_rank,
            "task_betti": list(self.task_betti),
            "protocol_betti": list(self.protocol_betti),
        }


def obstruction_report(
    protocol: ChromaticComplex, projection: ChromaticMap, task: ChromaticComplex
) -> ObstructionReport:
    """Any decision map would factor ``H1(projection)`` through ``H1(task)``;
    a rank above the task's first Betti number rules it out."""
    rank = induced_h1_rank(projection)
    task_betti = betti_numbers(task)
    verdict: Verdict = "OBSTRUCTED" if rank > task_betti[1] else "INCONCLUSIVE"
    logger.debug("H1 rank of projection %d vs task b1 %d: %s", rank, task_betti[1], verdict)
    return ObstructionReport(
        verdict=verdict,
        projection_h1_rank=rank,
        task_betti=task_betti,
        protocol_betti=betti_numbers(protocol),
    )
