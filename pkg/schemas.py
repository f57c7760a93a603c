from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing import List, Optional, Dict, Any, Tuple
from enum import Enum

from services.graph_core import Graph, VertexSet

# Predicate Schemas
class PredicateKind(str, Enum):
    INDEPENDENT_SET = "independent_set"
    CLIQUE = "clique"
    MAX_DEGREE = "max_degree"
    PLEX = "plex"
    FOREST = "forest"
    TREEWIDTH_LE = "treewidth_le"
    DEGENERATE_LE = "degenerate_le"
    NONEDGES_LE_SIZE = "nonedges_le_size"
    LOCAL_TREEWIDTH_LE = "local_treewidth_le"


PARAMETRIZED_KINDS = {
    PredicateKind.MAX_DEGREE,
    PredicateKind.PLEX,
    PredicateKind.TREEWIDTH_LE,
    PredicateKind.DEGENERATE_LE,
    PredicateKind.LOCAL_TREEWIDTH_LE,
}


class Predicate(BaseModel):
    """
    Graph class a vertex set must induce.

    ``param`` is d for max_degree, plex (every member misses at most d others,
    i.e. a (d+1)-plex) and degenerate_le; t for treewidth_le and
    local_treewidth_le. Other kinds take no parameter.
    """

    model_config = ConfigDict(frozen=True)

    kind: PredicateKind = Field(..., description="Predicate kind")
    param: Optional[int] = Field(default=None, ge=0, description="d or t, depending on kind")

    @model_validator(mode="after")
    def _check_param(self) -> "Predicate":
        if self.kind in PARAMETRIZED_KINDS and self.param is None:
            raise ValueError(f"Predicate '{self.kind.value}' needs a parameter")
        if self.kind not in PARAMETRIZED_KINDS and self.param is not None:
            raise ValueError(f"Predicate '{self.kind.value}' takes no parameter")
        return self

    @property
    def hereditary(self) -> bool:
        return self.kind != PredicateKind.NONEDGES_LE_SIZE

    @property
    def label(self) -> str:
        if self.kind == PredicateKind.PLEX:
            return f"plex({self.param + 1})"
        if self.param is None:
            return self.kind.value
        return f"{self.kind.value}({self.param})"

    @classmethod
    def of(cls, kind: str, param: Optional[int] = None) -> "Predicate":
        return cls(kind=PredicateKind(kind), param=param)


# Closure Schemas
class ClosureNumber(BaseModel):
    c: int = Field(..., ge=1, description="Smallest c for which the graph is c-closed")
    witness: Optional[Tuple[int, int]] = Field(
        None, description="Non-adjacent pair with exactly c-1 common neighbors (only when c > 1)"
    )


# Treewidth Schemas
class TreeDecomposition(BaseModel):
    tree: List[List[int]] = Field(..., description="Adjacency list over bag indices")
    bags: List[VertexSet] = Field(..., description="Bag contents")
    width: int = Field(..., ge=-1, description="Max bag size - 1")


class LocalTWProfile(BaseModel):
    values: Dict[int, int] = Field(..., description="r -> ltw(r)")

    def cap(self, r: int) -> Optional[int]:
        return self.values.get(r)


# Enumeration Schemas
class EnumerationReport(BaseModel):
    results: List[VertexSet] = Field(..., description="Result sets in canonical order")
    candidates_generated: int = Field(default=0, ge=0)
    duplicates_removed: int = Field(default=0, ge=0)
    class_rejections: int = Field(default=0, ge=0, description="Candidates outside the class")
    maximality_rejections: int = Field(default=0, ge=0)
    bound_value: Optional[float] = Field(None, description="Counting bound for this instance")
    bound_proven: bool = Field(default=True, description="False when the bound constant is estimated")
    closure: Optional[int] = Field(None, description="Closure number of the input graph")
    exact: bool = Field(default=True, description="False for superset-mode output")

    @property
    def count(self) -> int:
        return len(self.results)


class ExtensionInstance(BaseModel):
    host: Graph = Field(..., description="Graph the degree cap applies to")
    prefix: VertexSet = Field(..., description="Fixed vertices P")
    free: VertexSet = Field(..., description="Optional vertices R")
    d: int = Field(..., ge=0, description="Degree cap")

    @model_validator(mode="after")
    def _check_sets(self) -> "ExtensionInstance":
        if self.prefix.mask & self.free.mask:
            raise ValueError("prefix and free vertices must be disjoint")
        if (self.prefix.mask | self.free.mask) & ~self.host.full_mask:
            raise ValueError("prefix and free vertices must lie in the host graph")
        return self


class KStar(BaseModel):
    head: VertexSet
    tails: VertexSet
    proper: bool


class GoodPartition(BaseModel):
    edges: List[Tuple[int, int]] = Field(..., description="Anchor edges e_1..e_k")
    parts: List[VertexSet] = Field(..., description="A_0..A_k")
    ell: int = Field(..., ge=0)


class EnumMode(str, Enum):
    SUPERSET = "superset"
    EXACT = "exact"


class TwEnumConfig(BaseModel):
    t: int = Field(..., ge=0, description="Treewidth cap")
    mode: EnumMode = Field(default=EnumMode.SUPERSET)
    local: Optional[LocalTWProfile] = Field(None, description="Local treewidth caps f(r)")


class DegenConfig(BaseModel):
    d: int = Field(..., ge=1, description="Degeneracy cap")


# Combinatorics Schemas
class BoundRecord(BaseModel):
    N: int = Field(..., ge=0, description="Free vertex count")
    predicate: str = Field(..., description="Predicate label")
    prefix_size: int = Field(default=0, ge=0)
    max_count: int = Field(..., ge=0)
    argmax_graphs: List[Graph] = Field(default_factory=list)
    argmax_ids: List[int] = Field(default_factory=list)
    bound_value: Optional[float] = Field(None)
    graphs_scanned: int = Field(default=0, ge=0)

    @property
    def bound_satisfied(self) -> Optional[bool]:
        if self.bound_value is None:
            return None
        return self.max_count <= self.bound_value + 1e-9


class KappaValue(BaseModel):
    d: int = Field(..., ge=0)
    root: float = Field(..., description="Root in (1, 2) of x^(d+4) - 2x^(d+3) + 1")
    shifted_root: float = Field(..., description="Root in (1, 2) of x^(d+3) - 2x^(d+2) + 1")
    table: Optional[float] = Field(None, description="Published value, d <= 4")


class M1LemmaReport(BaseModel):
    m1: int = Field(..., description="Number of maximal generalized induced matchings")
    disconnected_checked: int = 0
    twin_pairs_checked: int = 0
    domination_checked: int = 0
    sees_two_checked: int = 0
    failures: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


# Run Schemas
class RunReport(BaseModel):
    command: str = Field(..., description="Command echo")
    input_digest: Optional[str] = Field(None, description="sha256 of the canonical edge list")
    closure: Optional[int] = Field(None)
    wall_time_s: Optional[float] = Field(None)
    payload: Dict[str, Any] = Field(default_factory=dict)
    bound_satisfied: Optional[bool] = Field(None)
