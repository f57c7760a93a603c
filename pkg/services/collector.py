import logging
from typing import Callable, List, Optional, Set

from schemas import EnumerationReport
from services.graph_core import VertexSet

logger = logging.getLogger(__name__)


class CandidateCollector:
    """
    Sink for candidate vertex sets shared by the enumerators.

    Every offered mask is counted, deduplicated, then run through the class
    test and the maximality test (either may be omitted). Survivors become
    results.
    """

    def __init__(
        self,
        in_class: Optional[Callable[[int], bool]] = None,
        is_maximal: Optional[Callable[[int], bool]] = None,
    ):
        self.in_class = in_class
        self.is_maximal = is_maximal
        self.candidates_generated = 0
        self.duplicates_removed = 0
        self.class_rejections = 0
        self.maximality_rejections = 0
        self._seen: Set[int] = set()
        self._results: Set[int] = set()

    def offer(self, mask: int, trusted: bool = False) -> bool:
        """Returns True when the mask became a new result. ``trusted`` skips the class test."""
        self.candidates_generated += 1
        if mask in self._seen:
            self.duplicates_removed += 1
            return False
        self._seen.add(mask)
        if not trusted and self.in_class is not None and not self.in_class(mask):
            self.class_rejections += 1
            return False
        if self.is_maximal is not None and not self.is_maximal(mask):
            self.maximality_rejections += 1
            return False
        self._results.add(mask)
        return True

    def offer_all(self, masks, trusted: bool = False) -> None:
        for mask in masks:
            self.offer(mask, trusted)

    def results(self) -> List[VertexSet]:
        return sorted(VertexSet.from_mask(m) for m in self._results)

    def report(self, **fields) -> EnumerationReport:
        report = EnumerationReport(
            results=self.results(),
            candidates_generated=self.candidates_generated,
            duplicates_removed=self.duplicates_removed,
            class_rejections=self.class_rejections,
            maximality_rejections=self.maximality_rejections,
            **fields,
        )
        logger.info(
            f"Collected {report.count} results from {self.candidates_generated} candidates "
            f"({self.duplicates_removed} duplicates, {self.class_rejections} outside class, "
            f"{self.maximality_rejections} not maximal)"
        )
        return report
