"""Best-first hitting-set tree enumeration of minimal diagnoses.

Open nodes (sets of KB ids hit so far) wait in a queue ordered by
descending node probability, first-in-first-out among equal weights; with
uniform formula probabilities this degenerates to breadth-first search and
diagnoses appear in ascending cardinality.  Node labels are resolved in
order: non-minimality, duplicate removal, conflict reuse, fresh conflict
search on the shrunken KB.
"""

from __future__ import annotations

import math
import time
from bisect import insort
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .conflict import NO_CONFLICT, find_minimal_conflict
from .dpi import DPI, Diagnosis, is_admissible
from .probability import p_nodes


@dataclass
class NodeQueue:
    """Queue of open nodes, descending p_nodes, FIFO among ties."""

    probs: Mapping[int, float]
    _items: list[tuple[float, int, frozenset[int]]] = field(default_factory=list)
    _seq: int = 0

    def push(self, node: frozenset[int]) -> None:
        self._seq += 1
        insort(self._items, (-p_nodes(node, self.probs), self._seq, node))

    def pop(self) -> frozenset[int]:
        return self._items.pop(0)[2]

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, node: frozenset[int]) -> bool:
        return any(n == node for _, _, n in self._items)

    def nodes(self) -> list[frozenset[int]]:
        return [n for _, _, n in self._items]


VALID = "valid"
CLOSED = "closed"


def _label(dpi: DPI, node: frozenset[int], conflicts: list[frozenset[int]],
           diagnoses: list[Diagnosis], queue: NodeQueue):
    for d in diagnoses:
        if node >= d:  # non-minimality
            return CLOSED
    if node in queue:  # remove duplicates
        return CLOSED
    for c in conflicts:
        if not c & node:  # reuse c
            return c
    fresh = find_minimal_conflict(dpi.kb.ids() - node, dpi)
    if fresh is NO_CONFLICT:
        return VALID
    conflicts.append(fresh)
    return fresh


def hs(
    dpi: DPI,
    probs: Mapping[int, float],
    timeout_s: float = 1.0,
    n_min: float = 1,
    n_max: float = math.inf,
    collect_conflicts: Optional[list[frozenset[int]]] = None,
) -> list[Diagnosis]:
    """The most probable minimal diagnoses, best-first.

    Returns between n_min and n_max diagnoses when that many exist (the
    timeout only applies after n_min is reached), otherwise all of them.
    Pass n_min=math.inf to force full enumeration.
    """
    if n_min < 1:
        raise ValueError("n_min must be at least 1")
    if not is_admissible(dpi):
        raise ValueError("instance admits no diagnosis")
    start = time.monotonic()
    found: list[Diagnosis] = []
    conflicts: list[frozenset[int]] = [] if collect_conflicts is None else collect_conflicts
    queue = NodeQueue(probs)
    queue.push(frozenset())
    while len(queue):
        node = queue.pop()
        label = _label(dpi, node, conflicts, found, queue)
        if label is VALID:
            found.append(node)
        elif label is CLOSED:
            pass
        else:
            for e in sorted(label):
                queue.push(node | {e})
        if len(found) >= n_min and (len(found) == n_max or time.monotonic() - start > timeout_s):
            break
    return found


def non_interactive_debug(
    dpi: DPI,
    probs: Mapping[int, float],
    timeout_s: float = 1.0,
    n_min: float = 1,
    n_max: float = math.inf,
    auto: bool = False,
) -> list[Diagnosis]:
    """Batch front door: auto mode returns just the single best diagnosis."""
    if auto:
        return hs(dpi, probs, timeout_s, 1, 1)
    return hs(dpi, probs, timeout_s, n_min, n_max)
