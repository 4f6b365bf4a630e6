"""Minimal conflict set extraction by divide and conquer.

``find_minimal_conflict`` returns NO_CONFLICT when the candidate sub-KB is
already valid, the empty set when the instance itself is non-admissible,
and otherwise one subset-minimal conflict within the candidate.  The split
point is always floor(n/2) over id order, so results are deterministic.
"""

from __future__ import annotations

import threading
from typing import Iterable, Optional

from .dpi import DPI, check_valid, is_kb_valid
from .formulas import Formula

NO_CONFLICT = None

_local = threading.local()


def reasoner_call_counter() -> int:
    """Validity checks spent by this thread's last find_minimal_conflict."""
    return getattr(_local, "last_calls", 0)


def find_minimal_conflict(candidate_ids: Iterable[int], dpi: DPI) -> Optional[frozenset[int]]:
    calls = 0

    def valid_kb(formula_set: list[Formula]) -> bool:
        nonlocal calls
        calls += 1
        return check_valid(formula_set, dpi)

    candidate = sorted(set(candidate_ids))
    if not set(candidate) <= dpi.kb.ids():
        raise ValueError(f"candidate ids {candidate} not within KB")

    background = list(dpi.background)
    try:
        if valid_kb(dpi.kb.formulas(candidate) + background):
            return NO_CONFLICT
        if not candidate or not valid_kb(background):
            # non-admissible instance: the empty set is its only minimal conflict
            return frozenset()
        return frozenset(_reduce([], candidate, background, dpi, valid_kb))
    finally:
        _local.last_calls = calls


def _reduce(seed: list[int], kb_ids: list[int], background: list[Formula], dpi: DPI, valid_kb) -> list[int]:
    """Core recursion: minimal conflict within kb_ids given the background.

    ``seed`` holds the ids moved into the background by the caller; a
    non-empty seed whose background is already invalid makes kb_ids
    irrelevant.
    """
    if seed and not valid_kb(background):
        return []
    if len(kb_ids) == 1:
        return list(kb_ids)
    k = len(kb_ids) // 2
    part1, part2 = kb_ids[:k], kb_ids[k:]
    part1_formulas = dpi.kb.formulas(part1)
    c2 = _reduce(part1, part2, background + part1_formulas, dpi, valid_kb)
    c2_formulas = dpi.kb.formulas(c2)
    c1 = _reduce(c2, part1, background + c2_formulas, dpi, valid_kb)
    return sorted(c1 + c2)


def audit_minimal(conflict: frozenset[int], dpi: DPI) -> bool:
    """Direct minimality check: the set is invalid, every proper subset valid."""
    if is_kb_valid(dpi.kb.formulas(conflict), dpi):
        return False
    return all(is_kb_valid(dpi.kb.formulas(conflict - {i}), dpi) for i in conflict)
