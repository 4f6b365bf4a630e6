"""Interactive fault localization: ask, invalidate, recompute, repeat.

A session repeatedly computes a batch of leading diagnoses (static or
dynamic strategy), derives the posterior over them from the answer history
and, unless one candidate is probable enough, asks the next query.  The
static strategy freezes conflicts and diagnoses to the input instance and
only filters them by answered test cases; the dynamic strategy recomputes
against the growing instance and prunes now-redundant tree branches after
every answer.

Dynamic-tree nodes carry the ordered list of edge labels from the root plus
the conflict set that labeled each visited node; a stored set-equal
duplicate can replace a pruned branch whose prefix it matches.
"""

from __future__ import annotations

import math
import time
from bisect import insort
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .conflict import NO_CONFLICT, find_minimal_conflict
from .dpi import DPI, Diagnosis, TestCase, is_admissible, is_kb_valid, solution_kb
from .formulas import Formula
from .probability import get_mode, p_nodes, posterior_diag_probs
from .query import (
    QPartition,
    Query,
    ent_score,
    generate_query_pool,
    solution_candidate,
    spl_score,
)
from .reasoner import entails

VALID = "valid"
CLOSED = "closed"
NONMIN = "nonmin"


class SessionError(ValueError):
    pass


@dataclass
class SessionParams:
    mode: str = "static"
    sigma: float = 0.0
    n_min: int = 2
    n_max: float = math.inf
    timeout_s: float = 1.0
    pool_size: float = 1
    measure: str = "ENT"

    def validate(self) -> None:
        if self.mode not in ("static", "dynamic"):
            raise SessionError(f"unknown mode {self.mode!r}")
        if not 0.0 <= self.sigma <= 1.0:
            raise SessionError(f"sigma must be in [0, 1], got {self.sigma}")
        if self.n_min < 2:
            raise SessionError(f"n_min must be at least 2, got {self.n_min}")
        if self.n_max < self.n_min:
            raise SessionError("n_max must not be smaller than n_min")
        if self.measure not in ("ENT", "SPL"):
            raise SessionError(f"unsupported measure {self.measure!r}")
        if self.pool_size < 1:
            raise SessionError("pool size must be at least 1")


class DynNode:
    """Tree path: ordered edge labels and the conflict set behind each one."""

    __slots__ = ("edges", "cs")

    def __init__(self, edges: Sequence[int], cs: Sequence[frozenset[int]]):
        self.edges = list(edges)
        self.cs = list(cs)
        if len(self.edges) != len(self.cs):
            raise SessionError("edge and label lists must align")

    def key(self) -> Diagnosis:
        return frozenset(self.edges)

    def __repr__(self) -> str:
        return f"DynNode({self.edges})"


class _Queue:
    """Open nodes by descending p_nodes, FIFO among equal weights."""

    def __init__(self, probs: Mapping[int, float]):
        self.probs = probs
        self._items: list[tuple[float, int, object]] = []
        self._seq = 0

    @staticmethod
    def _key_of(node) -> Diagnosis:
        return node.key() if isinstance(node, DynNode) else node

    def push(self, node) -> None:
        self._seq += 1
        insort(self._items, (-p_nodes(self._key_of(node), self.probs), self._seq, node))

    def pop(self):
        return self._items.pop(0)[2]

    def __len__(self) -> int:
        return len(self._items)

    def keys(self) -> list[Diagnosis]:
        return [self._key_of(n) for _, _, n in self._items]

    def nodes(self) -> list:
        return [n for _, _, n in self._items]

    def replace_all(self, nodes: Iterable) -> None:
        self._items = []
        for n in nodes:
            self.push(n)


@dataclass
class SessionState:
    dpi: DPI
    probs: dict[int, float]
    params: SessionParams

    new_positive: list[TestCase] = field(default_factory=list)
    new_negative: list[TestCase] = field(default_factory=list)
    qa: list[tuple[frozenset[Formula], bool]] = field(default_factory=list)
    conflicts: list[frozenset[int]] = field(default_factory=list)

    # static: plain id-sets; dynamic: DynNode keyed by the id-set
    d_valid: dict[Diagnosis, Optional[DynNode]] = field(default_factory=dict)
    d_invalid: dict[Diagnosis, Optional[DynNode]] = field(default_factory=dict)
    d_supset: dict[Diagnosis, DynNode] = field(default_factory=dict)
    q_dup: list[DynNode] = field(default_factory=list)

    queue: _Queue = None
    leading: list[Diagnosis] = field(default_factory=list)
    distribution: dict[Diagnosis, float] = field(default_factory=dict)
    pending: Optional[tuple[Query, QPartition]] = None
    _pool: list[tuple[Query, QPartition]] = field(default_factory=list)
    _offered: list[QPartition] = field(default_factory=list)
    _pool_request: float = 0

    def __post_init__(self):
        self.params.validate()
        if not is_admissible(self.dpi):
            raise SessionError("instance admits no diagnosis; cannot debug")
        self.queue = _Queue(self.probs)
        root = DynNode([], []) if self.params.mode == "dynamic" else frozenset()
        self.queue.push(root)
        self._pool_request = self.params.pool_size

    def current_dpi(self) -> DPI:
        return self.dpi.extended(tuple(self.new_positive), tuple(self.new_negative))


# --- static strategy --------------------------------------------------------


def _s_label(session: SessionState, node: Diagnosis, d_calc: list[Diagnosis]):
    known = list(session.d_invalid) + list(session.d_valid) + d_calc
    for nd in known:
        if node >= nd:  # node is a non-minimal diagnosis
            return CLOSED
    for nd in session.queue.keys():
        if node == nd:  # node is a duplicate node
            return CLOSED
    for c in session.conflicts:
        if not c & node:  # the minimal conflict set c can be reused
            return c
    fresh = find_minimal_conflict(session.dpi.kb.ids() - node, session.dpi)
    if fresh is NO_CONFLICT:
        return VALID
    session.conflicts.append(fresh)
    return fresh


def static_hs(session: SessionState) -> list[Diagnosis]:
    """Grow the input-instance tree until enough surviving diagnoses exist.

    Found diagnoses are minimal w.r.t. the input instance; each one is
    admitted to the leading set only if it also satisfies every answered
    query, otherwise it is parked among the invalidated ones.
    """
    params = session.params
    start = time.monotonic()
    current = session.current_dpi()
    d_calc: list[Diagnosis] = []
    while True:
        if not len(session.queue):
            break
        node = session.queue.pop()
        label = _s_label(session, node, d_calc)
        if label is VALID:
            if is_kb_valid(session.dpi.kb.without(node), current):
                d_calc.append(node)
            else:
                session.d_invalid[node] = None
        elif label is CLOSED:
            pass
        else:
            for e in sorted(label):
                session.queue.push(node | {e})
        total = len(d_calc) + len(session.d_valid)
        if d_calc and total >= params.n_min and (
            total == params.n_max or time.monotonic() - start > params.timeout_s
        ):
            break
    leading = list(session.d_valid) + d_calc
    session.d_valid = {d: None for d in leading}
    return leading


# --- dynamic strategy -------------------------------------------------------


def _conflict_of(ids: frozenset[int], dpi: DPI) -> Optional[frozenset[int]]:
    return find_minimal_conflict(ids, dpi)


def prune(
    witness: frozenset[int],
    nodes: Iterable[DynNode],
    duplicates: Sequence[DynNode],
) -> list[DynNode]:
    """Drop or repair tree paths made redundant by a shrunken conflict set.

    A node is redundant when some visited label is a proper superset of the
    witness and the edge taken there lies outside the witness; surviving
    nodes get those superset labels overwritten by the witness.  A redundant
    node is replaced by the first stored duplicate whose edges match a
    prefix of it (covering the failing position), extended by the node's
    remaining tail; with no such duplicate it is dropped.
    """
    out: list[DynNode] = []
    for nd in nodes:
        failing = 0  # 1-based index of the last redundancy witness position
        for i, label in enumerate(nd.cs):
            if label > witness:
                if nd.edges[i] in label - witness:
                    failing = i + 1
                else:
                    nd.cs[i] = witness
        if failing == 0:
            out.append(nd)
            continue
        for dup in duplicates:
            if len(dup.edges) >= failing and frozenset(nd.edges[: len(dup.edges)]) == dup.key():
                out.append(
                    DynNode(
                        list(dup.edges) + nd.edges[len(dup.edges):],
                        list(dup.cs) + nd.cs[len(dup.edges):],
                    )
                )
                break
    return out


def prune_qdup(witness: frozenset[int], duplicates: Sequence[DynNode]) -> list[DynNode]:
    """Same policy applied to the duplicate store itself, kept by cardinality."""
    survivors: list[DynNode] = []
    for nd in duplicates:
        failing = 0
        for i, label in enumerate(nd.cs):
            if label > witness:
                if nd.edges[i] in label - witness:
                    failing = i + 1
                else:
                    nd.cs[i] = witness
        if failing == 0:
            _insert_by_cardinality(survivors, nd)
            continue
        for dup in survivors:
            if len(dup.edges) >= failing and frozenset(nd.edges[: len(dup.edges)]) == dup.key():
                _insert_by_cardinality(
                    survivors,
                    DynNode(
                        list(dup.edges) + nd.edges[len(dup.edges):],
                        list(dup.cs) + nd.cs[len(dup.edges):],
                    ),
                )
                break
    return survivors


def _insert_by_cardinality(store: list[DynNode], node: DynNode) -> None:
    pos = len(store)
    for i, other in enumerate(store):
        if len(other.edges) > len(node.edges):
            pos = i
            break
    store.insert(pos, node)


def _add_set_del_supersets(witness: frozenset[int], conflicts: list[frozenset[int]]) -> None:
    conflicts[:] = [c for c in conflicts if not c > witness]
    if witness not in conflicts:
        conflicts.append(witness)


def _apply_witness(session: SessionState, witness: frozenset[int]) -> None:
    session.q_dup = prune_qdup(witness, session.q_dup)
    session.queue.replace_all(prune(witness, session.queue.nodes(), session.q_dup))
    session.d_invalid = {
        nd.key(): nd for nd in prune(witness, list(session.d_invalid.values()), session.q_dup)
    }
    session.d_supset = {
        nd.key(): nd for nd in prune(witness, list(session.d_supset.values()), session.q_dup)
    }
    _add_set_del_supersets(witness, session.conflicts)
    # keep the stored labels of confirmed diagnoses aligned with the updated
    # tree; these nodes are genuine diagnoses of the current instance and
    # are never dropped
    for nd in session.d_valid.values():
        for i, label in enumerate(nd.cs):
            if label > witness and nd.edges[i] in witness:
                nd.cs[i] = witness


def update_tree(session: SessionState) -> None:
    """Re-home the search tree after answered queries changed the instance.

    Every invalidated diagnosis is checked for redundancy: first one cheap
    conflict search over the union of its labels minus its edges (quick
    check), then per-position searches (complete check).  Any witness found
    triggers pruning everywhere.  Afterwards surviving invalidated nodes,
    de-justified non-minimal nodes and all confirmed diagnoses re-enter the
    queue as open nodes.
    """
    current = session.current_dpi()
    processed: set[int] = set()
    guard = 0
    while True:
        nd = next((n for n in session.d_invalid.values() if id(n) not in processed), None)
        if nd is None:
            break
        guard += 1
        if guard > 100 * (len(session.d_invalid) + len(session.q_dup) + 5):
            raise SessionError("tree update failed to converge")
        processed.add(id(nd))
        witness = None
        union_rest = frozenset(set().union(*nd.cs) - set(nd.edges)) if nd.cs else frozenset()
        x = _conflict_of(union_rest, current) if union_rest else NO_CONFLICT
        if x is not NO_CONFLICT and any(x < c for c in nd.cs):
            witness = x  # quick redundancy check succeeded
        if witness is None:
            for i in range(len(nd.edges)):
                xi = _conflict_of(nd.cs[i] - {nd.edges[i]}, current)
                if xi is not NO_CONFLICT:
                    witness = xi  # complete redundancy check succeeded
                    break
        if witness is not None:
            _apply_witness(session, witness)
    # answered queries can deflate recorded conflicts that no invalidated
    # node points at; sweep them so only minimal current conflicts remain
    changed = True
    sweeps = 0
    budget = sum(len(c) for c in session.conflicts) + 5  # every sweep shrinks something
    while changed:
        changed = False
        sweeps += 1
        if sweeps > budget:
            raise SessionError("conflict minimization failed to converge")
        for c in list(session.conflicts):
            if c not in session.conflicts:
                continue
            x = _conflict_of(c, current)
            assert x is not NO_CONFLICT, "recorded conflicts stay conflicts"
            if x < c:
                _apply_witness(session, x)
                changed = True
    for nd in session.d_invalid.values():
        session.queue.push(nd)
    session.d_invalid = {}
    for key in list(session.d_supset):
        nd = session.d_supset[key]
        if not any(key > dv for dv in session.d_valid):
            session.queue.push(nd)
            del session.d_supset[key]
    for nd in session.d_valid.values():
        session.queue.push(nd)


def _d_label(session: SessionState, node: DynNode, d_calc: list[DynNode], current: DPI):
    key = node.key()
    for nd in d_calc:
        if key > nd.key():  # node is a non-minimal diagnosis
            return NONMIN
    for c in list(session.conflicts):
        if c & key:
            continue
        x = find_minimal_conflict(c, current)  # minimality re-check for reuse
        assert x is not NO_CONFLICT, "recorded conflicts stay conflicts"
        if x == c:
            return c
        _apply_witness(session, x)
        return x
    fresh = find_minimal_conflict(session.dpi.kb.ids() - key, current)
    if fresh is NO_CONFLICT:
        return VALID
    session.conflicts.append(fresh)
    return fresh


def dynamic_hs(session: SessionState) -> list[Diagnosis]:
    """Leading minimal diagnoses of the *current* instance, best-first."""
    params = session.params
    start = time.monotonic()
    update_tree(session)
    current = session.current_dpi()
    d_calc: list[DynNode] = []
    while True:
        if not len(session.queue):
            break
        node: DynNode = session.queue.pop()
        key = node.key()
        if any(key == nd.key() for nd in d_calc):
            continue  # set-equal twin of an already admitted diagnosis
        if key in session.d_valid:
            label = VALID
        else:
            label = _d_label(session, node, d_calc, current)
        if label is VALID:
            d_calc.append(node)
        elif label is NONMIN:
            session.d_supset[key] = node
        else:
            queued = set(session.queue.keys())
            for e in sorted(label):
                child = DynNode(node.edges + [e], node.cs + [label])
                if child.key() in queued:
                    _insert_by_cardinality(session.q_dup, child)
                else:
                    session.queue.push(child)
                    queued.add(child.key())
        new_found = any(nd.key() not in session.d_valid for nd in d_calc)
        if new_found and len(d_calc) >= params.n_min and (
            len(d_calc) == params.n_max or time.monotonic() - start > params.timeout_s
        ):
            break
    leading = [nd.key() for nd in d_calc]
    session.d_valid = {nd.key(): nd for nd in d_calc}
    return leading


# --- answering --------------------------------------------------------------


def record_answer(session: SessionState, query: Query, pt: QPartition, answer: bool) -> None:
    """Fold one answer into the session: bookkeeping plus a new test case."""
    if session.pending is None or frozenset(session.pending[0]) != frozenset(query):
        raise SessionError("answer does not match the pending query")
    invalidated = pt.dnx if answer else pt.dx
    session.qa.append((frozenset(query), answer))
    for d in invalidated:
        node = session.d_valid.pop(d, None)
        session.d_invalid[d] = node
    if answer:
        session.new_positive.append(frozenset(query))
    else:
        session.new_negative.append(frozenset(query))
    session.leading = [d for d in session.leading if d not in invalidated]
    session.pending = None
    session._pool = []
    session._offered = []
    session._pool_request = session.params.pool_size


class ScriptedOracle:
    """Answers as a user whose intended KB is the one minus ``true_diagnosis``."""

    def __init__(self, true_diagnosis: Diagnosis):
        self.true_diagnosis = frozenset(true_diagnosis)

    def answer(self, query: Query, session: SessionState) -> bool:
        current = session.current_dpi()
        if not is_kb_valid(session.dpi.kb.without(self.true_diagnosis), current):
            raise SessionError(
                "scripted target is no longer a diagnosis; engine must not let this happen"
            )
        return entails(solution_candidate(current, self.true_diagnosis), query)


def compute_leading(session: SessionState) -> list[Diagnosis]:
    if session.params.mode == "static":
        leading = static_hs(session)
    else:
        leading = dynamic_hs(session)
    session.leading = leading
    session.distribution = posterior_diag_probs(
        leading, session.probs, session.dpi, session.qa
    )
    return leading


def best_candidate(session: SessionState) -> tuple[Diagnosis, float]:
    mode_diag = get_mode(session.distribution)
    return mode_diag, session.distribution[mode_diag]


def session_done(session: SessionState) -> bool:
    _, p = best_candidate(session)
    return p >= 1.0 - session.params.sigma


def _ranked_pool(session: SessionState) -> list[tuple[Query, QPartition]]:
    pool = generate_query_pool(session.current_dpi(), session.leading, session._pool_request)
    if session.params.measure == "ENT":
        scores = [ent_score(pt, session.distribution) for _, pt in pool]
    else:
        scores = [spl_score(pt) for _, pt in pool]
    order = sorted(range(len(pool)), key=lambda i: (scores[i], i))
    return [pool[i] for i in order]


def prepare_query(session: SessionState) -> tuple[Query, QPartition]:
    if not session._pool:
        session._pool = _ranked_pool(session)
    for entry in session._pool:
        if entry[1] not in session._offered:
            session.pending = entry
            session._offered.append(entry[1])
            return entry
    # pool exhausted by skips: regrow with a doubled request
    if not math.isinf(session._pool_request):
        session._pool_request = max(2, int(session._pool_request) * 2)
    session._pool = _ranked_pool(session)
    for entry in session._pool:
        if entry[1] not in session._offered:
            session.pending = entry
            session._offered.append(entry[1])
            return entry
    # nothing genuinely new; fall back to re-offering the best entry
    session.pending = session._pool[0]
    return session.pending


def run_session(dpi: DPI, probs: Mapping[int, float], params: SessionParams, oracle) -> list[Formula]:
    """Full loop with a programmatic answerer; returns the solution KB."""
    session = SessionState(dpi=dpi, probs=dict(probs), params=params)
    solution = drive_session(session, oracle)
    return solution


def drive_session(session: SessionState, oracle) -> list[Formula]:
    while True:
        compute_leading(session)
        if session_done(session):
            d_max, _ = best_candidate(session)
            return solution_kb(
                session.dpi, d_max, tuple(session.new_positive), session.params.mode
            )
        query, pt = prepare_query(session)
        answer = bool(oracle.answer(query, session))
        record_answer(session, query, pt, answer)
