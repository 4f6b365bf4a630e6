"""Acceptance criteria, one test per criterion, one printed line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the report lines.
"""

import functools
import math
import random
import time

import pytest

from kbdebug.conflict import NO_CONFLICT, find_minimal_conflict
from kbdebug.dpi import is_admissible, is_kb_valid
from kbdebug.formulas import parse_formula
from kbdebug.hstree import hs
from kbdebug.interactive import (
    ScriptedOracle,
    SessionParams,
    SessionState,
    best_candidate,
    compute_leading,
    drive_session,
    prepare_query,
    record_answer,
    session_done,
)
from kbdebug.probability import (
    formula_fault_probs,
    prior_diag_probs,
    raw_formula_fault_probs,
    uniform_formula_probs,
)
from kbdebug.query import generate_query_pool, min_q, q_partition

from gen import random_dpi
from oracles import (
    brute_all_diagnoses,
    brute_minimal_conflicts,
    brute_minimal_diagnoses,
    brute_minimal_hitting_sets,
)

P = parse_formula
D1, D2, D57 = frozenset({1}), frozenset({2}), frozenset({5, 7})
MIN_DIAGS = {D1, D2, D57}
TABLE_CONFLICTS = {frozenset({1, 2, 5}), frozenset({1, 2, 7})}


def _criterion(name):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"{name}: FAIL")
                raise
            print(f"{name}: PASS")

        return run

    return wrap


@_criterion("A1 conflicts (reference instance)")
def test_a1_conflicts(table2):
    start = time.monotonic()
    one = find_minimal_conflict(table2.kb.ids(), table2)
    assert one in TABLE_CONFLICTS
    collected: list[frozenset[int]] = []
    hs(table2, uniform_formula_probs(table2.kb), n_min=math.inf, collect_conflicts=collected)
    assert set(collected) == TABLE_CONFLICTS
    assert brute_minimal_conflicts(table2) == TABLE_CONFLICTS
    assert time.monotonic() - start < 1.0


@_criterion("A2 diagnoses (reference instance)")
def test_a2_diagnoses(table2):
    start = time.monotonic()
    found = hs(table2, uniform_formula_probs(table2.kb), n_min=math.inf)
    assert set(found) == MIN_DIAGS
    oracle = brute_minimal_hitting_sets(brute_minimal_conflicts(table2), table2.kb.ids())
    assert oracle == MIN_DIAGS
    assert time.monotonic() - start < 1.0


@_criterion("A3 formula fault probabilities")
def test_a3_formula_probs(table2, table2_elem_probs):
    raw = raw_formula_fault_probs(table2.kb, table2_elem_probs)
    expected_raw = {1: 0.28, 2: 0.89, 3: 0.07, 4: 0.12, 5: 0.78, 6: 0.61, 7: 0.76}
    for i, value in expected_raw.items():
        assert abs(raw[i] - value) <= 0.005, (i, raw[i], value)
    adapted = formula_fault_probs(table2.kb, table2_elem_probs, 0.49)
    expected_adapted = {1: 0.14, 2: 0.43, 3: 0.03, 4: 0.06, 5: 0.38, 6: 0.30, 7: 0.37}
    for i, value in expected_adapted.items():
        assert abs(adapted[i] - value) <= 0.005, (i, adapted[i], value)


@_criterion("A4 diagnosis probabilities")
def test_a4_diag_probs(table2, table2_elem_probs):
    probs = formula_fault_probs(table2.kb, table2_elem_probs, 0.49)
    dist = prior_diag_probs(sorted(MIN_DIAGS, key=sorted), probs)
    assert abs(dist[D1] - 0.12) <= 0.01
    assert abs(dist[D2] - 0.60) <= 0.01
    assert abs(dist[D57] - 0.28) <= 0.01


@_criterion("A5 best-first admission order")
def test_a5_best_first_order(table2, table2_elem_probs):
    probs = formula_fault_probs(table2.kb, table2_elem_probs, 0.49)
    found = hs(table2, probs, n_min=2, n_max=2)
    assert found == [D2, D57]


@_criterion("A6 static session end-to-end")
def test_a6_static_end_to_end(table2):
    start = time.monotonic()
    params = SessionParams(mode="static", sigma=0.0, n_min=2, n_max=2)
    session = SessionState(dpi=table2, probs=uniform_formula_probs(table2.kb), params=params)
    solution = drive_session(session, ScriptedOracle(D57))
    assert solution == table2.kb.without(D57)
    trace = [(sorted(map(str, q)), a) for q, a in session.qa]
    assert trace == [(["E -> ~A"], False), (["Y -> ~A"], False)]
    assert set(session.conflicts) == TABLE_CONFLICTS
    assert len(session.d_invalid) == 2
    assert time.monotonic() - start < 2.0


@_criterion("A7 dynamic session end-to-end")
def test_a7_dynamic_end_to_end(table2):
    params = SessionParams(mode="dynamic", sigma=0.0, n_min=2, n_max=2)
    session = SessionState(dpi=table2, probs=uniform_formula_probs(table2.kb), params=params)
    oracle = ScriptedOracle(D57)
    conflict_history: list[set[frozenset[int]]] = []
    while True:
        compute_leading(session)
        if session.qa:
            # records the conflict store once the latest answer is folded in
            conflict_history.append(set(session.conflicts))
        if session_done(session):
            break
        query, pt = prepare_query(session)
        record_answer(session, query, pt, oracle.answer(query, session))
    assert len(session.qa) <= 4
    assert conflict_history, "at least one query must have been asked"
    after_first = conflict_history[0]
    assert frozenset({2, 5}) in after_first
    assert frozenset({1, 2, 5}) not in after_first
    assert frozenset({5}) in conflict_history[min(2, len(conflict_history) - 1)]
    assert frozenset({7}) in conflict_history[-1]
    d_max, p_max = best_candidate(session)
    assert session.leading == [D57]
    assert p_max == 1.0
    solution = session.dpi.kb.without(d_max)
    for tc in session.new_positive:
        for f in sorted(tc, key=str):
            if f not in solution:
                solution.append(f)
    # expected outcome of a run whose fourth query {E -> Z} draws a positive
    # answer; computing every node label against the current instance settles
    # after three negative answers without acquiring that test case, so this
    # assertion documents the difference (see README, known divergences)
    assert solution == table2.kb.without(D57) + [P("E -> Z")]


@_criterion("A8 property suite over random instances")
def test_a8_property_suite():
    start = time.monotonic()
    rng = random.Random(20240822)
    instances = 0
    session_runs = 0
    while instances < 200:
        dpi = random_dpi(rng, max_formulas=8, max_atoms=6)
        instances += 1
        probs = uniform_formula_probs(dpi.kb)

        # conflict search agrees with brute force and is subset-minimal
        conflicts = brute_minimal_conflicts(dpi)
        got = find_minimal_conflict(dpi.kb.ids(), dpi)
        if got is NO_CONFLICT:
            assert not conflicts
        else:
            assert got in conflicts

        # hitting-set duality
        diagnoses = brute_minimal_diagnoses(dpi)
        found = set(hs(dpi, probs, n_min=math.inf))
        assert found == diagnoses
        assert found == brute_minimal_hitting_sets(conflicts, dpi.kb.ids())

        leading = sorted(diagnoses, key=lambda d: (len(d), sorted(d)))[:4]
        if len(leading) >= 2:
            pool = generate_query_pool(dpi, leading, math.inf)
            assert pool
            for query, pt in pool:
                # partition sanity for every pooled query
                assert pt.dx and pt.dnx
                union = pt.dx | pt.dnx | pt.dz
                assert union == frozenset(leading)
                assert len(pt.dx) + len(pt.dnx) + len(pt.dz) == len(leading)
                assert q_partition(query, leading, dpi) == pt
                # minimized queries keep their partition and are irreducible
                small = min_q(list(query), pt, dpi)
                assert q_partition(small, leading, dpi) == pt
                if len(small) > 1:
                    for f in small:
                        rest = tuple(g for g in small if g != f)
                        assert q_partition(rest, leading, dpi) != pt
                # adding the query as either test case keeps admissibility
                assert is_admissible(dpi.extended((frozenset(query),), ()))
                assert is_admissible(dpi.extended((), (frozenset(query),)))

        # scripted sessions in both modes
        target = rng.choice(sorted(diagnoses, key=sorted))
        for mode in ("static", "dynamic"):
            session_runs += 1
            params = SessionParams(mode=mode, sigma=0.0, n_min=2, n_max=2)
            session = SessionState(dpi=dpi, probs=dict(probs), params=params)
            oracle = ScriptedOracle(target)
            n_all = len(brute_all_diagnoses(dpi))
            while True:
                compute_leading(session)
                # posterior over the leading diagnoses is a distribution
                assert abs(sum(session.distribution.values()) - 1.0) < 1e-9
                if mode == "static":
                    # static leading sets only ever hold input-minimal diagnoses
                    assert set(session.leading) <= diagnoses
                if session_done(session):
                    break
                query, pt = prepare_query(session)
                record_answer(session, query, pt, oracle.answer(query, session))
                current = session.current_dpi()
                assert is_admissible(current)
                n_now = len(brute_all_diagnoses(current))
                assert n_now < n_all  # all-diagnoses set shrinks strictly
                n_all = n_now
            d_max, _ = best_candidate(session)
            current = session.current_dpi()
            assert is_kb_valid(dpi.kb.without(d_max), current)
            if mode == "static":
                assert d_max in diagnoses  # minimal w.r.t. the input instance
    assert time.monotonic() - start < 60.0
