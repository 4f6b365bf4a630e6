"""Query generation for interactive sessions.

Queries are sets of formulas a user classifies as wanted or unwanted
entailments of the intended KB.  Candidates come from harvesting simple
entailments (unit literals and literal-to-literal implications) of the
solution candidates induced by seed subsets of the leading diagnoses; a
candidate survives only if its partition of the leading diagnoses has both
a positive-predicting and a negative-predicting side.  Surviving queries
get minimized by the same divide-and-conquer scheme used for conflicts,
with partition constancy as the oracle.

Determinism: harvested entailments follow one global order (KB members
first by id, then unit literals, then implications keyed by consequent
then antecedent), seeds enumerate by ascending cardinality then
lexicographic diagnosis ids, and measure ties resolve by pool order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .dpi import DPI, Diagnosis, check_valid
from .formulas import Atom, Formula, Implies, Not
from .reasoner import entails, is_consistent

Query = tuple[Formula, ...]

MEASURES = ("ENT", "SPL")


@dataclass(frozen=True)
class QPartition:
    """Leading diagnoses split by their prediction for a query's answer."""

    dx: frozenset[Diagnosis]
    dnx: frozenset[Diagnosis]
    dz: frozenset[Diagnosis]


class QueryError(ValueError):
    pass


def _diag_key(d: Diagnosis) -> tuple:
    return (len(d), tuple(sorted(d)))


def sort_diagnoses(diagnoses: Iterable[Diagnosis]) -> list[Diagnosis]:
    return sorted(diagnoses, key=_diag_key)


def _literal_key(lit: Formula) -> tuple[str, int]:
    if isinstance(lit, Atom):
        return (lit.name, 0)
    return (lit.child.name, 1)


def _entailment_key(dpi: DPI, f: Formula) -> tuple:
    """Global harvest order: KB members by id, then units, then implications."""
    for i, g in dpi.kb.entries:
        if f == g:
            return (0, i)
    if isinstance(f, (Atom, Not)):
        return (1,) + _literal_key(f)
    return (2,) + _literal_key(f.rhs) + _literal_key(f.lhs)


def solution_candidate(dpi: DPI, d: Diagnosis) -> list[Formula]:
    """(O \\ d) + B + U_P for the given instance."""
    return dpi.kb.without(d) + list(dpi.background) + dpi.positive_union()


def get_entailments(d: Diagnosis, dpi: DPI) -> list[Formula]:
    """Harvested entailments of the solution candidate for ``d``.

    The menu is all entailed unit literals over the instance signature plus
    all entailed implications between literals of distinct atoms; members
    of the background and of positive test cases cannot discriminate and
    are dropped, as are tautologies.
    """
    kb = solution_candidate(dpi, d)
    if not is_consistent(kb):
        raise QueryError(f"{sorted(d)} is not a diagnosis of the given instance")
    signature = sorted({a for f in kb for a in _formula_atoms(f)})
    literals: list[Formula] = []
    for name in signature:
        literals.append(Atom(name))
        literals.append(Not(Atom(name)))
    excluded = set(dpi.background) | set(dpi.positive_union())

    candidates: list[Formula] = []
    entailed_literals = [l for l in literals if entails(kb, [l])]
    candidates.extend(entailed_literals)
    for lhs in literals:
        for rhs in literals:
            if _atom_of(lhs) == _atom_of(rhs):
                continue
            candidates.append(Implies(lhs, rhs))
    out = []
    for f in candidates:
        if f in excluded:
            continue
        if isinstance(f, Implies):
            if not entails(kb, [f]):
                continue
        if f not in out:
            out.append(f)
    out.sort(key=lambda f: _entailment_key(dpi, f))
    return out


def _formula_atoms(f: Formula) -> frozenset[str]:
    from .formulas import atoms

    return atoms(f)


def _atom_of(lit: Formula) -> str:
    return lit.name if isinstance(lit, Atom) else lit.child.name


def q_partition(query: Iterable[Formula], leading: Iterable[Diagnosis], dpi: DPI) -> QPartition:
    """Unique split of the leading diagnoses induced by the query."""
    q = list(query)
    dx, dnx, dz = set(), set(), set()
    for d in leading:
        candidate = solution_candidate(dpi, d)
        if entails(candidate, q):
            dx.add(d)
        elif not check_valid(candidate + q, dpi):
            dnx.add(d)
        else:
            dz.add(d)
    return QPartition(frozenset(dx), frozenset(dnx), frozenset(dz))


def is_query(pt: QPartition) -> bool:
    return bool(pt.dx) and bool(pt.dnx)


def _qpart_constant(qb: Sequence[Formula], pt: QPartition, dpi: DPI) -> bool:
    """Does the sub-query qb induce the same partition as the full query?"""
    for d in pt.dnx:
        if check_valid(solution_candidate(dpi, d) + list(qb), dpi):
            return False
    for d in pt.dz:
        if entails(solution_candidate(dpi, d), qb):
            return False
    return True


def min_q(query: Sequence[Formula], pt: QPartition, dpi: DPI) -> Query:
    """Subset-minimal sub-query with the identical q-partition."""
    q = list(query)
    if len(q) <= 1:
        return tuple(q)
    return tuple(_min_q([], q, [], pt, dpi))


def _min_q(seed: list[Formula], q: list[Formula], qb: list[Formula], pt: QPartition, dpi: DPI) -> list[Formula]:
    if seed and _qpart_constant(qb, pt, dpi):
        return []
    if len(q) == 1:
        return list(q)
    k = len(q) // 2
    q1, q2 = q[:k], q[k:]
    m2 = _min_q(q1, q2, qb + q1, pt, dpi)
    m1 = _min_q(m2, q1, qb + m2, pt, dpi)
    return m1 + m2


def trivial_queries(leading: Sequence[Diagnosis], dpi: DPI) -> list[tuple[Query, QPartition]]:
    """Fallback queries: all-others-minus-this-diagnosis, one per diagnosis."""
    ordered = sort_diagnoses(leading)
    union: set[int] = set().union(*ordered)
    out = []
    for d in ordered:
        ids = sorted(union - d)
        q = tuple(dpi.kb.formula(i) for i in ids)
        pt = QPartition(frozenset((d,)), frozenset(x for x in ordered if x != d), frozenset())
        out.append((q, pt))
    return out


def generate_query_pool(
    dpi: DPI,
    leading: Iterable[Diagnosis],
    pool_size: float = 1,
    harvester=get_entailments,
) -> list[tuple[Query, QPartition]]:
    """Up to ``pool_size`` minimized queries with pairwise distinct partitions.

    ``harvester`` computes the candidate entailments per diagnosis; when no
    seed subset yields a discriminating query the fallback emits one trivial
    query per leading diagnosis.
    """
    ordered = sort_diagnoses(leading)
    if len(ordered) < 2:
        raise QueryError("need at least two leading diagnoses to build queries")
    harvests: dict[Diagnosis, list[Formula]] = {d: harvester(d, dpi) for d in ordered}
    pool: list[tuple[Query, QPartition]] = []
    seen_partitions: set[tuple] = set()
    empty_seeds: list[set[Diagnosis]] = []
    for size in range(1, len(ordered)):
        for seed in combinations(ordered, size):
            seed_set = set(seed)
            # a superset of a seed with no common entailments has none either
            if any(es <= seed_set for es in empty_seeds):
                continue
            common = [f for f in harvests[seed[0]] if all(f in harvests[d] for d in seed[1:])]
            if not common:
                empty_seeds.append(seed_set)
                continue
            dx, dnx, dz = set(seed), set(), set()
            for d in ordered:
                if d in seed_set:
                    continue
                candidate = solution_candidate(dpi, d)
                if all(f in harvests[d] for f in common):
                    dx.add(d)
                elif not check_valid(candidate + common, dpi):
                    dnx.add(d)
                else:
                    dz.add(d)
            if not dnx:
                continue
            pt = QPartition(frozenset(dx), frozenset(dnx), frozenset(dz))
            key = (pt.dx, pt.dnx, pt.dz)
            if key in seen_partitions:
                continue
            seen_partitions.add(key)
            pool.append((min_q(common, pt, dpi), pt))
            if len(pool) >= pool_size:
                return pool
    if not pool:
        pool = trivial_queries(ordered, dpi)
    return pool


def ent_score(pt: QPartition, dist: Mapping[Diagnosis, float]) -> float:
    """Expected-entropy score; lower is better, 50/50 with empty dz is optimal."""
    p_dx = sum(dist[d] for d in pt.dx)
    p_dnx = sum(dist[d] for d in pt.dnx)
    p_dz = sum(dist[d] for d in pt.dz)
    score = p_dz
    for p in (p_dx + p_dz / 2.0, p_dnx + p_dz / 2.0):
        if p > 0.0:
            score += p * math.log2(p)
    return score


def spl_score(pt: QPartition) -> float:
    return abs(len(pt.dx) - len(pt.dnx)) + len(pt.dz)


def select_best_query(
    pool: Sequence[tuple[Query, QPartition]],
    measure: str,
    dist: Mapping[Diagnosis, float],
) -> tuple[Query, QPartition]:
    """Minimum-score entry; ties keep pool order.  RIO is reserved."""
    if not pool:
        raise QueryError("empty query pool")
    if measure not in MEASURES:
        raise QueryError(f"unsupported measure {measure!r}; pick one of {MEASURES}")
    if measure == "ENT":
        scores = [ent_score(pt, dist) for _, pt in pool]
    else:
        scores = [spl_score(pt) for _, pt in pool]
    best = min(range(len(pool)), key=lambda i: scores[i])
    return pool[best]
