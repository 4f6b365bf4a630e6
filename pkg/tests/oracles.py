"""Independent brute-force oracles used to cross-check the engine.

Everything here works by exhaustive truth-table evaluation and subset
enumeration; nothing imports the DPLL reasoner or the search code under
test (only AST types and instance containers are shared).
"""

from __future__ import annotations

from itertools import chain, combinations, product

from kbdebug.dpi import DPI
from kbdebug.formulas import And, Atom, Falsum, Formula, Iff, Implies, Not, Or, atoms


def evaluate(f: Formula, assignment: dict[str, bool]) -> bool:
    if isinstance(f, Atom):
        return assignment[f.name]
    if isinstance(f, Falsum):
        return False
    if isinstance(f, Not):
        return not evaluate(f.child, assignment)
    if isinstance(f, And):
        return all(evaluate(c, assignment) for c in f.children)
    if isinstance(f, Or):
        return any(evaluate(c, assignment) for c in f.children)
    if isinstance(f, Implies):
        return (not evaluate(f.lhs, assignment)) or evaluate(f.rhs, assignment)
    if isinstance(f, Iff):
        return evaluate(f.lhs, assignment) == evaluate(f.rhs, assignment)
    raise TypeError(f)


def models(formulas: list[Formula], extra_names: set[str] = frozenset()):
    names = sorted(set(chain.from_iterable(atoms(f) for f in formulas)) | set(extra_names))
    for bits in product((False, True), repeat=len(names)):
        assignment = dict(zip(names, bits))
        if all(evaluate(f, assignment) for f in formulas):
            yield assignment


def tt_consistent(formulas: list[Formula]) -> bool:
    return next(models(formulas), None) is not None


def tt_entails(kb: list[Formula], targets: list[Formula]) -> bool:
    extra = set(chain.from_iterable(atoms(t) for t in targets))
    return all(
        all(evaluate(t, m) for m in models(kb, extra))
        for t in targets
    )


def tt_valid_kb(formulas: list[Formula], dpi: DPI) -> bool:
    pool = list(formulas) + list(dpi.background) + dpi.positive_union()
    if not tt_consistent(pool):
        return False
    for tn in dpi.negative_tests:
        if all(tt_entails(pool, [f]) for f in tn):
            return False
    return True


def all_subsets(ids):
    ids = sorted(ids)
    for r in range(len(ids) + 1):
        yield from (frozenset(c) for c in combinations(ids, r))


def brute_minimal_conflicts(dpi: DPI) -> set[frozenset[int]]:
    conflicts = [s for s in all_subsets(dpi.kb.ids()) if not tt_valid_kb(dpi.kb.formulas(s), dpi)]
    return {c for c in conflicts if not any(o < c for o in conflicts)}


def brute_all_diagnoses(dpi: DPI) -> set[frozenset[int]]:
    return {s for s in all_subsets(dpi.kb.ids()) if tt_valid_kb(dpi.kb.without(s), dpi)}


def brute_minimal_diagnoses(dpi: DPI) -> set[frozenset[int]]:
    ds = brute_all_diagnoses(dpi)
    return {d for d in ds if not any(o < d for o in ds)}


def brute_minimal_hitting_sets(families: set[frozenset[int]], universe) -> set[frozenset[int]]:
    hits = [
        s for s in all_subsets(universe)
        if all(s & fam for fam in families)
    ]
    return {h for h in hits if not any(o < h for o in hits)}
