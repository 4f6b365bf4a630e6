"""Sound and complete consistency/entailment checks for propositional formulas.

Satisfiability is decided by a DPLL search with unit propagation over a
clausal transform.  Arrow operators are lowered to and/or/not first; the
clausal form uses Tseitin-style definition variables, which preserves
satisfiability and keeps the transform linear.  Branching always picks the
open variable with the smallest index (real atoms sorted by name, then
definition variables in creation order), so runs are reproducible.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .formulas import And, Atom, Falsum, Formula, Iff, Implies, Not, Or, atoms

Clause = tuple[int, ...]


def _lower(f: Formula) -> Formula:
    """Rewrite -> and <-> in terms of and/or/not."""
    if isinstance(f, (Atom, Falsum)):
        return f
    if isinstance(f, Not):
        return Not(_lower(f.child))
    if isinstance(f, And):
        return And(tuple(_lower(c) for c in f.children))
    if isinstance(f, Or):
        return Or(tuple(_lower(c) for c in f.children))
    if isinstance(f, Implies):
        return Or((Not(_lower(f.lhs)), _lower(f.rhs)))
    if isinstance(f, Iff):
        a, b = _lower(f.lhs), _lower(f.rhs)
        return And((Or((Not(a), b)), Or((Not(b), a))))
    raise TypeError(f"not a formula: {f!r}")


def _nnf(f: Formula, neg: bool) -> Formula:
    if isinstance(f, Atom):
        return Not(f) if neg else f
    if isinstance(f, Falsum):
        # represent "true" as ~false; handled in clausification
        return Not(f) if neg else f
    if isinstance(f, Not):
        return _nnf(f.child, not neg)
    if isinstance(f, And):
        kids = tuple(_nnf(c, neg) for c in f.children)
        return Or(kids) if neg else And(kids)
    if isinstance(f, Or):
        kids = tuple(_nnf(c, neg) for c in f.children)
        return And(kids) if neg else Or(kids)
    raise TypeError(f"arrows must be lowered first: {f!r}")


class _Clausifier:
    def __init__(self, var_of: dict[str, int]):
        self.var_of = var_of
        self.next_var = len(var_of) + 1
        self.clauses: list[Clause] = []

    def fresh(self) -> int:
        v = self.next_var
        self.next_var += 1
        return v

    def add(self, f: Formula) -> None:
        f = _nnf(_lower(f), False)
        lit = self._literalize(f)
        if lit is not None:
            self.clauses.append((lit,))

    def _literalize(self, f: Formula):
        """Return a literal equisatisfiably standing for NNF formula ``f``."""
        if isinstance(f, Atom):
            return self.var_of[f.name]
        if isinstance(f, Not):
            if isinstance(f.child, Atom):
                return -self.var_of[f.child.name]
            if isinstance(f.child, Falsum):  # ~false is a tautology
                v = self.fresh()
                self.clauses.append((v,))
                return v
            raise TypeError(f"not in NNF: {f!r}")
        if isinstance(f, Falsum):
            v = self.fresh()
            self.clauses.append((v,))
            return -v
        if isinstance(f, And):
            v = self.fresh()
            lits = [self._literalize(c) for c in f.children]
            for lc in lits:
                self.clauses.append((-v, lc))
            self.clauses.append(tuple([v] + [-lc for lc in lits]))
            return v
        if isinstance(f, Or):
            v = self.fresh()
            lits = [self._literalize(c) for c in f.children]
            self.clauses.append(tuple([-v] + lits))
            for lc in lits:
                self.clauses.append((v, -lc))
            return v
        raise TypeError(f"not in NNF: {f!r}")


def clausify(formulas: Iterable[Formula]) -> tuple[list[Clause], dict[str, int]]:
    formulas = list(formulas)
    names = sorted({a for f in formulas for a in atoms(f)})
    var_of = {name: i + 1 for i, name in enumerate(names)}
    cl = _Clausifier(var_of)
    for f in formulas:
        cl.add(f)
    return cl.clauses, var_of


def _dpll(clauses: Sequence[Clause]) -> bool:
    nvars = max((abs(l) for c in clauses for l in c), default=0)
    assign: dict[int, bool] = {}

    def value(lit: int):
        v = assign.get(abs(lit))
        if v is None:
            return None
        return v if lit > 0 else not v

    def propagate(trail: list[int]) -> bool:
        changed = True
        while changed:
            changed = False
            for clause in clauses:
                unassigned = None
                satisfied = False
                count = 0
                for lit in clause:
                    val = value(lit)
                    if val is True:
                        satisfied = True
                        break
                    if val is None:
                        unassigned = lit
                        count += 1
                        if count > 1:
                            break
                if satisfied:
                    continue
                if count == 0:
                    return False
                if count == 1:
                    assign[abs(unassigned)] = unassigned > 0
                    trail.append(abs(unassigned))
                    changed = True
        return True

    def search() -> bool:
        trail: list[int] = []
        if not propagate(trail):
            for v in trail:
                del assign[v]
            return False
        var = next((v for v in range(1, nvars + 1) if v not in assign), None)
        if var is None:
            return True
        for val in (True, False):
            assign[var] = val
            if search():
                return True
            del assign[var]
        for v in trail:
            del assign[v]
        return False

    return search()


def is_consistent(formulas: Iterable[Formula]) -> bool:
    """True iff the conjunction of ``formulas`` is satisfiable."""
    clauses, _ = clausify(formulas)
    return _dpll(clauses)


def entails(kb: Iterable[Formula], targets: Iterable[Formula]) -> bool:
    """True iff every target follows from ``kb`` (kb & ~t unsatisfiable)."""
    kb = list(kb)
    return all(not is_consistent(kb + [Not(t)]) for t in targets)
