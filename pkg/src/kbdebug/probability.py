"""Fault probabilities: syntactic elements -> formulas -> diagnoses.

A formula is faulty when at least one occurrence of one of its syntactic
elements is, so its raw probability is 1 - prod(1 - p(e))^n(e).  Raw values
are then scaled by an adaptation factor so every formula stays below 0.5,
which keeps supersets of a node strictly less probable than the node and
thereby makes best-first search sound for minimal diagnoses.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .dpi import DPI, Diagnosis, KnowledgeBase, TestCase, check_valid
from .formulas import Formula, syntactic_profile
from .reasoner import entails

ELEMENT_TOKENS = ("NOT", "AND", "OR", "IMP", "IFF", "FALSE")

#: Formula probability used when no fault information is available; constant
#: probabilities make the hitting-set search breadth-first.
UNIFORM_FAULT_PROB = 0.3

QueryAnswerLog = Sequence[tuple[frozenset[Formula], bool]]


class ProbabilityError(ValueError):
    pass


def parse_element_probs(text: str) -> dict[str, float]:
    """Lines ``element = probability``; elements are atoms or NOT/AND/OR/IMP/IFF."""
    out: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ProbabilityError(f"line {lineno}: expected 'element = probability'")
        name, _, value = line.partition("=")
        name = name.strip()
        try:
            p = float(value.strip())
        except ValueError as exc:
            raise ProbabilityError(f"line {lineno}: bad probability {value.strip()!r}") from exc
        if not 0.0 < p <= 1.0:
            raise ProbabilityError(f"line {lineno}: probability must be in (0, 1], got {p}")
        out[name] = p
    return out


def raw_formula_fault_probs(kb: KnowledgeBase, elem: Mapping[str, float]) -> dict[int, float]:
    out: dict[int, float] = {}
    for i, f in kb.entries:
        none_faulty = 1.0
        for e, n in syntactic_profile(f).items():
            if e not in elem:
                raise ProbabilityError(f"no fault probability for element {e!r} (formula {i})")
            none_faulty *= (1.0 - elem[e]) ** n
        out[i] = 1.0 - none_faulty
    return out


def adapt(raw: Mapping[int, float], c: float) -> dict[int, float]:
    if c <= 0:
        raise ProbabilityError(f"adaptation factor must be positive, got {c}")
    out = {i: c * p for i, p in raw.items()}
    for i, p in out.items():
        if p >= 0.5:
            raise ProbabilityError(f"adapted probability of formula {i} is {p:.3f} >= 0.5")
        if p <= 0.0:
            raise ProbabilityError(f"adapted probability of formula {i} is not positive")
    return out


def default_adaptation_factor(raw: Mapping[int, float]) -> float:
    return 0.49 / max(raw.values())


def formula_fault_probs(kb: KnowledgeBase, elem: Mapping[str, float], c: float) -> dict[int, float]:
    return adapt(raw_formula_fault_probs(kb, elem), c)


def uniform_formula_probs(kb: KnowledgeBase, value: float = UNIFORM_FAULT_PROB) -> dict[int, float]:
    if not 0.0 < value < 0.5:
        raise ProbabilityError(f"uniform probability must be in (0, 0.5), got {value}")
    return {i: value for i, _ in kb.entries}


def p_nodes(node: Iterable[int], probs: Mapping[int, float]) -> float:
    """prod p(i) over members times prod (1-p(j)) over the rest of the KB."""
    inside = set(node)
    value = 1.0
    for i, p in probs.items():
        value *= p if i in inside else (1.0 - p)
    return value


def prior_diag_probs(
    diagnoses: Iterable[Diagnosis], probs: Mapping[int, float]
) -> dict[Diagnosis, float]:
    ds = list(diagnoses)
    if not ds:
        raise ProbabilityError("no diagnoses to weight")
    weights = {d: p_nodes(d, probs) for d in ds}
    total = sum(weights.values())
    return {d: w / total for d, w in weights.items()}


def posterior_diag_probs(
    leading: Iterable[Diagnosis],
    probs: Mapping[int, float],
    dpi: DPI,
    qa: QueryAnswerLog,
) -> dict[Diagnosis, float]:
    """Bayes update of the priors by replaying the query-answer history.

    The history is walked chronologically with growing intermediate test
    sets; a diagnosis that did not predict the given answer (it sat in the
    dz part of that query's partition) has its weight halved.
    """
    ds = list(leading)
    if not ds:
        raise ProbabilityError("no diagnoses to weight")
    weights = {d: p_nodes(d, probs) for d in ds}
    pos_so_far: list[TestCase] = []
    neg_so_far: list[TestCase] = []
    for query, answer in qa:
        intermediate = dpi.extended(tuple(pos_so_far), tuple(neg_so_far))
        if answer:
            for d in ds:
                solution = dpi.kb.without(d) + list(dpi.background) + intermediate.positive_union()
                if not entails(solution, query):
                    weights[d] *= 0.5
            pos_so_far.append(frozenset(query))
        else:
            for d in ds:
                if check_valid(
                    dpi.kb.without(d) + list(dpi.background) + list(query), intermediate
                ):
                    weights[d] *= 0.5
            neg_so_far.append(frozenset(query))
    total = sum(weights.values())
    return {d: w / total for d, w in weights.items()}


def get_mode(dist: Mapping[Diagnosis, float]) -> Diagnosis:
    """Most probable diagnosis; ties: smallest cardinality, then id order."""
    if not dist:
        raise ProbabilityError("empty distribution")
    return min(dist, key=lambda d: (-dist[d], len(d), tuple(sorted(d))))
