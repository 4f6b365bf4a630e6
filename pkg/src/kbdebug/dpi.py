"""Diagnosis problem instances over a propositional knowledge base.

A problem instance bundles the suspect KB ``O`` (formulas carry dense ids
1..n), trusted background formulas ``B``, positive/negative test cases and
the requirement set (consistency only for propositional logic).  A negative
test case counts as violated only when *all* of its formulas are entailed;
it is satisfied as soon as one member is non-entailed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .formulas import Formula, ParseError, parse_formula, render
from .reasoner import entails, is_consistent

TestCase = frozenset[Formula]
Diagnosis = frozenset[int]

CONSISTENCY = "consistency"


class DpiError(ValueError):
    pass


@dataclass(frozen=True)
class KnowledgeBase:
    """Ordered, densely id'd list of formulas; iteration order = id order."""

    entries: tuple[tuple[int, Formula], ...]

    @staticmethod
    def from_formulas(formulas: Iterable[Formula]) -> "KnowledgeBase":
        return KnowledgeBase(tuple((i + 1, f) for i, f in enumerate(formulas)))

    def __post_init__(self):
        ids = [i for i, _ in self.entries]
        if ids != list(range(1, len(ids) + 1)):
            raise DpiError(f"formula ids must be dense 1..n, got {ids}")

    def __len__(self) -> int:
        return len(self.entries)

    def ids(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.entries)

    def formula(self, i: int) -> Formula:
        return dict(self.entries)[i]

    def formulas(self, ids: Iterable[int] | None = None) -> list[Formula]:
        if ids is None:
            return [f for _, f in self.entries]
        wanted = set(ids)
        return [f for i, f in self.entries if i in wanted]

    def without(self, removed: Iterable[int]) -> list[Formula]:
        gone = set(removed)
        return [f for i, f in self.entries if i not in gone]


@dataclass(frozen=True)
class DPI:
    kb: KnowledgeBase
    background: tuple[Formula, ...] = ()
    positive_tests: tuple[TestCase, ...] = ()
    negative_tests: tuple[TestCase, ...] = ()
    requirements: frozenset[str] = frozenset((CONSISTENCY,))

    def __post_init__(self):
        bad = self.requirements - {CONSISTENCY}
        if bad:
            raise DpiError(f"unsupported requirement(s) for propositional logic: {sorted(bad)}")
        if CONSISTENCY not in self.requirements:
            raise DpiError("the consistency requirement is mandatory")
        overlap = [f for f in self.kb.formulas() if f in set(self.background)]
        if overlap:
            raise DpiError(f"KB and background share formula(s): {[render(f) for f in overlap]}")
        for tc in self.positive_tests + self.negative_tests:
            if not tc:
                raise DpiError("test cases must be non-empty")

    def positive_union(self) -> list[Formula]:
        out: list[Formula] = []
        for tc in self.positive_tests:
            for f in sorted(tc, key=render):
                if f not in out:
                    out.append(f)
        return out

    def extended(self, extra_pos: Sequence[TestCase] = (), extra_neg: Sequence[TestCase] = ()) -> "DPI":
        """The current instance after appending answered-query test cases."""
        if not extra_pos and not extra_neg:
            return self
        return DPI(
            kb=self.kb,
            background=self.background,
            positive_tests=self.positive_tests + tuple(extra_pos),
            negative_tests=self.negative_tests + tuple(extra_neg),
            requirements=self.requirements,
        )


def check_valid(formulas: Iterable[Formula], dpi: DPI) -> bool:
    """Validity of a bare formula set (background NOT added automatically)."""
    pool = list(dict.fromkeys(formulas))
    for f in dpi.positive_union():
        if f not in pool:
            pool.append(f)
    if not is_consistent(pool):
        return False
    for tn in dpi.negative_tests:
        if all(entails(pool, [f]) for f in tn):
            return False
    return True


def is_kb_valid(kb_subset: Iterable[Formula], dpi: DPI) -> bool:
    """True iff ``kb_subset + B + U_P`` meets the requirements and test cases."""
    return check_valid(list(kb_subset) + list(dpi.background), dpi)


def is_admissible(dpi: DPI) -> bool:
    """A diagnosis exists iff background plus positive tests violate nothing."""
    return is_kb_valid([], dpi)


def is_diagnosis(dpi: DPI, d: Diagnosis) -> bool:
    if not d <= dpi.kb.ids():
        raise DpiError(f"diagnosis {sorted(d)} not within KB ids")
    return is_kb_valid(dpi.kb.without(d), dpi)


def solution_kb(
    dpi: DPI,
    d: Diagnosis,
    new_positive: Sequence[TestCase] = (),
    mode: str = "static",
) -> list[Formula]:
    """Maximal solution KB for diagnosis ``d``: (O \\ d) plus positive tests.

    ``static`` keeps only the input instance's positive tests, ``dynamic``
    also merges the session-acquired ones.  Duplicates collapse by
    structural equality.
    """
    if not d <= dpi.kb.ids():
        raise DpiError(f"diagnosis {sorted(d)} not within KB ids")
    if mode not in ("static", "dynamic"):
        raise DpiError(f"unknown mode {mode!r}")
    out = dpi.kb.without(d)
    extra = dpi.positive_union() if mode == "static" else dpi.extended(tuple(new_positive)).positive_union()
    for f in extra:
        if f not in out:
            out.append(f)
    return out


# --- text format -----------------------------------------------------------
#
# Sections [O], [B], [P], [N], [R]; one formula per line in O/B; one test
# case per line in P/N as ';'-separated formulas; R lines from {consistency}.

_SECTIONS = ("O", "B", "P", "N", "R")


class DpiParseError(DpiError):
    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


def parse_dpi(text: str) -> DPI:
    sections: dict[str, list[tuple[int, str]]] = {s: [] for s in _SECTIONS}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in _SECTIONS:
                raise DpiParseError(f"unknown section {name!r}", lineno)
            current = name
            continue
        if current is None:
            raise DpiParseError("content before first section header", lineno)
        sections[current].append((lineno, line))

    def formula_at(lineno: int, text_: str, offset: int) -> Formula:
        try:
            return parse_formula(text_)
        except ParseError as exc:
            raise DpiParseError(exc.message, lineno, offset + exc.pos + 1) from exc

    kb_formulas = [formula_at(n, s, 0) for n, s in sections["O"]]
    background = [formula_at(n, s, 0) for n, s in sections["B"]]

    def tests(name: str) -> tuple[TestCase, ...]:
        out = []
        for lineno, line in sections[name]:
            parts = []
            offset = 0
            for chunk in line.split(";"):
                if chunk.strip():
                    parts.append(formula_at(lineno, chunk.strip(), offset + len(chunk) - len(chunk.lstrip())))
                offset += len(chunk) + 1
            if not parts:
                raise DpiParseError("empty test case", lineno)
            out.append(frozenset(parts))
        return tuple(out)

    requirements = set()
    for lineno, line in sections["R"]:
        if line != CONSISTENCY:
            raise DpiParseError(f"unsupported requirement {line!r}", lineno)
        requirements.add(line)
    if not requirements:
        requirements = {CONSISTENCY}

    seen: list[Formula] = []
    for f in kb_formulas:
        if f in seen:
            raise DpiError(f"duplicate KB formula: {render(f)}")
        seen.append(f)

    return DPI(
        kb=KnowledgeBase.from_formulas(kb_formulas),
        background=tuple(background),
        positive_tests=tests("P"),
        negative_tests=tests("N"),
        requirements=frozenset(requirements),
    )


def dump_dpi(dpi: DPI) -> str:
    lines = ["[O]"]
    lines += [render(f) for f in dpi.kb.formulas()]
    lines.append("[B]")
    lines += [render(f) for f in dpi.background]
    lines.append("[P]")
    lines += ["; ".join(render(f) for f in sorted(tc, key=render)) for tc in dpi.positive_tests]
    lines.append("[N]")
    lines += ["; ".join(render(f) for f in sorted(tc, key=render)) for tc in dpi.negative_tests]
    lines.append("[R]")
    lines += sorted(dpi.requirements)
    return "\n".join(lines) + "\n"
