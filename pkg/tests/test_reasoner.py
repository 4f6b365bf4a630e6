import random

from hypothesis import given, settings
from hypothesis import strategies as st

from kbdebug.formulas import parse_formula
from kbdebug.reasoner import entails, is_consistent

from gen import random_formula
from oracles import tt_consistent, tt_entails

P = parse_formula


def test_empty_conjunction_is_consistent():
    assert is_consistent([])


def test_direct_contradiction():
    assert not is_consistent([P("A"), P("~A")])


def test_table2_kb_with_background_is_consistent(table2):
    assert is_consistent(table2.kb.formulas() + list(table2.background))


def test_falsum_inconsistent():
    assert not is_consistent([P("false")])
    assert is_consistent([P("~false")])


def test_entailment_of_negative_literal(table2):
    kb = [P("A -> E"), P("X | E -> F & Y & Z"), P("Y -> ~A")]
    assert entails(kb, [P("~A")])


def test_extensiveness_on_single_formula():
    phi = P("A -> B & E")
    assert entails([phi], [phi])


def test_derived_entailment_via_chain():
    assert entails([P("X | E -> F & Y & Z"), P("Y -> ~A")], [P("E -> ~A")])


def test_empty_target_set_trivially_entailed():
    assert entails([P("A")], [])


def test_set_entailment_requires_every_member():
    assert entails([P("A & B")], [P("A"), P("B")])
    assert not entails([P("A")], [P("A"), P("B")])


def _formulas(rng, n, names="ABCD"):
    return [random_formula(rng, list(names)) for _ in range(n)]


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_agrees_with_truth_tables(seed):
    rng = random.Random(seed)
    kb = _formulas(rng, rng.randint(1, 4))
    target = _formulas(rng, 1)
    assert is_consistent(kb) == tt_consistent(kb)
    assert entails(kb, target) == tt_entails(kb, target)


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_agrees_with_truth_tables_ten_atoms(seed):
    rng = random.Random(seed)
    names = "ABCDEFGHIJ"
    kb = _formulas(rng, rng.randint(2, 5), names)
    target = _formulas(rng, 1, names)
    assert is_consistent(kb) == tt_consistent(kb)
    assert entails(kb, target) == tt_entails(kb, target)


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_monotonicity(seed):
    rng = random.Random(seed)
    kb = _formulas(rng, rng.randint(1, 3))
    extra = _formulas(rng, 1)
    phi = _formulas(rng, 1)
    if entails(kb, phi):
        assert entails(kb + extra, phi)


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_idempotency(seed):
    rng = random.Random(seed)
    kb = _formulas(rng, rng.randint(1, 3))
    phi = _formulas(rng, 1)
    psi = _formulas(rng, 1)
    if entails(kb, phi) and entails(kb + phi, psi):
        assert entails(kb, psi)


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_extensiveness(seed):
    rng = random.Random(seed)
    phi = random_formula(rng, list("ABC"))
    assert entails([phi], [phi])
