import pytest

from kbdebug.formulas import (
    And,
    Atom,
    Falsum,
    Implies,
    Iff,
    Not,
    Or,
    ParseError,
    parse_formula,
    render,
    syntactic_profile,
)

A, B, E, F, X, Y, Z = (Atom(n) for n in "ABEFXYZ")


def test_parse_implication():
    assert parse_formula("A -> E") == Implies(A, E)


def test_parse_negation():
    assert parse_formula("~A") == Not(A)


def test_parse_precedence_mix():
    # disjunction binds tighter than the arrow, conjunction tighter still
    assert parse_formula("X | E -> F & Y & Z") == Implies(Or((X, E)), And((F, Y, Z)))


def test_arrows_are_right_associative():
    assert parse_formula("A -> B -> E") == Implies(A, Implies(B, E))
    assert parse_formula("A <-> B <-> E") == Iff(A, Iff(B, E))


def test_negation_binds_tightest():
    assert parse_formula("~A & B") == And((Not(A), B))
    assert parse_formula("~(A & B)") == Not(And((A, B)))


def test_parentheses_override():
    assert parse_formula("(A -> B) -> E") == Implies(Implies(A, B), E)


def test_falsum_keyword():
    assert parse_formula("false") == Falsum()
    assert parse_formula("A -> false") == Implies(A, Falsum())


def test_atom_names_allow_underscores_and_digits():
    assert parse_formula("_x9 -> Y_2") == Implies(Atom("_x9"), Atom("Y_2"))


@pytest.mark.parametrize("bad", ["", "A ->", "A & ", "(A", "A B", "A -> -> B", "A @ B"])
def test_syntax_errors_carry_position(bad):
    with pytest.raises(ParseError) as err:
        parse_formula(bad)
    assert err.value.pos >= 0


def test_structural_equality_for_set_membership():
    assert parse_formula("A -> E") in {Implies(A, E)}
    assert parse_formula("(A) -> (E)") == parse_formula("A -> E")
    # different nesting is a different formula
    assert parse_formula("A & (B & E)") != parse_formula("A & B & E")


@pytest.mark.parametrize(
    "text",
    [
        "A -> E",
        "X | E -> F & Y & Z",
        "~(A | B) <-> (E -> ~F)",
        "A & (B & E) | ~X",
        "A -> B -> E",
        "(A -> B) -> E",
        "false | ~false",
    ],
)
def test_render_round_trips(text):
    f = parse_formula(text)
    assert parse_formula(render(f)) == f


def test_profile_of_simple_implication():
    assert syntactic_profile(parse_formula("A -> E")) == {"A": 1, "E": 1, "IMP": 1}


def test_profile_counts_nary_connectives_per_join():
    assert syntactic_profile(parse_formula("X | E -> F & Y & Z")) == {
        "X": 1,
        "E": 1,
        "F": 1,
        "Y": 1,
        "Z": 1,
        "IMP": 1,
        "AND": 2,
        "OR": 1,
    }


def test_profile_single_atom():
    assert syntactic_profile(parse_formula("A")) == {"A": 1}


def test_profile_repeated_elements():
    assert syntactic_profile(parse_formula("A -> A & ~A")) == {"A": 3, "IMP": 1, "AND": 1, "NOT": 1}


def test_profile_sum_matches_occurrences():
    f = parse_formula("~(A | B) <-> (E -> ~F)")
    prof = syntactic_profile(f)
    # four atoms, two negations, one each of OR/IMP/IFF
    assert sum(prof.values()) == 9
