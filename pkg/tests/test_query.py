import pytest

from rulebench.corpus import Corpus
from rulebench.index import build_index
from rulebench.query import (
    And,
    Not,
    Or,
    Phrase,
    QuerySyntaxError,
    Term,
    eval_query,
    parse_query,
    print_query,
    query_atoms,
)

from .conftest import naive_eval, random_ast, random_corpus


class TestParse:
    def test_simple_or(self):
        assert parse_query("cannot OR conclusion") == Or(Term("cannot"), Term("conclusion"))

    def test_left_nested_or_chain(self):
        ast = parse_query("cannot OR apparent OR prohibit OR definition")
        assert ast == Or(
            Or(Or(Term("cannot"), Term("apparent")), Term("prohibit")),
            Term("definition"),
        )

    def test_not_phrase_conjunction(self):
        ast = parse_query('cir AND NOT "headquarters in" AND is')
        assert ast == And(
            And(Term("cir"), Not(Phrase(("headquarters", "in")))), Term("is")
        )

    def test_precedence_not_and_or(self):
        assert parse_query("a OR b AND NOT c") == Or(
            Term("a"), And(Term("b"), Not(Term("c")))
        )

    def test_parens_group(self):
        assert parse_query("(a OR b) AND c") == And(Or(Term("a"), Term("b")), Term("c"))

    def test_keywords_case_insensitive(self):
        assert parse_query("a and b") == parse_query("a AND b") == And(Term("a"), Term("b"))

    def test_quoted_keyword_is_term(self):
        assert parse_query('"or"') == Term("or")
        assert parse_query('a AND "not"') == And(Term("a"), Term("not"))

    def test_operands_lowercased(self):
        assert parse_query("Cannot") == Term("cannot")


class TestParseErrors:
    @pytest.mark.parametrize(
        "text",
        [
            "",
            "   ",
            "a AND",
            "OR a",
            "a OR b)",
            "(a OR b",
            'a AND "unterminated',
            "a b",
            '"a" "b"',
            '""',
            '"just one two three four"',
            "NOT",
            "a AND AND b",
        ],
    )
    def test_rejected(self, text):
        with pytest.raises(QuerySyntaxError):
            parse_query(text)

    def test_position_reported(self):
        with pytest.raises(QuerySyntaxError) as err:
            parse_query("a AND")
        assert err.value.position == 5

        with pytest.raises(QuerySyntaxError) as err:
            parse_query("a b")
        assert err.value.position == 2

    def test_position_within_input(self):
        for text in ["", "a AND", "(a", 'x OR "y', "a ) b"]:
            with pytest.raises(QuerySyntaxError) as err:
                parse_query(text)
            assert 0 <= err.value.position <= len(text)

    def test_multiword_bare_operand_rejected(self):
        with pytest.raises(QuerySyntaxError, match="single term"):
            parse_query("c.f.r")


class TestPrint:
    def test_or(self):
        assert print_query(Or(Term("a"), Term("b"))) == "a OR b"

    def test_not_over_or_parenthesized(self):
        assert print_query(Not(Or(Term("a"), Term("b")))) == "NOT (a OR b)"

    def test_and_with_or_child(self):
        ast = And(Term("a"), Or(Term("b"), Term("c")))
        printed = print_query(ast)
        assert printed == "a AND (b OR c)"
        assert parse_query(printed) == ast

    def test_phrase_quoted(self):
        assert print_query(Phrase(("headquarters", "in"))) == '"headquarters in"'

    def test_keyword_term_quoted(self):
        assert print_query(Term("or")) == '"or"'
        assert parse_query(print_query(Term("or"))) == Term("or")

    def test_round_trip_random_asts(self, rng):
        for _ in range(1000):
            ast = random_ast(rng)
            assert parse_query(print_query(ast)) == ast


class TestEval:
    def _fixture(self):
        corpus = Corpus.from_records(
            [
                ("d1", "we cannot", ["A"]),
                ("d2", "in conclusion", ["A"]),
                ("d3", "we find", ["B"]),
            ]
        )
        return corpus, build_index(corpus)

    def test_or_membership(self):
        corpus, ix = self._fixture()
        ids = [d.id for d in corpus]
        assert eval_query(parse_query("cannot OR conclusion"), ix, ids) == {"d1", "d2"}

    def test_not_of_absent_token_is_universe(self):
        corpus, ix = self._fixture()
        ids = [d.id for d in corpus]
        assert eval_query(parse_query("NOT zebra"), ix, ids) == set(ids)

    def test_contradiction_empty(self):
        corpus, ix = self._fixture()
        ids = [d.id for d in corpus]
        assert eval_query(parse_query("a AND NOT a"), ix, ids) == set()

    def test_result_within_universe(self):
        corpus, ix = self._fixture()
        assert eval_query(parse_query("we"), ix, ["d3"]) == {"d3"}


class TestEvalProperties:
    def test_oracle_equivalence(self, rng):
        for _ in range(60):
            corpus = random_corpus(rng, max_docs=50)
            ix = build_index(corpus)
            ids = [d.id for d in corpus]
            universe = rng.sample(ids, rng.randint(0, len(ids)))
            for _ in range(10):
                ast = random_ast(rng)
                assert eval_query(ast, ix, universe) == naive_eval(ast, corpus, universe)

    def test_de_morgan(self, rng):
        for _ in range(40):
            corpus = random_corpus(rng, max_docs=40)
            ix = build_index(corpus)
            ids = [d.id for d in corpus]
            a, b = random_ast(rng, 2), random_ast(rng, 2)
            assert eval_query(Not(Or(a, b)), ix, ids) == eval_query(
                And(Not(a), Not(b)), ix, ids
            )
            assert eval_query(Not(And(a, b)), ix, ids) == eval_query(
                Or(Not(a), Not(b)), ix, ids
            )

    def test_monotone_containment(self, rng):
        for _ in range(40):
            corpus = random_corpus(rng, max_docs=40)
            ix = build_index(corpus)
            ids = [d.id for d in corpus]
            a, b = random_ast(rng, 2), random_ast(rng, 2)
            ev_and = eval_query(And(a, b), ix, ids)
            ev_a = eval_query(a, ix, ids)
            ev_or = eval_query(Or(a, b), ix, ids)
            assert ev_and <= ev_a <= ev_or

    def test_universe_restriction(self, rng):
        for _ in range(40):
            corpus = random_corpus(rng, max_docs=40)
            ix = build_index(corpus)
            ids = [d.id for d in corpus]
            sub = set(rng.sample(ids, rng.randint(0, len(ids))))
            ast = random_ast(rng)
            assert eval_query(ast, ix, sub) == eval_query(ast, ix, ids) & sub


class TestAstValidation:
    def test_term_must_be_single_token(self):
        with pytest.raises(ValueError):
            Term("two words")
        with pytest.raises(ValueError):
            Term("UPPER")

    def test_phrase_length_bounds(self):
        with pytest.raises(ValueError):
            Phrase(("a",))
        with pytest.raises(ValueError):
            Phrase(("a", "b", "c", "d"))


def test_query_atoms_order():
    ast = parse_query('cir AND NOT "headquarters in" AND is')
    assert query_atoms(ast) == [("cir",), ("headquarters", "in"), ("is",)]
