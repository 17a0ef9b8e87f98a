import pytest

from rulebench.corpus import Corpus, Part, split_corpus
from rulebench.index import build_index
from rulebench.stats import SortKey, TermStats, class_term_stats, rank_terms

from .conftest import contains_ngram, random_corpus


def _project(records):
    corpus = Corpus.from_records(records)
    split = split_corpus(corpus, (1, 0, 0), seed=0)
    return corpus, build_index(corpus), split


def naive_stats(corpus, part_ids, class_name, max_n, min_df):
    """Brute-force recount of every TermStats field."""
    universe = [corpus.by_id[d] for d in part_ids]
    in_class = [d for d in universe if class_name in d.gold_labels]
    grams = set()
    for d in universe:
        for n in range(1, max_n + 1):
            grams.update(
                tuple(d.tokens[i : i + n]) for i in range(len(d.tokens) - n + 1)
            )
    out = {}
    for g in grams:
        df = sum(1 for d in universe if contains_ngram(d.tokens, g))
        if df < min_df:
            continue
        df_in = sum(1 for d in in_class if contains_ngram(d.tokens, g))
        df_out = df - df_in
        p = df_in / (df_in + df_out)
        r = df_in / len(in_class)
        f1 = 0.0 if p + r == 0 else 2 * p * r / (p + r)
        lift = ((df_in + 1) / (len(in_class) + 1)) / ((df + 1) / (len(universe) + 1))
        out[g] = (df_in, df_out, len(in_class), len(universe), p, r, f1, lift)
    return out


class TestClassTermStats:
    def test_split_counts(self):
        corpus, ix, split = _project([("d1", "a b", ["X"]), ("d2", "a c", ["Y"])])
        stats = {
            s.ngram: s
            for s in class_term_stats(ix, corpus, split, Part.TRAIN, "X", max_n=1, min_df=1)
        }
        a = stats[("a",)]
        assert (a.df_in, a.df_out) == (1, 1)
        assert a.term_precision == 0.5
        assert a.term_recall == 1.0

    def test_exclusive_term_full_precision(self):
        corpus, ix, split = _project([("d1", "a b", ["X"]), ("d2", "c d", ["Y"])])
        stats = {
            s.ngram: s
            for s in class_term_stats(ix, corpus, split, Part.TRAIN, "X", max_n=1, min_df=1)
        }
        assert stats[("a",)].term_precision == 1.0

    def test_absent_term_zero_recall_and_f1(self):
        corpus, ix, split = _project([("d1", "a", ["X"]), ("d2", "z", ["Y"])])
        stats = {
            s.ngram: s
            for s in class_term_stats(ix, corpus, split, Part.TRAIN, "X", max_n=1, min_df=1)
        }
        assert stats[("z",)].term_recall == 0.0
        assert stats[("z",)].term_f1 == 0.0

    def test_class_missing_from_part_rejected(self):
        corpus = Corpus.from_records([("d1", "a", ["X"]), ("d2", "b", ["Y"])])
        ix = build_index(corpus)
        split = split_corpus(corpus, (0.5, 0.0, 0.5), seed=0)
        part_with_x = split.assignment["d1"]
        other = Part.TRAIN if part_with_x is not Part.TRAIN else Part.TEST
        with pytest.raises(ValueError, match="'X'"):
            class_term_stats(ix, corpus, split, other, "X", max_n=1, min_df=1)

    def test_unknown_class_rejected(self):
        corpus, ix, split = _project([("d1", "a", ["X"])])
        with pytest.raises(ValueError, match="unknown class"):
            class_term_stats(ix, corpus, split, Part.TRAIN, "Nope")

    def test_all_fields_match_naive_recount(self, rng):
        for _ in range(20):
            corpus = random_corpus(rng, max_docs=40, labels=("X", "Y", "Z"))
            if not any("X" in d.gold_labels for d in corpus):
                continue
            ix = build_index(corpus)
            split = split_corpus(corpus, (1, 0, 0), seed=0)
            max_n, min_df = rng.randint(1, 3), rng.randint(1, 2)
            part_ids = split.part_ids(Part.TRAIN)
            want = naive_stats(corpus, part_ids, "X", max_n, min_df)
            got = class_term_stats(ix, corpus, split, Part.TRAIN, "X", max_n, min_df)
            assert {s.ngram for s in got} == set(want)
            for s in got:
                w = want[s.ngram]
                assert (s.df_in, s.df_out, s.class_size, s.universe_size) == w[:4]
                for gv, wv in zip(
                    (s.term_precision, s.term_recall, s.term_f1, s.lift), w[4:]
                ):
                    assert abs(gv - wv) < 1e-12

    def test_f1_zero_iff_df_in_zero(self, rng):
        corpus = random_corpus(rng, max_docs=60, labels=("X", "Y"))
        if not any("X" in d.gold_labels for d in corpus):
            pytest.skip("degenerate draw")
        ix = build_index(corpus)
        split = split_corpus(corpus, (1, 0, 0), seed=0)
        for s in class_term_stats(ix, corpus, split, Part.TRAIN, "X", 2, 1):
            assert (s.term_f1 == 0) == (s.df_in == 0)

    def test_df_in_sums_to_df_for_single_label_docs(self, rng):
        labels = ("X", "Y", "Z")
        corpus = random_corpus(rng, max_docs=50, labels=labels)
        present = [c for c in labels if any(c in d.gold_labels for d in corpus)]
        if len(present) < 2:
            pytest.skip("degenerate draw")
        ix = build_index(corpus)
        split = split_corpus(corpus, (1, 0, 0), seed=0)
        per_class = {
            c: {s.ngram: s for s in class_term_stats(ix, corpus, split, Part.TRAIN, c, 2, 1)}
            for c in present
        }
        any_class = per_class[present[0]]
        for ngram, stat in any_class.items():
            df = stat.df_in + stat.df_out
            total_in = sum(per_class[c][ngram].df_in for c in present)
            assert total_in == df  # strictly single-label corpus


def _ts(ngram, df_in, f1):
    return TermStats(ngram, df_in, 0, 10, 20, 0.5, 0.5, f1, 1.0)


class TestRankTerms:
    def test_desc_by_column(self):
        rows = [_ts(("a",), 1, 0.4), _ts(("b",), 1, 0.9)]
        ranked = rank_terms(rows, SortKey("term_f1", "desc"), 10)
        assert [r.ngram for r in ranked] == [("b",), ("a",)]

    def test_tie_breaks_by_df_in_then_ngram(self):
        rows = [_ts(("a",), 2, 0.5), _ts(("b",), 5, 0.5), _ts(("c",), 2, 0.5)]
        ranked = rank_terms(rows, SortKey("term_f1", "desc"), 10)
        assert [r.ngram for r in ranked] == [("b",), ("a",), ("c",)]

    def test_limit_one(self):
        rows = [_ts(("a",), 1, 0.4), _ts(("b",), 1, 0.9)]
        assert rank_terms(rows, SortKey("term_f1", "desc"), 1) == [rows[1]]

    def test_asc_direction(self):
        rows = [_ts(("a",), 1, 0.4), _ts(("b",), 1, 0.9)]
        ranked = rank_terms(rows, SortKey("term_f1", "asc"), 10)
        assert [r.ngram for r in ranked] == [("a",), ("b",)]

    def test_output_is_permutation_and_deterministic(self, rng):
        rows = [
            _ts((f"w{i}",), rng.randint(0, 5), rng.choice([0.1, 0.5, 0.9]))
            for i in range(30)
        ]
        for column in ("df_in", "term_f1", "lift"):
            a = rank_terms(rows, SortKey(column, "desc"), len(rows))
            b = rank_terms(list(reversed(rows)), SortKey(column, "desc"), len(rows))
            assert sorted(map(repr, a)) == sorted(map(repr, rows))
            assert a == b

    def test_bad_keys_rejected(self):
        with pytest.raises(ValueError):
            SortKey("nope", "desc")
        with pytest.raises(ValueError):
            SortKey("term_f1", "up")
        with pytest.raises(ValueError):
            rank_terms([], SortKey("term_f1"), 0)
