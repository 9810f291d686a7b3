from __future__ import annotations

import difflib
import math
import random
import warnings

import numpy as np
import pytest

from cgems.similarity import (
    SequenceMatcher,
    bleu,
    compare,
    cosine_angle,
    edit_count,
    lcs_length,
    levenshtein,
    rouge,
    sequence_ratio,
    soft_cosine_angle,
    token_similarity_matrix,
)
from conftest import snippet, snippet_names, variant


def test_sequence_ratio_examples():
    assert sequence_ratio("abcd", "abcd") == 1.0
    assert sequence_ratio("abcd", "bcde") == 0.75
    assert sequence_ratio("abc", "xyz") == 0.0
    assert sequence_ratio("", "") == 1.0


def test_matcher_agrees_with_difflib_on_random_pairs():
    rng = random.Random(7)
    for _ in range(500):
        a = "".join(rng.choice("abcde \n") for _ in range(rng.randint(0, 60)))
        b = "".join(rng.choice("abcde \n") for _ in range(rng.randint(0, 60)))
        ours = SequenceMatcher(a, b)
        ref = difflib.SequenceMatcher(None, a, b)
        assert ours.opcodes() == ref.get_opcodes()
        assert ours.ratio() == ref.ratio()


def test_matcher_autojunk_on_long_inputs():
    rng = random.Random(3)
    a = "".join(rng.choice("ab") for _ in range(400))
    b = "".join(rng.choice("abc") for _ in range(450))
    assert SequenceMatcher(a, b).matching_blocks() == [tuple(m) for m in difflib.SequenceMatcher(None, a, b).get_matching_blocks()]


@pytest.mark.parametrize("name", snippet_names())
def test_sequence_ratio_matches_oracle(name, oracle_table):
    assert sequence_ratio(snippet(name), variant(name)) == pytest.approx(oracle_table[name]["sequence_ratio"], rel=1e-12)


def test_edit_count_examples():
    base = "a\nb\nc\n"
    assert edit_count(base, base) == 0
    assert edit_count(base, "a\nB\nc\nd\n") == 2
    assert edit_count(base, base + "x\ny\nz\n") == 3
    assert edit_count("a\nb\n", "x\ny\nz\n") == 3


def test_bleu_examples():
    text = "one two three four five"
    assert bleu(text, text) == 100.0
    assert bleu("", "anything here") == 0.0
    assert bleu("the cat sat", "the cat sat down") == pytest.approx(71.65313105737893, rel=1e-12)


def test_bleu_against_nltk_when_available():
    nltk_bleu = pytest.importorskip("nltk.translate.bleu_score")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        expected = 100 * nltk_bleu.sentence_bleu([["the", "cat", "sat", "down"]], ["the", "cat", "sat"],
                                                 weights=(1 / 3,) * 3)
    assert bleu("the cat sat", "the cat sat down") == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("name", snippet_names())
def test_bleu_matches_oracle(name, oracle_table):
    assert bleu(snippet(name), variant(name)) == pytest.approx(oracle_table[name]["bleu"], rel=1e-6, abs=1e-12)


def test_rouge_examples():
    r1 = rouge("the cat", "the cat sat", 1)
    assert (r1.precision, r1.recall, r1.f1) == pytest.approx((100, 200 / 3, 80))
    r2 = rouge("the cat", "the cat sat", 2)
    assert (r2.precision, r2.recall, r2.f1) == pytest.approx((100, 50, 200 / 3))
    for v in ("1", "2", "L"):
        r = rouge("a b c d", "a b c d", v)
        assert (r.precision, r.recall, r.f1) == (100, 100, 100)
    empty = rouge("", "", "L")
    assert (empty.precision, empty.recall, empty.f1) == (0, 0, 0)


def test_rouge_bad_variant():
    with pytest.raises(ValueError):
        rouge("a", "a", 3)


@pytest.mark.parametrize("name", snippet_names())
def test_rouge_matches_oracle(name, oracle_table):
    for v, expected in oracle_table[name]["rouge"].items():
        r = rouge(snippet(name), variant(name), v)
        assert (r.precision, r.recall, r.f1) == pytest.approx(tuple(expected), rel=1e-6)


def _brute_lcs(a, b):
    from itertools import combinations

    best = 0
    for k in range(len(a), 0, -1):
        for idx in combinations(range(len(a)), k):
            sub = [a[i] for i in idx]
            it = iter(b)
            if all(tok in it for tok in sub):
                return k
    return best


def test_lcs_against_exhaustive_search():
    rng = random.Random(11)
    for _ in range(150):
        a = [rng.choice("xyz") for _ in range(rng.randint(0, 10))]
        b = [rng.choice("xyz") for _ in range(rng.randint(0, 12))]
        assert lcs_length(a, b) == _brute_lcs(a, b)


def test_cosine_examples():
    assert cosine_angle("a b c", "a b c") == pytest.approx(0.0, abs=1e-6)
    assert cosine_angle("a b", "c d") == 90.0
    assert cosine_angle("a b", "a") == pytest.approx(45.0, abs=1e-9)
    assert cosine_angle("", "a") == 90.0


def test_levenshtein():
    assert levenshtein("kitten", "sitting") == 3
    assert levenshtein("", "abc") == 3
    assert levenshtein("abc", "abc") == 0
    assert levenshtein("kitten", "sitting", bound=1) == 2


def test_similarity_matrix_matches_brute_force():
    rng = random.Random(5)
    vocab = sorted({"".join(rng.choice("abc") for _ in range(rng.randint(1, 7))) for _ in range(60)})
    fast = token_similarity_matrix(vocab)
    for i, s in enumerate(vocab):
        for j, t in enumerate(vocab):
            if i == j:
                expected = 1.0
            else:
                v = max(0.0, 1 - levenshtein(s, t) / max(len(s), len(t))) ** 2
                expected = v if v >= 0.5 else 0.0
            assert fast[i, j] == pytest.approx(expected, abs=1e-15)


def test_soft_cosine_identity_matrix_degenerates_to_cosine():
    a, b = "x y y z", "y z w"
    from cgems.similarity import DocVector

    size = len(DocVector.build(a, b).vocabulary)
    assert soft_cosine_angle(a, b, np.eye(size)) == pytest.approx(cosine_angle(a, b), abs=1e-12)


def test_soft_cosine_identical_texts():
    assert soft_cosine_angle("num1 * num2", "num1 * num2") == pytest.approx(0.0, abs=1e-6)


def test_soft_cosine_hand_value_for_renamed_identifiers():
    # vocabulary (*, a, b, num1, num2): only num1~num2 is linked, s = (1 - 1/4)^2
    s = 0.5625
    ab = 1.0
    aa = 3 + 2 * s
    bb = 3.0
    expected = math.degrees(math.acos(ab / math.sqrt(aa * bb)))
    assert soft_cosine_angle("num1 * num2", "a * b") == pytest.approx(expected, abs=1e-9)
    # the near-identical identifiers are linked to each other, not to a/b, so
    # the soft angle here is larger than the plain cosine angle
    assert soft_cosine_angle("num1 * num2", "a * b") > cosine_angle("num1 * num2", "a * b")


def test_soft_cosine_credits_similar_identifiers():
    soft = soft_cosine_angle("num1 * num2", "num2 * num3")
    plain = cosine_angle("num1 * num2", "num2 * num3")
    assert soft < plain


def test_compare_report():
    rep = compare("a b c d e", "a b c d e", "a b c d e")
    assert rep.sequence_ratio == 1.0 and rep.edits == 0 and rep.bleu == 100.0
    assert rep.cosine_deg == pytest.approx(0, abs=1e-6)
    feats = rep.features()
    from cgems import schema

    assert tuple(feats) == schema.SIMILARITY_COLUMNS
    no_corr = compare("a", "b").features()
    assert "Edits" not in no_corr and "Sequence Ratio" not in no_corr
