"""Freeze independent oracle values for the fixture snippets.

Run once (needs radon, nltk and rouge-score, none of which the package
imports):

    python tests/oracles/freeze_fixtures.py

Writes tests/fixtures/variants/*.py and tests/fixtures/oracles.json. The
oracles are independent of cgems:

* raw line buckets from radon's raw analyzer
* Halstead counts from a counter built on the stdlib tokenizer
* cyclomatic complexity from radon's AST visitor
* sequence ratio from difflib, BLEU from nltk, ROUGE from rouge-score
"""

from __future__ import annotations

import difflib
import io
import json
import keyword
import math
import tokenize
import warnings
from pathlib import Path

from nltk.translate.bleu_score import sentence_bleu
from radon.complexity import cc_visit
from radon.metrics import mi_compute
from radon.raw import analyze
from rouge_score import rouge_scorer

HERE = Path(__file__).resolve().parent
FIXTURES = HERE.parent / "fixtures"
CLOSERS = {")": None, "]": None, "}": None}
PAIRS = {"(": "()", "[": "[]", "{": "{}"}
DECLARATIONS = {"def", "class"}
CONSTANT_NAMES = {"True", "False", "None"}


def make_variant(text: str) -> str:
    """A deterministic edit of a snippet: drop its second line, rename print
    and append a trailing comment."""
    lines = text.splitlines()
    if len(lines) > 1:
        del lines[1]
    lines = [line.replace("print", "log") for line in lines]
    lines.append("# end")
    return "\n".join(lines) + "\n"


def halstead_counts(text: str) -> dict:
    operators, operands = [], []
    for tok in tokenize.generate_tokens(io.StringIO(text).readline):
        if tok.type == tokenize.OP:
            if tok.string in CLOSERS or tok.string == ";":
                continue
            operators.append(PAIRS.get(tok.string, tok.string))
        elif tok.type == tokenize.NAME:
            if keyword.iskeyword(tok.string) and tok.string not in CONSTANT_NAMES:
                if tok.string not in DECLARATIONS:
                    operators.append(tok.string)
            else:
                operands.append(tok.string)
        elif tok.type in (tokenize.NUMBER, tokenize.STRING):
            operands.append(tok.string)
    n1, n2, N1, N2 = len(set(operators)), len(set(operands)), len(operators), len(operands)
    n, N = n1 + n2, N1 + N2
    volume = N * math.log2(n) if n > 0 else 0.0
    difficulty = (n1 / 2) * (N2 / n2) if n2 else 0.0
    effort = difficulty * volume
    return {
        "n1": n1, "n2": n2, "N1": N1, "N2": N2,
        "volume": volume, "difficulty": difficulty, "effort": effort,
        "time": effort / 18, "bugs": volume / 3000,
    }


DECISIONS = {"if", "elif", "for", "while", "except", "assert", "and", "or"}


def decision_total(text: str) -> int:
    """Blocks plus decision keywords, counted on stdlib tokens: the sum of
    every block's complexity when each block starts at 1."""
    total = 0
    for tok in tokenize.generate_tokens(io.StringIO(text).readline):
        if tok.type == tokenize.NAME and (tok.string in DECLARATIONS or tok.string in DECISIONS):
            total += 1
    return total


def mi_formula(volume: float, total_cc: int, sloc: int, ratio: float) -> float:
    score = (
        171
        - 5.2 * math.log(max(volume, 1.0))
        - 0.23 * total_cc
        - 16.2 * math.log(max(sloc, 1))
        + 50 * math.sin(math.sqrt(2.4 * min(max(ratio, 0.0), 1.0)))
    )
    return min(100.0, max(0.0, 100 * score / 171))


def bleu_oracle(hyp: str, ref: str) -> float:
    h, r = hyp.split(), ref.split()
    if not h or not r:
        return 0.0
    order = min(4, len(h))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return 100 * sentence_bleu([r], h, weights=(1 / order,) * order)


class WhitespaceTokenizer:
    def tokenize(self, text):
        return text.split()


def rouge_oracle(hyp: str, ref: str) -> dict:
    scorer = rouge_scorer.RougeScorer(["rouge1", "rouge2", "rougeL"], tokenizer=WhitespaceTokenizer())
    scores = scorer.score(ref, hyp)
    return {
        key: [100 * s.precision, 100 * s.recall, 100 * s.fmeasure]
        for key, s in (("1", scores["rouge1"]), ("2", scores["rouge2"]), ("L", scores["rougeL"]))
    }


def radon_blocks(blocks) -> list:
    """(name, complexity) for functions, classes and methods, by line.
    radon already lists methods next to their classes."""
    flat = sorted((block.lineno, block.name, block.complexity) for block in blocks)
    return [[name, cc] for _, name, cc in flat]


def main() -> None:
    out = {}
    for path in sorted((FIXTURES / "snippets").glob("*.py")):
        text = path.read_text()
        variant = make_variant(text)
        (FIXTURES / "variants" / path.name).write_text(variant)
        raw = analyze(text)
        blocks = cc_visit(text)
        hal = halstead_counts(text)
        total_cc = decision_total(text)
        ratio = (raw.comments + raw.multi) / raw.loc if raw.loc else 0.0
        out[path.stem] = {
            "raw": {
                "loc": raw.loc, "lloc": raw.lloc, "sloc": raw.sloc, "comments": raw.comments,
                "multi": raw.multi, "blank": raw.blank, "single_comments": raw.single_comments,
            },
            "halstead": hal,
            "cc_total": total_cc,
            "mi": mi_formula(hal["volume"], total_cc, raw.sloc, ratio),
            # radon's own MI when there are no comments (its comment term
            # uses a different scaling)
            "mi_radon": mi_compute(hal["volume"], total_cc, raw.sloc, 0) if ratio == 0 else None,
            "radon_cc": radon_blocks(blocks),
            "sequence_ratio": difflib.SequenceMatcher(None, text, variant).ratio(),
            "bleu": bleu_oracle(text, variant),
            "rouge": rouge_oracle(text, variant),
        }
    (FIXTURES / "oracles.json").write_text(json.dumps(out, indent=1, sort_keys=True) + "\n")
    print(f"froze {len(out)} snippets")


if __name__ == "__main__":
    main()
