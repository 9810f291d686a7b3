"""Text similarity between generated code and a reference or corrected
version: sequence ratio, edit count, BLEU, ROUGE and (soft) cosine angles.

Everything except the sequence matcher works on whitespace tokens of the
raw text.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from cgems import schema


class SequenceMatcher:
    """Ratcliff/Obershelp matcher.

    Recursively takes the longest contiguous matching block and recurses on
    both sides of it. With ``autojunk`` on, elements of ``b`` occurring in more
    than 1% of a sequence of 200+ items are not used to seed matches (they can
    still extend one), which keeps long inputs tractable.
    """

    def __init__(self, a: Sequence[Hashable], b: Sequence[Hashable], autojunk: bool = True) -> None:
        self.a = a
        self.b = b
        b2j: dict[Hashable, list[int]] = {}
        for j, elt in enumerate(b):
            b2j.setdefault(elt, []).append(j)
        n = len(b)
        if autojunk and n >= 200:
            limit = n // 100 + 1
            for elt in [e for e, idx in b2j.items() if len(idx) > limit]:
                del b2j[elt]
        self.b2j = b2j
        self._blocks: list[tuple[int, int, int]] | None = None

    def find_longest_match(self, alo: int, ahi: int, blo: int, bhi: int) -> tuple[int, int, int]:
        a, b, b2j = self.a, self.b, self.b2j
        besti, bestj, bestsize = alo, blo, 0
        lengths: dict[int, int] = {}
        for i in range(alo, ahi):
            new_lengths: dict[int, int] = {}
            for j in b2j.get(a[i], ()):
                if j < blo:
                    continue
                if j >= bhi:
                    break
                k = new_lengths[j] = lengths.get(j - 1, 0) + 1
                if k > bestsize:
                    besti, bestj, bestsize = i - k + 1, j - k + 1, k
            lengths = new_lengths
        while besti > alo and bestj > blo and a[besti - 1] == b[bestj - 1]:
            besti, bestj, bestsize = besti - 1, bestj - 1, bestsize + 1
        while besti + bestsize < ahi and bestj + bestsize < bhi and a[besti + bestsize] == b[bestj + bestsize]:
            bestsize += 1
        return besti, bestj, bestsize

    def matching_blocks(self) -> list[tuple[int, int, int]]:
        if self._blocks is not None:
            return self._blocks
        la, lb = len(self.a), len(self.b)
        queue = [(0, la, 0, lb)]
        found = []
        while queue:
            alo, ahi, blo, bhi = queue.pop()
            i, j, k = self.find_longest_match(alo, ahi, blo, bhi)
            if k:
                found.append((i, j, k))
                if alo < i and blo < j:
                    queue.append((alo, i, blo, j))
                if i + k < ahi and j + k < bhi:
                    queue.append((i + k, ahi, j + k, bhi))
        found.sort()
        merged: list[tuple[int, int, int]] = []
        for i, j, k in found:
            if merged and merged[-1][0] + merged[-1][2] == i and merged[-1][1] + merged[-1][2] == j:
                pi, pj, pk = merged[-1]
                merged[-1] = (pi, pj, pk + k)
            else:
                merged.append((i, j, k))
        merged.append((la, lb, 0))
        self._blocks = merged
        return merged

    def opcodes(self) -> list[tuple[str, int, int, int, int]]:
        i = j = 0
        ops = []
        for ai, bj, size in self.matching_blocks():
            tag = ""
            if i < ai and j < bj:
                tag = "replace"
            elif i < ai:
                tag = "delete"
            elif j < bj:
                tag = "insert"
            if tag:
                ops.append((tag, i, ai, j, bj))
            i, j = ai + size, bj + size
            if size:
                ops.append(("equal", ai, i, bj, j))
        return ops

    def ratio(self) -> float:
        total = len(self.a) + len(self.b)
        if total == 0:
            return 1.0
        matches = sum(size for _, _, size in self.matching_blocks())
        return 2.0 * matches / total


def sequence_ratio(a: str, b: str) -> float:
    return SequenceMatcher(a, b).ratio()


def edit_count(generated: str, corrected: str) -> int:
    """Line edits turning ``generated`` into ``corrected``.

    Each inserted or deleted line is one edit; a replaced run of m lines by
    n lines costs max(m, n).
    """
    ops = SequenceMatcher(generated.splitlines(), corrected.splitlines()).opcodes()
    edits = 0
    for tag, i1, i2, j1, j2 in ops:
        if tag == "insert":
            edits += j2 - j1
        elif tag == "delete":
            edits += i2 - i1
        elif tag == "replace":
            edits += max(i2 - i1, j2 - j1)
    return edits


# -- n-gram metrics --------------------------------------------------------


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu(hypothesis: str, reference: str, max_order: int = 4) -> float:
    """Unsmoothed BLEU of one hypothesis against one reference, times 100.

    Hypotheses shorter than ``max_order`` tokens use their own length as the
    highest n-gram order.
    """
    hyp = hypothesis.split()
    ref = reference.split()
    if not hyp or not ref:
        return 0.0
    order = min(max_order, len(hyp))
    log_total = 0.0
    for n in range(1, order + 1):
        hyp_counts = _ngrams(hyp, n)
        ref_counts = _ngrams(ref, n)
        matched = sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())
        if matched == 0:
            return 0.0
        log_total += math.log(matched / sum(hyp_counts.values())) / order
    c, r = len(hyp), len(ref)
    brevity = 1.0 if c > r else math.exp(1 - r / c)
    return min(100.0, 100.0 * brevity * math.exp(log_total))


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float


def _prf(overlap: int, hyp_units: int, ref_units: int) -> PRF:
    p = overlap / hyp_units if hyp_units else 0.0
    r = overlap / ref_units if ref_units else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return PRF(100 * p, 100 * r, 100 * f)


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b):
            cur.append(prev[j] + 1 if x == y else max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def rouge(hypothesis: str, reference: str, variant: str | int = 1) -> PRF:
    hyp = hypothesis.split()
    ref = reference.split()
    variant = str(variant).upper()
    if variant == "L":
        return _prf(lcs_length(hyp, ref), len(hyp), len(ref))
    if variant not in ("1", "2"):
        raise ValueError(f"unknown ROUGE variant {variant!r}")
    n = int(variant)
    hyp_counts, ref_counts = _ngrams(hyp, n), _ngrams(ref, n)
    overlap = sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())
    return _prf(overlap, sum(hyp_counts.values()), sum(ref_counts.values()))


# -- vector similarity -----------------------------------------------------


@dataclass(frozen=True)
class DocVector:
    vocabulary: tuple[str, ...]
    a: np.ndarray
    b: np.ndarray

    @classmethod
    def build(cls, text_a: str, text_b: str) -> DocVector:
        ca, cb = Counter(text_a.split()), Counter(text_b.split())
        vocab = tuple(sorted(set(ca) | set(cb)))
        return cls(
            vocab,
            np.array([ca[t] for t in vocab], dtype=float),
            np.array([cb[t] for t in vocab], dtype=float),
        )


def _angle(k: float) -> float:
    return math.degrees(math.acos(min(1.0, max(0.0, k))))


def _vector_angle(a: np.ndarray, b: np.ndarray, sim: np.ndarray | None = None) -> float:
    """Angle in degrees between two count vectors under the inner product
    ``u' S v`` (plain dot product without ``sim``), clamped to [0, 90].

    Uses the half-angle form 2*atan2(|a^ - b^|, |a^ + b^|), which stays exact
    near 0 where acos loses about half the digits.
    """

    def inner(u: np.ndarray, v: np.ndarray) -> float:
        return float(u @ v) if sim is None else float(u @ sim @ v)

    aa, bb = inner(a, a), inner(b, b)
    if aa <= 0 or bb <= 0:
        return 90.0
    ua, ub = a / math.sqrt(aa), b / math.sqrt(bb)
    diff, total = inner(ua - ub, ua - ub), inner(ua + ub, ua + ub)
    if diff < 0 or total < 0:
        # S is not positive semi-definite here; fall back to the raw ratio
        return _angle(inner(a, b) / math.sqrt(aa * bb))
    return min(90.0, math.degrees(2 * math.atan2(math.sqrt(diff), math.sqrt(total))))


def cosine_angle(a: str, b: str) -> float:
    """Angle in degrees between the word-count vectors of two texts."""
    vec = DocVector.build(a, b)
    if not vec.a.any() or not vec.b.any():
        return 90.0
    return _vector_angle(vec.a, vec.b)


def levenshtein(s: str, t: str, bound: int | None = None) -> int:
    """Edit distance; with ``bound`` set, any value above it comes back as
    ``bound + 1`` without finishing the table."""
    if len(s) < len(t):
        s, t = t, s
    if bound is not None and len(s) - len(t) > bound:
        return bound + 1
    prev = list(range(len(t) + 1))
    for i, cs in enumerate(s, 1):
        cur = [i]
        for j, ct in enumerate(t, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (cs != ct)))
        if bound is not None and min(cur) > bound:
            return bound + 1
        prev = cur
    return prev[-1]


def token_similarity_matrix(vocabulary: Sequence[str], threshold: float = 0.5) -> np.ndarray:
    """Squared normalized Levenshtein similarity; weak links below
    ``threshold`` are dropped, the diagonal is 1."""
    size = len(vocabulary)
    sim = np.eye(size)
    # similarity >= threshold  <=>  distance <= (1 - sqrt(threshold)) * longest
    reach = 1 - math.sqrt(threshold)
    order = sorted(range(size), key=lambda k: len(vocabulary[k]))
    for pos, i in enumerate(order):
        s = vocabulary[i]
        for j in order[pos + 1:]:
            t = vocabulary[j]
            bound = math.floor(reach * len(t) + 1e-12)
            if len(t) - len(s) > bound:
                break
            if bound == 0:
                continue
            dist = levenshtein(s, t, bound)
            if dist > bound:
                continue
            value = max(0.0, 1 - dist / len(t)) ** 2
            if value >= threshold:
                sim[i, j] = sim[j, i] = value
    return sim


def soft_cosine_angle(a: str, b: str, similarity: np.ndarray | None = None) -> float:
    vec = DocVector.build(a, b)
    if not vec.a.any() or not vec.b.any():
        return 90.0
    sim = token_similarity_matrix(vec.vocabulary) if similarity is None else similarity
    return _vector_angle(vec.a, vec.b, sim)


# -- report ----------------------------------------------------------------


@dataclass(frozen=True)
class SimilarityReport:
    sequence_ratio: float | None
    edits: int | None
    bleu: float
    rouge1: PRF
    rouge2: PRF
    rougeL: PRF
    cosine_deg: float
    soft_cosine_deg: float

    def features(self) -> dict[str, float]:
        out: dict[str, float] = {}
        if self.edits is not None:
            out[schema.EDITS] = self.edits
        if self.sequence_ratio is not None:
            out[schema.SEQUENCE_RATIO] = self.sequence_ratio
        names = iter(schema.ROUGE)
        for prf in (self.rouge1, self.rouge2, self.rougeL):
            for value in (prf.precision, prf.recall, prf.f1):
                out[next(names)] = value
        out[schema.COSINE] = self.cosine_deg
        out[schema.SOFT_COSINE] = self.soft_cosine_deg
        out[schema.BLEU] = self.bleu
        return out


def compare(generated: str, reference: str, corrected: str | None = None) -> SimilarityReport:
    """Similarity of ``generated`` to ``reference``; edits and sequence ratio
    are taken against ``corrected`` and left as None without one."""
    return SimilarityReport(
        sequence_ratio=None if corrected is None else sequence_ratio(generated, corrected),
        edits=None if corrected is None else edit_count(generated, corrected),
        bleu=bleu(generated, reference),
        rouge1=rouge(generated, reference, 1),
        rouge2=rouge(generated, reference, 2),
        rougeL=rouge(generated, reference, "L"),
        cosine_deg=cosine_angle(generated, reference),
        soft_cosine_deg=soft_cosine_angle(generated, reference),
    )
