"""Raw line counts, cyclomatic complexity, Halstead measures and the
maintainability index, all computed from the lexer's view of a file."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from cgems import schema
from cgems.source_model import (
    PYTHON_PROFILE,
    BlockNode,
    BlockRole,
    LanguageProfile,
    LexicalError,
    StructureError,
    Token,
    TokenKind,
    TokenStream,
    block_structure,
    logical_lines,
    tokenize_lenient,
)

_STRINGS = (TokenKind.STRING, TokenKind.MULTILINE_STRING)
_PAIRS = {"(": "()", "[": "[]", "{": "{}"}
_CLOSERS = frozenset(")]}")


def _pct(num: float, den: float) -> float:
    if den <= 0:
        return 0.0
    return min(100.0, 100.0 * num / den)


@dataclass(frozen=True)
class RawMetrics:
    loc: int
    lloc: int
    sloc: int
    comments: int
    multi: int
    blank: int
    single_comments: int

    @property
    def c_pct_l(self) -> float:
        return _pct(self.comments, self.loc)

    @property
    def c_pct_s(self) -> float:
        return _pct(self.comments, self.sloc)

    @property
    def cm_pct_l(self) -> float:
        return _pct(self.comments + self.multi, self.loc)


def _content_lines(tokens: TokenStream) -> set[int]:
    """Physical lines holding something other than whitespace."""
    lines: set[int] = set()
    for tok in tokens:
        if tok.kind in (TokenKind.INDENT, TokenKind.DEDENT, TokenKind.NEWLINE):
            continue
        if tok.end_line == tok.line:
            lines.add(tok.line)
            continue
        for offset, part in enumerate(tok.lexeme.splitlines()):
            if part.strip():
                lines.add(tok.line + offset)
    return lines


def _statement_groups(tokens: TokenStream) -> list[list[Token]]:
    """Tokens of each logical line, comments included, newlines excluded."""
    groups: list[list[Token]] = []
    current: list[Token] = []
    for tok in tokens:
        if tok.kind is TokenKind.NEWLINE:
            if current:
                groups.append(current)
            current = []
        elif tok.kind in (TokenKind.INDENT, TokenKind.DEDENT):
            continue
        elif tok.kind is TokenKind.COMMENT and not current:
            # comment-only line; never part of a statement
            groups.append([tok])
        else:
            current.append(tok)
    if current:
        groups.append(current)
    return groups


def raw_metrics(tokens: TokenStream, profile: LanguageProfile = PYTHON_PROFILE) -> RawMetrics:
    """Attribute every physical line to exactly one of source, blank,
    comment-only or multi-line-string buckets."""
    content = _content_lines(tokens)
    sloc = multi = single = 0
    for group in _statement_groups(tokens):
        first = group[0].line
        last = max(t.end_line for t in group)
        span = range(first, last + 1)
        if len(group) == 1 and group[0].kind is TokenKind.COMMENT:
            single += 1
        elif len(group) == 1 and group[0].kind in _STRINGS:
            # a bare string statement is documentation, not code
            if first == last:
                single += 1
            else:
                multi += sum(1 for ln in span if ln in content)
        else:
            sloc += sum(1 for ln in span if ln in content)
    loc = tokens.line_count
    blank = loc - sloc - multi - single
    lloc, _ = logical_lines(tokens, profile)
    comments = sum(1 for t in tokens if t.kind is TokenKind.COMMENT)
    return RawMetrics(loc, lloc, sloc, comments, multi, blank, single)


# -- cyclomatic complexity -------------------------------------------------

_GRADE_BANDS = ((5, "A"), (10, "B"), (20, "C"), (30, "D"), (40, "E"))


def grade(cc: float) -> str:
    """Letter grade for a complexity value; 41 and above is F."""
    if cc < 1:
        raise ValueError(f"cyclomatic complexity must be >= 1, got {cc}")
    for upper, letter in _GRADE_BANDS:
        if cc <= upper:
            return letter
    return "F"


@dataclass(frozen=True)
class BlockComplexity:
    name: str
    role: str
    cc: int
    start_line: int
    end_line: int


@dataclass(frozen=True)
class CyclomaticResult:
    blocks: tuple[BlockComplexity, ...]
    module_cc: int
    aggregate: float
    grade: str
    module_level: bool
    # module decisions + per-block cc; feeds the maintainability index
    total: int


def _is_decision(tok: Token, profile: LanguageProfile) -> bool:
    return tok.kind is TokenKind.KEYWORD and (
        tok.lexeme in profile.branch_keywords or tok.lexeme in profile.boolean_operators
    )


def _own_decisions(node: BlockNode, tokens: TokenStream, profile: LanguageProfile) -> int:
    covered = [(c.first_token, c.last_token) for c in node.children]
    count = 0
    for idx in range(node.first_token, node.last_token):
        if any(lo <= idx < hi for lo, hi in covered):
            continue
        if _is_decision(tokens[idx], profile):
            count += 1
    return count


def cyclomatic(tokens: TokenStream, blocks: BlockNode, profile: LanguageProfile = PYTHON_PROFILE) -> CyclomaticResult:
    results = []
    for node in blocks.walk():
        if node.role is BlockRole.MODULE:
            continue
        cc = 1 + _own_decisions(node, tokens, profile)
        results.append(BlockComplexity(node.name, node.role.value, cc, node.start_line, node.end_line))
    module_decisions = _own_decisions(blocks, tokens, profile)
    module_cc = 1 + module_decisions
    if results:
        aggregate = sum(b.cc for b in results) / len(results)
    else:
        aggregate = float(module_cc)
    total = module_decisions + sum(b.cc for b in results)
    return CyclomaticResult(
        blocks=tuple(results),
        module_cc=module_cc,
        aggregate=aggregate,
        grade=grade(aggregate),
        module_level=not results,
        total=total,
    )


# -- Halstead --------------------------------------------------------------


@dataclass(frozen=True)
class HalsteadMetrics:
    n1: int
    n2: int
    N1: int
    N2: int

    @property
    def vocabulary(self) -> int:
        return self.n1 + self.n2

    @property
    def length(self) -> int:
        return self.N1 + self.N2

    @property
    def volume(self) -> float:
        n = self.vocabulary
        return self.length * math.log2(n) if n > 0 else 0.0

    @property
    def difficulty(self) -> float:
        if self.n2 == 0:
            return 0.0
        return (self.n1 / 2) * (self.N2 / self.n2)

    @property
    def effort(self) -> float:
        return self.difficulty * self.volume

    @property
    def time(self) -> float:
        return self.effort / 18

    @property
    def bugs(self) -> float:
        return self.volume / 3000


def halstead(tokens: TokenStream, profile: LanguageProfile = PYTHON_PROFILE) -> HalsteadMetrics:
    """Token-level Halstead counts.

    Operators are operator and keyword tokens; a bracket pair counts once
    (on its opener) and the def/class keywords are declarations, not
    operators. Operands are identifiers and literals.
    """
    operators: list[str] = []
    operands: list[str] = []
    for tok in tokens:
        if tok.kind is TokenKind.OPERATOR:
            if tok.lexeme in _CLOSERS:
                continue
            operators.append(_PAIRS.get(tok.lexeme, tok.lexeme))
        elif tok.kind is TokenKind.KEYWORD:
            if tok.lexeme not in profile.block_openers:
                operators.append(tok.lexeme)
        elif tok.kind is TokenKind.IDENTIFIER or tok.kind in (TokenKind.NUMBER, *_STRINGS):
            operands.append(tok.lexeme)
    return HalsteadMetrics(len(set(operators)), len(set(operands)), len(operators), len(operands))


# -- maintainability -------------------------------------------------------


def maintainability_index(raw: RawMetrics, hal: HalsteadMetrics, cc: CyclomaticResult) -> float:
    volume = max(hal.volume, 1.0)
    sloc = max(raw.sloc, 1)
    ratio = (raw.comments + raw.multi) / raw.loc if raw.loc else 0.0
    ratio = min(max(ratio, 0.0), 1.0)
    score = 171 - 5.2 * math.log(volume) - 0.23 * cc.total - 16.2 * math.log(sloc) + 50 * math.sin(math.sqrt(2.4 * ratio))
    return min(100.0, max(0.0, 100.0 * score / 171))


# -- per-file report -------------------------------------------------------


@dataclass
class StaticReport:
    raw: RawMetrics
    cyclomatic: CyclomaticResult
    halstead: HalsteadMetrics
    mi: float
    errors: list[str] = field(default_factory=list)

    def features(self) -> dict[str, float]:
        r, h = self.raw, self.halstead
        return {
            schema.MAINTAINABILITY: self.mi,
            schema.CC_NUMBER: self.cyclomatic.aggregate,
            schema.LOC: r.loc,
            schema.LLOC: r.lloc,
            schema.SLOC: r.sloc,
            schema.COMMENTS: r.comments,
            schema.C_PCT_L: r.c_pct_l,
            schema.C_PCT_S: r.c_pct_s,
            schema.CM_PCT_L: r.cm_pct_l,
            schema.DIFFICULTY: h.difficulty,
            schema.EFFORT: h.effort,
            schema.PROGRAMMING_TIME: h.time,
            schema.BUGS: h.bugs,
        }

    def to_json(self) -> dict:
        out: dict = {"schema_version": schema.SCHEMA_VERSION}
        out.update(self.features())
        out[schema.CC_GRADE] = self.cyclomatic.grade
        out[schema.CC_MODULE_LEVEL] = self.cyclomatic.module_level
        out["raw"] = asdict(self.raw) | {
            "c_pct_l": self.raw.c_pct_l,
            "c_pct_s": self.raw.c_pct_s,
            "cm_pct_l": self.raw.cm_pct_l,
        }
        h = self.halstead
        out["halstead"] = {
            "n1": h.n1, "n2": h.n2, "N1": h.N1, "N2": h.N2,
            "vocabulary": h.vocabulary, "length": h.length, "volume": h.volume,
            "difficulty": h.difficulty, "effort": h.effort, "time": h.time, "bugs": h.bugs,
        }
        out["blocks"] = [asdict(b) for b in self.cyclomatic.blocks]
        out["errors"] = list(self.errors)
        return out


def analyze_source(text: str, profile: LanguageProfile = PYTHON_PROFILE) -> StaticReport:
    """Run every static metric over one source text.

    Lexical and structure errors do not abort: they are recorded and the
    metrics are computed on whatever could be recovered.
    """
    errors: list[str] = []
    tokens, lex_err = tokenize_lenient(text, profile)
    if lex_err is not None:
        errors.append(f"lexical-error: {lex_err}")
    try:
        blocks = block_structure(tokens, profile)
    except StructureError as exc:
        errors.append(f"structure-error: {exc}")
        blocks = BlockNode(BlockRole.MODULE, "<module>", 1, max(tokens.line_count, 1), [], 0, len(tokens))
    raw = raw_metrics(tokens, profile)
    cc = cyclomatic(tokens, blocks, profile)
    hal = halstead(tokens, profile)
    mi = maintainability_index(raw, hal, cc)
    return StaticReport(raw, cc, hal, mi, errors)


__all__ = [
    "BlockComplexity",
    "CyclomaticResult",
    "HalsteadMetrics",
    "LexicalError",
    "RawMetrics",
    "StaticReport",
    "analyze_source",
    "cyclomatic",
    "grade",
    "halstead",
    "maintainability_index",
    "raw_metrics",
]
