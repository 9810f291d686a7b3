"""Profile-driven lexer and indentation block analyzer.

The lexer understands just enough of an indentation-block scripting language
to drive the static metrics: tokens, logical lines and def/class extents.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterator

TAB_SIZE = 8


class LexicalError(ValueError):
    """Raised when the source cannot be fully tokenized.

    ``partial`` holds the tokens recovered before the error so that raw
    metrics can still be counted.
    """

    def __init__(self, message: str, line: int, partial: TokenStream | None = None) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.partial = partial


class StructureError(ValueError):
    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class TokenKind(str, Enum):
    IDENTIFIER = "identifier"
    KEYWORD = "keyword"
    OPERATOR = "operator"
    NUMBER = "number-literal"
    STRING = "string-literal"
    MULTILINE_STRING = "multiline-string"
    COMMENT = "comment"
    NEWLINE = "newline"
    INDENT = "indent"
    DEDENT = "dedent"
    SEPARATOR = "separator"


SYNTHETIC = frozenset({TokenKind.NEWLINE, TokenKind.INDENT, TokenKind.DEDENT})
LITERALS = frozenset({TokenKind.NUMBER, TokenKind.STRING, TokenKind.MULTILINE_STRING})


@dataclass(frozen=True)
class LanguageProfile:
    keywords: frozenset[str]
    branch_keywords: frozenset[str]
    boolean_operators: frozenset[str]
    operators: frozenset[str]
    comment_prefix: str
    string_delimiters: tuple[str, ...]
    multiline_delimiters: tuple[str, ...]
    separator: str
    function_keyword: str
    class_keyword: str
    indentation_blocks: bool = True
    string_prefixes: frozenset[str] = frozenset()
    line_continuation: str = "\\"
    async_keyword: str | None = None
    lambda_keyword: str | None = None

    def __post_init__(self) -> None:
        if not self.branch_keywords <= self.keywords:
            raise ValueError("branch keywords must be a subset of the keyword set")
        if not self.comment_prefix:
            raise ValueError("comment prefix must be non-empty")
        if any(op.startswith(self.comment_prefix) for op in self.operators):
            raise ValueError("comment prefix collides with an operator")
        if not set(self.multiline_delimiters) <= set(self.string_delimiters):
            raise ValueError("multiline delimiters must be string delimiters")

    @property
    def block_openers(self) -> frozenset[str]:
        return frozenset({self.function_keyword, self.class_keyword})

    @classmethod
    def from_dict(cls, data: dict) -> LanguageProfile:
        sets = {"keywords", "branch_keywords", "boolean_operators", "operators", "string_prefixes"}
        tuples = {"string_delimiters", "multiline_delimiters"}
        kwargs = {}
        for name, value in data.items():
            if name in sets:
                value = frozenset(value)
            elif name in tuples:
                value = tuple(value)
            kwargs[name] = value
        return cls(**kwargs)

    @classmethod
    def load(cls, path: str | Path) -> LanguageProfile:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def to_dict(self) -> dict:
        out = {}
        for name in self.__dataclass_fields__:
            value = getattr(self, name)
            if isinstance(value, frozenset):
                value = sorted(value)
            elif isinstance(value, tuple):
                value = list(value)
            out[name] = value
        return out


_PY_KEYWORDS = frozenset(
    "and as assert async await break class continue def del elif else except "
    "finally for from global if import in is lambda nonlocal not or pass raise "
    "return try while with yield".split()
)
_PY_OPERATORS = frozenset(
    "+ - * / % @ & | ^ ~ < > ( ) [ ] { } , : . = ! "
    "** // << >> <= >= == != -> += -= *= /= %= @= &= |= ^= := "
    "**= //= <<= >>= ...".split()
)

PYTHON_PROFILE = LanguageProfile(
    keywords=_PY_KEYWORDS,
    branch_keywords=frozenset({"if", "elif", "for", "while", "except", "assert"}),
    boolean_operators=frozenset({"and", "or"}),
    operators=_PY_OPERATORS,
    comment_prefix="#",
    string_delimiters=('"""', "'''", '"', "'"),
    multiline_delimiters=('"""', "'''"),
    separator=";",
    function_keyword="def",
    class_keyword="class",
    indentation_blocks=True,
    string_prefixes=frozenset(
        p for base in ("r", "u", "b", "f", "br", "rb", "fr", "rf")
        for p in {base, base.upper(), base.capitalize(), base[::-1].capitalize()}
    ),
    async_keyword="async",
    lambda_keyword="lambda",
)


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    lexeme: str
    line: int
    column: int
    end_line: int = 0

    def __post_init__(self) -> None:
        if self.end_line < self.line:
            object.__setattr__(self, "end_line", self.line)

    @property
    def synthetic(self) -> bool:
        return self.kind in SYNTHETIC


@dataclass(frozen=True)
class TokenStream:
    tokens: tuple[Token, ...]
    line_count: int

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def __getitem__(self, index):
        return self.tokens[index]


_NUMBER_RE = re.compile(
    r"""
    0[xX](?:_?[0-9a-fA-F])+
  | 0[oO](?:_?[0-7])+
  | 0[bB](?:_?[01])+
  | (?:(?:[0-9](?:_?[0-9])*)?\.[0-9](?:_?[0-9])*|[0-9](?:_?[0-9])*\.?)
    (?:[eE][+-]?[0-9](?:_?[0-9])*)?[jJ]?
    """,
    re.VERBOSE,
)
_IDENT_RE = re.compile(r"[^\W\d]\w*")
_OPEN = "([{"
_CLOSE = ")]}"


def physical_line_count(text: str) -> int:
    return len(text.splitlines())


def _indent_widths(prefix: str) -> tuple[int, int]:
    """Column of the first non-blank char with tabs at 8 and at 1."""
    wide = narrow = 0
    for ch in prefix:
        if ch == "\t":
            wide = (wide // TAB_SIZE + 1) * TAB_SIZE
            narrow += 1
        elif ch == "\f":
            wide = narrow = 0
        else:
            wide += 1
            narrow += 1
    return wide, narrow


class _Lexer:
    def __init__(self, text: str, profile: LanguageProfile) -> None:
        self.text = text
        self.profile = profile
        self.tokens: list[Token] = []
        self.ops = sorted(profile.operators, key=len, reverse=True)
        self.delims = sorted(profile.string_delimiters, key=len, reverse=True)
        self.prefixes = sorted(profile.string_prefixes, key=len, reverse=True)
        # indentation stack entries: (wide, narrow, emitted)
        self.indents: list[tuple[int, int, bool]] = [(0, 0, True)]
        self.depth = 0
        self.line = 1
        self.line_start = 0
        self.pos = 0
        self.pending_statement = False

    def error(self, message: str, line: int | None = None) -> LexicalError:
        partial = TokenStream(tuple(self.tokens), physical_line_count(self.text))
        return LexicalError(message, self.line if line is None else line, partial)

    def emit(self, kind: TokenKind, lexeme: str, line: int, column: int, end_line: int = 0) -> None:
        self.tokens.append(Token(kind, lexeme, line, column, end_line))
        if kind not in SYNTHETIC and kind is not TokenKind.COMMENT:
            self.pending_statement = True

    def newline(self, at: int) -> None:
        if self.pending_statement:
            self.emit(TokenKind.NEWLINE, "\n", self.line, at - self.line_start)
            self.pending_statement = False

    def start_line(self) -> None:
        """Handle indentation at the start of a physical line outside brackets."""
        text = self.text
        end = self.pos
        while end < len(text) and text[end] in " \t\f":
            end += 1
        rest = text[end:end + 1]
        if rest in ("", "\n", "\r") or text.startswith(self.profile.comment_prefix, end):
            self.pos = end
            return
        if not self.profile.indentation_blocks:
            self.pos = end
            return
        wide, narrow = _indent_widths(text[self.pos:end])
        col = end - self.line_start
        top_w, top_n, _ = self.indents[-1]
        if (wide > top_w) != (narrow > top_n) or (wide == top_w) != (narrow == top_n):
            raise self.error("inconsistent use of tabs and spaces in indentation")
        if wide > top_w:
            self.indents.append((wide, narrow, True))
            self.emit(TokenKind.INDENT, text[self.pos:end], self.line, 0)
        elif wide < top_w:
            while self.indents[-1][0] > wide:
                _, _, emitted = self.indents.pop()
                if emitted:
                    self.emit(TokenKind.DEDENT, text[self.pos:end], self.line, col)
            if self.indents[-1][0] < wide:
                # dedent to an unknown level: keep the stream balanced and let
                # block_structure report it
                self.indents.append((wide, narrow, False))
        self.pos = end

    def run(self) -> TokenStream:
        text = self.text
        n = len(text)
        at_line_start = True
        while self.pos < n:
            if at_line_start and self.depth == 0:
                self.start_line()
                at_line_start = False
                if self.pos >= n:
                    break
            ch = text[self.pos]
            col = self.pos - self.line_start
            if ch in "\r\n":
                nl_len = 2 if text.startswith("\r\n", self.pos) else 1
                if self.depth == 0:
                    self.newline(self.pos)
                    at_line_start = True
                self.pos += nl_len
                self.line += 1
                self.line_start = self.pos
                continue
            if ch in " \t\f":
                self.pos += 1
                continue
            if text.startswith(self.profile.comment_prefix, self.pos):
                end = self._line_end(self.pos)
                self.emit(TokenKind.COMMENT, text[self.pos:end], self.line, col)
                self.pos = end
                continue
            cont = self.profile.line_continuation
            if cont and text.startswith(cont, self.pos) and text[self.pos + len(cont):self.pos + len(cont) + 1] in ("\n", "\r"):
                self.pos += len(cont)
                nl_len = 2 if text.startswith("\r\n", self.pos) else 1
                self.pos += nl_len
                self.line += 1
                self.line_start = self.pos
                continue
            if self._try_string(col):
                continue
            m = _NUMBER_RE.match(text, self.pos)
            if m and m.group() and (ch.isdigit() or (ch == "." and text[self.pos + 1:self.pos + 2].isdigit())):
                self.emit(TokenKind.NUMBER, m.group(), self.line, col)
                self.pos = m.end()
                continue
            m = _IDENT_RE.match(text, self.pos)
            if m:
                word = m.group()
                kind = TokenKind.KEYWORD if word in self.profile.keywords else TokenKind.IDENTIFIER
                self.emit(kind, word, self.line, col)
                self.pos = m.end()
                continue
            if text.startswith(self.profile.separator, self.pos):
                self.emit(TokenKind.SEPARATOR, self.profile.separator, self.line, col)
                self.pos += len(self.profile.separator)
                continue
            for op in self.ops:
                if text.startswith(op, self.pos):
                    if op in _OPEN:
                        self.depth += 1
                    elif op in _CLOSE:
                        self.depth = max(0, self.depth - 1)
                    self.emit(TokenKind.OPERATOR, op, self.line, col)
                    self.pos += len(op)
                    break
            else:
                raise self.error(f"unexpected character {ch!r}")
        self.newline(self.pos)
        while len(self.indents) > 1:
            _, _, emitted = self.indents.pop()
            if emitted:
                self.emit(TokenKind.DEDENT, "", self.line, 0)
        return TokenStream(tuple(self.tokens), physical_line_count(text))

    def _line_end(self, pos: int) -> int:
        end = pos
        while end < len(self.text) and self.text[end] not in "\r\n":
            end += 1
        return end

    def _try_string(self, col: int) -> bool:
        text = self.text
        start = self.pos
        prefix = ""
        for p in self.prefixes:
            if text.startswith(p, start):
                rest = start + len(p)
                if any(text.startswith(d, rest) for d in self.delims):
                    prefix = p
                    break
        body = start + len(prefix)
        delim = next((d for d in self.delims if text.startswith(d, body)), None)
        if delim is None:
            return False
        multiline = delim in self.profile.multiline_delimiters
        i = body + len(delim)
        line = self.line
        while True:
            if i >= len(text):
                raise self.error("unterminated string literal", line)
            c = text[i]
            if text.startswith(delim, i):
                i += len(delim)
                break
            if c == "\\":
                nxt = text[i + 1:i + 2]
                if nxt in ("\n", "\r"):
                    i += 3 if text.startswith("\r\n", i + 1) else 2
                    self.line += 1
                    self.line_start = i
                    continue
                i += 2
                continue
            if c in "\r\n":
                if not multiline:
                    raise self.error("unterminated string literal", line)
                nl_len = 2 if text.startswith("\r\n", i) else 1
                i += nl_len
                self.line += 1
                self.line_start = i
                continue
            i += 1
        lexeme = text[start:i]
        kind = TokenKind.MULTILINE_STRING if multiline else TokenKind.STRING
        self.emit(kind, lexeme, line, col, self.line)
        self.pos = i
        return True


def tokenize(text: str, profile: LanguageProfile = PYTHON_PROFILE) -> TokenStream:
    """Split ``text`` into tokens.

    Raises :class:`LexicalError` on unterminated strings, stray characters or
    ambiguous tab/space indentation; the error carries the partial stream.
    """
    if text.startswith("﻿"):
        text = text[1:]
    return _Lexer(text, profile).run()


def tokenize_lenient(text: str, profile: LanguageProfile = PYTHON_PROFILE) -> tuple[TokenStream, LexicalError | None]:
    try:
        return tokenize(text, profile), None
    except LexicalError as exc:
        return exc.partial, exc


# -- logical lines ---------------------------------------------------------


def iter_logical_lines(tokens: TokenStream | tuple[Token, ...]) -> Iterator[list[Token]]:
    """Yield the significant tokens of each logical line.

    Indent/dedent and comment tokens are dropped; lines consisting only of
    comments produce nothing.
    """
    current: list[Token] = []
    for tok in tokens:
        if tok.kind is TokenKind.NEWLINE:
            if current:
                yield current
            current = []
        elif tok.kind in (TokenKind.INDENT, TokenKind.DEDENT, TokenKind.COMMENT):
            continue
        else:
            current.append(tok)
    if current:
        yield current


def _segments(line: list[Token]) -> list[list[Token]]:
    segs: list[list[Token]] = [[]]
    for tok in line:
        if tok.kind is TokenKind.SEPARATOR:
            segs.append([])
        else:
            segs[-1].append(tok)
    return [s for s in segs if s]


def _has_inline_body(seg: list[Token], profile: LanguageProfile) -> bool:
    """True for ``if x: y`` style segments whose suite shares the header line."""
    if seg[0].kind is not TokenKind.KEYWORD or seg[0].lexeme == profile.lambda_keyword:
        return False
    depth = 0
    lambdas = 0
    for i, tok in enumerate(seg):
        if tok.kind is TokenKind.KEYWORD and tok.lexeme == profile.lambda_keyword:
            lambdas += 1
        elif tok.kind is TokenKind.OPERATOR:
            if tok.lexeme in _OPEN:
                depth += 1
            elif tok.lexeme in _CLOSE:
                depth -= 1
            elif tok.lexeme == ":" and depth == 0:
                if lambdas:
                    lambdas -= 1
                    continue
                return i < len(seg) - 1
    return False


def logical_lines(tokens: TokenStream, profile: LanguageProfile = PYTHON_PROFILE) -> tuple[int, dict[int, int]]:
    """Count logical lines.

    Returns ``(lloc, per_line)`` where ``per_line`` maps the physical line a
    statement starts on to the number of statements starting there.
    """
    per_line: dict[int, int] = {}
    for line in iter_logical_lines(tokens):
        for seg in _segments(line):
            count = 2 if _has_inline_body(seg, profile) else 1
            per_line[seg[0].line] = per_line.get(seg[0].line, 0) + count
    return sum(per_line.values()), per_line


# -- block structure -------------------------------------------------------


class BlockRole(str, Enum):
    MODULE = "module"
    FUNCTION = "function"
    CLASS = "class"
    METHOD = "method"


@dataclass
class BlockNode:
    role: BlockRole
    name: str
    start_line: int
    end_line: int
    children: list[BlockNode] = field(default_factory=list)
    # half-open token index span inside the stream
    first_token: int = 0
    last_token: int = 0

    def walk(self) -> Iterator[BlockNode]:
        yield self
        for child in self.children:
            yield from child.walk()

    def to_dict(self) -> dict:
        return {
            "role": self.role.value,
            "name": self.name,
            "start_line": self.start_line,
            "end_line": self.end_line,
            "children": [c.to_dict() for c in self.children],
        }


def _child_role(kw: str, parent: BlockNode, profile: LanguageProfile) -> BlockRole:
    if kw == profile.class_keyword:
        return BlockRole.CLASS
    return BlockRole.METHOD if parent.role is BlockRole.CLASS else BlockRole.FUNCTION


def block_structure(tokens: TokenStream, profile: LanguageProfile = PYTHON_PROFILE) -> BlockNode:
    """Recover the module/class/function tree from an indentation token stream."""
    toks = tokens.tokens
    end_line = max((t.end_line for t in toks), default=1)
    root = BlockNode(BlockRole.MODULE, "<module>", 1, max(end_line, 1), [], 0, len(toks))

    # open blocks: (node, indent level at which its suite lives, or None for inline)
    stack: list[tuple[BlockNode, int]] = [(root, 0)]
    # widths of the indentation levels currently open
    levels: list[int] = [0]
    level = 0
    at_line_start = True
    last_sig = -1  # index of last significant token seen

    def close(node: BlockNode) -> None:
        node.last_token = last_sig + 1
        node.end_line = toks[last_sig].end_line if last_sig >= 0 else node.start_line

    i = 0
    while i < len(toks):
        tok = toks[i]
        if tok.kind is TokenKind.INDENT:
            width = _indent_widths(tok.lexeme)[0]
            levels.append(width)
            level += 1
        elif tok.kind is TokenKind.DEDENT:
            levels.pop()
            level -= 1
            run_ends = i + 1 >= len(toks) or toks[i + 1].kind is not TokenKind.DEDENT
            if run_ends and levels[-1] != _indent_widths(tok.lexeme)[0]:
                raise StructureError("unindent does not match any outer indentation level", tok.line)
            while len(stack) > 1 and stack[-1][1] > level:
                close(stack.pop()[0])
        elif tok.kind is TokenKind.NEWLINE:
            at_line_start = True
        elif tok.kind is TokenKind.COMMENT:
            pass
        else:
            if at_line_start:
                j = i
                if tok.kind is TokenKind.KEYWORD and tok.lexeme == profile.async_keyword and j + 1 < len(toks):
                    j += 1
                head = toks[j]
                if head.kind is TokenKind.KEYWORD and head.lexeme in profile.block_openers:
                    parent = stack[-1][0]
                    name_tok = toks[j + 1] if j + 1 < len(toks) else None
                    name = name_tok.lexeme if name_tok and name_tok.kind is TokenKind.IDENTIFIER else "<anonymous>"
                    node = BlockNode(_child_role(head.lexeme, parent, profile), name, tok.line, tok.line, [], i, i)
                    parent.children.append(node)
                    # find the end of the header logical line
                    k = i
                    while k < len(toks) and toks[k].kind is not TokenKind.NEWLINE:
                        k += 1
                    k2 = k + 1
                    while k2 < len(toks) and toks[k2].kind is TokenKind.COMMENT:
                        k2 += 1
                    indented = k2 < len(toks) and toks[k2].kind is TokenKind.INDENT
                    if indented:
                        stack.append((node, level + 1))
                    else:
                        # one-line definition: extent is the header line
                        last = k - 1
                        while last > i and toks[last].kind is TokenKind.COMMENT:
                            last -= 1
                        node.last_token = last + 1
                        node.end_line = toks[last].end_line
            at_line_start = False
            last_sig = i
        i += 1
    while len(stack) > 1:
        close(stack.pop()[0])
    return root
