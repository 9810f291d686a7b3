from __future__ import annotations

import ast
import io
import json
import tokenize as std_tokenize

import pytest

from cgems.source_model import (
    PYTHON_PROFILE,
    BlockRole,
    LanguageProfile,
    LexicalError,
    StructureError,
    TokenKind,
    block_structure,
    logical_lines,
    tokenize,
)
from conftest import ROOT, snippet, snippet_names


def test_simple_assignment_with_comment():
    toks = tokenize("x = 1  # hi")
    assert [(t.kind, t.lexeme) for t in toks] == [
        (TokenKind.IDENTIFIER, "x"),
        (TokenKind.OPERATOR, "="),
        (TokenKind.NUMBER, "1"),
        (TokenKind.COMMENT, "# hi"),
        (TokenKind.NEWLINE, "\n"),
    ]
    assert [(t.line, t.column) for t in toks][:4] == [(1, 0), (1, 2), (1, 4), (1, 7)]


def test_positions_match_stdlib_tokenizer():
    text = "def f(a, b):\n    return a + b  # sum\n\nx = f(1,\n      2)\n"
    std = [
        (t.string, t.start)
        for t in std_tokenize.generate_tokens(io.StringIO(text).readline)
        if t.type not in (std_tokenize.NEWLINE, std_tokenize.NL, std_tokenize.INDENT,
                          std_tokenize.DEDENT, std_tokenize.ENDMARKER)
    ]
    ours = [(t.lexeme, (t.line, t.column)) for t in tokenize(text) if not t.synthetic]
    assert ours == std


def test_empty_input():
    assert len(tokenize("")) == 0


def test_unterminated_string_is_lexical_error_with_partial_stream():
    with pytest.raises(LexicalError) as info:
        tokenize("y = 2\ns = 'unclosed")
    assert info.value.line == 2
    assert [t.lexeme for t in info.value.partial if not t.synthetic][:3] == ["y", "=", "2"]


def test_unterminated_multiline_string():
    with pytest.raises(LexicalError) as info:
        tokenize('x = """never\nclosed\n')
    assert info.value.line == 1


def test_mixed_tabs_and_spaces_rejected():
    with pytest.raises(LexicalError):
        tokenize("if x:\n\ty = 1\n        z = 2\n")


def test_bracket_depth_suppresses_newlines():
    toks = tokenize("x = [1,\n     2]\n")
    assert sum(t.kind is TokenKind.NEWLINE for t in toks) == 1


def test_indent_dedent_balanced():
    toks = tokenize("def f():\n    if x:\n        return 1\n    return 2\n")
    depth = 0
    for t in toks:
        depth += (t.kind is TokenKind.INDENT) - (t.kind is TokenKind.DEDENT)
        assert depth >= 0
    assert depth == 0


@pytest.mark.parametrize(
    "text, lloc",
    [("x=1; y=2", 2), ("x=1\ny=2", 2), ("# only\n# comments\n", 0), ("", 0)],
)
def test_logical_lines(text, lloc):
    assert logical_lines(tokenize(text), PYTHON_PROFILE)[0] == lloc


def test_per_line_breakdown():
    total, per_line = logical_lines(tokenize("a = 1; b = 2\nc = 3\n"), PYTHON_PROFILE)
    assert total == 3
    assert per_line[1] == 2 and per_line[2] == 1


def test_block_structure_function():
    tree = block_structure(tokenize("def f():\n    a = 1\n    return a\n"))
    assert tree.role is BlockRole.MODULE
    (fn,) = tree.children
    assert (fn.role, fn.name, fn.start_line, fn.end_line) == (BlockRole.FUNCTION, "f", 1, 3)


def test_block_structure_class_with_methods():
    text = "class A:\n    def m1(self):\n        pass\n\n    def m2(self):\n        pass\n"
    tree = block_structure(tokenize(text))
    (cls,) = tree.children
    assert cls.role is BlockRole.CLASS
    assert [(c.role, c.name) for c in cls.children] == [(BlockRole.METHOD, "m1"), (BlockRole.METHOD, "m2")]


def test_flat_script_has_module_only():
    tree = block_structure(tokenize("x = 1\nprint(x)\n"))
    assert tree.children == []


def test_inconsistent_dedent_is_structure_error():
    with pytest.raises((StructureError, LexicalError)) as info:
        block_structure(tokenize("if x:\n        a = 1\n    b = 2\n"))
    assert info.value.line == 3


@pytest.mark.parametrize("name", snippet_names())
def test_block_extents_match_ast(name):
    text = snippet(name)
    expected = sorted(
        (node.name, node.lineno, node.end_lineno)
        for node in ast.walk(ast.parse(text))
        if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef, ast.ClassDef))
    )
    ours = sorted((b.name, b.start_line, b.end_line) for b in block_structure(tokenize(text)).walk()
                  if b.role is not BlockRole.MODULE)
    # decorators start the ast node one line early; compare on the def line
    assert [(n, e) for n, _, e in ours] == [(n, e) for n, _, e in expected]


def test_profile_invariants():
    data = PYTHON_PROFILE.to_dict()
    data["branch_keywords"] = data["branch_keywords"] + ["nonsense"]
    with pytest.raises(ValueError):
        LanguageProfile.from_dict(data)
    data = PYTHON_PROFILE.to_dict()
    data["comment_prefix"] = "/"
    with pytest.raises(ValueError):
        LanguageProfile.from_dict(data)


def test_bundled_profile_file_matches_builtin():
    path = ROOT / "src" / "cgems" / "profiles" / "python.json"
    assert LanguageProfile.load(path) == PYTHON_PROFILE
    assert LanguageProfile.from_dict(json.loads(json.dumps(PYTHON_PROFILE.to_dict()))) == PYTHON_PROFILE
