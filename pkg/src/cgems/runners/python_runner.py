"""Reference runner for the default corpus language.

Usage::

    python python_runner.py check    SOURCE
    python python_runner.py run      SOURCE
    python python_runner.py coverage SOURCE

``check`` only compiles; ``run`` executes the program as ``__main__``;
``coverage`` executes it and prints one JSON object with the executed and
executable statement lines on stdout (the program's own stdout goes to
stderr so the report stays parseable).

This file is executed as a standalone script in a child process; it must not
import anything from the cgems package.
"""

import ast
import json
import os
import sys
import traceback


def _read(path):
    with open(path, "rb") as fh:
        return fh.read()


def check(path):
    source = _read(path)
    try:
        compile(source, path, "exec", ast.PyCF_ONLY_AST)
    except (SyntaxError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def _docstring_lines(tree):
    lines = set()
    for node in ast.walk(tree):
        if isinstance(node, (ast.Module, ast.ClassDef, ast.FunctionDef, ast.AsyncFunctionDef)):
            body = node.body
            if body and isinstance(body[0], ast.Expr) and isinstance(body[0].value, ast.Constant) \
                    and isinstance(body[0].value.value, str):
                lines.add(body[0].lineno)
    return lines


def executable_lines(source, path):
    """Statement lines, minus the ones that never produce a line event
    (function/class docstrings, ``global``/``nonlocal``)."""
    tree = ast.parse(source, path)
    statements = {
        node.lineno
        for node in ast.walk(tree)
        if isinstance(node, ast.stmt) and not isinstance(node, (ast.Global, ast.Nonlocal))
    }
    docstrings = _docstring_lines(tree)
    if tree.body and tree.body[0].lineno in docstrings:
        # the module docstring is stored into __doc__ and does run
        docstrings.discard(tree.body[0].lineno)
    return statements - docstrings


def _execute(path, tracer=None):
    source = _read(path)
    code = compile(source, path, "exec")
    namespace = {"__name__": "__main__", "__file__": path, "__builtins__": __builtins__}
    sys.argv = [path]
    if tracer is not None:
        sys.settrace(tracer)
    try:
        exec(code, namespace)
    except SystemExit as exc:
        code_ = exc.code
        if code_ not in (None, 0):
            raise
    finally:
        sys.settrace(None)


def run(path):
    try:
        _execute(path)
    except BaseException:
        traceback.print_exc()
        return 1
    return 0


def coverage(path):
    target = os.path.abspath(path)
    executed = set()

    def tracer(frame, event, arg):
        if os.path.abspath(frame.f_code.co_filename) != target:
            return None
        if event == "line":
            executed.add(frame.f_lineno)
        return tracer

    real_stdout = sys.stdout
    sys.stdout = sys.stderr
    status = 0
    try:
        _execute(path, tracer)
    except BaseException:
        traceback.print_exc()
        status = 1
    finally:
        sys.stdout = real_stdout
    statements = executable_lines(_read(path), path)
    report = {
        "executed_lines": sorted(executed & statements),
        "executable_lines": sorted(statements),
    }
    print(json.dumps(report))
    return status


def main(argv):
    if len(argv) != 3 or argv[1] not in ("check", "run", "coverage"):
        print(__doc__, file=sys.stderr)
        return 2
    mode, path = argv[1], argv[2]
    return {"check": check, "run": run, "coverage": coverage}[mode](path)


if __name__ == "__main__":
    sys.exit(main(sys.argv))
