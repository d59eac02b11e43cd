#!/usr/bin/env python3
"""Independent oracle for the 33 design features.

Recomputes every feature from CPython's own `ast` and `tokenize` modules so
golden vectors frozen into the Rust tests never depend on the Rust
implementation. Node granularity: one node per `ast.Module`, `ast.stmt`, or
`ast.expr` instance; wrapper constructs (argument lists, except-handler
shells, keyword wrappers, comprehension clauses) are not nodes themselves.

Usage: feature_oracle.py FILE [FILE...]   -> one JSON object per line
       feature_oracle.py --rust FILE...   -> Rust (name, source, vector) rows
"""

import ast
import io
import json
import sys
import tokenize

COUNTED = (ast.Module, ast.stmt, ast.expr)


def counted_nodes(root):
    return [n for n in ast.walk(root) if isinstance(n, COUNTED)]


def subtree_size(node):
    return len(counted_nodes(node))


def span(node):
    """(start_line, end_line) for a counted node."""
    return node.lineno, node.end_lineno


def is_int_literal(node):
    return (
        isinstance(node, ast.Constant)
        and type(node.value) is int  # bool is an int subclass; exclude it
    )


def is_numeric_literal(node):
    return isinstance(node, ast.Constant) and type(node.value) in (int, float, complex)


def is_literal(node):
    return isinstance(node, ast.Constant)


def deepest_block_depth(module):
    """Max statement nesting depth; an elif chain stays at its parent's depth."""
    best = 0

    def stmts(body, depth):
        nonlocal best
        for stmt in body:
            best = max(best, depth)
            visit(stmt, depth)

    def visit(stmt, depth):
        nonlocal best
        if isinstance(stmt, (ast.FunctionDef, ast.AsyncFunctionDef, ast.ClassDef)):
            stmts(stmt.body, depth + 1)
        elif isinstance(stmt, ast.If):
            stmts(stmt.body, depth + 1)
            if len(stmt.orelse) == 1 and isinstance(stmt.orelse[0], ast.If):
                best = max(best, depth)
                visit(stmt.orelse[0], depth)
            else:
                stmts(stmt.orelse, depth + 1)
        elif isinstance(stmt, (ast.For, ast.AsyncFor, ast.While)):
            stmts(stmt.body, depth + 1)
            stmts(stmt.orelse, depth + 1)
        elif isinstance(stmt, (ast.With, ast.AsyncWith)):
            stmts(stmt.body, depth + 1)
        elif isinstance(stmt, (ast.Try, getattr(ast, "TryStar", ast.Try))):
            stmts(stmt.body, depth + 1)
            for handler in stmt.handlers:
                stmts(handler.body, depth + 1)
            stmts(stmt.orelse, depth + 1)
            stmts(stmt.finalbody, depth + 1)
        elif isinstance(stmt, ast.Match):
            for case in stmt.cases:
                stmts(case.body, depth + 1)

    stmts(module.body, 0)
    return best


def target_names(expr, out):
    if isinstance(expr, ast.Name):
        out.add(expr.id)
    elif isinstance(expr, (ast.Tuple, ast.List)):
        for elt in expr.elts:
            target_names(elt, out)
    elif isinstance(expr, ast.Starred):
        target_names(expr.value, out)


def distinct_globals(module):
    """Distinct module-scope assignment targets plus `global` declared names.

    Module scope persists through module-level compound statements but not
    into function or class bodies.
    """
    names = set()

    def visit_body(body):
        for stmt in body:
            if isinstance(stmt, ast.Assign):
                for target in stmt.targets:
                    target_names(target, names)
            elif isinstance(stmt, ast.AugAssign):
                target_names(stmt.target, names)
            elif isinstance(stmt, ast.AnnAssign) and stmt.value is not None:
                target_names(stmt.target, names)
            elif isinstance(stmt, ast.If):
                visit_body(stmt.body)
                visit_body(stmt.orelse)
            elif isinstance(stmt, (ast.For, ast.AsyncFor, ast.While)):
                visit_body(stmt.body)
                visit_body(stmt.orelse)
            elif isinstance(stmt, (ast.With, ast.AsyncWith)):
                visit_body(stmt.body)
            elif isinstance(stmt, (ast.Try, getattr(ast, "TryStar", ast.Try))):
                visit_body(stmt.body)
                for handler in stmt.handlers:
                    visit_body(handler.body)
                visit_body(stmt.orelse)
                visit_body(stmt.finalbody)
            elif isinstance(stmt, ast.Match):
                for case in stmt.cases:
                    visit_body(case.body)

    visit_body(module.body)
    for node in ast.walk(module):
        if isinstance(node, ast.Global):
            names.update(node.names)
    return len(names)


def count_comments(text):
    return sum(
        1
        for tok in tokenize.generate_tokens(io.StringIO(text).readline)
        if tok.type == tokenize.COMMENT
    )


def functions_not_nested(module):
    """Function defs whose enclosing scope is not itself a function."""
    result = []

    def visit(node, in_function):
        inner = in_function
        if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
            if not in_function:
                result.append(node)
            inner = True
        for child in ast.iter_child_nodes(node):
            visit(child, inner)

    visit(module, False)
    return result


def ratio(num, den):
    return num / den if den else 0.0


def extract(text):
    module = ast.parse(text)
    nodes = counted_nodes(module)
    total_nodes = len(nodes)
    lines = text.splitlines()
    total_lines = len(lines)
    chars = len(text)
    whitespace = sum(1 for c in text if c in " \t\n\r")
    blank = sum(1 for line in lines if not line.strip())

    functions = [n for n in nodes if isinstance(n, (ast.FunctionDef, ast.AsyncFunctionDef))]
    assigns = [n for n in nodes if isinstance(n, (ast.Assign, ast.AugAssign, ast.AnnAssign))]
    ifs = [n for n in nodes if isinstance(n, ast.If)]
    tries = [n for n in nodes if isinstance(n, (ast.Try, getattr(ast, "TryStar", ast.Try)))]
    literals = [n for n in nodes if is_literal(n)]
    lists = [n for n in nodes if isinstance(n, ast.List)]
    tuples = [n for n in nodes if isinstance(n, ast.Tuple)]
    calls = [n for n in nodes if isinstance(n, ast.Call)]
    passes = [n for n in nodes if isinstance(n, ast.Pass)]
    breaks = [n for n in nodes if isinstance(n, ast.Break)]
    continues = [n for n in nodes if isinstance(n, ast.Continue)]
    imports = [n for n in nodes if isinstance(n, (ast.Import, ast.ImportFrom))]
    comparisons = [n for n in nodes if isinstance(n, ast.Compare)]
    returns = [n for n in nodes if isinstance(n, ast.Return)]

    zero_one = [n for n in literals if is_int_literal(n) and n.value in (0, 1)]
    numeric = [n for n in literals if is_numeric_literal(n)]

    func_sizes = [subtree_size(f) for f in functions]
    func_lines = [span(f)[1] - span(f)[0] + 1 for f in functions]
    returns_per_function = [
        sum(1 for n in counted_nodes(f) if isinstance(n, ast.Return)) for f in functions
    ]
    literals_per_if = [
        sum(1 for n in counted_nodes(i) if is_literal(n)) for i in ifs
    ]
    top_level_function_nodes = sum(subtree_size(f) for f in functions_not_nested(module))

    return [
        float(len(functions)),
        float(len(assigns)),
        ratio(sum(func_sizes), len(functions)),
        ratio(sum(func_lines), len(functions)),
        float(total_lines),
        float(len(literals)),
        ratio(whitespace, chars),
        float(blank),
        float(deepest_block_depth(module)),
        float(len(ifs)),
        float(count_comments(text)),
        ratio(total_nodes, total_lines),
        float(len(tries)),
        ratio(sum(subtree_size(t) for t in tries), len(tries)),
        ratio(sum(subtree_size(i) for i in ifs), len(ifs)),
        float(len(lists)),
        float(len(tuples)),
        ratio(sum(span(l)[0] for l in literals), len(literals)),
        ratio(sum(span(f)[0] for f in functions), len(functions)),
        ratio(sum(span(i)[0] for i in ifs), len(ifs)),
        ratio(top_level_function_nodes, total_nodes),
        float(len(calls)),
        float(len(passes)),
        float(len(breaks)),
        float(len(continues)),
        float(distinct_globals(module)),
        float(len(zero_one)),
        ratio(sum(span(i)[0] for i in imports), len(imports)),
        float(len(numeric)),
        float(len(comparisons)),
        float(len(returns)),
        float(max(returns_per_function, default=0)),
        float(max(literals_per_if, default=0)),
    ]


def main(argv):
    rust = argv and argv[0] == "--rust"
    files = argv[1:] if rust else argv
    if not files:
        print("usage: feature_oracle.py [--rust] FILE...", file=sys.stderr)
        return 1
    for path in files:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
        vector = extract(text)
        if rust:
            name = path.rsplit("/", 1)[-1].removesuffix(".py")
            body = ", ".join(repr(v) for v in vector)
            print(f"        (\"{name}\", include_str!(\"snippets/{name}.py\"), [{body}]),")
        else:
            print(json.dumps({"path": path, "values": vector}))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
