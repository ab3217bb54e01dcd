#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Builds the lexer golden corpus and a small (code, docstring) JSONL corpus
from module-level functions of the local Python standard library.

Expected outputs are produced with Python's own `tokenize` module plus the
classification rules written out independently below, so the C++ lexer is
checked against a separate implementation.

Outputs:
  tests/golden/NNN.py        raw snippet
  tests/golden/NNN.clean.py  expected clean_code output
  tests/golden/NNN.tokens    expected classified tokens, `component<TAB>text`
  tests/data/stdlib_pairs.jsonl
"""
import ast
import io
import json
import pathlib
import sys
import sysconfig
import tokenize

ROOT = pathlib.Path(__file__).resolve().parents[2]
BUILTINS = ROOT / "data" / "builtins"
GOLDEN = ROOT / "tests" / "golden"
PAIRS = ROOT / "tests" / "data" / "stdlib_pairs.jsonl"
GOLDEN_COUNT = 240

SYMBOLS = {"(", ")", "[", "]", "{", "}", ",", ":", ";"}


def table(name):
    lines = (BUILTINS / name).read_text().splitlines()
    return [l for l in lines if l and not l.startswith("#")]


KEYWORDS = set(table("keywords.txt"))
CLASSES = set(table("builtin_classes.txt"))
FUNCTIONS = set(table("builtin_functions.txt"))
ATTRIBUTES = set(table("builtin_attributes.txt"))
METHODS = set(table("builtin_methods.txt"))
ATTR_CALLS = set(table("builtin_attr_calls.txt"))


def offsets(text):
    starts = [0]
    for line in text.splitlines(keepends=True):
        starts.append(starts[-1] + len(line))
    return lambda rc: starts[rc[0] - 1] + rc[1]


def clean(src):
    pos = offsets(src)
    out, cursor = [], 0
    for tok in tokenize.generate_tokens(io.StringIO(src).readline):
        if tok.type == tokenize.STRING:
            a, b = pos(tok.start), pos(tok.end)
            out.append(src[cursor:a])
            out.append("STR")
            cursor = b
        elif tok.type == tokenize.COMMENT:
            a, b = pos(tok.start), pos(tok.end)
            kept = src[cursor:a]
            line_start = kept.rfind("\n") + 1
            head = kept[:line_start]
            tail = kept[line_start:].rstrip(" \t")
            out.append(head + tail)
            cursor = b
    out.append(src[cursor:])
    return "".join(out)


def gap_tokens(gap):
    toks, i = [], 0
    while i < len(gap):
        c = gap[i]
        if c in " \t":
            j = i
            while j < len(gap) and gap[j] in " \t":
                j += 1
            toks.append(["Whitespace", gap[i:j]])
            i = j
        elif c == "\\" and gap[i + 1:i + 2] == "\n":
            toks.append(["Newline", "\\\n"])
            i += 2
        elif c == "\n":
            toks.append(["Newline", "\n"])
            i += 1
        else:
            raise ValueError(f"unexpected gap char {c!r}")
    return toks


def raw_tokens(src):
    pos = offsets(src)
    toks, cursor = [], 0
    for tok in tokenize.generate_tokens(io.StringIO(src).readline):
        if tok.type in (tokenize.INDENT, tokenize.DEDENT, tokenize.ENDMARKER):
            continue
        a, b = pos(tok.start), pos(tok.end)
        toks += gap_tokens(src[cursor:a])
        text = src[a:b]
        if tok.type in (tokenize.NEWLINE, tokenize.NL):
            if text:
                toks.append(["Newline", text])
        elif tok.type == tokenize.NAME:
            toks.append(["Name", text])
        elif tok.type == tokenize.NUMBER:
            toks.append(["Number", text])
        elif tok.type == tokenize.OP:
            toks.append(["Symbol" if text in SYMBOLS else "Operator", text])
        else:
            raise ValueError(f"unexpected token {tok}")
        cursor = b
    toks += gap_tokens(src[cursor:])
    return toks


def classify(toks):
    def chain(j, parts):
        # extend with (.NAME)* starting at toks[j]
        while (j + 1 < len(toks) and toks[j] == ["Operator", "."]
               and toks[j + 1][0] == "Name"):
            parts += [".", toks[j + 1][1]]
            j += 2
        return j, parts

    # fuse NAME(.NAME)+, and ".NAME(.NAME)*" right after a closing bracket
    fused, i = [], 0
    while i < len(toks):
        kind, text = toks[i]
        if kind == "Name":
            i, parts = chain(i + 1, [text])
            fused.append(["Name", "".join(parts)])
        elif (toks[i] == ["Operator", "."] and fused and fused[-1][1] in (")", "]", "}")
              and i + 1 < len(toks) and toks[i + 1][0] == "Name"):
            i, parts = chain(i + 2, [".", toks[i + 1][1]])
            fused.append(["Name", "".join(parts)])
        else:
            fused.append([kind, text])
            i += 1

    out = []
    for idx, (kind, text) in enumerate(fused):
        if kind != "Name":
            out.append([kind, text])
            continue
        nxt = next((t for t in fused[idx + 1:] if t[0] != "Whitespace"), None)
        called = nxt is not None and nxt[1] == "("
        prev = next((t for t in reversed(out) if t[0] != "Whitespace"), None)
        if "." in text:
            member = text.rsplit(".", 1)[1]
            if called:
                comp = "BuiltinMethCall" if member in METHODS else "MethodCall"
            else:
                comp = "BuiltinAttrCall" if member in ATTR_CALLS else "AttributeCall"
        elif text in KEYWORDS:
            comp = "Keyword"
        elif text == "STR":
            comp = "Placeholder"
        elif prev == ["Keyword", "def"]:
            comp = "Method"
        elif prev == ["Keyword", "class"]:
            comp = "Class"
        elif text in CLASSES:
            comp = "BuiltinClass"
        elif text in FUNCTIONS and called:
            comp = "BuiltinMethod"
        elif text in ATTRIBUTES:
            comp = "BuiltinAttribute"
        else:
            comp = "Variable"
        out.append([comp, text])
    return out


def escape(text):
    return text.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def candidates():
    libdir = pathlib.Path(sysconfig.get_paths()["stdlib"])
    for path in sorted(libdir.glob("*.py")):
        try:
            src = path.read_text(encoding="utf-8")
            tree = ast.parse(src)
        except (UnicodeDecodeError, SyntaxError, ValueError):
            continue
        lines = src.splitlines(keepends=True)
        for node in tree.body:
            if not isinstance(node, ast.FunctionDef):
                continue
            doc = ast.get_docstring(node, clean=False)
            if not doc:
                continue
            first = min([node.lineno] + [d.lineno for d in node.decorator_list])
            body = "".join(lines[first - 1:node.end_lineno])
            if not body.endswith("\n"):
                body += "\n"
            yield path.stem, node.name, body, doc


def usable(body):
    if not body.isascii() or "\r" in body or "\f" in body:
        return False
    n = body.count("\n")
    return 3 <= n <= 40


def main():
    if sys.version_info[:2] != (3, 10):
        print("warning: corpus was generated with Python 3.10", file=sys.stderr)
    pool = [c for c in candidates() if usable(c[2])]
    GOLDEN.mkdir(parents=True, exist_ok=True)
    PAIRS.parent.mkdir(parents=True, exist_ok=True)

    with PAIRS.open("w") as fh:
        for mod, name, body, doc in pool:
            rec = {"id": f"{mod}.{name}", "code": body, "docstring": doc}
            fh.write(json.dumps(rec, sort_keys=True) + "\n")

    stride = max(1, len(pool) // GOLDEN_COUNT)
    picked = pool[::stride][:GOLDEN_COUNT]
    for old in GOLDEN.glob("*"):
        old.unlink()
    for n, (mod, name, body, _) in enumerate(picked):
        stem = f"{n:03d}"
        cleaned = clean(body)
        toks = classify(raw_tokens(cleaned))
        assert "".join(t[1] for t in toks) == cleaned, (mod, name)
        (GOLDEN / f"{stem}.py").write_text(body)
        (GOLDEN / f"{stem}.clean.py").write_text(cleaned)
        with (GOLDEN / f"{stem}.tokens").open("w") as fh:
            for comp, text in toks:
                fh.write(f"{comp}\t{escape(text)}\n")
    print(f"{len(pool)} pairs, {len(picked)} golden snippets")


if __name__ == "__main__":
    main()
