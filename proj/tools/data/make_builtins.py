#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Regenerates data/builtins/*.txt from a Python 3.10 interpreter.

The tables are committed; rerun only when bumping the table version.
"""
import builtins
import importlib
import keyword
import pathlib
import sys

VERSION = 1
OUT = pathlib.Path(__file__).resolve().parents[2] / "data" / "builtins"

BUILTIN_CLASSES = [
    "int", "float", "str", "list", "dict", "set", "tuple", "bool", "bytes",
    "object", "type", "Exception", "BaseException", "frozenset", "complex",
    "bytearray", "range", "slice", "memoryview",
]

MEMBER_SOURCES = [
    str, bytes, bytearray, list, dict, set, frozenset, tuple, int, float,
    complex, object, type, range, slice, memoryview, BaseException,
]
MEMBER_MODULES = [
    "os", "os.path", "sys", "re", "json", "math", "time", "datetime", "io",
    "collections", "itertools", "functools", "logging", "random", "string",
    "subprocess", "shutil", "pathlib", "copy", "struct", "operator",
]


def write(name, items):
    lines = [f"# version: {VERSION}"] + list(items)
    (OUT / name).write_text("\n".join(lines) + "\n")


def public(name):
    return not name.startswith("_") or (name.startswith("__") and name.endswith("__"))


def main():
    if sys.version_info[:2] != (3, 10):
        print("warning: tables were generated with Python 3.10", file=sys.stderr)
    OUT.mkdir(parents=True, exist_ok=True)
    write("keywords.txt", keyword.kwlist)
    write("builtin_classes.txt", BUILTIN_CLASSES)

    functions = []
    for n in dir(builtins):
        obj = getattr(builtins, n)
        if n in BUILTIN_CLASSES or not callable(obj) or n.startswith("_"):
            continue
        if n in ("copyright", "credits", "license", "exit", "quit"):
            continue
        functions.append(n)
    functions.sort(key=lambda n: (isinstance(getattr(builtins, n), type), n))
    functions += ["__import__"]
    write("builtin_functions.txt", functions)

    attributes = list(functions) + [
        "Ellipsis", "NotImplemented", "__debug__", "__doc__", "__name__",
        "__file__", "__package__", "__spec__", "__builtins__", "__all__",
    ]
    write("builtin_attributes.txt", attributes)

    methods, attrs = set(), set()
    holders = list(MEMBER_SOURCES)
    for mod in MEMBER_MODULES:
        holders.append(importlib.import_module(mod))
    import io
    holders += [io.TextIOWrapper, io.BufferedReader, io.StringIO]
    import re
    holders += [type(re.compile("")), type(re.match("", ""))]
    import datetime, collections, pathlib as pl, logging
    holders += [datetime.datetime, datetime.date, datetime.timedelta,
                collections.OrderedDict, collections.defaultdict, collections.deque,
                collections.Counter, pl.Path, logging.Logger]
    for h in holders:
        for n in dir(h):
            if not public(n):
                continue
            try:
                obj = getattr(h, n)
            except AttributeError:
                continue
            if callable(obj):
                methods.add(n)
            else:
                attrs.add(n)
    attrs -= methods
    write("builtin_methods.txt", sorted(methods))
    write("builtin_attr_calls.txt", sorted(attrs))


if __name__ == "__main__":
    main()
