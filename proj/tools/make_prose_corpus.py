#!/usr/bin/env python3
# Copyright 2026 The wbseg Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Extracts English prose sentences from the docstrings of installed Python
modules, one sentence per line.

Used to build the desk-scale evaluation corpus in data/ when no news corpus
is available. Output is deterministic for a given Python installation.
"""
import argparse
import ast
import os
import re
import site
import sys
import sysconfig

SENTENCE_SPLIT = re.compile(r"(?<=[.!?])\s+(?=[A-Z])")
PROSE = re.compile(r"^[A-Z][A-Za-z ,.;:'!?-]+[.!?]$")
CODE_PREFIXES = ("    ", ">>>", "..", "-", "*", "|")


def sentences(docstring):
    for para in re.split(r"\n\s*\n", docstring):
        lines = para.split("\n")
        if any(l.startswith(CODE_PREFIXES) for l in lines[1:]):
            continue
        joined = " ".join(l.strip() for l in lines)
        for s in SENTENCE_SPLIT.split(joined):
            yield s.strip()


def keep(s, min_chars, max_chars):
    return (min_chars <= len(s) <= max_chars and PROSE.match(s)
            and "  " not in s and len(s.split()) >= 4)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", required=True)
    ap.add_argument("--min-chars", type=int, default=20)
    ap.add_argument("--max-chars", type=int, default=150)
    args = ap.parse_args()

    roots = [sysconfig.get_paths()["stdlib"]] + site.getsitepackages()
    seen, out = set(), []
    for root in roots:
        for dirpath, dirnames, filenames in os.walk(root):
            dirnames.sort()
            for name in sorted(filenames):
                if not name.endswith(".py"):
                    continue
                try:
                    with open(os.path.join(dirpath, name), encoding="utf-8") as f:
                        tree = ast.parse(f.read())
                except (SyntaxError, UnicodeDecodeError, ValueError, OSError):
                    continue
                for node in ast.walk(tree):
                    if not isinstance(node, (ast.Module, ast.ClassDef,
                                             ast.FunctionDef,
                                             ast.AsyncFunctionDef)):
                        continue
                    doc = ast.get_docstring(node)
                    if not doc:
                        continue
                    for s in sentences(doc):
                        if keep(s, args.min_chars, args.max_chars) and s not in seen:
                            seen.add(s)
                            out.append(s)
    with open(args.out, "w", encoding="utf-8") as f:
        f.write("\n".join(out) + "\n")
    print(f"{len(out)} lines", file=sys.stderr)


if __name__ == "__main__":
    main()
