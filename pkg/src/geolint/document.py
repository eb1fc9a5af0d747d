"""Spec documents: JSON parsing with source positions, pointers, patches, diffs.

The linter reports rule violations at document paths and must point back at
source line/column, which the stdlib json module does not expose.  The parser
here accepts exactly the JSON grammar and records the position of every node
keyed by its RFC 6901 pointer.  Patching follows RFC 6902 (add/replace/remove
subset); serialization is plain 2-space-indented JSON with key order preserved
from the input so diffs stay readable.
"""
from __future__ import annotations

import copy
import json
import math
import re
from dataclasses import dataclass, field

from .errors import PatchTargetMissing, PointerSyntaxError, SpecSyntaxError

_NUMBER_RE = re.compile(r"-?(?:0|[1-9]\d*)(?:\.\d+)?(?:[eE][+-]?\d+)?")
_ESCAPES = {'"': '"', "\\": "\\", "/": "/", "b": "\b", "f": "\f", "n": "\n", "r": "\r", "t": "\t"}


# ---------------------------------------------------------------------------
# RFC 6901 pointers
# ---------------------------------------------------------------------------

def escape_token(token: str) -> str:
    return token.replace("~", "~0").replace("/", "~1")


def unescape_token(token: str) -> str:
    return token.replace("~1", "/").replace("~0", "~")


def join_pointer(tokens: list[str]) -> str:
    return "".join("/" + escape_token(t) for t in tokens)


def split_pointer(path: str) -> list[str]:
    """Split a pointer into reference tokens, validating its syntax."""
    if path == "":
        return []
    if not path.startswith("/"):
        raise PointerSyntaxError(f"pointer must start with '/': {path!r}")
    tokens = path.split("/")[1:]
    for t in tokens:
        # '~' may only appear as '~0' or '~1'
        if re.search(r"~(?![01])", t):
            raise PointerSyntaxError(f"bad escape in pointer token {t!r}")
    return [unescape_token(t) for t in tokens]


def resolve_pointer(tree, path: str):
    """Return the value at `path`, raising KeyError if it does not exist."""
    node = tree
    for token in split_pointer(path):
        node = _step(node, token)
    return node


def pointer_exists(tree, path: str) -> bool:
    try:
        resolve_pointer(tree, path)
        return True
    except KeyError:
        return False


def _step(node, token: str):
    if isinstance(node, dict):
        if token not in node:
            raise KeyError(token)
        return node[token]
    if isinstance(node, list):
        if not token.isdigit():
            raise KeyError(token)
        idx = int(token)
        if idx >= len(node):
            raise KeyError(token)
        return node[idx]
    raise KeyError(token)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

@dataclass
class SpecDocument:
    """A parsed spec: source text, value tree, and per-path source positions."""

    source_text: str
    tree: object
    provenance: dict[str, tuple[int, int]] = field(default_factory=dict)

    def location(self, path: str) -> tuple[int, int] | None:
        return self.provenance.get(path)

    def resolve(self, path: str):
        return resolve_pointer(self.tree, path)

    def exists(self, path: str) -> bool:
        return pointer_exists(self.tree, path)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.n = len(text)
        self.i = 0
        self.line = 1
        self.col = 1
        self.provenance: dict[str, tuple[int, int]] = {}

    def fail(self, message: str):
        raise SpecSyntaxError(self.line, self.col, message)

    def _advance(self, count: int = 1):
        for _ in range(count):
            if self.i < self.n and self.text[self.i] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.i += 1

    def _skip_ws(self):
        while self.i < self.n and self.text[self.i] in " \t\r\n":
            self._advance()

    def _peek(self) -> str:
        return self.text[self.i] if self.i < self.n else ""

    def _expect(self, ch: str):
        if self._peek() != ch:
            self.fail(f"expected {ch!r}")
        self._advance()

    def parse(self):
        self._skip_ws()
        value = self._value("")
        self._skip_ws()
        if self.i != self.n:
            self.fail("trailing data after document")
        return value

    def _value(self, path: str):
        self._skip_ws()
        if self.i >= self.n:
            self.fail("unexpected end of input")
        self.provenance[path] = (self.line, self.col)
        ch = self._peek()
        if ch == "{":
            return self._object(path)
        if ch == "[":
            return self._array(path)
        if ch == '"':
            return self._string()
        if ch == "t" or ch == "f" or ch == "n":
            return self._literal()
        if ch == "-" or ch.isdigit():
            return self._number()
        self.fail(f"unexpected character {ch!r}")

    def _object(self, path: str) -> dict:
        self._expect("{")
        obj: dict = {}
        self._skip_ws()
        if self._peek() == "}":
            self._advance()
            return obj
        while True:
            self._skip_ws()
            if self._peek() != '"':
                self.fail("expected string key")
            key = self._string()
            self._skip_ws()
            self._expect(":")
            obj[key] = self._value(path + "/" + escape_token(key))
            self._skip_ws()
            ch = self._peek()
            if ch == ",":
                self._advance()
                continue
            if ch == "}":
                self._advance()
                return obj
            self.fail("expected ',' or '}' in object")

    def _array(self, path: str) -> list:
        self._expect("[")
        arr: list = []
        self._skip_ws()
        if self._peek() == "]":
            self._advance()
            return arr
        while True:
            arr.append(self._value(f"{path}/{len(arr)}"))
            self._skip_ws()
            ch = self._peek()
            if ch == ",":
                self._advance()
                continue
            if ch == "]":
                self._advance()
                return arr
            self.fail("expected ',' or ']' in array")

    def _string(self) -> str:
        self._expect('"')
        out: list[str] = []
        while True:
            if self.i >= self.n:
                self.fail("unterminated string")
            ch = self.text[self.i]
            if ch == '"':
                self._advance()
                return "".join(out)
            if ch == "\\":
                self._advance()
                esc = self._peek()
                if esc in _ESCAPES:
                    out.append(_ESCAPES[esc])
                    self._advance()
                elif esc == "u":
                    self._advance()
                    code = self._hex4()
                    if 0xD800 <= code <= 0xDBFF and self.text.startswith("\\u", self.i):
                        # UTF-16 surrogate pair
                        self._advance(2)
                        low = self._hex4()
                        if 0xDC00 <= low <= 0xDFFF:
                            code = 0x10000 + ((code - 0xD800) << 10) + (low - 0xDC00)
                            out.append(chr(code))
                            continue
                        out.append(chr(code))
                        out.append(chr(low))
                        continue
                    out.append(chr(code))
                else:
                    self.fail(f"bad escape \\{esc}")
            elif ch in "\n\r":
                self.fail("unescaped newline in string")
            else:
                out.append(ch)
                self._advance()

    def _hex4(self) -> int:
        hexes = self.text[self.i : self.i + 4]
        if len(hexes) != 4 or any(c not in "0123456789abcdefABCDEF" for c in hexes):
            self.fail("bad \\u escape")
        self._advance(4)
        return int(hexes, 16)

    def _number(self):
        m = _NUMBER_RE.match(self.text, self.i)
        if not m:
            self.fail("malformed number")
        raw = m.group(0)
        self._advance(len(raw))
        if "." in raw or "e" in raw or "E" in raw:
            value = float(raw)
            if not math.isfinite(value):
                self.fail("number out of range")
            return value
        return int(raw)

    def _literal(self):
        for word, value in (("true", True), ("false", False), ("null", None)):
            if self.text.startswith(word, self.i):
                self._advance(len(word))
                return value
        self.fail("unexpected token")


def parse_spec(text: str) -> SpecDocument:
    """Parse spec text into a document tree with per-path source positions."""
    parser = _Parser(text)
    tree = parser.parse()
    return SpecDocument(source_text=text, tree=tree, provenance=parser.provenance)


def serialize(doc: SpecDocument | object) -> str:
    """Canonical serialization: 2-space indent, input key order preserved."""
    tree = doc.tree if isinstance(doc, SpecDocument) else doc
    return json.dumps(tree, indent=2, ensure_ascii=False) + "\n"


def tree_equals(a, b) -> bool:
    """Deep equality that keeps booleans distinct from numbers."""
    if isinstance(a, bool) != isinstance(b, bool):
        return False
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(tree_equals(a[k], b[k]) for k in a)
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(tree_equals(x, y) for x, y in zip(a, b))
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return a == b
    return type(a) is type(b) and a == b


# ---------------------------------------------------------------------------
# Patches (RFC 6902 subset: add / replace / remove)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Patch:
    op: str  # add | replace | remove
    path: str
    value: object = None

    def to_dict(self) -> dict:
        d = {"op": self.op, "path": self.path}
        if self.op != "remove":
            d["value"] = self.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Patch":
        return cls(op=d["op"], path=d["path"], value=d.get("value"))


def _apply_one(tree, patch: Patch):
    tokens = split_pointer(patch.path)
    if not tokens:
        if patch.op == "remove":
            raise PatchTargetMissing(patch.path)
        return copy.deepcopy(patch.value)
    try:
        parent = tree
        for token in tokens[:-1]:
            parent = _step(parent, token)
    except KeyError:
        raise PatchTargetMissing(patch.path) from None
    last = tokens[-1]

    if patch.op == "add":
        if isinstance(parent, dict):
            parent[last] = copy.deepcopy(patch.value)
        elif isinstance(parent, list):
            idx = len(parent) if last == "-" else int(last) if last.isdigit() else None
            if idx is None or idx > len(parent):
                raise PatchTargetMissing(patch.path)
            parent.insert(idx, copy.deepcopy(patch.value))
        else:
            raise PatchTargetMissing(patch.path)
    elif patch.op == "replace":
        _require(parent, last, patch.path)
        if isinstance(parent, dict):
            parent[last] = copy.deepcopy(patch.value)
        else:
            parent[int(last)] = copy.deepcopy(patch.value)
    elif patch.op == "remove":
        _require(parent, last, patch.path)
        if isinstance(parent, dict):
            del parent[last]
        else:
            del parent[int(last)]
    else:
        raise ValueError(f"unknown patch op {patch.op!r}")
    return tree


def _require(parent, token: str, path: str):
    try:
        _step(parent, token)
    except KeyError:
        raise PatchTargetMissing(path) from None


def apply_patches(doc: SpecDocument, patches: list[Patch]) -> SpecDocument:
    """Apply patches in order, returning a new document; `doc` is unchanged."""
    tree = copy.deepcopy(doc.tree)
    for patch in patches:
        tree = _apply_one(tree, patch)
    return parse_spec(serialize(tree))


def invert_patches(doc: SpecDocument, patches: list[Patch]) -> list[Patch]:
    """Inverse patch list: applying it after `patches` restores `doc`'s tree."""
    tree = copy.deepcopy(doc.tree)
    inverses: list[Patch] = []
    for patch in patches:
        if patch.op == "add":
            inverses.append(Patch("remove", patch.path))
        else:
            try:
                old = copy.deepcopy(resolve_pointer(tree, patch.path))
            except KeyError:
                raise PatchTargetMissing(patch.path) from None
            if patch.op == "replace":
                inverses.append(Patch("replace", patch.path, old))
            else:
                inverses.append(Patch("add", patch.path, old))
        tree = _apply_one(tree, patch)
    inverses.reverse()
    return inverses


def diff(before: SpecDocument, after: SpecDocument) -> list[Patch]:
    """Patch list transforming `before`'s tree into `after`'s.

    Objects are descended key by key; arrays and scalars are replaced whole,
    which keeps the patch log short and mirrors how fixes are authored.
    """
    patches: list[Patch] = []
    _diff_node(before.tree, after.tree, "", patches)
    return patches


def _diff_node(a, b, path: str, out: list[Patch]):
    if tree_equals(a, b):
        return
    if isinstance(a, dict) and isinstance(b, dict):
        for key in a:
            if key not in b:
                out.append(Patch("remove", path + "/" + escape_token(key)))
        for key in b:
            child = path + "/" + escape_token(key)
            if key not in a:
                out.append(Patch("add", child, copy.deepcopy(b[key])))
            else:
                _diff_node(a[key], b[key], child, out)
    else:
        out.append(Patch("replace", path, copy.deepcopy(b)))
