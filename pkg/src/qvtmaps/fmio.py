"""Reading and writing flag maps in the plain-text ``.fm`` format.

The format is line based, LF terminated::

    flags N
    s0: i_0 i_1 ... i_{N-1}
    s1: ...
    s2: ...

Lines starting with ``#`` are comments and may appear anywhere.  Images
are 0-based flag indices separated by single spaces.
"""
from __future__ import annotations

import os
from pathlib import Path

from .surfmap import FlagMap


class FmFormatError(ValueError):
    """Malformed ``.fm`` text; carries the 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def dumps(m: FlagMap, comments: list[str] | tuple[str, ...] = ()) -> str:
    out = [f"# {c}" if c else "#" for c in comments]
    out.append(f"flags {m.n}")
    for name, perm in (("s0", m.s0), ("s1", m.s1), ("s2", m.s2)):
        out.append(f"{name}: " + " ".join(map(str, perm)))
    return "\n".join(out) + "\n"


def loads(text: str, validate: bool = True) -> FlagMap:
    if "\r" in text:
        line = text[: text.index("\r")].count("\n") + 1
        col = text.index("\r") - (text.rfind("\n", 0, text.index("\r")) + 1) + 1
        raise FmFormatError("carriage return found; only LF line endings are accepted", line, col)
    if text and not text.endswith("\n"):
        raise FmFormatError("missing final newline", text.count("\n") + 1,
                            len(text) - text.rfind("\n"))
    rows = [(i + 1, ln) for i, ln in enumerate(text.split("\n")[:-1]) if not ln.startswith("#")]
    if not rows:
        raise FmFormatError("empty file", 1, 1)
    lineno, head = rows[0]
    if not head.startswith("flags "):
        raise FmFormatError("expected 'flags N'", lineno, 1)
    n = _parse_int(head[6:], lineno, 7)
    if n <= 0:
        raise FmFormatError("flag count must be positive", lineno, 7)
    perms = []
    expected = ("s0", "s1", "s2")
    for idx, name in enumerate(expected):
        if idx + 1 >= len(rows):
            last = rows[-1][0]
            raise FmFormatError(f"missing '{name}:' line", last + 1, 1)
        lineno, ln = rows[idx + 1]
        prefix = name + ": "
        if not ln.startswith(prefix):
            raise FmFormatError(f"expected '{prefix}'", lineno, 1)
        perms.append(_parse_images(ln, len(prefix), n, lineno))
    if len(rows) > 4:
        lineno, _ = rows[4]
        raise FmFormatError("unexpected content after 's2:' line", lineno, 1)
    m = FlagMap(*perms)
    return m.validate() if validate else m


def _parse_int(tok: str, line: int, col: int) -> int:
    if not tok.isdigit() or (len(tok) > 1 and tok[0] == "0"):
        raise FmFormatError(f"expected a non-negative integer, got {tok!r}", line, col)
    return int(tok)


def _parse_images(ln: str, start: int, n: int, line: int) -> list[int]:
    body = ln[start:]
    toks = body.split(" ")
    if len(toks) != n:
        raise FmFormatError(f"expected {n} images, got {len(toks)}", line, start + 1)
    out = []
    col = start + 1
    for tok in toks:
        v = _parse_int(tok, line, col)
        if v >= n:
            raise FmFormatError(f"image {v} out of range 0..{n - 1}", line, col)
        out.append(v)
        col += len(tok) + 1
    return out


def write(path: str | os.PathLike, m: FlagMap, comments: list[str] | tuple[str, ...] = ()) -> None:
    Path(path).write_bytes(dumps(m, comments).encode("ascii"))


def read(path: str | os.PathLike, validate: bool = True) -> FlagMap:
    return loads(Path(path).read_bytes().decode("ascii"), validate)
