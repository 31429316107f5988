"""Text format for polynomials and plane maps.

Grammar (no implicit multiplication)::

    expr     := [sign] term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := atom ('^' [sign] integer)?
    atom     := rational | variable | '(' expr ')'
    rational := integer ('/' positive-integer)?
    variable := 'X' | 'Y' | 'Z' | 'u' integer

Map files hold ``A: <int>``, ``F: <expr>`` and ``G: <expr>`` lines, with
``#`` comments and blank lines ignored.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import MultiPoly, VarTable
from .errors import ParseError, NegativeExponentError


def _format_rational(c):
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _format_monomial(ring, exps):
    names = ring.names
    order = list(range(3, ring.nvars)) + [0, 1, 2]
    parts = []
    for i in order:
        e = exps[i]
        if e == 0:
            continue
        parts.append(names[i] if e == 1 else f"{names[i]}^{e}")
    return "*".join(parts)


def format_poly(p: MultiPoly) -> str:
    """Canonical text: graded-lex descending, lowest-terms coefficients."""
    if p.is_zero():
        return "0"
    out = []
    for k, (exps, c) in enumerate(p.sorted_terms()):
        neg = c < 0
        mag = -c if neg else c
        mono = _format_monomial(p.ring, exps)
        if not mono:
            body = _format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_format_rational(mag)}*{mono}"
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


class _Parser:
    def __init__(self, src, ring, line_offset=0, col_offset=0):
        self.src = src
        self.ring = ring
        self.line_offset = line_offset
        self.col_offset = col_offset
        self.tokens = self._tokenize()
        self.pos = 0

    def _where(self, offset):
        line = self.src.count("\n", 0, offset)
        start = self.src.rfind("\n", 0, offset) + 1
        col = offset - start + 1 + (self.col_offset if line == 0 else 0)
        return line + 1 + self.line_offset, col

    def error(self, msg, offset=None):
        if offset is None:
            offset = self.tokens[self.pos][2] if self.pos < len(self.tokens) else len(self.src)
        raise ParseError(msg, *self._where(offset))

    def _tokenize(self):
        tokens = []
        i = 0
        n = len(self.src)
        while i < n:
            if self.src[i].isspace():
                i += 1
                continue
            m = _TOKEN.match(self.src, i)
            if not m:
                raise ParseError(f"unexpected character {self.src[i]!r}", *self._where(i))
            kind = m.lastgroup
            tokens.append((kind, m.group(kind), m.start(kind)))
            i = m.end()
        return tokens

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None, len(self.src))

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind or "token"
            got = "end of input" if tok[0] is None else repr(tok[1])
            self.error(f"expected {want}, got {got}")
        self.pos += 1
        return tok

    def parse(self):
        if not self.tokens:
            self.error("empty expression")
        p = self.expr()
        if self.pos != len(self.tokens):
            self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self):
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.pos += 1
            sign = -1 if val == "-" else 1
        acc = self.term() * sign
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.pos += 1
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self):
        acc = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.pos += 1
            acc = acc * self.factor()
        return acc

    def factor(self):
        base = self.atom()
        if self.peek()[:2] != ("op", "^"):
            return base
        _, _, at = self.take("op", "^")
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.pos += 1
            sign = -1 if val == "-" else 1
        n = sign * int(self.take("int")[1])
        try:
            return base.power(n)
        except NegativeExponentError as exc:
            self.error(str(exc), at)

    def atom(self):
        kind, val, at = self.peek()
        if kind == "int":
            self.pos += 1
            num = int(val)
            if self.peek()[:2] == ("op", "/"):
                self.pos += 1
                _, den, den_at = self.take("int")
                if int(den) == 0:
                    self.error("zero denominator", den_at)
                return MultiPoly.constant(self.ring, Fraction(num, int(den)))
            return MultiPoly.constant(self.ring, num)
        if kind == "name":
            self.pos += 1
            try:
                self.ring.index(val)
            except KeyError:
                self.error(f"unknown variable {val!r}", at)
            return MultiPoly.var(self.ring, val)
        if (kind, val) == ("op", "("):
            self.pos += 1
            inner = self.expr()
            self.take("op", ")")
            return inner
        got = "end of input" if kind is None else repr(val)
        self.error(f"expected a number, variable or '(', got {got}")


def parse_poly(src: str, ring: VarTable, *, line=1, column=1) -> MultiPoly:
    """Parse ``src`` into a polynomial of ``ring``; raises :class:`ParseError`."""
    return _Parser(src, ring, line - 1, column - 1).parse()


_MAP_LINE = re.compile(r"^\s*([AFG])\s*:(.*)$")


def parse_map_file(text: str, laurent_z=False):
    """Parse a map file into ``(a, F, G)``; ``F``/``G`` are ``None`` when absent.

    Polynomials are read in the table for the declared ``a`` (default 1), with
    Z added to the Laurent variables when ``laurent_z`` is set.
    """
    a = None
    exprs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _MAP_LINE.match(line)
        if not m:
            raise ParseError("expected 'A:', 'F:' or 'G:' line", lineno, 1)
        key, body = m.group(1), m.group(2)
        if key in exprs or (key == "A" and a is not None):
            raise ParseError(f"duplicate {key} line", lineno, 1)
        if key == "A":
            try:
                a = int(body.strip())
            except ValueError:
                raise ParseError("A expects an integer", lineno, m.start(2) + 1) from None
            if a < 1:
                raise ParseError("A must be >= 1", lineno, m.start(2) + 1)
        else:
            exprs[key] = (body, lineno, m.start(2) + 1)
    if a is None:
        a = 1
    ring = VarTable(a)
    if laurent_z:
        ring = ring.with_laurent_z()
    polys = {k: parse_poly(body, ring, line=ln, column=col) for k, (body, ln, col) in exprs.items()}
    return a, polys.get("F"), polys.get("G")


def format_map_file(f: MultiPoly, g: MultiPoly, comment=None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines += [f"A: {f.ring.a}", f"F: {format_poly(f)}", f"G: {format_poly(g)}"]
    return "\n".join(lines) + "\n"
