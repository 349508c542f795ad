"""Element expression grammar: parsing, evaluation, canonical printing.

Grammar (ASCII): rationals `p/q`, generator names (`t`, `u`, `A`..`D`,
`E11`..`E99`), binary `+ - *`, parentheses, and `^` with an integer exponent
on central generators only. Multiplication is always written explicitly.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError, ShapeMismatch, UnknownGenerator
from .rings import RingElement, get_ring

_OPS = "+-*^()[],"


def tokenize(text):
    """Yield (kind, value, col) with kind in {num, name, op}."""
    toks = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            num = int(text[i:j])
            if j < n and text[j] == "/":
                k = j + 1
                if k >= n or not text[k].isdigit():
                    raise ParseError("expected denominator digits", col=j + 1)
                m = k
                while m < n and text[m].isdigit():
                    m += 1
                toks.append(("num", Fraction(num, int(text[k:m])), i))
                i = m
            else:
                toks.append(("num", Fraction(num), i))
                i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("name", text[i:j], i))
            i = j
            continue
        if ch in _OPS:
            toks.append(("op", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", col=i)
    return toks


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.pos = 0

    def peek(self):
        if self.pos < len(self.toks):
            return self.toks[self.pos]
        return (None, None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None:
            raise ParseError("unexpected end of expression")
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", col=tok[2])
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1]!r}", col=tok[2])
        self.pos += 1
        return tok

    def parse_expr(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            node = ("neg", self.parse_term())
        else:
            node = self.parse_term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.parse_term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def parse_term(self):
        node = self.parse_factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            node = ("mul", node, self.parse_factor())
        return node

    def parse_factor(self):
        kind, value, col = self.peek()
        if kind == "num":
            self.take()
            return ("num", value)
        if kind == "name":
            self.take()
            if self.peek()[:2] == ("op", "^"):
                self.take()
                sign = 1
                if self.peek()[:2] == ("op", "-"):
                    self.take()
                    sign = -1
                etok = self.take("num")
                if etok[1].denominator != 1:
                    raise ParseError("exponent must be an integer", col=etok[2])
                return ("pow", value, sign * int(etok[1]))
            return ("gen", value)
        if (kind, value) == ("op", "("):
            self.take()
            node = self.parse_expr()
            self.take("op", ")")
            return node
        raise ParseError(f"unexpected token {value!r}", col=col)


def parse_expr(text):
    """Parse source text into an expression AST (nested tuples)."""
    p = _Parser(tokenize(text))
    node = p.parse_expr()
    tok = p.peek()
    if tok[0] is not None:
        raise ParseError(f"trailing input {tok[1]!r}", col=tok[2])
    return node


def evaluate(ring, node) -> RingElement:
    ring = get_ring(ring)
    op = node[0]
    if op == "num":
        return ring.scalar(node[1])
    if op == "gen":
        gens = ring.generators()
        if node[1] not in gens:
            raise UnknownGenerator(f"{ring.ident} has no generator {node[1]!r}")
        return gens[node[1]]
    if op == "pow":
        name, k = node[1], node[2]
        if name not in ring.central_power_gens:
            raise ParseError(f"^ is only valid on central generators, not {name!r}")
        return ring.generator_power(name, k)
    if op == "neg":
        return -evaluate(ring, node[1])
    if op == "add":
        return evaluate(ring, node[1]) + evaluate(ring, node[2])
    if op == "sub":
        return evaluate(ring, node[1]) - evaluate(ring, node[2])
    if op == "mul":
        return evaluate(ring, node[1]) * evaluate(ring, node[2])
    raise ParseError(f"bad AST node {op!r}")


def parse_element(ring, text) -> RingElement:
    return evaluate(get_ring(ring), parse_expr(text))


def element_to_str(x: RingElement) -> str:
    """Canonical rendering; parse_element(ring, element_to_str(x)) == x."""
    ring = get_ring(x.ring)
    terms = []
    for d in sorted(x.parts):
        terms.extend(ring.render_part(d, x.parts[d]))
    if not terms:
        return "0"
    out = []
    for coef, mono in terms:
        if mono == "1":
            piece = str(coef)
        elif coef == 1:
            piece = mono
        elif coef == -1:
            piece = "-" + mono
        else:
            piece = f"{coef}*{mono}"
        out.append(piece)
    s = out[0]
    for piece in out[1:]:
        if piece.startswith("-"):
            s += " - " + piece[1:]
        else:
            s += " + " + piece
    return s


def split_matrix_text(text):
    """Split `[[e, e], [e]]` into rows of entry substrings, by bracket depth."""
    s = text.strip()
    if not s.startswith("[") or not s.endswith("]"):
        raise ParseError("matrix must be wrapped in [ ... ]")
    body = s[1:-1]
    rows = []
    depth = 0
    cur = None
    entry_start = None
    for i, ch in enumerate(body):
        if ch == "[":
            depth += 1
            if depth == 1:
                cur = []
                entry_start = i + 1
            continue
        if ch == "]":
            if depth == 0:
                raise ParseError("unbalanced ']' in matrix", col=i)
            if depth == 1:
                chunk = body[entry_start:i].strip()
                if chunk or cur:
                    cur.append(chunk)
                rows.append(cur)
                cur = None
            depth -= 1
            continue
        if ch == "," and depth == 1:
            cur.append(body[entry_start:i].strip())
            entry_start = i + 1
            continue
        if depth == 0 and not ch.isspace() and ch != ",":
            raise ParseError(f"unexpected {ch!r} between matrix rows", col=i)
    if depth != 0:
        raise ParseError("unbalanced '[' in matrix")
    return rows


def parse_matrix(ring, text):
    """Parse nested-array matrix text into a RingMatrix."""
    from .matrices import RingMatrix

    ring = get_ring(ring)
    rows = split_matrix_text(text)
    if not rows:
        return RingMatrix(ring.ident, 0, 0, [])
    width = len(rows[0])
    for r in rows:
        if len(r) != width:
            raise ShapeMismatch("ragged matrix rows")
    entries = [[parse_element(ring, cell) for cell in row] for row in rows]
    return RingMatrix(ring.ident, len(rows), width, entries)


def matrix_to_str(m) -> str:
    rows = []
    for i in range(m.rows):
        rows.append("[" + ", ".join(element_to_str(m.entry(i, j)) for j in range(m.cols)) + "]")
    return "[" + ", ".join(rows) + "]"
