"""Parser for polynomial expressions in CLI input.

Grammar (explicit multiplication only, exponents are literal non-negative
integers):

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | power
    power  := atom ('^' INT)?
    atom   := INT | IDENT | '(' expr ')'

so '^' binds tighter than unary minus, which binds tighter than '*'.
Chained exponents need parentheses.  Parsing yields an ExprAST; printing
one and parsing the text back gives an equal tree, and the canonical text
rendering of a polynomial parses back to the same polynomial.
"""

from __future__ import annotations

import re

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([-+*^()]))")


class ExprError(ValueError):
    def __init__(self, message, pos):
        super().__init__("%s (at position %d)" % (message, pos))
        self.pos = pos


def _tokenize(text):
    out = []
    i = 0
    n = len(text)
    while i < n:
        m = _TOKEN.match(text, i)
        if m is None or m.end() == i:
            stripped = text[i:].lstrip()
            if not stripped:
                break
            raise ExprError("unexpected character %r" % stripped[0],
                            n - len(stripped))
        if m.group(1) is not None:
            out.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), m.start(2)))
        else:
            out.append(("op", m.group(3), m.start(3)))
        i = m.end()
    out.append(("end", None, n))
    return out


# binding strength, loosest first; "neg" sits between "mul" and "pow"
_LEVEL = {"add": 1, "sub": 1, "mul": 2, "neg": 3, "pow": 4, "int": 5, "var": 5}


class ExprAST:
    """One parse-tree node.

    kind is one of int, var, add, sub, mul, neg, pow; args holds the
    integer value, the identifier, the operand pair, the single operand,
    or (base, exponent) respectively.  Value-semantic, hashable, and
    to_text() prints with the fewest parentheses that reparse to an equal
    tree.
    """

    __slots__ = ("kind", "args")

    def __init__(self, kind, *args):
        self.kind = kind
        self.args = args

    def __eq__(self, other):
        return (isinstance(other, ExprAST)
                and self.kind == other.kind and self.args == other.args)

    def __hash__(self):
        return hash((self.kind, self.args))

    def __repr__(self):
        return "ExprAST(%r, %s)" % (self.kind, ", ".join(map(repr, self.args)))

    def identifiers(self):
        """The set of identifier names appearing in the tree."""
        if self.kind == "var":
            return {self.args[0]}
        out = set()
        for a in self.args:
            if isinstance(a, ExprAST):
                out |= a.identifiers()
        return out

    def to_text(self):
        kind = self.kind
        if kind == "int":
            return str(self.args[0])
        if kind == "var":
            return self.args[0]
        if kind == "neg":
            (a,) = self.args
            return "-" + _wrap(a, _LEVEL["neg"])
        if kind == "pow":
            a, e = self.args
            base = a.to_text() if a.kind in ("int", "var") else "(%s)" % a.to_text()
            return "%s^%d" % (base, e)
        a, b = self.args
        op = {"add": " + ", "sub": " - ", "mul": "*"}[kind]
        lvl = _LEVEL[kind]
        # the parser is left-associative, so only the right side needs
        # parentheses at equal binding strength
        return _wrap(a, lvl) + op + _wrap(b, lvl + 1)

    def evaluate(self, table, rename=None):
        """The MultiPoly over table; rename maps identifiers to variables."""
        kind = self.kind
        if kind == "int":
            return table.const(self.args[0])
        if kind == "var":
            nm = self.args[0]
            if rename:
                nm = rename.get(nm, nm)
            return table.var(nm)
        if kind == "neg":
            return -self.args[0].evaluate(table, rename)
        if kind == "pow":
            return self.args[0].evaluate(table, rename) ** self.args[1]
        a = self.args[0].evaluate(table, rename)
        b = self.args[1].evaluate(table, rename)
        if kind == "add":
            return a + b
        if kind == "sub":
            return a - b
        return a * b


def _wrap(node, min_level):
    text = node.to_text()
    if _LEVEL[node.kind] < min_level:
        return "(%s)" % text
    return text


class _Parser:
    def __init__(self, text, allowed):
        self.text = text
        self.allowed = None if allowed is None else frozenset(allowed)
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ExprError("expected %r" % op, pos)

    def parse(self):
        f = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprError("unexpected %r" % (val,), pos)
        return f

    def expr(self):
        f = self.term()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                g = self.term()
                f = ExprAST("add" if val == "+" else "sub", f, g)
            else:
                return f

    def term(self):
        f = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                f = ExprAST("mul", f, self.factor())
            else:
                return f

    def factor(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return ExprAST("neg", self.factor())
        return self.power()

    def power(self):
        f = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, e, epos = self.take()
            if kind != "int":
                raise ExprError("exponent must be a literal non-negative integer", epos)
            return ExprAST("pow", f, e)
        return f

    def atom(self):
        kind, val, pos = self.take()
        if kind == "int":
            return ExprAST("int", val)
        if kind == "name":
            if self.allowed is not None and val not in self.allowed:
                raise ExprError("unknown variable %r (allowed: %s)"
                                % (val, ", ".join(sorted(self.allowed))), pos)
            return ExprAST("var", val)
        if kind == "op" and val == "(":
            f = self.expr()
            self.expect_op(")")
            return f
        raise ExprError("expected a number, variable, or parenthesized expression",
                        pos)


def parse_expr(text, allowed=None):
    """Parse text into an ExprAST, restricted to the allowed identifiers.

    allowed = None admits any identifier; otherwise an unknown name is a
    positioned ExprError, like every other syntax error.
    """
    return _Parser(text, allowed).parse()


def parse_poly(text, table):
    """Parse text into a MultiPoly over the given table."""
    return parse_expr(text, table.names).evaluate(table)
