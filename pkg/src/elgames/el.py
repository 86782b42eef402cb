"""Colors and Emerson-Lei objectives.

An objective is a Boolean formula over atoms ``Inf c`` ("color ``c``
occurs infinitely often"), evaluated against the set of colors that a
play visits infinitely often.  ``Fin c`` abbreviates ``!Inf c`` and is
desugared during parsing; it is not an AST node.  Colors are interned
in a :class:`ColorTable` and color sets are dense bit masks over it.
"""

import re
from dataclasses import dataclass

MAX_COLORS = 30

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
_KEYWORDS = frozenset({"true", "false", "Inf", "Fin"})


class ELError(ValueError):
    """Base class for objective-related errors."""


class ELSyntaxError(ELError):
    def __init__(self, message, position):
        super().__init__("%s (at column %d)" % (message, position + 1))
        self.position = position


class UnknownColorError(ELError):
    def __init__(self, name):
        super().__init__("unknown color: %r" % (name,))
        self.name = name


class ColorTable:
    """Ordered table of color names; ids are dense in 0..len-1."""

    def __init__(self, names):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ELError("duplicate color names: %r" % (names,))
        if len(names) > MAX_COLORS:
            raise ELError("too many colors (%d > %d)" % (len(names), MAX_COLORS))
        for name in names:
            if not _IDENT_RE.match(name) or name in _KEYWORDS:
                raise ELError("bad color name: %r" % (name,))
        self.names = names
        self._ids = {name: i for i, name in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __eq__(self, other):
        return isinstance(other, ColorTable) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return "ColorTable(%r)" % (list(self.names),)

    @property
    def full_mask(self):
        return (1 << len(self.names)) - 1

    def id(self, name):
        try:
            return self._ids[name]
        except KeyError:
            raise UnknownColorError(name) from None

    def name(self, cid):
        return self.names[cid]

    def mask(self, *names):
        """Bit mask of the given color names."""
        m = 0
        for name in names:
            m |= 1 << self.id(name)
        return m

    def names_of(self, mask):
        return tuple(n for i, n in enumerate(self.names) if mask >> i & 1)

    def format_mask(self, mask):
        return "{%s}" % ",".join(self.names_of(mask))


def subsets_of(mask):
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    out = []
    sub = mask
    while True:
        out.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & mask
    out.reverse()
    return out


class ELFormula:
    """Base class of objective AST nodes."""

    __slots__ = ()

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True)
class TrueFormula(ELFormula):
    __slots__ = ()


@dataclass(frozen=True)
class FalseFormula(ELFormula):
    __slots__ = ()


@dataclass(frozen=True)
class Inf(ELFormula):
    __slots__ = ("color",)
    color: int


@dataclass(frozen=True)
class Not(ELFormula):
    __slots__ = ("arg",)
    arg: ELFormula


@dataclass(frozen=True)
class And(ELFormula):
    __slots__ = ("left", "right")
    left: ELFormula
    right: ELFormula


@dataclass(frozen=True)
class Or(ELFormula):
    __slots__ = ("left", "right")
    left: ELFormula
    right: ELFormula


TRUE = TrueFormula()
FALSE = FalseFormula()


def fin(color):
    """``Fin c`` as its definition ``!Inf c``."""
    return Not(Inf(color))


def evaluate(phi, mask):
    """Truth of ``phi`` on the color set ``mask`` (``Inf c`` iff c in mask)."""
    if isinstance(phi, TrueFormula):
        return True
    if isinstance(phi, FalseFormula):
        return False
    if isinstance(phi, Inf):
        return bool(mask >> phi.color & 1)
    if isinstance(phi, Not):
        return not evaluate(phi.arg, mask)
    if isinstance(phi, And):
        return evaluate(phi.left, mask) and evaluate(phi.right, mask)
    if isinstance(phi, Or):
        return evaluate(phi.left, mask) or evaluate(phi.right, mask)
    raise TypeError("not an objective node: %r" % (phi,))


def colors_mentioned(phi):
    """Set of color ids occurring in ``phi``."""
    out = set()
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, Inf):
            out.add(node.color)
        elif isinstance(node, Not):
            stack.append(node.arg)
        elif isinstance(node, (And, Or)):
            stack.append(node.left)
            stack.append(node.right)
    return out


def check_colors(phi, table):
    for cid in colors_mentioned(phi):
        if cid >= len(table):
            raise ELError("formula mentions color id %d outside table %r" % (cid, table))


# ---------------------------------------------------------------------------
# Printing and parsing.  Precedence: ! > & > |; `->` is accepted on input
# and desugared to !l | r, so it never needs printing.

_PREC_OR, _PREC_AND, _PREC_NOT = 1, 2, 3


def format_formula(phi, table):
    """Round-trippable concrete syntax for ``phi``."""

    def go(node, prec):
        if isinstance(node, TrueFormula):
            return "true"
        if isinstance(node, FalseFormula):
            return "false"
        if isinstance(node, Inf):
            return "Inf %s" % table.name(node.color)
        if isinstance(node, Not):
            if isinstance(node.arg, Inf):
                return "Fin %s" % table.name(node.arg.color)
            return "!(%s)" % go(node.arg, 0)
        if isinstance(node, And):
            # Right operand gets one level more so left-folded parses match.
            s = "%s & %s" % (go(node.left, _PREC_AND), go(node.right, _PREC_AND + 1))
            return s if prec <= _PREC_AND else "(%s)" % s
        if isinstance(node, Or):
            s = "%s | %s" % (go(node.left, _PREC_OR), go(node.right, _PREC_OR + 1))
            return s if prec <= _PREC_OR else "(%s)" % s
        raise TypeError(node)

    return go(phi, 0)


_TOKEN_RE = re.compile(r"\s*(->|[()!&|]|[A-Za-z_][A-Za-z0-9_]*)")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ELSyntaxError("unexpected character %r" % text[pos], pos)
            break
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    tokens.append((None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, table):
        self.tokens = _tokenize(text)
        self.table = table
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, want):
        tok, pos = self.next()
        if tok != want:
            raise ELSyntaxError("expected %r, found %r" % (want, tok), pos)

    def parse(self):
        phi = self.implication()
        tok, pos = self.next()
        if tok is not None:
            raise ELSyntaxError("trailing input %r" % tok, pos)
        return phi

    def implication(self):
        left = self.disjunction()
        if self.peek() == "->":
            self.next()
            right = self.implication()
            return Or(Not(left), right)
        return left

    def disjunction(self):
        phi = self.conjunction()
        while self.peek() == "|":
            self.next()
            phi = Or(phi, self.conjunction())
        return phi

    def conjunction(self):
        phi = self.unary()
        while self.peek() == "&":
            self.next()
            phi = And(phi, self.unary())
        return phi

    def unary(self):
        tok, pos = self.next()
        if tok == "!":
            return Not(self.unary())
        if tok == "(":
            phi = self.implication()
            self.expect(")")
            return phi
        if tok == "true":
            return TRUE
        if tok == "false":
            return FALSE
        if tok in ("Inf", "Fin"):
            name, npos = self.next()
            if name is None or not _IDENT_RE.match(name) or name in _KEYWORDS:
                raise ELSyntaxError("expected color name after %s" % tok, npos)
            cid = self.table.id(name)
            return Inf(cid) if tok == "Inf" else Not(Inf(cid))
        raise ELSyntaxError("unexpected token %r" % (tok,), pos)


def parse_formula(text, table):
    """Parse the objective grammar; ``Fin c`` desugars to ``!Inf c``."""
    return _Parser(text, table).parse()


# ---------------------------------------------------------------------------
# Builders for the standard objective families.


def _fold(op, parts, empty):
    if not parts:
        return empty
    phi = parts[0]
    for p in parts[1:]:
        phi = op(phi, p)
    return phi


def _check_pairs(table, pairs):
    if not pairs:
        raise ELError("empty pair list")
    seen = []
    for x, y in pairs:
        seen += [table.id(x), table.id(y)]
    if len(set(seen)) != len(seen):
        raise ELError("duplicate colors in pairs: %r" % (pairs,))


def buchi(table, f):
    return Inf(table.id(f))


def generalized_buchi(table, names):
    if not names:
        raise ELError("empty color list")
    ids = [table.id(n) for n in names]
    if len(set(ids)) != len(ids):
        raise ELError("duplicate colors: %r" % (names,))
    return _fold(And, [Inf(i) for i in ids], TRUE)


def parity(table, names):
    """Max-even parity over priorities ``p_1 <= ... <= p_2k`` given low to high."""
    ids = [table.id(n) for n in names]
    if not ids or len(ids) % 2 != 0:
        raise ELError("parity needs a nonempty even-length priority list")
    if len(set(ids)) != len(ids):
        raise ELError("duplicate colors: %r" % (names,))
    disjuncts = []
    for i in range(1, len(ids) + 1):
        if i % 2 == 0:
            term = _fold(And, [Inf(ids[i - 1])] + [fin(ids[j - 1]) for j in range(i + 1, len(ids) + 1)], TRUE)
            disjuncts.append(term)
    return _fold(Or, disjuncts, FALSE)


def rabin(table, pairs):
    """Disjunction of ``Inf e & Fin f`` over pairs ``(e, f)``."""
    _check_pairs(table, pairs)
    return _fold(Or, [And(Inf(table.id(e)), fin(table.id(f))) for e, f in pairs], FALSE)


def streett(table, pairs):
    """Conjunction of ``Inf r -> Inf g`` over pairs ``(r, g)``, desugared."""
    _check_pairs(table, pairs)
    return _fold(And, [Or(fin(table.id(r)), Inf(table.id(g))) for r, g in pairs], TRUE)


def muller(table, family):
    """The infinite-visit set is exactly one of the given color sets."""
    masks = []
    for group in family:
        masks.append(group if isinstance(group, int) else table.mask(*group))
    disjuncts = []
    for m in masks:
        lits = []
        for cid in range(len(table)):
            lits.append(Inf(cid) if m >> cid & 1 else fin(cid))
        disjuncts.append(_fold(And, lits, TRUE))
    return _fold(Or, disjuncts, FALSE)


def even_cardinality_muller(table):
    """Muller objective: the number of infinitely visited colors is even."""
    family = [m for m in range(table.full_mask + 1) if bin(m).count("1") % 2 == 0]
    return muller(table, family)


def random_formula(rng, table, max_depth):
    """Seeded random objective of bounded depth mentioning table colors."""
    if max_depth <= 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.05:
            return TRUE
        if r < 0.1:
            return FALSE
        return Inf(rng.randrange(len(table)))
    r = rng.random()
    if r < 0.25:
        return Not(random_formula(rng, table, max_depth - 1))
    left = random_formula(rng, table, max_depth - 1)
    right = random_formula(rng, table, max_depth - 1)
    return And(left, right) if r < 0.625 else Or(left, right)
