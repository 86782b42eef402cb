"""Symbolic assertions over named Boolean variables.

A :class:`Manager` owns an ordered variable table (each variable tagged
with a block and optionally paired with a primed partner) and wraps
diagram handles in :class:`Assertion` values.  Handles are canonical,
so ``==`` on assertions of one manager is semantic equality.

The diagram engine itself lives in a core module with two builds: the
Cython extension ``elgames._bddcore`` and the pure-Python fallback
``elgames._bddcore_py``.  The compiled core is preferred when it is
importable; set ``ELGAMES_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("ELGAMES_PURE_PYTHON"):
    from . import _bddcore_py as _core_mod
else:
    try:
        from . import _bddcore as _core_mod
    except ImportError:
        from . import _bddcore_py as _core_mod

from . import _bddcore_py as _pure_core_mod

CORE_IMPL = _core_mod.IMPL_NAME


class BddError(ValueError):
    """Manager misuse: mixed managers, unknown names, bad blocks."""


class Assertion:
    """Boolean predicate over a manager's variables (immutable handle)."""

    __slots__ = ("manager", "handle")

    def __init__(self, manager, handle):
        self.manager = manager
        self.handle = handle

    def _peer(self, other):
        if not isinstance(other, Assertion) or other.manager is not self.manager:
            raise BddError("assertions belong to different managers")
        return other.handle

    def __and__(self, other):
        return Assertion(self.manager,
                         self.manager.core.and_(self.handle, self._peer(other)))

    def __or__(self, other):
        return Assertion(self.manager,
                         self.manager.core.or_(self.handle, self._peer(other)))

    def __xor__(self, other):
        return Assertion(self.manager,
                         self.manager.core.xor_(self.handle, self._peer(other)))

    def __invert__(self):
        return Assertion(self.manager, self.manager.core.not_(self.handle))

    def implies(self, other):
        return Assertion(self.manager,
                         self.manager.core.implies_(self.handle, self._peer(other)))

    def iff(self, other):
        return Assertion(self.manager,
                         self.manager.core.iff_(self.handle, self._peer(other)))

    def __eq__(self, other):
        return (isinstance(other, Assertion)
                and other.manager is self.manager
                and other.handle == self.handle)

    def __hash__(self):
        return hash((id(self.manager), self.handle))

    def __bool__(self):
        raise TypeError("ambiguous truth value; use is_true()/is_false()")

    def is_false(self):
        return self.handle == 0

    def is_true(self):
        return self.handle == 1

    def __repr__(self):
        return "<Assertion %d over %s>" % (self.handle, self.manager.describe())


class Manager:
    """Variable table plus a diagram core.

    Variables are declared once, in order; the declaration order is the
    diagram order.  ``declare_pair`` adds a variable and its primed
    partner at adjacent levels, which keeps transition relations small.
    """

    def __init__(self, pure=False):
        self.core = (_pure_core_mod if pure else _core_mod).Core()
        self.names = []
        self._levels = {}
        self._blocks = {}
        self._partner = {}

    def describe(self):
        return "vars=%d impl=%s" % (len(self.names), type(self.core).__module__)

    # -- declarations

    def declare(self, name, block):
        if name in self._levels:
            raise BddError("variable %r already declared" % name)
        level = len(self.names)
        self.names.append(name)
        self._levels[name] = level
        self._blocks.setdefault(block, []).append(level)
        return self.var(name)

    def declare_pair(self, name, primed, block, primed_block=None):
        self.declare(name, block)
        self.declare(primed, primed_block if primed_block is not None else block + "'")
        a, b = self._levels[name], self._levels[primed]
        self._partner[a] = b
        self._partner[b] = a

    def level(self, name):
        try:
            return self._levels[name]
        except KeyError:
            raise BddError("unknown variable %r" % name) from None

    def block_levels(self, block):
        try:
            return tuple(self._blocks[block])
        except KeyError:
            raise BddError("unknown block %r" % block) from None

    def block_names(self, block):
        return tuple(self.names[level] for level in self.block_levels(block))

    # -- constants and atoms

    @property
    def true(self):
        return Assertion(self, 1)

    @property
    def false(self):
        return Assertion(self, 0)

    def var(self, name):
        return Assertion(self, self.core.var_node(self.level(name)))

    def cube(self, values):
        """Conjunction of literals from a name -> bool mapping."""
        out = self.true
        for name in sorted(values, key=self.level):
            lit = self.var(name)
            out = out & (lit if values[name] else ~lit)
        return out

    # -- operations

    def ite(self, c, t, e):
        c._peer(t)
        c._peer(e)
        return Assertion(self, self.core.ite(c.handle, t.handle, e.handle))

    def conj(self, assertions):
        out = self.true
        for a in assertions:
            out = out & a
        return out

    def disj(self, assertions):
        out = self.false
        for a in assertions:
            out = out | a
        return out

    def _level_set(self, what):
        if isinstance(what, str):
            return self.block_levels(what)
        return tuple(self.level(n) for n in what)

    def exists(self, what, a):
        return Assertion(self, self.core.exists(a.handle, self._level_set(what)))

    def forall(self, what, a):
        return Assertion(self, self.core.forall(a.handle, self._level_set(what)))

    def rename_partners(self, a):
        """Swap every variable with its primed partner."""
        perm = {}
        for level in self.core.support(a.handle):
            if level not in self._partner:
                raise BddError("variable %r has no partner" % self.names[level])
            perm[level] = self._partner[level]
        return Assertion(self, self.core.rename(a.handle, perm))

    def restrict(self, a, name, value):
        return Assertion(self, self.core.restrict(a.handle, self.level(name), value))

    def support_names(self, a):
        return tuple(self.names[level] for level in self.core.support(a.handle))

    def count_sat(self, a, block):
        """Satisfying assignments of the block's variables, after
        existentially abstracting everything else."""
        levels = self.block_levels(block)
        others = [lv for lv in range(len(self.names)) if lv not in set(levels)]
        g = self.core.exists(a.handle, others)
        return self.core.satcount(g, levels)

    def pick_witness(self, a, block):
        """One block assignment (complete name -> bool dict) consistent
        with the assertion; unconstrained variables default to False."""
        if a.handle == 0:
            raise BddError("cannot pick a witness from an unsatisfiable assertion")
        levels = self.block_levels(block)
        others = [lv for lv in range(len(self.names)) if lv not in set(levels)]
        g = self.core.exists(a.handle, others)
        partial = self.core.pick(g)
        return {self.names[lv]: partial.get(lv, False) for lv in levels}

    def eval(self, a, values):
        """Truth of the assertion under a complete name -> bool mapping."""
        by_level = [False] * len(self.names)
        for name, val in values.items():
            by_level[self.level(name)] = bool(val)
        return self.core.eval(a.handle, by_level)

    def to_dot(self, a):
        core = self.core
        lines = ["digraph bdd {", '  t0 [shape=box label="0"];',
                 '  t1 [shape=box label="1"];']
        seen = set()
        stack = [a.handle]
        while stack:
            node = stack.pop()
            if node < 2 or node in seen:
                continue
            seen.add(node)
            lines.append('  n%d [label="%s"];' % (node, self.names[core.level_of(node)]))
            for child, style in ((core.low(node), "dashed"), (core.high(node), "solid")):
                target = "t%d" % child if child < 2 else "n%d" % child
                lines.append("  n%d -> %s [style=%s];" % (node, target, style))
                stack.append(child)
        lines.append("}")
        return "\n".join(lines) + "\n"
