"""Safety LTL: parsing, negation normal form, tableau automata, and
symbolic determinization by subset construction.

The safety fragment is negation normal form with temporal operators
limited to next, globally, and release.  A formula becomes a
nondeterministic safety automaton whose states are sets of obligations
due now; expanding a state discharges propositional constraints on the
current letter and schedules obligations for the next step.
Implications with a propositional antecedent are expanded by cases on
the antecedent, which keeps the automaton in the natural shape (a
deferred promise is only taken where its trigger holds).

Determinization is the subset construction expressed symbolically: one
Boolean state variable per automaton state, an exactly-initial cube,
and a transition assertion of biconditionals plus the requirement that
the tracked subset is nonempty (a run dies when it empties).  The
subset space is never enumerated; reachability and counting go through
the diagram manager.

Everything is exact on ultimately periodic words, which is what the
language-agreement tests use.
"""

import re
from dataclasses import dataclass

from .dd import Manager


class LTLError(ValueError):
    pass


class LTLSyntaxError(LTLError):
    def __init__(self, message, position):
        super().__init__("%s (at column %d)" % (message, position + 1))
        self.position = position


class NotSafetyError(LTLError):
    def __init__(self, offending):
        super().__init__("not a safety formula: %s after normalization"
                         % offending)
        self.offending = offending


class LTLFormula:
    __slots__ = ()


@dataclass(frozen=True)
class Tru(LTLFormula):
    __slots__ = ()


@dataclass(frozen=True)
class Fls(LTLFormula):
    __slots__ = ()


@dataclass(frozen=True)
class Ap(LTLFormula):
    __slots__ = ("name",)
    name: str


@dataclass(frozen=True)
class NotOp(LTLFormula):
    __slots__ = ("arg",)
    arg: LTLFormula


@dataclass(frozen=True)
class AndOp(LTLFormula):
    __slots__ = ("left", "right")
    left: LTLFormula
    right: LTLFormula


@dataclass(frozen=True)
class OrOp(LTLFormula):
    __slots__ = ("left", "right")
    left: LTLFormula
    right: LTLFormula


@dataclass(frozen=True)
class Implies(LTLFormula):
    __slots__ = ("left", "right")
    left: LTLFormula
    right: LTLFormula


@dataclass(frozen=True)
class Next(LTLFormula):
    __slots__ = ("arg",)
    arg: LTLFormula


@dataclass(frozen=True)
class Finally(LTLFormula):
    __slots__ = ("arg",)
    arg: LTLFormula


@dataclass(frozen=True)
class Globally(LTLFormula):
    __slots__ = ("arg",)
    arg: LTLFormula


@dataclass(frozen=True)
class Until(LTLFormula):
    __slots__ = ("left", "right")
    left: LTLFormula
    right: LTLFormula


@dataclass(frozen=True)
class Release(LTLFormula):
    __slots__ = ("left", "right")
    left: LTLFormula
    right: LTLFormula


LTL_TRUE = Tru()
LTL_FALSE = Fls()


def atoms(phi):
    out = set()
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, Ap):
            out.add(node.name)
        elif isinstance(node, (NotOp, Next, Finally, Globally)):
            stack.append(node.arg)
        elif isinstance(node, (AndOp, OrOp, Implies, Until, Release)):
            stack.append(node.left)
            stack.append(node.right)
    return out


def is_propositional(phi):
    if isinstance(phi, (Tru, Fls, Ap)):
        return True
    if isinstance(phi, NotOp):
        return is_propositional(phi.arg)
    if isinstance(phi, (AndOp, OrOp, Implies)):
        return is_propositional(phi.left) and is_propositional(phi.right)
    return False


def eval_propositional(phi, letter):
    """Truth of a temporal-free formula on one letter (set of true APs)."""
    if isinstance(phi, Tru):
        return True
    if isinstance(phi, Fls):
        return False
    if isinstance(phi, Ap):
        return phi.name in letter
    if isinstance(phi, NotOp):
        return not eval_propositional(phi.arg, letter)
    if isinstance(phi, AndOp):
        return eval_propositional(phi.left, letter) and \
            eval_propositional(phi.right, letter)
    if isinstance(phi, OrOp):
        return eval_propositional(phi.left, letter) or \
            eval_propositional(phi.right, letter)
    if isinstance(phi, Implies):
        return (not eval_propositional(phi.left, letter)) or \
            eval_propositional(phi.right, letter)
    raise LTLError("not propositional: %r" % (phi,))


# ---------------------------------------------------------------------------
# Concrete syntax.

_TOKEN_RE = re.compile(r"\s*(->|[()!&|]|[A-Za-z_][A-Za-z0-9_]*)")
_KEYWORDS = {"true", "false", "X", "F", "G", "U", "R"}


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise LTLSyntaxError("unexpected character %r" % text[pos], pos)
            break
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    tokens.append((None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self):
        phi = self.implication()
        tok, pos = self.next()
        if tok is not None:
            raise LTLSyntaxError("trailing input %r" % tok, pos)
        return phi

    def implication(self):
        left = self.disjunction()
        if self.peek() == "->":
            self.next()
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        phi = self.conjunction()
        while self.peek() == "|":
            self.next()
            phi = OrOp(phi, self.conjunction())
        return phi

    def conjunction(self):
        phi = self.until()
        while self.peek() == "&":
            self.next()
            phi = AndOp(phi, self.until())
        return phi

    def until(self):
        phi = self.unary()
        if self.peek() in ("U", "R"):
            op, _ = self.next()
            rhs = self.until()
            return Until(phi, rhs) if op == "U" else Release(phi, rhs)
        return phi

    def unary(self):
        tok, pos = self.next()
        if tok == "!":
            return NotOp(self.unary())
        if tok == "X":
            return Next(self.unary())
        if tok == "F":
            return Finally(self.unary())
        if tok == "G":
            return Globally(self.unary())
        if tok == "(":
            phi = self.implication()
            got, gpos = self.next()
            if got != ")":
                raise LTLSyntaxError("expected ')'", gpos)
            return phi
        if tok == "true":
            return LTL_TRUE
        if tok == "false":
            return LTL_FALSE
        if tok is not None and tok not in _KEYWORDS and \
                re.match(r"[A-Za-z_][A-Za-z0-9_]*$", tok):
            return Ap(tok)
        raise LTLSyntaxError("unexpected token %r" % (tok,), pos)


def parse_ltl(text):
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Negation normal form and the safety check.


def to_nnf(phi, negate=False):
    """Push negations to atoms.  Implications whose antecedent is
    temporal-free are kept as nodes (the antecedent is propositional, so
    its polarity never buries a temporal negation); everything else
    rewrites through the usual dualities."""
    if isinstance(phi, Tru):
        return LTL_FALSE if negate else LTL_TRUE
    if isinstance(phi, Fls):
        return LTL_TRUE if negate else LTL_FALSE
    if isinstance(phi, Ap):
        return NotOp(phi) if negate else phi
    if isinstance(phi, NotOp):
        return to_nnf(phi.arg, not negate)
    if isinstance(phi, AndOp):
        if negate:
            return OrOp(to_nnf(phi.left, True), to_nnf(phi.right, True))
        return AndOp(to_nnf(phi.left), to_nnf(phi.right))
    if isinstance(phi, OrOp):
        if negate:
            return AndOp(to_nnf(phi.left, True), to_nnf(phi.right, True))
        return OrOp(to_nnf(phi.left), to_nnf(phi.right))
    if isinstance(phi, Implies):
        if is_propositional(phi.left):
            if negate:
                return AndOp(phi.left, to_nnf(phi.right, True))
            return Implies(phi.left, to_nnf(phi.right))
        if negate:
            return AndOp(to_nnf(phi.left), to_nnf(phi.right, True))
        return OrOp(to_nnf(phi.left, True), to_nnf(phi.right))
    if isinstance(phi, Next):
        return Next(to_nnf(phi.arg, negate))
    if isinstance(phi, Globally):
        if negate:
            return Finally(to_nnf(phi.arg, True))
        return Globally(to_nnf(phi.arg))
    if isinstance(phi, Finally):
        if negate:
            return Globally(to_nnf(phi.arg, True))
        return Finally(to_nnf(phi.arg))
    if isinstance(phi, Until):
        if negate:
            return Release(to_nnf(phi.left, True), to_nnf(phi.right, True))
        return Until(to_nnf(phi.left), to_nnf(phi.right))
    if isinstance(phi, Release):
        if negate:
            return Until(to_nnf(phi.left, True), to_nnf(phi.right, True))
        return Release(to_nnf(phi.left), to_nnf(phi.right))
    raise LTLError("unknown node %r" % (phi,))


def check_safety(phi):
    """NNF of ``phi`` if it falls into the safety fragment, else raise."""
    nnf = to_nnf(phi)

    def walk(node):
        if isinstance(node, (Tru, Fls, Ap)):
            return
        if isinstance(node, NotOp):
            if not isinstance(node.arg, Ap):
                raise NotSafetyError("!")
            return
        if isinstance(node, (Until, Finally)):
            raise NotSafetyError("U" if isinstance(node, Until) else "F")
        if isinstance(node, (AndOp, OrOp, Implies, Until, Release)):
            walk(node.left)
            walk(node.right)
            return
        if isinstance(node, (Next, Globally)):
            walk(node.arg)
            return
        raise LTLError("unknown node %r" % (node,))

    walk(nnf)
    return nnf


# ---------------------------------------------------------------------------
# Tableau construction of the nondeterministic safety automaton.


class SafetyNFA:
    """States are frozensets of obligations due now; transitions carry a
    propositional constraint on the current letter."""

    def __init__(self, states, initial, transitions, ap):
        self.states = states            # list of frozensets
        self.initial = initial          # state index
        self.transitions = transitions  # list per state of (constraint, target)
        self.ap = tuple(sorted(ap))

    def __len__(self):
        return len(self.states)

    def letters(self):
        names = self.ap
        for bits in range(1 << len(names)):
            yield frozenset(n for i, n in enumerate(names) if bits >> i & 1)

    def successors(self, state_id, letter):
        return sorted({t for c, t in self.transitions[state_id]
                       if eval_propositional(c, letter)})


def _normalize_state(formulas):
    """Flatten conjunctions; None marks an inconsistent (dead) state."""
    out = set()
    stack = list(formulas)
    while stack:
        f = stack.pop()
        if isinstance(f, Tru):
            continue
        if isinstance(f, Fls):
            return None
        if isinstance(f, AndOp):
            stack.append(f.left)
            stack.append(f.right)
        else:
            out.add(f)
    return frozenset(out)


def _expand(state):
    """Branches (constraint list, next obligation set) of one state."""
    branches = [([], [], list(state))]  # (constraints, next, todo)
    done = []
    while branches:
        constraints, nxt, todo = branches.pop()
        if not todo:
            done.append((constraints, nxt))
            continue
        f = todo[-1]
        rest = todo[:-1]
        if isinstance(f, Fls):
            continue
        if isinstance(f, Tru):
            branches.append((constraints, nxt, rest))
        elif is_propositional(f):
            branches.append((constraints + [f], nxt, rest))
        elif isinstance(f, AndOp):
            branches.append((constraints, nxt, rest + [f.left, f.right]))
        elif isinstance(f, Implies):
            # propositional antecedent: case split on the trigger
            branches.append((constraints + [NotOp(f.left)], nxt, rest))
            branches.append((constraints + [f.left], nxt, rest + [f.right]))
        elif isinstance(f, OrOp):
            branches.append((constraints, nxt, rest + [f.left]))
            branches.append((constraints, nxt, rest + [f.right]))
        elif isinstance(f, Next):
            branches.append((constraints, nxt + [f.arg], rest))
        elif isinstance(f, Globally):
            branches.append((constraints, nxt + [f], rest + [f.arg]))
        elif isinstance(f, Release):
            branches.append((constraints, nxt + [f], rest + [f.right]))
            branches.append((constraints, nxt, rest + [f.right, f.left]))
        else:
            raise LTLError("not a safety obligation: %r" % (f,))
    return done


def _constraint_formula(constraints):
    out = LTL_TRUE
    for c in constraints:
        out = c if isinstance(out, Tru) else AndOp(out, c)
    return out


def _satisfiable(constraint, ap):
    names = sorted(ap)
    for bits in range(1 << len(names)):
        letter = frozenset(n for i, n in enumerate(names) if bits >> i & 1)
        if eval_propositional(constraint, letter):
            return True
    return False


def nfa_from_safety(nnf):
    """Tableau automaton for a safety-fragment formula in NNF."""
    ap = atoms(nnf)
    initial = _normalize_state([nnf])
    if initial is None:
        # inconsistent right away: a single dead initial state
        return SafetyNFA([frozenset([LTL_FALSE])], 0, [[]], ap)
    index = {initial: 0}
    states = [initial]
    transitions = [None]
    queue = [initial]
    while queue:
        state = queue.pop(0)
        out = []
        seen_branches = set()
        for constraints, nxt in _expand(state):
            target = _normalize_state(nxt)
            if target is None:
                continue
            constraint = _constraint_formula(constraints)
            if not _satisfiable(constraint, ap):
                continue
            key = (repr(constraint), target)
            if key in seen_branches:
                continue
            seen_branches.add(key)
            if target not in index:
                index[target] = len(states)
                states.append(target)
                transitions.append(None)
                queue.append(target)
            out.append((constraint, index[target]))
        transitions[index[state]] = out

    # Iteratively drop dead-end states (keeping the initial state so the
    # automaton always has a subset to start from).
    alive = set(range(len(states)))
    changed = True
    while changed:
        changed = False
        for i in sorted(alive):
            if i == 0:
                continue
            if not any(t in alive for _, t in transitions[i]):
                alive.discard(i)
                changed = True
    order = [i for i in range(len(states)) if i in alive]
    remap = {old: new for new, old in enumerate(order)}
    new_states = [states[i] for i in order]
    new_transitions = []
    for i in order:
        new_transitions.append([(c, remap[t]) for c, t in transitions[i]
                                if t in alive])
    return SafetyNFA(new_states, remap[0], new_transitions, ap)


# ---------------------------------------------------------------------------
# Symbolic determinization.


@dataclass
class SymbolicSafetyAutomaton:
    manager: Manager
    state_vars: tuple      # variable name per NFA state
    ap: tuple              # atomic proposition names (unprimed manager vars)
    theta0: object         # Assertion: exactly-initial cube
    trans: object          # Assertion over (V, V', AP)
    rhs: tuple             # per state: Assertion giving the next-step bit
    nfa: SafetyNFA

    def initial_bits(self):
        return 1 << self.nfa.initial

    def step_bits(self, bits, letter):
        """Deterministic subset step under one letter; 0 is the dead subset."""
        values = {name: bool(bits >> i & 1)
                  for i, name in enumerate(self.state_vars)}
        for name in self.ap:
            values[name] = name in letter
        out = 0
        for q, rhs in enumerate(self.rhs):
            if self.manager.eval(rhs, values):
                out |= 1 << q
        return out


MAX_SUBSET_VARS = 64


def determinize_symbolic(nfa, manager=None, state_prefix="v", declare_letters=None,
                         max_states=MAX_SUBSET_VARS):
    """Subset construction as assertions; one state variable per NFA state.

    The manager (created fresh here unless given empty) is laid out with
    the state variables and their primed partners first, interleaved,
    then the letter variables.  ``declare_letters`` may be passed to
    control letter declaration (synthesis splits them into input and
    output blocks); the default declares every AP with a partner in
    block "letter".
    """
    if len(nfa) > max_states:
        raise LTLError("variable budget exceeded: %d automaton states > %d"
                       % (len(nfa), max_states))
    if manager is None:
        manager = Manager()
    if manager.names:
        raise LTLError("determinization needs a fresh manager")
    for i in range(len(nfa)):
        manager.declare_pair("%s%d" % (state_prefix, i),
                             "%s%d'" % (state_prefix, i), "state")
    if declare_letters is None:
        for name in nfa.ap:
            manager.declare_pair(name, name + "'", "letter")
    else:
        declare_letters(manager, nfa.ap)
    state_vars = tuple("%s%d" % (state_prefix, i) for i in range(len(nfa)))

    def prop_assert(phi):
        if isinstance(phi, Tru):
            return manager.true
        if isinstance(phi, Fls):
            return manager.false
        if isinstance(phi, Ap):
            return manager.var(phi.name)
        if isinstance(phi, NotOp):
            return ~prop_assert(phi.arg)
        if isinstance(phi, AndOp):
            return prop_assert(phi.left) & prop_assert(phi.right)
        if isinstance(phi, OrOp):
            return prop_assert(phi.left) | prop_assert(phi.right)
        if isinstance(phi, Implies):
            return prop_assert(phi.left).implies(prop_assert(phi.right))
        raise LTLError("not propositional: %r" % (phi,))

    theta0 = manager.cube({name: (i == nfa.initial)
                           for i, name in enumerate(state_vars)})
    rhs = []
    for q in range(len(nfa)):
        incoming = manager.false
        for p in range(len(nfa)):
            for constraint, t in nfa.transitions[p]:
                if t == q:
                    incoming = incoming | (manager.var(state_vars[p])
                                           & prop_assert(constraint))
        rhs.append(incoming)
    nonempty = manager.disj(manager.var(v) for v in state_vars)
    trans = nonempty
    for q in range(len(nfa)):
        primed = manager.var(state_vars[q] + "'")
        trans = trans & primed.iff(rhs[q])
    return SymbolicSafetyAutomaton(manager, state_vars, nfa.ap, theta0,
                                   trans, tuple(rhs), nfa)


def reachable_subsets(dsa):
    """Assertion over the state block: subsets reachable from the start."""
    m = dsa.manager
    letters = list(dsa.ap)
    unprimed = list(dsa.state_vars) + letters
    reach = dsa.theta0
    frontier = dsa.theta0
    while True:
        image = m.exists(unprimed, dsa.trans & frontier)
        image = m.rename_partners(image)
        grown = reach | image
        if grown == reach:
            return reach
        frontier = grown & ~reach
        reach = grown


def reachable_subset_count(dsa):
    """Number of reachable nonempty subsets of the determinization."""
    m = dsa.manager
    reach = reachable_subsets(dsa)
    nonempty = m.disj(m.var(v) for v in dsa.state_vars)
    return m.count_sat(reach & nonempty, "state")


# ---------------------------------------------------------------------------
# Exact checks on ultimately periodic words.


def eval_ltl_lasso(phi, prefix, loop):
    """Truth of an LTL formula on the word prefix . loop^omega."""
    if not loop:
        raise LTLError("lasso loop must be nonempty")
    letters = list(prefix) + list(loop)
    n = len(letters)
    start = len(prefix)

    def nxt(p):
        return p + 1 if p + 1 < n else start

    memo = {}

    def vec(node):
        found = memo.get(node)
        if found is not None:
            return found
        if isinstance(node, (Tru, Fls, Ap, NotOp, AndOp, OrOp, Implies)) \
                and is_propositional(node):
            out = [eval_propositional(node, letters[p]) for p in range(n)]
        elif isinstance(node, NotOp):
            sub = vec(node.arg)
            out = [not x for x in sub]
        elif isinstance(node, AndOp):
            a, b = vec(node.left), vec(node.right)
            out = [x and y for x, y in zip(a, b)]
        elif isinstance(node, OrOp):
            a, b = vec(node.left), vec(node.right)
            out = [x or y for x, y in zip(a, b)]
        elif isinstance(node, Implies):
            a, b = vec(node.left), vec(node.right)
            out = [(not x) or y for x, y in zip(a, b)]
        elif isinstance(node, Next):
            sub = vec(node.arg)
            out = [sub[nxt(p)] for p in range(n)]
        elif isinstance(node, (Until, Finally)):
            if isinstance(node, Until):
                a, b = vec(node.left), vec(node.right)
            else:
                a, b = [True] * n, vec(node.arg)
            out = [False] * n
            for _ in range(n + 1):
                new = [b[p] or (a[p] and out[nxt(p)]) for p in range(n)]
                if new == out:
                    break
                out = new
        elif isinstance(node, (Release, Globally)):
            if isinstance(node, Release):
                a, b = vec(node.left), vec(node.right)
            else:
                a, b = [False] * n, vec(node.arg)
            out = [True] * n
            for _ in range(n + 1):
                new = [b[p] and (a[p] or out[nxt(p)]) for p in range(n)]
                if new == out:
                    break
                out = new
        else:
            raise LTLError("unknown node %r" % (node,))
        memo[node] = out
        return out

    return vec(phi)[0]


def nfa_accepts_lasso(nfa, prefix, loop):
    """Whether some infinite run exists on the ultimately periodic word."""
    letters = list(prefix) + list(loop)
    n = len(letters)
    start = len(prefix)

    def nxt(p):
        return p + 1 if p + 1 < n else start

    reachable = {(nfa.initial, 0)}
    queue = [(nfa.initial, 0)]
    edges = {}
    while queue:
        s, p = queue.pop()
        targets = [(t, nxt(p)) for t in nfa.successors(s, letters[p])]
        edges[(s, p)] = targets
        for node in targets:
            if node not in reachable:
                reachable.add(node)
                queue.append(node)
    # prune dead ends; anything left can be extended forever
    alive = set(reachable)
    changed = True
    while changed:
        changed = False
        for node in list(alive):
            if not any(t in alive for t in edges[node]):
                alive.discard(node)
                changed = True
    return bool(alive)


def dsa_accepts_lasso(dsa, prefix, loop):
    """Whether the deterministic symbolic automaton runs forever."""
    letters = list(prefix) + list(loop)
    n = len(letters)
    start = len(prefix)
    bits = dsa.initial_bits()
    seen = set()
    p = 0
    while True:
        if bits == 0:
            return False
        if p >= start:
            key = (bits, p)
            if key in seen:
                return True
            seen.add(key)
        bits = dsa.step_bits(bits, letters[p])
        p = p + 1 if p + 1 < n else start
