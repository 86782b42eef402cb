"""Reactive synthesis for conjunctions of a safety formula and a
liveness condition over infinite-occurrence of letter predicates.

The safety part becomes a deterministic symbolic safety automaton; its
subset variables join the letter variables as the game state, with the
system choosing outputs and next subsets (the latter forced by the
transition assertion) and the environment choosing inputs.  The
liveness part maps each distinct predicate under GF / FG to a color
whose membership assertion reads the current letter, and the game is
solved by the generic fixpoint solver over diagram assertions, with the
one-step controllable predecessor quantifying primed inputs universally
and primed outputs and subset variables existentially.

Controllers are extracted from the explicit expansion of the winning
sub-arena: states pair a reachable subset with the position in the
objective's tree where the last consumed letter anchored (vertex plus
child slot, which seeds the round-robin through winning branches), and
moves follow the certified signature rules of the strategy module.
"""

import re
from dataclasses import dataclass

from . import el, ltl
from .dd import Manager
from .fixpoint import build_equations, solve, solve_game
from .games import Arena, ELGame, EXISTENTIAL, UNIVERSAL
from .ltl import (Ap, AndOp, Finally, Globally, Implies, NotOp, OrOp,
                  check_safety, determinize_symbolic, nfa_from_safety)
from .strategy import _Extractor
from .zielonka import ZielonkaTree


class SynthesisError(ValueError):
    pass


class NotELFragment(SynthesisError):
    def __init__(self, node):
        super().__init__("not in the liveness fragment: %r" % (node,))


@dataclass
class SynthesisProblem:
    safety: ltl.LTLFormula
    liveness: ltl.LTLFormula
    inputs: tuple
    outputs: tuple

    def __post_init__(self):
        self.inputs = tuple(self.inputs)
        self.outputs = tuple(self.outputs)
        if not self.inputs or not self.outputs:
            raise SynthesisError("inputs and outputs must both be nonempty")
        if set(self.inputs) & set(self.outputs):
            raise SynthesisError("inputs and outputs must be disjoint")
        mentioned = ltl.atoms(self.safety) | ltl.atoms(self.liveness)
        extra = mentioned - set(self.inputs) - set(self.outputs)
        if extra:
            raise SynthesisError("atoms outside the declared alphabet: %s"
                                 % ", ".join(sorted(extra)))


def problem_from_strings(safety, liveness, inputs, outputs):
    return SynthesisProblem(ltl.parse_ltl(safety), ltl.parse_ltl(liveness),
                            tuple(inputs), tuple(outputs))


def _nnf_prop(phi, negate=False):
    if isinstance(phi, ltl.Tru):
        return ltl.LTL_FALSE if negate else ltl.LTL_TRUE
    if isinstance(phi, ltl.Fls):
        return ltl.LTL_TRUE if negate else ltl.LTL_FALSE
    if isinstance(phi, Ap):
        return NotOp(phi) if negate else phi
    if isinstance(phi, NotOp):
        return _nnf_prop(phi.arg, not negate)
    if isinstance(phi, AndOp):
        op = OrOp if negate else AndOp
        return op(_nnf_prop(phi.left, negate), _nnf_prop(phi.right, negate))
    if isinstance(phi, OrOp):
        op = AndOp if negate else OrOp
        return op(_nnf_prop(phi.left, negate), _nnf_prop(phi.right, negate))
    if isinstance(phi, Implies):
        if negate:
            return AndOp(_nnf_prop(phi.left), _nnf_prop(phi.right, True))
        return OrOp(_nnf_prop(phi.left, True), _nnf_prop(phi.right))
    raise NotELFragment(phi)


def colors_of(liveness):
    """Color table and per-color letter predicates of a liveness formula.

    One color per distinct predicate under GF / FG (after pushing
    negations in the predicate); the formula itself becomes a Boolean
    combination over "color occurs infinitely often" atoms.
    """
    props = []
    index = {}

    def color_id(prop):
        key = repr(prop)
        if key not in index:
            index[key] = len(props)
            props.append(prop)
        return index[key]

    def walk(node, positive):
        if isinstance(node, AndOp):
            op = el.And if positive else el.Or
            return op(walk(node.left, positive), walk(node.right, positive))
        if isinstance(node, OrOp):
            op = el.Or if positive else el.And
            return op(walk(node.left, positive), walk(node.right, positive))
        if isinstance(node, Implies):
            if positive:
                return el.Or(walk(node.left, False), walk(node.right, True))
            return el.And(walk(node.left, True), walk(node.right, False))
        if isinstance(node, NotOp):
            return walk(node.arg, not positive)
        if isinstance(node, Globally) and isinstance(node.arg, Finally):
            prop = _nnf_prop(node.arg.arg)
            if not ltl.is_propositional(node.arg.arg):
                raise NotELFragment(node)
            cid = color_id(prop)
            return el.Inf(cid) if positive else el.fin(cid)
        if isinstance(node, Finally) and isinstance(node.arg, Globally):
            if not ltl.is_propositional(node.arg.arg):
                raise NotELFragment(node)
            prop = _nnf_prop(node.arg.arg, negate=True)
            cid = color_id(prop)
            return el.fin(cid) if positive else el.Inf(cid)
        if isinstance(node, ltl.Tru):
            return el.TRUE if positive else el.FALSE
        if isinstance(node, ltl.Fls):
            return el.FALSE if positive else el.TRUE
        raise NotELFragment(node)

    formula = walk(liveness, True)
    names = []
    used = set()
    for i, prop in enumerate(props):
        if isinstance(prop, Ap) and re.match(r"[a-z][A-Za-z0-9_]*$", prop.name) \
                and prop.name not in used:
            name = prop.name
        else:
            name = "k%d" % i
            while name in used:
                name = "_" + name
        used.add(name)
        names.append(name)
    table = el.ColorTable(names)
    return formula, table, tuple(props)


@dataclass
class SymbolicGameStructure:
    manager: Manager
    dsa: object
    inputs: tuple
    outputs: tuple
    state_vars: tuple
    theta: object              # Assertion over the subset variables
    rho: object                # Assertion over (V, V', AP)
    el_formula: object         # objective over the color table
    color_table: object
    color_props: tuple         # per color: propositional letter predicate
    color_assertions: tuple    # per color: Assertion over the letter block

    @property
    def ap(self):
        return self.inputs + self.outputs

    def letter_colors(self, letter):
        """Color mask of one letter (set of true APs)."""
        mask = 0
        for cid, prop in enumerate(self.color_props):
            if ltl.eval_propositional(prop, letter):
                mask |= 1 << cid
        return mask


def build_game(problem):
    nnf = check_safety(problem.safety)
    nfa = nfa_from_safety(nnf)
    formula, table, props = colors_of(problem.liveness)

    def declare_letters(manager, ap):
        for name in problem.inputs:
            manager.declare_pair(name, name + "'", "input")
        for name in problem.outputs:
            manager.declare_pair(name, name + "'", "output")

    dsa = determinize_symbolic(nfa, Manager(), declare_letters=declare_letters)
    m = dsa.manager

    def prop_assert(phi):
        if isinstance(phi, ltl.Tru):
            return m.true
        if isinstance(phi, ltl.Fls):
            return m.false
        if isinstance(phi, Ap):
            return m.var(phi.name)
        if isinstance(phi, NotOp):
            return ~prop_assert(phi.arg)
        if isinstance(phi, AndOp):
            return prop_assert(phi.left) & prop_assert(phi.right)
        if isinstance(phi, OrOp):
            return prop_assert(phi.left) | prop_assert(phi.right)
        if isinstance(phi, Implies):
            return prop_assert(phi.left).implies(prop_assert(phi.right))
        raise ltl.LTLError("not propositional: %r" % (phi,))

    return SymbolicGameStructure(
        manager=m, dsa=dsa, inputs=problem.inputs, outputs=problem.outputs,
        state_vars=dsa.state_vars, theta=dsa.theta0,
        rho=dsa.trans, el_formula=formula, color_table=table,
        color_props=props,
        color_assertions=tuple(prop_assert(p) for p in props))


def symbolic_cpre(game, target):
    """Nodes where every next input admits outputs and a subset step
    keeping the successor in the target."""
    m = game.manager
    primed = m.rename_partners(target)
    inner = game.rho & primed
    primed_inputs = [n + "'" for n in game.inputs]
    primed_rest = ([n + "'" for n in game.outputs]
                   + [n + "'" for n in game.state_vars])
    return m.forall(primed_inputs, m.exists(primed_rest, inner))


class SymbolicBackend:
    """Assertion-set backend for the generic fixpoint solver."""

    def __init__(self, game):
        self.game = game
        self.manager = game.manager

    def bottom(self):
        return self.manager.false

    def top(self):
        return self.manager.true

    def union(self, a, b):
        return a | b

    def intersect(self, a, b):
        return a & b

    def equal(self, a, b):
        return a == b

    def cpre(self, target):
        return symbolic_cpre(self.game, target)

    def guard(self, subset_mask, escape_mask):
        m = self.manager
        inside = m.true
        for cid, ca in enumerate(self.game.color_assertions):
            if not subset_mask >> cid & 1:
                inside = inside & ~ca
        if escape_mask is None:
            return inside
        escapes = m.false
        for cid, ca in enumerate(self.game.color_assertions):
            if not escape_mask >> cid & 1:
                escapes = escapes | ca
        return inside & escapes


def solve_symbolic(game):
    tree = ZielonkaTree(game.el_formula, game.color_table)
    system = build_equations(tree)
    result = solve(system, SymbolicBackend(game))
    return result.winning(), tree, result


def is_won(game, win):
    m = game.manager
    rest = list(game.outputs) + list(game.state_vars)
    return m.forall(list(game.inputs), m.exists(rest, game.theta & win)).is_true()


# ---------------------------------------------------------------------------
# Explicit expansion (oracle cross-checks and controller extraction).

DEAD_COLOR = "stuck"


@dataclass
class ExplicitExpansion:
    game: object               # the symbolic game it expands
    elgame: ELGame
    kinds: list                # per node: ("full", subset, letter) or
                               # ("mid", subset, letter, inp) or ("sink",)
    index: dict                # kind tuple -> node id
    mid_rep: dict              # (next subset, input) -> representative mid id
    initial_subset: int


def _letters(names):
    names = list(names)
    for bits in range(1 << len(names)):
        yield frozenset(n for i, n in enumerate(names) if bits >> i & 1)


def expand_explicit(game):
    """Explicit arena of the symbolic game: full nodes carry (subset,
    letter), intermediate nodes fix the next input, and a sink absorbs
    positions where the subset has died (its fresh color is required to
    occur only finitely often, so entering it loses)."""
    dsa = game.dsa
    table = game.color_table
    xtable = el.ColorTable(tuple(table.names) + (DEAD_COLOR,))
    dead_bit = 1 << len(table)
    objective = el.And(game.el_formula, el.fin(len(table)))

    init_bits = dsa.initial_bits()
    letters = list(_letters(game.ap))
    inputs = list(_letters(game.inputs))
    outputs = list(_letters(game.outputs))

    kinds = [("sink",)]
    index = {("sink",): 0}
    owner = [UNIVERSAL]
    colors = [dead_bit]
    succ = [[0]]
    mid_rep = {}

    def intern(kind, node_owner, node_colors):
        if kind in index:
            return index[kind]
        index[kind] = len(kinds)
        kinds.append(kind)
        owner.append(node_owner)
        colors.append(node_colors)
        succ.append([])
        return index[kind]

    queue = []
    for letter in letters:
        vid = intern(("full", init_bits, letter), UNIVERSAL,
                     game.letter_colors(letter))
        queue.append(vid)
    head = 0
    seen = set(queue)
    while head < len(queue):
        vid = queue[head]
        head += 1
        kind = kinds[vid]
        if kind[0] == "full":
            _, bits, letter = kind
            nxt = dsa.step_bits(bits, letter) if bits else 0
            for inp in inputs:
                mid = intern(("mid", bits, letter, inp), EXISTENTIAL, 0)
                mid_rep.setdefault((nxt, inp), mid)
                succ[vid].append(mid)
                if mid not in seen:
                    seen.add(mid)
                    queue.append(mid)
        else:
            _, bits, letter, inp = kind
            if bits == 0:
                # the subset died one step earlier: no legal output move
                succ[vid].append(0)
                continue
            nxt = dsa.step_bits(bits, letter)
            for out in outputs:
                nletter = frozenset(inp | out)
                w = intern(("full", nxt, nletter), UNIVERSAL,
                           game.letter_colors(nletter))
                succ[vid].append(w)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)

    arena = Arena(owner, succ, colors)
    elgame = ELGame(arena, xtable, objective)
    return ExplicitExpansion(game, elgame, kinds, index, mid_rep, init_bits)


def cross_check_symbolic_vs_explicit(game, win):
    """Compare the symbolic winning assertion with the explicitly solved
    expansion on every reachable full node; returns the explicit data."""
    exp = expand_explicit(game)
    ewin, etree, eresult = solve_game(exp.elgame)
    m = game.manager
    for vid, kind in enumerate(exp.kinds):
        if kind[0] != "full":
            continue
        _, bits, letter = kind
        values = {}
        for i, name in enumerate(game.state_vars):
            values[name] = bool(bits >> i & 1)
        for name in game.ap:
            values[name] = name in letter
        symbolic = m.eval(win, values)
        explicit = bool(ewin >> vid & 1)
        if symbolic != explicit:
            raise AssertionError(
                "winner mismatch at subset=%x letter=%s: symbolic=%s explicit=%s"
                % (bits, sorted(letter), symbolic, explicit))
    return exp, ewin, etree, eresult


# ---------------------------------------------------------------------------
# Controller extraction.


@dataclass
class MealyController:
    inputs: tuple
    outputs: tuple
    states: list               # per id: (subset bits, anchor vertex, slot)
    init: dict                 # input frozenset -> (output frozenset, state id)
    trans: dict                # (state id, input frozenset) -> (output, state id)

    def __len__(self):
        return len(self.states)

    def run(self, input_sets):
        """Letters produced against the given input sequence."""
        letters = []
        state = None
        for step, inp in enumerate(input_sets):
            inp = frozenset(inp)
            if step == 0:
                out, state = self.init[inp]
            else:
                out, state = self.trans[(state, inp)]
            letters.append(inp | out)
        return letters

    def state_trace(self, input_sets):
        trace = []
        state = None
        for step, inp in enumerate(input_sets):
            inp = frozenset(inp)
            if step == 0:
                _, state = self.init[inp]
            else:
                _, state = self.trans[(state, inp)]
            trace.append(state)
        return trace

    def to_text(self):
        def cube(names, chosen):
            return "".join(("" if n in chosen else "!") + n for n in names) \
                or "-"
        lines = ["mealy 1"]
        lines.append("inputs %s" % " ".join(self.inputs))
        lines.append("outputs %s" % " ".join(self.outputs))
        for i, (bits, anchor, slot) in enumerate(self.states):
            lines.append("state %d subset=%x anchor=%d slot=%d"
                         % (i, bits, anchor, slot))
        for inp in sorted(self.init, key=sorted):
            out, q = self.init[inp]
            lines.append("init %s -> %s %d"
                         % (cube(self.inputs, inp), cube(self.outputs, out), q))
        for (q, inp) in sorted(self.trans, key=lambda k: (k[0], sorted(k[1]))):
            out, q2 = self.trans[(q, inp)]
            lines.append("on %d %s -> %s %d"
                         % (q, cube(self.inputs, inp), cube(self.outputs, out), q2))
        return "\n".join(lines) + "\n"


def extract_controller(game, expansion=None, explicit=None):
    """Winning controller from the certified explicit extraction.

    States are (reachable subset, anchor vertex, child slot): the anchor
    is where the last consumed letter attached in the objective tree and
    the slot remembers which child the memory sat under, seeding the
    round-robin over winning branches.
    """
    if expansion is None:
        expansion = expand_explicit(game)
    if explicit is None:
        explicit = solve_game(expansion.elgame)
    ewin, etree, eresult = explicit
    exp = expansion
    arena = exp.elgame.arena
    ex = _Extractor(exp.elgame, etree, eresult)
    rmaps = ex.ranked

    def sig_of(vid, vertex):
        return rmaps[vertex].get(vid)

    def consume(vid, leaf):
        """Anchor of a full node against memory ``leaf``, as (anchor, slot)."""
        anchor = etree.anchor(leaf, arena.colors[vid])
        if etree.is_leaf(anchor):
            return anchor, -1
        child = etree.child_towards(anchor, leaf)
        return anchor, etree.children[anchor].index(child)

    def descend_from(anchor, slot, mid_vid):
        """Memory leaf after the pivot, steered by the entered node."""
        tree = etree
        cur = anchor
        first = True
        while not tree.is_leaf(cur):
            kids = tree.children[cur]
            if not tree.winning[cur]:
                cur = ex.choice(mid_vid, cur)
            elif first and slot >= 0:
                cur = kids[(slot + 1) % len(kids)]
            else:
                cur = kids[0]
            first = False
        return cur

    states = []
    state_index = {}

    def intern(bits, anchor, slot):
        key = (bits, anchor, slot)
        if key not in state_index:
            state_index[key] = len(states)
            states.append(key)
        return state_index[key]

    init = {}
    queue = []
    for inp in _letters(game.inputs):
        best = None
        for out in _letters(game.outputs):
            letter = frozenset(inp | out)
            vid = exp.index.get(("full", exp.initial_subset, letter))
            if vid is None or not ewin >> vid & 1:
                continue
            sig = sig_of(vid, etree.root)
            key = (sig, sorted(out))
            if best is None or key < best[0]:
                best = (key, out, vid)
        if best is None:
            raise SynthesisError("no winning first output for input %s"
                                 % sorted(inp))
        _, out, vid = best
        leaf = ex.initial_leaf(vid)
        anchor, slot = consume(vid, leaf)
        letter = frozenset(inp | out)
        nxt = game.dsa.step_bits(exp.initial_subset, letter)
        q = intern(nxt, anchor, slot)
        init[frozenset(inp)] = (frozenset(out), q)
        queue.append(q)

    trans = {}
    done = set()
    while queue:
        q = queue.pop(0)
        if q in done:
            continue
        done.add(q)
        bits, anchor, slot = states[q]
        for inp in _letters(game.inputs):
            mid = exp.mid_rep.get((bits, frozenset(inp)))
            if mid is None:
                raise SynthesisError(
                    "controller reached an unexplored subset %x" % bits)
            leaf = descend_from(anchor, slot, mid)
            w = ex.pick_move(mid, leaf)
            wkind = exp.kinds[w]
            assert wkind[0] == "full"
            _, wbits, wletter = wkind
            out = frozenset(wletter & set(game.outputs))
            anchor2, slot2 = consume(w, leaf)
            nxt = game.dsa.step_bits(wbits, wletter)
            q2 = intern(nxt, anchor2, slot2)
            trans[(q, frozenset(inp))] = (out, q2)
            if q2 not in done:
                queue.append(q2)
    return MealyController(tuple(game.inputs), tuple(game.outputs),
                           states, init, trans)


# ---------------------------------------------------------------------------
# Top-level driver.


@dataclass
class SynthesisResult:
    realizable: bool
    game: SymbolicGameStructure
    win: object
    tree: object
    controller: object = None
    losing_region: object = None


def solve_synthesis(problem, with_controller=True, expand_check=False):
    game = build_game(problem)
    win, tree, _ = solve_symbolic(game)
    if expand_check:
        cross_check_symbolic_vs_explicit(game, win)
    if not is_won(game, win):
        return SynthesisResult(False, game, win, tree, losing_region=~win)
    controller = extract_controller(game) if with_controller else None
    return SynthesisResult(True, game, win, tree, controller=controller)
