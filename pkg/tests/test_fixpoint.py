import random

from elgames import el
from elgames.fixpoint import (ExplicitBackend, build_equations, format_equations,
                              solve, solve_game)
from elgames.games import Arena, ELGame, UNIVERSAL, dual_game, random_game
from elgames.oracles import solve_el_via_reduction
from elgames.zielonka import ZielonkaTree

from test_el import example_objective, ABCD


def guard_accepts(term, colors):
    _, sub, esc = term
    if colors & ~sub:
        return False
    return esc is None or bool(colors & ~esc)


def test_buchi_equations_match_known_system():
    table = el.ColorTable(["f"])
    tree = ZielonkaTree(el.buchi(table, "f"), table)
    system = build_equations(tree)
    root, leaf = system.equations
    assert not root.lfp and root.op == "inter" and root.children == (1,)
    assert leaf.lfp and leaf.op == "attract"
    assert [t[0] for t in leaf.terms] == [0, 1]
    # Ancestor term admits exactly the f-colored nodes, self term the rest.
    assert guard_accepts(leaf.terms[0], table.mask("f"))
    assert not guard_accepts(leaf.terms[0], 0)
    assert guard_accepts(leaf.terms[1], 0)
    assert not guard_accepts(leaf.terms[1], table.mask("f"))


def test_generalized_buchi_equations():
    names = ["f1", "f2", "f3"]
    table = el.ColorTable(names)
    tree = ZielonkaTree(el.generalized_buchi(table, names), table)
    system = build_equations(tree)
    root = system.equations[tree.root]
    assert not root.lfp and root.op == "inter"
    assert set(root.children) == set(tree.children[tree.root])
    for child in tree.children[tree.root]:
        eq = system.equations[child]
        assert eq.lfp and eq.op == "attract"
        assert [t[0] for t in eq.terms] == [tree.root, child]
        fi = table.full_mask & ~tree.label[child]
        for colors in range(table.full_mask + 1):
            assert guard_accepts(eq.terms[0], colors) == bool(colors & fi)
            assert guard_accepts(eq.terms[1], colors) == (not colors & fi)


def test_branching_objective_equations_match_displayed_system():
    tree = ZielonkaTree(example_objective(), ABCD)
    system = build_equations(tree)
    m = ABCD.mask

    def v(*names):
        return tree.vertex_with_label(m(*names))

    def eq(*names):
        return system.equations[v(*names)]

    # Internal vertices: polarity and child variables.
    root = eq("a", "b", "c", "d")
    assert root.lfp and root.op == "union"
    assert set(root.children) == {v("a", "b", "c"), v("b", "c", "d")}
    e2 = eq("a", "b", "c")
    assert not e2.lfp and e2.op == "inter"
    assert set(e2.children) == {v("a", "b"), v("a", "c")}
    e3 = eq("b", "c", "d")
    assert not e3.lfp and e3.op == "inter" and e3.children == (v("b", "d"),)
    e5 = eq("a", "c")
    assert e5.lfp and e5.op == "union" and e5.children == (v("c"),)
    e7 = eq("c")
    assert not e7.lfp and e7.op == "inter" and e7.children == (v(),)

    a, b, c, d = (m("a"), m("b"), m("c"), m("d"))

    def term_table(leaf_eq):
        # ancestor vertex -> set of color masks its guard admits
        out = {}
        for term in leaf_eq.terms:
            out[term[0]] = {x for x in range(16) if guard_accepts(term, x)}
        return out

    def sem(pred):
        return {x for x in range(16) if pred(x)}

    has = lambda x, col: bool(x & col)

    # X4 over {a,b}: (!c&!d -> self) | (c&!d -> X2) | (d -> X1)
    t4 = term_table(eq("a", "b"))
    assert t4[v("a", "b")] == sem(lambda x: not has(x, c) and not has(x, d))
    assert t4[v("a", "b", "c")] == sem(lambda x: has(x, c) and not has(x, d))
    assert t4[tree.root] == sem(lambda x: has(x, d))

    # X6 over {b,d}: (!a&!c -> self) | (!a&c -> X3) | (a -> X1)
    t6 = term_table(eq("b", "d"))
    assert t6[v("b", "d")] == sem(lambda x: not has(x, a) and not has(x, c))
    assert t6[v("b", "c", "d")] == sem(lambda x: not has(x, a) and has(x, c))
    assert t6[tree.root] == sem(lambda x: has(x, a))

    # X8 over {}: (!a&!b&!c&!d -> self) | (!a&!b&c&!d -> X7)
    #           | (a&!b&!d -> X5) | (b&!d -> X2) | (d -> X1)
    t8 = term_table(eq())
    assert t8[v()] == {0}
    assert t8[v("c")] == {c}
    assert t8[v("a", "c")] == sem(
        lambda x: has(x, a) and not has(x, b) and not has(x, d))
    assert t8[v("a", "b", "c")] == sem(lambda x: has(x, b) and not has(x, d))
    assert t8[tree.root] == sem(lambda x: has(x, d))


def test_every_node_admitted_by_exactly_one_term():
    rng = random.Random(31)
    for _ in range(50):
        ncolors = rng.randint(1, 4)
        table = el.ColorTable("abcd"[:ncolors])
        phi = el.random_formula(rng, table, 3)
        tree = ZielonkaTree(phi, table)
        system = build_equations(tree)
        for eqn in system.equations:
            if eqn.op != "attract":
                continue
            for colors in range(table.full_mask + 1):
                hits = [t for t in eqn.terms if guard_accepts(t, colors)]
                assert len(hits) == 1
                assert hits[0][0] == tree.anchor(eqn.vertex, colors)


def test_solve_single_node_games():
    table = el.ColorTable(["f"])
    phi = el.buchi(table, "f")
    win, _, _ = solve_game(ELGame(Arena([UNIVERSAL], [[0]], [table.mask("f")]),
                                  table, phi))
    assert win == 1
    win, _, _ = solve_game(ELGame(Arena([UNIVERSAL], [[0]], [0]), table, phi))
    assert win == 0


def test_solver_agrees_with_reduction_oracle_on_corpus_sample():
    for seed in range(200):
        game = random_game(10_000 + seed, 8, 4)
        win, _, _ = solve_game(game)
        assert win == solve_el_via_reduction(game), seed


def test_dual_solve_complements_winning_set():
    for seed in range(80):
        game = random_game(20_000 + seed, 7, 3)
        win, _, _ = solve_game(game)
        dual_win, _, _ = solve_game(dual_game(game))
        assert dual_win == ~win & game.arena.full_mask, seed


def test_rings_grow_monotonically_and_stay_bounded():
    for seed in range(40):
        game = random_game(30_000 + seed, 7, 3)
        tree = ZielonkaTree(game.objective, game.table)
        system = build_equations(tree)
        result = solve(system, ExplicitBackend(game), max_stages=game.arena.n + 1)
        for s, rings in result.rings.items():
            assert len(rings) <= game.arena.n + 2
            for lo, hi in zip(rings, rings[1:]):
                assert lo & ~hi == 0, (seed, s)


def test_format_equations_smoke():
    tree = ZielonkaTree(example_objective(), ABCD)
    text = format_equations(build_equations(tree))
    assert "X0 =LFP" in text and "CPre" in text


def test_larger_instances_complete_quickly():
    # smoke check that growth with arena size stays practical
    import time
    start = time.time()
    for seed in range(5):
        game = random_game(90_000 + seed, 24, 3)
        win, tree, _ = solve_game(game)
        assert win == solve_el_via_reduction(game, tree)
    assert time.time() - start < 30
