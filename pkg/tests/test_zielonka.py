import math
import random

from elgames import el, zielonka
from elgames.zielonka import LassoPlay, ZielonkaTree, fair_induced_walk

from test_el import example_objective, ABCD


def buchi_tree():
    table = el.ColorTable(["f"])
    return ZielonkaTree(el.buchi(table, "f"), table), table


def test_buchi_tree_is_two_vertices():
    tree, table = buchi_tree()
    assert len(tree) == 2
    assert tree.label[0] == table.full_mask and tree.winning[0]
    assert tree.label[1] == 0 and not tree.winning[1]
    assert tree.leaves == (1,)
    assert tree.level[0] == 1 and tree.level[1] == 0


def test_generalized_buchi_tree_shape():
    for k in (2, 3, 4):
        names = ["f%d" % i for i in range(1, k + 1)]
        table = el.ColorTable(names)
        tree = ZielonkaTree(el.generalized_buchi(table, names), table)
        assert len(tree) == k + 1
        assert tree.winning[0]
        kid_labels = {tree.label[c] for c in tree.children[0]}
        expected = {table.full_mask & ~(1 << i) for i in range(k)}
        assert kid_labels == expected
        assert all(not tree.winning[c] for c in tree.children[0])


def streett_tree_size(k):
    # Root has k losing children, each followed by a single winning child
    # whose subtree repeats the construction one pair down.
    size = 1
    for i in range(1, k + 1):
        size = 1 + i * (1 + size)
    return size


def test_streett_and_rabin_tree_shapes():
    for k in (1, 2, 3):
        names = []
        pairs = []
        for i in range(1, k + 1):
            names += ["r%d" % i, "g%d" % i]
            pairs.append(("r%d" % i, "g%d" % i))
        table = el.ColorTable(names)
        tree = ZielonkaTree(el.streett(table, pairs), table)
        assert len(tree) == streett_tree_size(k)
        assert max(tree.depth) == 2 * k
        assert len(tree.leaves) == math.factorial(k)
        assert all(tree.winning[v] for v in tree.leaves)
        assert all(tree.label[v] == 0 for v in tree.leaves)
        rtree = ZielonkaTree(el.rabin(table, pairs), table)
        assert len(rtree) == streett_tree_size(k)
        assert max(rtree.depth) == 2 * k
        assert all(not rtree.winning[v] for v in rtree.leaves)


def test_branching_objective_tree_matches_known_shape():
    tree = ZielonkaTree(example_objective(), ABCD)
    assert len(tree) == 8
    m = ABCD.mask

    def v(*names):
        return tree.vertex_with_label(m(*names))

    root = v("a", "b", "c", "d")
    assert root == tree.root and not tree.winning[root]
    assert sorted(tree.children[root]) == sorted([v("a", "b", "c"), v("b", "c", "d")])
    assert tree.winning[v("a", "b", "c")] and tree.winning[v("b", "c", "d")]
    assert sorted(tree.children[v("a", "b", "c")]) == sorted([v("a", "b"), v("a", "c")])
    assert tree.children[v("b", "c", "d")] == (v("b", "d"),)
    assert tree.children[v("a", "c")] == (v("c"),)
    assert tree.children[v("c")] == (v(),)
    assert tree.is_leaf(v("a", "b")) and tree.is_leaf(v("b", "d")) and tree.is_leaf(v())
    assert not tree.winning[v("a", "b")] and not tree.winning[v("b", "d")]
    assert tree.winning[v("c")] and not tree.winning[v()]
    # Deterministic child order: cardinality first, then mask value.
    assert tree.children[root] == (v("a", "b", "c"), v("b", "c", "d"))


def test_even_cardinality_muller_sizes_match_recurrence():
    expected = [zielonka.max_tree_size(n) for n in range(5)]
    assert expected == [1, 2, 5, 16, 65]
    for ncolors in range(5):
        table = el.ColorTable("abcd"[:ncolors])
        phi = el.even_cardinality_muller(table)
        tree = ZielonkaTree(phi, table)
        assert len(tree) == expected[ncolors], ncolors


def test_invariants_on_random_formulas():
    rng = random.Random(23)
    for _ in range(200):
        ncolors = rng.randint(1, 5)
        table = el.ColorTable("abcde"[:ncolors])
        phi = el.random_formula(rng, table, 4)
        tree = ZielonkaTree(phi, table)
        assert tree_ok(tree)
        assert len(tree) <= zielonka.max_tree_size(ncolors)
        assert max(tree.depth) <= ncolors
        assert all(len(tree.children[v]) <= 1 << ncolors for v in range(len(tree)))


def tree_ok(tree):
    errors = zielonka.tree_invariant_errors(tree)
    assert not errors, errors
    return True


def test_anchor_examples_on_branching_tree():
    tree = ZielonkaTree(example_objective(), ABCD)
    m = ABCD.mask
    leaf = tree.vertex_with_label(0)
    assert tree.anchor(leaf, m("d")) == tree.root
    assert tree.anchor(leaf, m("c")) == tree.vertex_with_label(m("c"))
    assert tree.anchor(leaf, 0) == leaf


def test_anc_membership_matches_anchor_for_leaves():
    rng = random.Random(5)
    for _ in range(40):
        ncolors = rng.randint(1, 4)
        table = el.ColorTable("abcd"[:ncolors])
        phi = el.random_formula(rng, table, 3)
        tree = ZielonkaTree(phi, table)
        for t in tree.leaves:
            for colors in range(table.full_mask + 1):
                holds = [s for s in tree.ancestors(t)
                         if tree.anc_member(s, t, colors)]
                assert holds == [tree.anchor(t, colors)]


def test_anc_sets_for_generalized_buchi():
    names = ["f1", "f2", "f3"]
    table = el.ColorTable(names)
    tree = ZielonkaTree(el.generalized_buchi(table, names), table)
    for child in tree.children[tree.root]:
        missing = table.full_mask & ~tree.label[child]
        for colors in range(table.full_mask + 1):
            assert tree.anc_member(tree.root, child, colors) == bool(colors & missing)
            assert tree.anc_member(child, child, colors) == (not colors & missing)


def test_fair_walk_on_buchi_lassos():
    tree, table = buchi_tree()
    dom, winning = fair_induced_walk(tree, LassoPlay((), (table.mask("f"),)))
    assert dom == tree.root and winning
    dom, winning = fair_induced_walk(tree, LassoPlay((), (0,)))
    assert dom == tree.leaves[0] and not winning


def test_fair_walk_agrees_with_objective_on_random_lassos():
    rng = random.Random(97)
    for _ in range(200):
        ncolors = rng.randint(1, 4)
        table = el.ColorTable("abcd"[:ncolors])
        phi = el.random_formula(rng, table, 3)
        tree = ZielonkaTree(phi, table)
        prefix = tuple(rng.randrange(table.full_mask + 1)
                       for _ in range(rng.randint(0, 3)))
        loop = tuple(rng.randrange(table.full_mask + 1)
                     for _ in range(rng.randint(1, 5)))
        lasso = LassoPlay(prefix, loop)
        dom, winning = fair_induced_walk(tree, lasso)
        union = 0
        for colors in loop:
            union |= colors
        assert union & ~tree.label[dom] == 0
        assert winning == el.evaluate(phi, union)


def test_text_and_dot_outputs_mention_every_vertex():
    tree = ZielonkaTree(example_objective(), ABCD)
    text = tree.format_text()
    dot = tree.format_dot()
    for v in range(len(tree)):
        assert "%d:" % v in text
        assert "n%d" % v in dot
