import random

import pytest

from elgames import ltl
from elgames.ltl import (Ap, AndOp, Globally, Implies, Next, NotOp, OrOp,
                         Release, atoms, check_safety, determinize_symbolic,
                         dsa_accepts_lasso, eval_ltl_lasso, nfa_accepts_lasso,
                         nfa_from_safety, parse_ltl, reachable_subset_count,
                         to_nnf)

A, B, C = Ap("a"), Ap("b"), Ap("c")

EX_SAFETY = "G(b | c) & G(a -> b | X X b)"
EX_SAFETY_CORE = "G(a -> b | X X b)"


def test_parse_shapes():
    phi = parse_ltl(EX_SAFETY_CORE)
    assert phi == Globally(Implies(A, OrOp(B, Next(Next(B)))))
    assert parse_ltl("a U b R c") == ltl.Until(A, Release(B, C))
    assert parse_ltl("!a & b") == AndOp(NotOp(A), B)


def test_parse_errors():
    with pytest.raises(ltl.LTLSyntaxError):
        parse_ltl("G (a")
    with pytest.raises(ltl.LTLSyntaxError):
        parse_ltl("a U")


def test_nnf_dualities():
    assert to_nnf(NotOp(Globally(A))) == ltl.Finally(NotOp(A))
    assert to_nnf(NotOp(Next(A))) == Next(NotOp(A))
    assert to_nnf(NotOp(ltl.Until(A, B))) == Release(NotOp(A), NotOp(B))
    assert to_nnf(NotOp(NotOp(A))) == A


def test_safety_check_accepts_and_rejects():
    assert check_safety(parse_ltl("G(b | c)")) == Globally(OrOp(B, C))
    with pytest.raises(ltl.NotSafetyError):
        check_safety(parse_ltl("F b"))
    with pytest.raises(ltl.NotSafetyError):
        check_safety(parse_ltl("!(G b)"))
    with pytest.raises(ltl.NotSafetyError):
        check_safety(parse_ltl("a U b"))
    # implication with a propositional antecedent stays a safety formula
    assert isinstance(check_safety(parse_ltl(EX_SAFETY_CORE)), Globally)


def paper_nfa():
    """The four-state automaton for G(a -> b | XXb) as drawn: state 0
    tracks nothing pending, 1 needs b next, 2 needs b now, 3 needs b
    now and next."""
    t = [
        [(parse_ltl("!a | b"), 0), (parse_ltl("a"), 1)],
        [(parse_ltl("!a | b"), 2), (parse_ltl("a"), 3)],
        [(parse_ltl("b"), 0), (parse_ltl("a & b"), 1)],
        [(parse_ltl("b"), 2), (parse_ltl("a & b"), 3)],
    ]
    return ltl.SafetyNFA([frozenset([("paper", i)]) for i in range(4)], 0, t,
                         {"a", "b"})


def subset_language_equal(n1, n2):
    """Safety-language equality via the product of subset constructions."""
    assert n1.ap == n2.ap
    start = (frozenset([n1.initial]), frozenset([n2.initial]))
    seen = {start}
    queue = [start]
    letters = list(n1.letters())
    while queue:
        s1, s2 = queue.pop()
        if bool(s1) != bool(s2):
            return False
        for letter in letters:
            t1 = frozenset(t for s in s1 for t in n1.successors(s, letter))
            t2 = frozenset(t for s in s2 for t in n2.successors(s, letter))
            if (t1, t2) not in seen:
                seen.add((t1, t2))
                queue.append((t1, t2))
    return True


def test_tableau_matches_paper_automaton():
    nfa = nfa_from_safety(check_safety(parse_ltl(EX_SAFETY_CORE)))
    assert len(nfa) == 4
    assert subset_language_equal(nfa, paper_nfa())


def test_tableau_single_state_for_globally_atom():
    nfa = nfa_from_safety(check_safety(parse_ltl("G b")))
    assert len(nfa) == 1
    assert nfa.transitions[0] == [(B, 0)]


def test_empty_language_formula_dies():
    nfa = nfa_from_safety(check_safety(parse_ltl("X X false")))
    dsa = determinize_symbolic(nfa)
    assert not dsa_accepts_lasso(dsa, [], [frozenset()])
    assert not nfa_accepts_lasso(nfa, [], [frozenset()])
    assert not eval_ltl_lasso(parse_ltl("X X false"), [], [frozenset()])


def test_determinization_theta0_is_exactly_initial_cube():
    nfa = nfa_from_safety(check_safety(parse_ltl(EX_SAFETY_CORE)))
    dsa = determinize_symbolic(nfa)
    m = dsa.manager
    expected = m.cube({"v0": True, "v1": False, "v2": False, "v3": False})
    assert dsa.theta0 == expected


def test_transition_assertion_matches_displayed_form():
    # For the automaton of G(a -> b | XXb): the four biconditionals over
    # (v, v', a, b) plus the nonemptiness disjunct.  States are located
    # by which obligations they track (nothing / b next / b now / both),
    # since discovery order need not match the drawn numbering.
    nfa = nfa_from_safety(check_safety(parse_ltl(EX_SAFETY_CORE)))
    dsa = determinize_symbolic(nfa)
    m = dsa.manager

    def locate(b_now, b_next):
        for i, state in enumerate(nfa.states):
            has_now = Ap("b") in state
            has_next = Next(Ap("b")) in state
            if has_now == b_now and has_next == b_next:
                return i
        raise AssertionError("state not found")

    s1, s2, s3, s4 = (locate(False, False), locate(False, True),
                      locate(True, False), locate(True, True))
    v = {i: m.var("v%d" % i) for i in (s1, s2, s3, s4)}
    vp = {i: m.var("v%d'" % i) for i in (s1, s2, s3, s4)}
    a, b = m.var("a"), m.var("b")
    expected = (
        vp[s1].iff((v[s1] & (~a | b)) | (v[s3] & b))
        & vp[s2].iff((v[s1] & a) | (v[s3] & (a & b)))
        & vp[s3].iff((v[s2] & (~a | b)) | (v[s4] & b))
        & vp[s4].iff((v[s2] & a) | (v[s4] & (a & b)))
        & (v[s1] | v[s2] | v[s3] | v[s4]))
    assert dsa.trans == expected


def test_reachable_subsets_of_full_example_is_nine():
    nfa = nfa_from_safety(check_safety(parse_ltl(EX_SAFETY)))
    assert len(nfa) == 4
    dsa = determinize_symbolic(nfa)
    assert reachable_subset_count(dsa) == 9


def test_reachable_subsets_of_globally_atom_is_one():
    dsa = determinize_symbolic(nfa_from_safety(check_safety(parse_ltl("G b"))))
    assert reachable_subset_count(dsa) == 1


def test_determinism_of_transition_assertion():
    nfa = nfa_from_safety(check_safety(parse_ltl(EX_SAFETY)))
    dsa = determinize_symbolic(nfa)
    m = dsa.manager
    for bits in range(1, 16):
        for letter_bits in range(8):
            letter = {"a": bool(letter_bits & 1), "b": bool(letter_bits & 2),
                      "c": bool(letter_bits & 4)}
            cube = {}
            for i, name in enumerate(dsa.state_vars):
                cube[name] = bool(bits >> i & 1)
            cube.update(letter)
            ctx = m.cube(cube)
            assert m.count_sat(dsa.trans & ctx, "state'") == 1


def random_safety_formula(rng, names, depth):
    if depth == 0 or rng.random() < 0.3:
        atom = Ap(names[rng.randrange(len(names))])
        return NotOp(atom) if rng.random() < 0.4 else atom
    r = rng.random()
    a = random_safety_formula(rng, names, depth - 1)
    if r < 0.2:
        return Next(a)
    if r < 0.4:
        return Globally(a)
    b = random_safety_formula(rng, names, depth - 1)
    if r < 0.6:
        return AndOp(a, b)
    if r < 0.8:
        return OrOp(a, b)
    return Release(a, b)


def random_lasso(rng, names, max_len):
    def letters(k):
        return tuple(frozenset(n for n in names if rng.random() < 0.5)
                     for _ in range(k))
    return letters(rng.randint(0, max_len)), letters(rng.randint(1, max_len))


def test_language_agreement_on_random_lassos():
    rng = random.Random(505)
    names = ["a", "b", "c"]
    for _ in range(150):
        phi = random_safety_formula(rng, names, 3)
        nnf = check_safety(phi)
        nfa = nfa_from_safety(nnf)
        if len(nfa) > 8:
            continue
        dsa = determinize_symbolic(nfa)
        for _ in range(4):
            prefix, loop = random_lasso(rng, names, 4)
            direct = eval_ltl_lasso(phi, prefix, loop)
            via_nfa = nfa_accepts_lasso(nfa, prefix, loop)
            via_dsa = dsa_accepts_lasso(dsa, prefix, loop)
            assert direct == via_nfa == via_dsa, (phi, prefix, loop)


def test_lasso_eval_handles_until_and_finally():
    w = ([frozenset()], [frozenset(["a"])])
    assert eval_ltl_lasso(parse_ltl("F a"), *w)
    assert not eval_ltl_lasso(parse_ltl("G a"), *w)
    assert eval_ltl_lasso(parse_ltl("!a U a"), *w)
    assert eval_ltl_lasso(parse_ltl("X G a"), *w)


def test_atoms_collection():
    assert atoms(parse_ltl(EX_SAFETY)) == {"a", "b", "c"}


def test_determinization_budget():
    nfa = nfa_from_safety(check_safety(parse_ltl(EX_SAFETY)))
    with pytest.raises(ltl.LTLError):
        determinize_symbolic(nfa, max_states=2)
