"""Benchmark of the decision-diagram cores: compiled extension vs the
pure-Python fallback.

Workloads exercise the hot paths of the symbolic pipeline: if-then-else
chains, relational image under quantification and partner renaming, and
model counting.  Run as a script; pass --repeat to stabilize numbers.

    python benchmarks/bench_bddcore.py
"""

import argparse
import random
import time

from elgames.dd import Manager


def counter_reachability(pure, bits):
    """Breadth-first reachability of an n-bit counter with wraparound."""
    m = Manager(pure=pure)
    for i in range(bits):
        m.declare_pair("b%d" % i, "b%d'" % i, "state")
    cur = [m.var("b%d" % i) for i in range(bits)]
    nxt = [m.var("b%d'" % i) for i in range(bits)]
    # v' = v + 1 with ripple carry
    trans = m.true
    carry = m.true
    for i in range(bits):
        trans = trans & nxt[i].iff(cur[i] ^ carry)
        carry = carry & cur[i]
    reach = m.cube({"b%d" % i: False for i in range(bits)})
    frontier = reach
    unprimed = ["b%d" % i for i in range(bits)]
    steps = 0
    while True:
        image = m.rename_partners(m.exists(unprimed, trans & frontier))
        grown = reach | image
        if grown == reach:
            break
        frontier = grown & ~reach
        reach = grown
        steps += 1
    count = m.count_sat(reach, "state")
    assert count == 1 << bits and steps == (1 << bits) - 1
    return m.core.node_count()


def random_op_battery(pure, rounds, nvars, seed):
    """Long mixed sequences of connectives and quantifications."""
    rng = random.Random(seed)
    m = Manager(pure=pure)
    names = ["x%d" % i for i in range(nvars)]
    for name in names:
        m.declare(name, "main")

    def formula(depth):
        if depth == 0 or rng.random() < 0.25:
            return m.var(names[rng.randrange(nvars)])
        a = formula(depth - 1)
        b = formula(depth - 1)
        r = rng.random()
        if r < 0.35:
            return a & b
        if r < 0.7:
            return a | b
        if r < 0.85:
            return a ^ b
        return m.ite(a, b, ~a)

    acc = 0
    for _ in range(rounds):
        f = formula(6)
        g = m.exists([n for n in names if rng.random() < 0.3], f)
        acc ^= m.count_sat(g, "main")
    return acc


def relation_composition(pure, bits, rounds):
    """Iterated image of a shifted-xor relation, quantifier heavy."""
    m = Manager(pure=pure)
    for i in range(bits):
        m.declare_pair("r%d" % i, "r%d'" % i, "state")
    cur = [m.var("r%d" % i) for i in range(bits)]
    nxt = [m.var("r%d'" % i) for i in range(bits)]
    rel = m.true
    for i in range(bits):
        src = cur[(i + 1) % bits] ^ cur[(i + 7) % bits]
        rel = rel & nxt[i].iff(src ^ cur[i])
    unprimed = ["r%d" % i for i in range(bits)]
    s = m.cube({"r%d" % i: i % 3 == 0 for i in range(bits)})
    for _ in range(rounds):
        s = m.rename_partners(m.exists(unprimed, rel & s))
    return m.count_sat(s, "state")


WORKLOADS = [
    ("counter reachability (10 bits)", lambda pure: counter_reachability(pure, 10)),
    ("random op battery (300 x 12 vars)",
     lambda pure: random_op_battery(pure, 300, 12, 99)),
    ("relation composition (16 bits x 40)",
     lambda pure: relation_composition(pure, 16, 40)),
]


def run(repeat):
    print("%-36s %12s %12s %9s" % ("workload", "compiled", "pure", "speedup"))
    for name, fn in WORKLOADS:
        times = {}
        results = {}
        for pure in (False, True):
            best = None
            for _ in range(repeat):
                start = time.perf_counter()
                results[pure] = fn(pure)
                elapsed = time.perf_counter() - start
                best = elapsed if best is None else min(best, elapsed)
            times[pure] = best
        assert results[False] == results[True], "cores disagree on %s" % name
        print("%-36s %10.3fs %10.3fs %8.1fx"
              % (name, times[False], times[True], times[True] / times[False]))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3,
                        help="take the best of this many runs")
    args = parser.parse_args()
    run(args.repeat)


if __name__ == "__main__":
    main()
