"""Games with Emerson-Lei objectives: explicit and symbolic solvers,
objective trees, parity reduction, certified strategy extraction, and
reactive synthesis for safety plus letter-liveness LTL.

Library entry points:

>>> from elgames import el, games, fixpoint, strategy
>>> game = games.load_game(open("game.elg").read())
>>> win, tree, result = fixpoint.solve_game(game)
>>> sigma = strategy.extract(game, tree, result)

and for synthesis:

>>> from elgames import synthesis
>>> problem = synthesis.problem_from_strings(
...     "G(b | c)", "G F a -> G F b", ["a"], ["b", "c"])
>>> synthesis.solve_synthesis(problem).realizable
True
"""

__version__ = "0.1.0"
