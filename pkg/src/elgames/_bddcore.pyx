# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled reduced ordered decision-diagram core.

Same interface and handle semantics as ``_bddcore_py``: terminals 0/1,
hash-consed (level, low, high) nodes, handle equality iff semantic
equality.  The node store lives in C arrays; the unique and memo tables
stay Python dicts keyed by small tuples.
"""

from libc.stdlib cimport free, malloc, realloc

TERMINAL_LEVEL = 1 << 30
IMPL_NAME = "compiled"

cdef int _TERMINAL = 1 << 30


cdef class Core:
    cdef int *_level
    cdef int *_lo
    cdef int *_hi
    cdef size_t _used
    cdef size_t _cap
    cdef dict _unique
    cdef dict _ite_memo

    FALSE = 0
    TRUE = 1

    def __cinit__(self):
        self._cap = 1024
        self._level = <int *> malloc(self._cap * sizeof(int))
        self._lo = <int *> malloc(self._cap * sizeof(int))
        self._hi = <int *> malloc(self._cap * sizeof(int))
        if not self._level or not self._lo or not self._hi:
            raise MemoryError()
        self._level[0] = _TERMINAL
        self._level[1] = _TERMINAL
        self._lo[0] = 0
        self._hi[0] = 0
        self._lo[1] = 1
        self._hi[1] = 1
        self._used = 2
        self._unique = {}
        self._ite_memo = {}

    def __dealloc__(self):
        free(self._level)
        free(self._lo)
        free(self._hi)

    def node_count(self):
        return self._used

    def level_of(self, int f):
        return self._level[f]

    def low(self, int f):
        return self._lo[f]

    def high(self, int f):
        return self._hi[f]

    cdef int _push(self, int level, int lo, int hi) except -1:
        cdef size_t newcap
        if self._used == self._cap:
            newcap = self._cap * 2
            self._level = <int *> realloc(self._level, newcap * sizeof(int))
            self._lo = <int *> realloc(self._lo, newcap * sizeof(int))
            self._hi = <int *> realloc(self._hi, newcap * sizeof(int))
            if not self._level or not self._lo or not self._hi:
                raise MemoryError()
            self._cap = newcap
        self._level[self._used] = level
        self._lo[self._used] = lo
        self._hi[self._used] = hi
        self._used += 1
        return <int> (self._used - 1)

    cpdef int mk(self, int level, int lo, int hi) except -1:
        if lo == hi:
            return lo
        key = (level, lo, hi)
        found = self._unique.get(key)
        if found is not None:
            return <int> found
        cdef int handle = self._push(level, lo, hi)
        self._unique[key] = handle
        return handle

    cpdef int var_node(self, int level) except -1:
        return self.mk(level, 0, 1)

    cpdef int ite(self, int f, int g, int h) except -1:
        if f == 1:
            return g
        if f == 0:
            return h
        if g == h:
            return g
        if g == 1 and h == 0:
            return f
        key = (f, g, h)
        found = self._ite_memo.get(key)
        if found is not None:
            return <int> found
        cdef int level = self._level[f]
        if self._level[g] < level:
            level = self._level[g]
        if self._level[h] < level:
            level = self._level[h]
        cdef int f0, f1, g0, g1, h0, h1
        if self._level[f] == level:
            f0 = self._lo[f]
            f1 = self._hi[f]
        else:
            f0 = f
            f1 = f
        if self._level[g] == level:
            g0 = self._lo[g]
            g1 = self._hi[g]
        else:
            g0 = g
            g1 = g
        if self._level[h] == level:
            h0 = self._lo[h]
            h1 = self._hi[h]
        else:
            h0 = h
            h1 = h
        cdef int lo = self.ite(f0, g0, h0)
        cdef int hi = self.ite(f1, g1, h1)
        cdef int out = self.mk(level, lo, hi)
        self._ite_memo[key] = out
        return out

    cpdef int not_(self, int f) except -1:
        return self.ite(f, 0, 1)

    cpdef int and_(self, int f, int g) except -1:
        return self.ite(f, g, 0)

    cpdef int or_(self, int f, int g) except -1:
        return self.ite(f, 1, g)

    cpdef int xor_(self, int f, int g) except -1:
        return self.ite(f, self.ite(g, 0, 1), g)

    cpdef int iff_(self, int f, int g) except -1:
        return self.ite(f, g, self.ite(g, 0, 1))

    cpdef int implies_(self, int f, int g) except -1:
        return self.ite(f, g, 1)

    def exists(self, int f, levels):
        cdef frozenset quantified = frozenset(levels)
        cdef dict memo = {}
        return self._exists(f, quantified, memo)

    cdef int _exists(self, int f, frozenset levels, dict memo) except -1:
        if f < 2:
            return f
        found = memo.get(f)
        if found is not None:
            return <int> found
        cdef int lo = self._exists(self._lo[f], levels, memo)
        cdef int hi = self._exists(self._hi[f], levels, memo)
        cdef int out
        if self._level[f] in levels:
            out = self.or_(lo, hi)
        else:
            out = self.mk(self._level[f], lo, hi)
        memo[f] = out
        return out

    def forall(self, int f, levels):
        return self.not_(self.exists(self.not_(f), levels))

    def rename(self, int f, dict perm):
        cdef dict memo = {}
        return self._rename(f, perm, memo)

    cdef int _rename(self, int f, dict perm, dict memo) except -1:
        if f < 2:
            return f
        found = memo.get(f)
        if found is not None:
            return <int> found
        cdef int level = self._level[f]
        target = perm.get(level)
        cdef int tlevel = level if target is None else <int> target
        cdef int lo = self._rename(self._lo[f], perm, memo)
        cdef int hi = self._rename(self._hi[f], perm, memo)
        cdef int out = self.ite(self.var_node(tlevel), hi, lo)
        memo[f] = out
        return out

    def restrict(self, int f, int level, bint value):
        cdef dict memo = {}
        return self._restrict(f, level, value, memo)

    cdef int _restrict(self, int f, int level, bint value, dict memo) except -1:
        if f < 2 or self._level[f] > level:
            return f
        found = memo.get(f)
        if found is not None:
            return <int> found
        cdef int out
        if self._level[f] == level:
            out = self._restrict(self._hi[f] if value else self._lo[f],
                                 level, value, memo)
        else:
            out = self.mk(self._level[f],
                          self._restrict(self._lo[f], level, value, memo),
                          self._restrict(self._hi[f], level, value, memo))
        memo[f] = out
        return out

    def support(self, int f):
        cdef set seen = set()
        cdef set levels = set()
        cdef list stack = [f]
        cdef int node
        while stack:
            node = stack.pop()
            if node < 2 or node in seen:
                continue
            seen.add(node)
            levels.add(self._level[node])
            stack.append(self._lo[node])
            stack.append(self._hi[node])
        return tuple(sorted(levels))

    def satcount(self, int f, levels):
        cdef list ordered = sorted(levels)
        cdef dict pos = {}
        cdef int i
        for i in range(len(ordered)):
            pos[ordered[i]] = i
        if f == 0:
            return 0
        if f == 1:
            return (<object> 1) << len(ordered)
        if self._level[f] not in pos:
            raise ValueError("node depends on an uncounted variable")
        memo = {}
        total = self._satcount(f, pos, len(ordered), memo)
        return ((<object> 1) << pos[self._level[f]]) * total

    cdef object _satcount(self, int f, dict pos, int width, dict memo):
        found = memo.get(f)
        if found is not None:
            return found
        cdef int i = <int> pos[self._level[f]]
        cdef int child
        cdef int gap
        cdef object one = 1  # counts can exceed the C int range
        total = 0
        for child in (self._lo[f], self._hi[f]):
            if child == 1:
                total += one << (width - i - 1)
            elif child != 0:
                if self._level[child] not in pos:
                    raise ValueError("node depends on an uncounted variable")
                gap = <int> pos[self._level[child]] - i - 1
                total += (one << gap) * self._satcount(child, pos, width, memo)
        memo[f] = total
        return total

    def pick(self, int f):
        if f == 0:
            raise ValueError("cannot pick a witness from FALSE")
        cdef dict out = {}
        cdef int node = f
        while node != 1:
            if self._lo[node] != 0:
                out[self._level[node]] = False
                node = self._lo[node]
            else:
                out[self._level[node]] = True
                node = self._hi[node]
        return out

    def eval(self, int f, values):
        cdef int node = f
        while node > 1:
            node = self._hi[node] if values[self._level[node]] else self._lo[node]
        return node == 1
