"""Reduced ordered binary decision diagrams with hash-consing.

Node ids 0 and 1 are the false/true terminals.  Every internal node is
registered in a unique table keyed by (variable, low, high), so two
diagrams in one store denote the same function iff their root ids are
equal.  Apply and negate results are memoized per store.
"""

from dataclasses import dataclass

from .errors import StoreError

FALSE_ID = 0
TRUE_ID = 1

OP_AND = "AND"
OP_OR = "OR"


@dataclass(frozen=True)
class ObddRef:
    """Handle to a diagram root; only valid against its originating store."""

    store: "ObddStore"
    node: int

    def __eq__(self, other):
        return (isinstance(other, ObddRef)
                and self.store is other.store
                and self.node == other.node)

    def __hash__(self):
        return hash((id(self.store), self.node))

    def __repr__(self):
        return "ObddRef(%d)" % self.node


class ObddStore:
    """Mutable shared node table; use from one thread at a time."""

    def __init__(self, order):
        order = tuple(order)
        if len(set(order)) != len(order):
            raise ValueError("variable order contains duplicates")
        self.order = order
        self._level = {v: i for i, v in enumerate(order)}
        # nodes[i] = (level, low, high); terminals get a sentinel level
        self._nodes = [(len(order), FALSE_ID, FALSE_ID),
                       (len(order), TRUE_ID, TRUE_ID)]
        self._unique = {}
        self._apply_cache = {}
        self._negate_cache = {}

    def __len__(self):
        return len(self._nodes)

    @property
    def false(self):
        return ObddRef(self, FALSE_ID)

    @property
    def true(self):
        return ObddRef(self, TRUE_ID)

    def _mk(self, level, lo, hi):
        if lo == hi:
            return lo
        key = (level, lo, hi)
        found = self._unique.get(key)
        if found is None:
            found = len(self._nodes)
            self._nodes.append(key)
            self._unique[key] = found
        return found

    def var_at(self, node):
        return self.order[self._nodes[node][0]]

    def children(self, node):
        _, lo, hi = self._nodes[node]
        return lo, hi

    def _check(self, ref):
        if not isinstance(ref, ObddRef) or ref.store is not self:
            raise StoreError("diagram handle belongs to a different store")
        return ref.node

    def mk_var(self, v):
        if v not in self._level:
            raise ValueError("variable %d is not in the store's order" % v)
        return ObddRef(self, self._mk(self._level[v], FALSE_ID, TRUE_ID))

    def apply(self, op, f, g):
        a, b = self._check(f), self._check(g)
        return ObddRef(self, self._apply(op, a, b))

    def _apply(self, op, a, b):
        if op == OP_AND:
            if a == FALSE_ID or b == FALSE_ID:
                return FALSE_ID
            if a == TRUE_ID:
                return b
            if b == TRUE_ID:
                return a
        elif op == OP_OR:
            if a == TRUE_ID or b == TRUE_ID:
                return TRUE_ID
            if a == FALSE_ID:
                return b
            if b == FALSE_ID:
                return a
        else:
            raise ValueError("unknown operation %r" % op)
        if a == b:
            return a
        key = (op, a, b) if a <= b else (op, b, a)
        hit = self._apply_cache.get(key)
        if hit is not None:
            return hit
        la, lo_a, hi_a = self._nodes[a]
        lb, lo_b, hi_b = self._nodes[b]
        level = min(la, lb)
        fa = (lo_a, hi_a) if la == level else (a, a)
        fb = (lo_b, hi_b) if lb == level else (b, b)
        result = self._mk(level,
                          self._apply(op, fa[0], fb[0]),
                          self._apply(op, fa[1], fb[1]))
        self._apply_cache[key] = result
        return result

    def negate(self, f):
        return ObddRef(self, self._negate(self._check(f)))

    def _negate(self, a):
        if a == FALSE_ID:
            return TRUE_ID
        if a == TRUE_ID:
            return FALSE_ID
        hit = self._negate_cache.get(a)
        if hit is not None:
            return hit
        level, lo, hi = self._nodes[a]
        result = self._mk(level, self._negate(lo), self._negate(hi))
        self._negate_cache[a] = result
        return result

    def is_false(self, f):
        return self._check(f) == FALSE_ID

    def satisfying_assignment(self, f):
        """One satisfying partial assignment as {variable: bool}, or None."""
        node = self._check(f)
        if node == FALSE_ID:
            return None
        assignment = {}
        while node != TRUE_ID:
            level, lo, hi = self._nodes[node]
            if hi != FALSE_ID:
                assignment[self.order[level]] = True
                node = hi
            else:
                assignment[self.order[level]] = False
                node = lo
        return assignment


def mk_var(store, v):
    return store.mk_var(v)


def apply(store, op, f, g):
    return store.apply(op, f, g)


def negate(store, f):
    return store.negate(f)


def is_false(store, f):
    return store.is_false(f)


def satisfying_assignment(store, f):
    return store.satisfying_assignment(f)


def obdd_to_circuit(ref, variable_count=None):
    """Translate a diagram into an equivalent NNF circuit.

    Each decision node (v, lo, hi) becomes OR(AND(-v, lo), AND(v, hi));
    shared diagram nodes become shared circuit nodes.  The output is
    decomposable and syntactically deterministic by construction.
    """
    from .circuit import CircuitBuilder

    store = ref.store
    store._check(ref)
    if variable_count is None:
        variable_count = max(store.order, default=0)
    builder = CircuitBuilder(variable_count)
    memo = {}

    def translate(node):
        hit = memo.get(node)
        if hit is not None:
            return hit
        if node == FALSE_ID:
            idx = builder.false()
        elif node == TRUE_ID:
            idx = builder.true()
        else:
            level, lo, hi = store._nodes[node]
            v = store.order[level]
            idx = builder.disj(
                [builder.conj([builder.literal(-v), translate(lo)]),
                 builder.conj([builder.literal(v), translate(hi)])],
                hint=v)
        memo[node] = idx
        return idx

    return builder.finish(translate(ref.node))
