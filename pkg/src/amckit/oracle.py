"""Brute-force ground truth: explicit model enumeration over all assignments.

Deliberately free of the evaluator's machinery: every assignment is tested
directly against the circuit, and the semiring sum is folded over the
surviving models.  Real-valued carriers fold in fixed lexicographic order
for bit-reproducibility; exact carriers may fold as a balanced tree, which
the associativity and commutativity axioms make equivalent.
"""

import numpy as np

from . import kernels
from .circuit import enumeration_budget_check
from .semiring import KernelSpec

DEFAULT_BUDGET = 24


def _model_indices(circuit, budget):
    enumeration_budget_check(circuit, budget)
    flat = kernels.flatten_circuit(circuit)
    mask = kernels.model_mask(flat, circuit.variable_count, circuit.root)
    return np.nonzero(mask)[0]


def _index_to_model(i, n):
    return tuple(v if (i >> (n - v)) & 1 else -v for v in range(1, n + 1))


def enumerate_models(circuit, budget=DEFAULT_BUDGET):
    """All models as literal tuples, in lexicographic assignment order."""
    n = circuit.variable_count
    return [_index_to_model(int(i), n) for i in _model_indices(circuit, budget)]


def _balanced_reduce(op, items, unit):
    if not items:
        return unit
    while len(items) > 1:
        items = [op(items[k], items[k + 1]) if k + 1 < len(items) else items[k]
                 for k in range(0, len(items), 2)]
    return items[0]


def amc_brute_force(circuit, desc, lab, budget=DEFAULT_BUDGET):
    """Semiring sum over all models of the product of literal labels."""
    n = circuit.variable_count
    if lab.variable_count < n:
        raise ValueError("labeling covers %d of %d variables"
                         % (lab.variable_count, n))
    midx = _model_indices(circuit, budget)

    if isinstance(desc.kernel, KernelSpec) and n > 0:
        spec = desc.kernel
        try:
            pos = [spec.encode(lab.label_or_unit(v, desc))
                   for v in range(1, n + 1)]
            neg = [spec.encode(lab.label_or_unit(-v, desc))
                   for v in range(1, n + 1)]
        except (TypeError, ValueError):
            pos = neg = None
        if pos is not None:
            raw = kernels.scalar_fold(midx, n, pos, neg, spec.plus_code,
                                      spec.times_code, spec.zero, spec.one,
                                      spec.clip)
            return spec.decode(raw)
    if desc.kernel == "grad" and n > 0:
        pos = [lab.label_or_unit(v, desc) for v in range(1, n + 1)]
        neg = [lab.label_or_unit(-v, desc) for v in range(1, n + 1)]
        return kernels.grad_fold(midx, n,
                                 [p[0] for p in pos], [p[1] for p in pos],
                                 [q[0] for q in neg], [q[1] for q in neg])

    def product(i):
        acc = desc.one
        for v in range(1, n + 1):
            lit = v if (i >> (n - v)) & 1 else -v
            acc = desc.times(acc, lab.label_or_unit(lit, desc))
        return acc

    if desc.balanced_fold:
        return _balanced_reduce(desc.plus, [product(int(i)) for i in midx],
                                desc.zero)
    acc = desc.zero
    for i in midx:
        acc = desc.plus(acc, product(int(i)))
    return acc
