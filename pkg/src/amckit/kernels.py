"""Hot numeric kernels: truth-table enumeration and brute-force folds.

Each kernel has a numba-jitted implementation and a pure-numpy one.  The
active backend is chosen once at import from the ``AMC_KERNELS`` environment
variable ("numba" or "numpy"); the default is numba when it imports, numpy
otherwise.  Every public function also takes an explicit ``backend=``
override so the two paths can be compared in-process (see
benchmarks/bench_kernels.py).

Assignment encoding: index i in [0, 2^n) assigns variable v the bit
(n - v) of i, so variable 1 is the most significant bit and assignments
enumerate in lexicographic order with False before True.
"""

import os

import numpy as np

_CHUNK = 1 << 16


def _noop_jit(*args, **kwargs):
    def wrap(fn):
        return fn
    return wrap


try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = _noop_jit
    HAVE_NUMBA = False


def _pick_backend():
    choice = os.environ.get("AMC_KERNELS", "").strip().lower()
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("AMC_KERNELS=numba but numba is unavailable")
        return "numba"
    if choice:
        raise RuntimeError("AMC_KERNELS must be 'numba' or 'numpy', got %r"
                           % choice)
    return "numba" if HAVE_NUMBA else "numpy"


BACKEND = _pick_backend()


def flatten_circuit(circuit):
    """CSR arrays (kinds, literals, child_ptr, child_idx) for the kernels."""
    from .circuit import Kind

    n = len(circuit.nodes)
    kinds = np.empty(n, np.int8)
    lits = np.zeros(n, np.int32)
    ptr = np.zeros(n + 1, np.int64)
    idx = []
    for i, node in enumerate(circuit.nodes):
        kinds[i] = int(node.kind)
        if node.kind == Kind.LITERAL:
            lits[i] = node.literal
        idx.extend(node.children)
        ptr[i + 1] = len(idx)
    return kinds, lits, ptr, np.asarray(idx, np.int64)


# --- truth-table model mask -------------------------------------------------

@njit(cache=True)
def _model_mask_nb(kinds, lits, ptr, idx, n_vars, root):
    size = 1 << n_vars
    out = np.empty(size, np.bool_)
    vals = np.empty(kinds.shape[0], np.bool_)
    for i in range(size):
        for n in range(kinds.shape[0]):
            k = kinds[n]
            if k == 0:
                v = False
            elif k == 1:
                v = True
            elif k == 2:
                lit = lits[n]
                var = lit if lit > 0 else -lit
                bit = (i >> (n_vars - var)) & 1
                v = (bit == 1) == (lit > 0)
            elif k == 3:
                v = True
                for c in range(ptr[n], ptr[n + 1]):
                    if not vals[idx[c]]:
                        v = False
                        break
            else:
                v = False
                for c in range(ptr[n], ptr[n + 1]):
                    if vals[idx[c]]:
                        v = True
                        break
            vals[n] = v
        out[i] = vals[root]
    return out


def _model_mask_np(kinds, lits, ptr, idx, n_vars, root):
    size = 1 << n_vars
    out = np.empty(size, np.bool_)
    n_nodes = kinds.shape[0]
    for lo in range(0, size, _CHUNK):
        hi = min(lo + _CHUNK, size)
        assign = np.arange(lo, hi, dtype=np.int64)
        vals = np.empty((n_nodes, hi - lo), np.bool_)
        for n in range(n_nodes):
            k = kinds[n]
            if k == 0:
                vals[n] = False
            elif k == 1:
                vals[n] = True
            elif k == 2:
                lit = int(lits[n])
                var = abs(lit)
                bit = (assign >> (n_vars - var)) & 1
                vals[n] = (bit == 1) if lit > 0 else (bit == 0)
            else:
                kids = idx[ptr[n]:ptr[n + 1]]
                if k == 3:
                    vals[n] = np.logical_and.reduce(vals[kids], axis=0)
                else:
                    vals[n] = np.logical_or.reduce(vals[kids], axis=0)
        out[lo:hi] = vals[root]
    return out


def model_mask(flat, n_vars, root, backend=None):
    """Boolean satisfaction vector over all 2^n assignments."""
    kinds, lits, ptr, idx = flat
    if (backend or BACKEND) == "numba":
        return _model_mask_nb(kinds, lits, ptr, idx, n_vars, root)
    return _model_mask_np(kinds, lits, ptr, idx, n_vars, root)


# --- scalar semiring fold over models ---------------------------------------

# plus codes: 0 sum, 1 max, 2 min; times codes: 0 product, 1 sum, 2 min

@njit(cache=True)
def _scalar_fold_nb(midx, n_vars, pos, neg, plus_code, times_code,
                    zero, one, clip):
    acc = zero
    for t in range(midx.shape[0]):
        i = midx[t]
        prod = one
        for v in range(1, n_vars + 1):
            if (i >> (n_vars - v)) & 1:
                w = pos[v - 1]
            else:
                w = neg[v - 1]
            if times_code == 0:
                prod = prod * w
            elif times_code == 1:
                prod = prod + w
            else:
                prod = min(prod, w)
        if prod > clip:
            prod = clip
        if plus_code == 0:
            acc = acc + prod
        elif plus_code == 1:
            acc = max(acc, prod)
        else:
            acc = min(acc, prod)
    return acc


def _scalar_fold_np(midx, n_vars, pos, neg, plus_code, times_code,
                    zero, one, clip):
    acc = zero
    shifts = n_vars - np.arange(1, n_vars + 1, dtype=np.int64)
    for lo in range(0, midx.shape[0], _CHUNK):
        chunk = midx[lo:lo + _CHUNK]
        if n_vars:
            bits = ((chunk[:, None] >> shifts[None, :]) & 1).astype(bool)
            w = np.where(bits, pos[None, :], neg[None, :])
            if times_code == 0:
                prod = w.prod(axis=1)
            elif times_code == 1:
                prod = w.sum(axis=1)
            else:
                prod = w.min(axis=1)
        else:
            prod = np.full(chunk.shape[0], one)
        np.minimum(prod, clip, out=prod)
        if plus_code == 0:
            acc = acc + prod.sum()
        elif plus_code == 1:
            acc = max(acc, prod.max(initial=zero))
        else:
            acc = min(acc, prod.min(initial=zero))
    return acc


def scalar_fold(midx, n_vars, pos, neg, plus_code, times_code,
                zero, one, clip, backend=None):
    """Semiring sum over the given assignment indices of per-model products."""
    midx = np.asarray(midx, np.int64)
    pos = np.asarray(pos, np.float64)
    neg = np.asarray(neg, np.float64)
    if (backend or BACKEND) == "numba":
        return float(_scalar_fold_nb(midx, n_vars, pos, neg, plus_code,
                                     times_code, zero, one, clip))
    return float(_scalar_fold_np(midx, n_vars, pos, neg, plus_code,
                                 times_code, zero, one, clip))


# --- dual-number (weight, gradient) fold -------------------------------------

@njit(cache=True)
def _grad_fold_nb(midx, n_vars, pos_w, pos_g, neg_w, neg_g):
    accw = 0.0
    accg = 0.0
    for t in range(midx.shape[0]):
        i = midx[t]
        w = 1.0
        g = 0.0
        for v in range(1, n_vars + 1):
            if (i >> (n_vars - v)) & 1:
                lw = pos_w[v - 1]
                lg = pos_g[v - 1]
            else:
                lw = neg_w[v - 1]
                lg = neg_g[v - 1]
            g = g * lw + w * lg
            w = w * lw
        accw += w
        accg += g
    return accw, accg


def _grad_fold_np(midx, n_vars, pos_w, pos_g, neg_w, neg_g):
    accw = 0.0
    accg = 0.0
    shifts = n_vars - np.arange(1, n_vars + 1, dtype=np.int64)
    for lo in range(0, midx.shape[0], _CHUNK):
        chunk = midx[lo:lo + _CHUNK]
        w = np.ones(chunk.shape[0])
        g = np.zeros(chunk.shape[0])
        for v in range(1, n_vars + 1):
            bit = ((chunk >> shifts[v - 1]) & 1).astype(bool)
            lw = np.where(bit, pos_w[v - 1], neg_w[v - 1])
            lg = np.where(bit, pos_g[v - 1], neg_g[v - 1])
            g = g * lw + w * lg
            w = w * lw
        accw += w.sum()
        accg += g.sum()
    return accw, accg


def grad_fold(midx, n_vars, pos_w, pos_g, neg_w, neg_g, backend=None):
    """Sum of dual-number products over the given assignment indices."""
    midx = np.asarray(midx, np.int64)
    args = [np.asarray(a, np.float64) for a in (pos_w, pos_g, neg_w, neg_g)]
    if (backend or BACKEND) == "numba":
        w, g = _grad_fold_nb(midx, n_vars, *args)
    else:
        w, g = _grad_fold_np(midx, n_vars, *args)
    return float(w), float(g)


def warm_up():
    """Trigger JIT compilation of all kernels on a tiny instance."""
    kinds = np.array([2, 2, 4], np.int8)
    lits = np.array([1, -1, 0], np.int32)
    ptr = np.array([0, 0, 0, 2], np.int64)
    idx = np.array([0, 1], np.int64)
    mask = model_mask((kinds, lits, ptr, idx), 1, 2)
    midx = np.nonzero(mask)[0]
    scalar_fold(midx, 1, [0.5], [0.5], 0, 0, 0.0, 1.0, float("inf"))
    grad_fold(midx, 1, [0.5], [1.0], [0.5], [-1.0])
