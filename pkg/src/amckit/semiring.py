"""Commutative semiring descriptors, labelings, and the built-in instances.

Built-ins (name: carrier, plus, times, zero, one):
    SAT      {true,false}, or, and, false, true        fixed labels true/true
    #SAT     naturals, +, *, 0, 1                      fixed labels 1/1
    WMC      nonnegative reals, +, *, 0, 1
    PROB     nonnegative reals, +, *, 0, 1             labels p / 1-p
    SENS     real polynomials, +, *, 0, 1              labels x_v / 1-x_v
    GRAD     (real, real) pairs, dual-number +/*        one gradient index
    MPE      nonnegative reals, max, *, 0, 1
    S-PATH   naturals+inf, min, +, inf, 0
    W-PATH   naturals+inf, max, min, 0, inf
    FUZZY    [0,1], max, min, 0, 1
    kWEIGHT  {0..k}, min, bounded +, k, 0
    OBDD     diagrams over an order, or, and, false, true
    WHY      variable sets, union, union, {}, {}        positive literals only
    RA+      natural polynomials, +, *, 0, 1            positive literals only

kWEIGHT's bounded addition is a +^k b = min(a+b, k), the usual weighted-CSP
reading, under which all semiring axioms hold with k annihilating.
"""

import itertools
import random
from dataclasses import dataclass, field

from .errors import CarrierError, LabelingError, UnsupportedLiteralError
from .obdd import OP_AND, OP_OR, ObddRef, ObddStore
from .values import INF, Poly, format_value, is_nat, nat_add, nat_max, nat_min, parse_value

DEFAULT_SEED = 271828
REAL_EQ_TOL = 1e-12

BUILTIN_NAMES = ("SAT", "#SAT", "WMC", "PROB", "SENS", "GRAD", "MPE",
                 "S-PATH", "W-PATH", "FUZZY", "kWEIGHT", "OBDD", "WHY", "RA+")

# kernel operation codes shared with the kernels module
PLUS_SUM, PLUS_MAX, PLUS_MIN = 0, 1, 2
TIMES_MUL, TIMES_ADD, TIMES_MIN = 0, 1, 2


@dataclass(frozen=True)
class KernelSpec:
    """How to run a semiring's brute-force fold on the numeric kernels."""

    plus_code: int
    times_code: int
    zero: float
    one: float
    clip: float
    encode: object  # Value -> float
    decode: object  # float -> Value


@dataclass(frozen=True)
class SemiringDescriptor:
    name: str
    plus_op: object
    times_op: object
    zero: object
    one: object
    flag_plus_idempotent: bool
    flag_times_idempotent_and_consistency_preserving: bool
    supports_negative_literals: bool = True
    parameters: dict = field(default_factory=dict)
    contains: object = None        # Value -> bool
    coerce: object = None          # parsed token value, var -> carrier value
    sample: object = None          # rng -> carrier value
    real_valued: bool = False
    balanced_fold: bool = False    # oracle may fold exact carriers as a tree
    kernel: object = None          # KernelSpec, "grad", or None
    default_labels: object = None  # variable -> (pos, neg) or None

    def _member(self, v):
        if self.contains is not None and not self.contains(v):
            raise CarrierError("%s: %r is not a carrier value"
                               % (self.name, v))
        return v

    def plus(self, a, b):
        return self.plus_op(self._member(a), self._member(b))

    def times(self, a, b):
        return self.times_op(self._member(a), self._member(b))

    def values_close(self, a, b, tol=REAL_EQ_TOL):
        """Equality up to ``tol`` on real-like carriers, structural otherwise."""
        if isinstance(a, bool) or isinstance(b, bool):
            return a is b
        if isinstance(a, float) or isinstance(b, float):
            return isinstance(b, (int, float)) and isinstance(a, (int, float)) \
                and abs(a - b) <= tol
        if isinstance(a, tuple) and isinstance(b, tuple):
            return len(a) == len(b) and all(abs(x - y) <= tol
                                            for x, y in zip(a, b))
        if isinstance(a, Poly) and isinstance(b, Poly):
            return a.close_to(b, tol)
        return a == b

    def default_labeling(self, variable_count):
        """The Table 1 fixed labeling, or None when labels are free inputs."""
        if self.default_labels is None:
            return None
        pos, neg = {}, {}
        for v in range(1, variable_count + 1):
            p, n = self.default_labels(v)
            pos[v] = p
            if n is not None:
                neg[v] = n
        return Labeling(variable_count, pos, neg if neg else None,
                        semiring=self)


class Labeling:
    """Per-variable positive/negative literal labels (the labeling function)."""

    def __init__(self, variable_count, pos, neg=None, semiring=None):
        self.variable_count = variable_count
        self.pos = dict(pos)
        self.neg = dict(neg) if neg else {}
        self.semiring = semiring
        for v in range(1, variable_count + 1):
            if v not in self.pos:
                raise LabelingError("variable %d has no positive label" % v)
        if semiring is not None:
            if semiring.supports_negative_literals:
                missing = [v for v in range(1, variable_count + 1)
                           if v not in self.neg]
                if missing:
                    raise LabelingError(
                        "%s labeling lacks negative labels for %s"
                        % (semiring.name, missing))
            elif self.neg:
                raise UnsupportedLiteralError(
                    "%s labels positive literals only" % semiring.name)
            if semiring.contains is not None:
                for v, val in itertools.chain(self.pos.items(),
                                              self.neg.items()):
                    if not semiring.contains(val):
                        raise CarrierError(
                            "%s: label %s of variable %d is not a carrier value"
                            % (semiring.name, format_value(val), v))

    def label(self, literal):
        var = abs(literal)
        if not 1 <= var <= self.variable_count:
            raise LabelingError("literal %d outside 1..%d"
                                % (literal, self.variable_count))
        if literal > 0:
            return self.pos[var]
        if var not in self.neg:
            raise UnsupportedLiteralError(
                "no negative label for variable %d (%s applies to positive "
                "literals only)" % (var, self.semiring.name
                                    if self.semiring else "semiring"))
        return self.neg[var]

    def label_or_unit(self, literal, desc):
        """Label of a literal, with absent negative labels reading as e-times.

        Positive-only provenance semirings mark negative labels "n/a";
        in sums over models those literals contribute nothing to the
        product, which is exactly multiplication by the times unit.
        """
        var = abs(literal)
        if literal < 0 and var not in self.neg:
            return desc.one
        return self.label(literal)


def plus(desc, a, b):
    return desc.plus(a, b)


def times(desc, a, b):
    return desc.times(a, b)


def label(lab, literal):
    return lab.label(literal)


# ---------------------------------------------------------------------------
# built-in instances

def _is_real(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and v >= 0


def _coerce_real(v, _var=None):
    if isinstance(v, Poly) and v.is_constant():
        v = v.constant_value()
    if not _is_real(v):
        raise CarrierError("expected a nonnegative real, got %r" % (v,))
    return float(v)


def _sat():
    return SemiringDescriptor(
        name="SAT",
        plus_op=lambda a, b: a or b,
        times_op=lambda a, b: a and b,
        zero=False, one=True,
        flag_plus_idempotent=True,
        flag_times_idempotent_and_consistency_preserving=True,
        contains=lambda v: isinstance(v, bool),
        coerce=lambda v, _var=None: bool(v),
        sample=lambda rng: rng.random() < 0.5,
        kernel=KernelSpec(PLUS_MAX, TIMES_MIN, 0.0, 1.0, float("inf"),
                          lambda v: 1.0 if v else 0.0,
                          lambda x: x > 0.5),
        default_labels=lambda v: (True, True),
    )


def _count():
    return SemiringDescriptor(
        name="#SAT",
        plus_op=lambda a, b: a + b,
        times_op=lambda a, b: a * b,
        zero=0, one=1,
        flag_plus_idempotent=False,
        flag_times_idempotent_and_consistency_preserving=False,
        contains=lambda v: isinstance(v, int) and not isinstance(v, bool)
        and v >= 0,
        coerce=lambda v, _var=None: int(v),
        sample=lambda rng: rng.randrange(0, 50),
        kernel=KernelSpec(PLUS_SUM, TIMES_MUL, 0.0, 1.0, float("inf"),
                          float, lambda x: int(round(x))),
        default_labels=lambda v: (1, 1),
    )


def _real_sum_prod(name):
    return SemiringDescriptor(
        name=name,
        plus_op=lambda a, b: a + b,
        times_op=lambda a, b: a * b,
        zero=0.0, one=1.0,
        flag_plus_idempotent=False,
        flag_times_idempotent_and_consistency_preserving=False,
        contains=_is_real,
        coerce=_coerce_real,
        sample=lambda rng: rng.uniform(0.0, 2.0),
        real_valued=True,
        kernel=KernelSpec(PLUS_SUM, TIMES_MUL, 0.0, 1.0, float("inf"),
                          float, float),
    )


def _mpe():
    return SemiringDescriptor(
        name="MPE",
        plus_op=lambda a, b: max(a, b),
        times_op=lambda a, b: a * b,
        zero=0.0, one=1.0,
        flag_plus_idempotent=True,
        flag_times_idempotent_and_consistency_preserving=False,
        contains=_is_real,
        coerce=_coerce_real,
        sample=lambda rng: rng.uniform(0.0, 2.0),
        real_valued=True,
        kernel=KernelSpec(PLUS_MAX, TIMES_MUL, 0.0, 1.0, float("inf"),
                          float, float),
    )


def _fuzzy():
    return SemiringDescriptor(
        name="FUZZY",
        plus_op=lambda a, b: max(a, b),
        times_op=lambda a, b: min(a, b),
        zero=0.0, one=1.0,
        flag_plus_idempotent=True,
        flag_times_idempotent_and_consistency_preserving=True,
        contains=lambda v: _is_real(v) and v <= 1,
        coerce=lambda v, _var=None: _check_unit(_coerce_real(v)),
        sample=lambda rng: rng.random(),
        real_valued=True,
        kernel=KernelSpec(PLUS_MAX, TIMES_MIN, 0.0, 1.0, float("inf"),
                          float, float),
    )


def _check_unit(x):
    if not 0.0 <= x <= 1.0:
        raise CarrierError("FUZZY values live in [0,1], got %r" % x)
    return x


def _coerce_nat(v, _var=None):
    if isinstance(v, float) and v.is_integer():
        v = int(v)
    if not is_nat(v):
        raise CarrierError("expected a natural or inf, got %r" % (v,))
    return v


def _nat_kernel(plus_code, times_code, zero, one):
    def encode(v):
        return float("inf") if v is INF else float(v)

    def decode(x):
        return INF if x == float("inf") else int(round(x))

    return KernelSpec(plus_code, times_code, zero, one, float("inf"),
                      encode, decode)


def _spath():
    return SemiringDescriptor(
        name="S-PATH",
        plus_op=nat_min,
        times_op=nat_add,
        zero=INF, one=0,
        flag_plus_idempotent=True,
        flag_times_idempotent_and_consistency_preserving=False,
        contains=is_nat,
        coerce=_coerce_nat,
        sample=lambda rng: INF if rng.random() < 0.1 else rng.randrange(0, 30),
        kernel=_nat_kernel(PLUS_MIN, TIMES_ADD, float("inf"), 0.0),
    )


def _wpath():
    return SemiringDescriptor(
        name="W-PATH",
        plus_op=nat_max,
        times_op=nat_min,
        zero=0, one=INF,
        flag_plus_idempotent=True,
        flag_times_idempotent_and_consistency_preserving=True,
        contains=is_nat,
        coerce=_coerce_nat,
        sample=lambda rng: INF if rng.random() < 0.1 else rng.randrange(0, 30),
        kernel=_nat_kernel(PLUS_MAX, TIMES_MIN, 0.0, float("inf")),
    )


def _kweight(k):
    if not isinstance(k, int) or k < 1:
        raise ValueError("kWEIGHT needs an integer parameter k >= 1")

    def contains(v):
        return isinstance(v, int) and not isinstance(v, bool) and 0 <= v <= k

    def coerce(v, _var=None):
        v = _coerce_nat(v)
        if v is INF or v > k:
            raise CarrierError("kWEIGHT(k=%d) values live in 0..%d, got %r"
                               % (k, k, v))
        return v

    return SemiringDescriptor(
        name="kWEIGHT",
        plus_op=lambda a, b: min(a, b),
        times_op=lambda a, b: min(a + b, k),
        zero=k, one=0,
        flag_plus_idempotent=True,
        flag_times_idempotent_and_consistency_preserving=False,
        parameters={"k": k},
        contains=contains,
        coerce=coerce,
        sample=lambda rng: rng.randrange(0, k + 1),
        kernel=KernelSpec(PLUS_MIN, TIMES_ADD, float(k), 0.0, float(k),
                          float, lambda x: int(round(x))),
    )


def _grad(grad_var):
    if not isinstance(grad_var, int) or grad_var < 1:
        raise ValueError("GRAD needs the gradient variable index grad_var >= 1")

    def gplus(a, b):
        return (a[0] + b[0], a[1] + b[1])

    def gtimes(a, b):
        return (a[0] * b[0], a[0] * b[1] + a[1] * b[0])

    def contains(v):
        return (isinstance(v, tuple) and len(v) == 2
                and all(isinstance(x, (int, float)) and not isinstance(x, bool)
                        for x in v) and v[0] >= 0)

    def coerce(v, _var=None):
        if not contains(v):
            raise CarrierError("GRAD values are (weight, gradient) pairs, "
                               "got %r" % (v,))
        return (float(v[0]), float(v[1]))

    return SemiringDescriptor(
        name="GRAD",
        plus_op=gplus,
        times_op=gtimes,
        zero=(0.0, 0.0), one=(1.0, 0.0),
        flag_plus_idempotent=False,
        flag_times_idempotent_and_consistency_preserving=False,
        parameters={"grad_var": grad_var},
        contains=contains,
        coerce=coerce,
        sample=lambda rng: (rng.uniform(0.0, 2.0), rng.uniform(-1.0, 1.0)),
        real_valued=True,
        kernel="grad",
    )


def _poly_contains(int_only):
    def contains(v):
        if not isinstance(v, Poly):
            return False
        if int_only:
            return all(isinstance(c, int) and not isinstance(c, bool)
                       and c >= 0 for c in v.terms.values())
        return all(isinstance(c, (int, float)) and not isinstance(c, bool)
                   for c in v.terms.values())
    return contains


def _sens():
    def coerce(v, _var=None):
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            return Poly.constant(float(v))
        if isinstance(v, Poly):
            return Poly({m: float(c) for m, c in v.terms.items()})
        raise CarrierError("SENS labels are polynomials or reals, got %r"
                           % (v,))

    def sample(rng):
        poly = Poly.constant(rng.uniform(0.0, 1.5))
        if rng.random() < 0.7:
            poly = poly + Poly.variable(rng.randrange(1, 5),
                                        rng.uniform(-1.0, 1.0))
        return poly

    return SemiringDescriptor(
        name="SENS",
        plus_op=lambda a, b: a + b,
        times_op=lambda a, b: a * b,
        zero=Poly(), one=Poly.constant(1.0),
        flag_plus_idempotent=False,
        flag_times_idempotent_and_consistency_preserving=False,
        contains=_poly_contains(int_only=False),
        coerce=coerce,
        sample=sample,
        balanced_fold=True,
        default_labels=lambda v: (Poly.variable(v, 1.0),
                                  Poly.constant(1.0) + Poly.variable(v, -1.0)),
    )


def _raplus():
    def coerce(v, _var=None):
        if isinstance(v, int) and not isinstance(v, bool) and v >= 0:
            return Poly.constant(v)
        if isinstance(v, Poly):
            return v
        raise CarrierError("RA+ labels are natural polynomials, got %r"
                           % (v,))

    def sample(rng):
        poly = Poly.constant(rng.randrange(0, 4))
        if rng.random() < 0.7:
            poly = poly + Poly.variable(rng.randrange(1, 5),
                                        rng.randrange(1, 3))
        return poly

    return SemiringDescriptor(
        name="RA+",
        plus_op=lambda a, b: a + b,
        times_op=lambda a, b: a * b,
        zero=Poly(), one=Poly.constant(1),
        flag_plus_idempotent=False,
        flag_times_idempotent_and_consistency_preserving=False,
        supports_negative_literals=False,
        contains=_poly_contains(int_only=True),
        coerce=coerce,
        sample=sample,
        balanced_fold=True,
        default_labels=lambda v: (Poly.variable(v), None),
    )


def _why():
    def coerce(v, _var=None):
        if isinstance(v, frozenset):
            return v
        raise CarrierError("WHY labels are variable sets, got %r" % (v,))

    return SemiringDescriptor(
        name="WHY",
        plus_op=lambda a, b: a | b,
        times_op=lambda a, b: a | b,
        zero=frozenset(), one=frozenset(),
        flag_plus_idempotent=True,
        flag_times_idempotent_and_consistency_preserving=True,
        supports_negative_literals=False,
        contains=lambda v: isinstance(v, frozenset),
        coerce=coerce,
        sample=lambda rng: frozenset(v for v in range(1, 7)
                                     if rng.random() < 0.4),
        balanced_fold=True,
        default_labels=lambda v: (frozenset({v}), None),
    )


def _obdd(order):
    order = tuple(order)
    store = ObddStore(order)

    def contains(v):
        return isinstance(v, ObddRef) and v.store is store

    def sample(rng):
        vs = order[:4] if len(order) >= 4 else order
        ref = store.true if rng.random() < 0.5 else store.false
        for _ in range(rng.randrange(1, 5)):
            lit = store.mk_var(rng.choice(vs))
            if rng.random() < 0.5:
                lit = store.negate(lit)
            op = OP_AND if rng.random() < 0.5 else OP_OR
            ref = store.apply(op, ref, lit)
        return ref

    return SemiringDescriptor(
        name="OBDD",
        plus_op=lambda a, b: store.apply(OP_OR, a, b),
        times_op=lambda a, b: store.apply(OP_AND, a, b),
        zero=store.false, one=store.true,
        flag_plus_idempotent=True,
        flag_times_idempotent_and_consistency_preserving=True,
        parameters={"order": order, "store": store},
        contains=contains,
        sample=sample,
        balanced_fold=True,
        default_labels=lambda v: (store.mk_var(v),
                                  store.negate(store.mk_var(v))),
    )


_ALIASES = {
    "sat": "SAT", "#sat": "#SAT", "count": "#SAT", "msat": "#SAT",
    "wmc": "WMC", "prob": "PROB", "sens": "SENS", "grad": "GRAD",
    "mpe": "MPE", "s-path": "S-PATH", "spath": "S-PATH",
    "w-path": "W-PATH", "wpath": "W-PATH", "fuzzy": "FUZZY",
    "kweight": "kWEIGHT", "obdd": "OBDD", "why": "WHY",
    "ra+": "RA+", "raplus": "RA+", "ra": "RA+",
}


def normalize_name(name):
    key = name.strip().lower().replace("_", "-")
    if key not in _ALIASES:
        raise ValueError("unknown semiring %r (known: %s)"
                         % (name, ", ".join(BUILTIN_NAMES)))
    return _ALIASES[key]


def builtin(name, k=None, grad_var=None, order=None):
    """Construct a built-in semiring descriptor by (case-insensitive) name."""
    key = name.strip().lower().replace("_", "-")
    if key in ("sat",):
        return _sat()
    if key in ("#sat", "count", "msat"):
        return _count()
    if key == "wmc":
        return _real_sum_prod("WMC")
    if key == "prob":
        return _real_sum_prod("PROB")
    if key == "sens":
        return _sens()
    if key == "grad":
        if grad_var is None:
            raise ValueError("GRAD needs grad_var=<variable index>")
        return _grad(grad_var)
    if key == "mpe":
        return _mpe()
    if key in ("s-path", "spath"):
        return _spath()
    if key in ("w-path", "wpath"):
        return _wpath()
    if key == "fuzzy":
        return _fuzzy()
    if key == "kweight":
        if k is None:
            raise ValueError("kWEIGHT needs k=<bound>")
        return _kweight(k)
    if key == "obdd":
        if order is None:
            raise ValueError("OBDD needs order=<variable order>")
        return _obdd(order)
    if key == "why":
        return _why()
    if key in ("ra+", "raplus", "ra"):
        return _raplus()
    raise ValueError("unknown semiring %r (known: %s)"
                     % (name, ", ".join(BUILTIN_NAMES)))


def canonical_labeling(desc, variable_count, rng=None):
    """A labeling following the semiring's Table 1 pattern.

    Fixed-label semirings return their fixed labeling; the others draw
    label values from ``rng`` in the shape the table prescribes (e.g.
    p / 1-p pairs for the probabilistic tasks, cost / 0 for shortest path).
    """
    fixed = desc.default_labeling(variable_count)
    if fixed is not None:
        return fixed
    rng = rng or random.Random(DEFAULT_SEED)
    pos, neg = {}, {}
    for v in range(1, variable_count + 1):
        if desc.name in ("PROB", "MPE"):
            p = rng.uniform(0.05, 0.95)
            pos[v], neg[v] = p, 1.0 - p
        elif desc.name == "WMC":
            pos[v], neg[v] = rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)
        elif desc.name == "GRAD":
            k = desc.parameters["grad_var"]
            p = rng.uniform(0.05, 0.95)
            pos[v] = (p, 1.0 if v == k else 0.0)
            neg[v] = (1.0 - p, -1.0 if v == k else 0.0)
        elif desc.name == "FUZZY":
            pos[v], neg[v] = rng.random(), 1.0
        elif desc.name == "S-PATH":
            pos[v], neg[v] = rng.randrange(0, 20), 0
        elif desc.name == "W-PATH":
            pos[v], neg[v] = rng.randrange(0, 20), INF
        elif desc.name == "kWEIGHT":
            k = desc.parameters["k"]
            pos[v] = rng.randrange(1, k + 1)
            neg[v] = rng.randrange(1, k + 1)
        else:
            raise ValueError("no canonical labeling pattern for %s"
                             % desc.name)
    return Labeling(variable_count, pos, neg, semiring=desc)


# ---------------------------------------------------------------------------
# law checking

@dataclass(frozen=True)
class LawResult:
    law: str
    passed: bool
    witness: tuple = None


@dataclass(frozen=True)
class AxiomReport:
    semiring: str
    trials: int
    laws: tuple

    @property
    def all_pass(self):
        return all(law.passed for law in self.laws)

    def failures(self):
        return [law for law in self.laws if not law.passed]


def check_axioms(desc, sampler=None, trials=1000, seed=DEFAULT_SEED):
    """Randomized test of the semiring laws; failures carry a witness."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sampler = sampler or desc.sample
    if sampler is None:
        raise ValueError("%s has no value sampler" % desc.name)
    rng = random.Random(seed)
    close = desc.values_close

    laws = (
        ("associativity(plus)",
         lambda a, b, c: close(desc.plus(desc.plus(a, b), c),
                               desc.plus(a, desc.plus(b, c)))),
        ("associativity(times)",
         lambda a, b, c: close(desc.times(desc.times(a, b), c),
                               desc.times(a, desc.times(b, c)))),
        ("commutativity(plus)",
         lambda a, b, c: close(desc.plus(a, b), desc.plus(b, a))),
        ("commutativity(times)",
         lambda a, b, c: close(desc.times(a, b), desc.times(b, a))),
        ("distributivity",
         lambda a, b, c: close(desc.times(a, desc.plus(b, c)),
                               desc.plus(desc.times(a, b),
                                         desc.times(a, c)))),
        ("identity(plus)",
         lambda a, b, c: close(desc.plus(desc.zero, a), a)),
        ("identity(times)",
         lambda a, b, c: close(desc.times(desc.one, a), a)),
        ("annihilation",
         lambda a, b, c: close(desc.times(desc.zero, a), desc.zero)
         and close(desc.times(a, desc.zero), desc.zero)),
    )

    results = []
    for law_name, check in laws:
        witness = None
        for _ in range(trials):
            a, b, c = sampler(rng), sampler(rng), sampler(rng)
            if not check(a, b, c):
                witness = (a, b, c)
                break
        results.append(LawResult(law_name, witness is None, witness))
    return AxiomReport(desc.name, trials, tuple(results))


@dataclass(frozen=True)
class PairProperties:
    plus_idempotent: bool
    pair_neutral: bool
    times_idempotent_consistency_preserving: bool


def check_pair_properties(desc, lab, trials=200, seed=DEFAULT_SEED):
    """Detect the Table 2 row/column flags for a semiring/labeling pair.

    Idempotence is sampled over the carrier; neutrality and consistency
    preservation are checked exactly over the labeling (tolerance 1e-12 on
    real carriers).  Pairs lacking negative labels are neither neutral nor
    consistency-preserving.
    """
    rng = random.Random(seed)
    plus_idem = desc.flag_plus_idempotent
    times_idem = desc.flag_times_idempotent_and_consistency_preserving
    if desc.sample is not None:
        for _ in range(trials):
            a = desc.sample(rng)
            if plus_idem and not desc.values_close(desc.plus(a, a), a):
                plus_idem = False
            if times_idem and not desc.values_close(desc.times(a, a), a):
                times_idem = False

    neutral = True
    consistency = times_idem
    for v in range(1, lab.variable_count + 1):
        if v not in lab.neg:
            neutral = False
            consistency = False
            break
        pos, neg = lab.pos[v], lab.neg[v]
        if not desc.values_close(desc.plus(pos, neg), desc.one):
            neutral = False
        if consistency and not desc.values_close(desc.times(pos, neg),
                                                 desc.zero):
            consistency = False
    return PairProperties(plus_idem, neutral, consistency)


# ---------------------------------------------------------------------------
# labeling files

def parse_labeling(text):
    """Parse a labeling file into (descriptor, labeling).

    Format (one record per line, '#' starts a comment):
        semiring <NAME> [k=<int>] [grad_var=<int>] [order=v1,v2,...]
        vars <n>
        <var-index> <pos-value> <neg-value>
    """
    desc = None
    variable_count = None
    pos, neg = {}, {}
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if desc is None:
            if fields[0] != "semiring" or len(fields) < 2:
                raise LabelingError(
                    "line %d: expected 'semiring <NAME> [params]'" % lineno)
            params = {}
            for extra in fields[2:]:
                if "=" not in extra:
                    raise LabelingError("line %d: bad parameter %r"
                                        % (lineno, extra))
                pname, pval = extra.split("=", 1)
                if pname == "order":
                    params[pname] = tuple(int(x) for x in pval.split(","))
                elif pname in ("k", "grad_var"):
                    params[pname] = int(pval)
                else:
                    raise LabelingError("line %d: unknown parameter %r"
                                        % (lineno, pname))
            desc = builtin(fields[1], **params)
            continue
        if variable_count is None:
            if fields[0] != "vars" or len(fields) != 2:
                raise LabelingError("line %d: expected 'vars <n>'" % lineno)
            variable_count = int(fields[1])
            if desc.name == "OBDD" and "order" not in desc.parameters:
                raise LabelingError("OBDD labeling needs order=...")
            continue
        if len(fields) != 3:
            raise LabelingError(
                "line %d: expected '<var> <pos-value> <neg-value>'" % lineno)
        var = int(fields[0])
        if not 1 <= var <= variable_count:
            raise LabelingError("line %d: variable %d outside 1..%d"
                                % (lineno, var, variable_count))
        pval = parse_value(fields[1], own_var=var, line=lineno)
        nval = parse_value(fields[2], own_var=var, line=lineno)
        if pval is None:
            raise LabelingError("line %d: positive label cannot be '-'"
                                % lineno)
        pos[var] = desc.coerce(pval, var) if desc.coerce else pval
        if nval is not None:
            if not desc.supports_negative_literals:
                raise UnsupportedLiteralError(
                    "line %d: %s applies to positive literals only"
                    % (lineno, desc.name))
            neg[var] = desc.coerce(nval, var) if desc.coerce else nval
    if desc is None or variable_count is None:
        raise LabelingError("labeling file lacks the semiring/vars header")
    fixed = desc.default_labeling(variable_count)
    if fixed is not None and not pos:
        return desc, fixed
    return desc, Labeling(variable_count, pos, neg, semiring=desc)
