"""Carrier value types and the text grammar for labeling-file values.

Carriers map onto plain Python types wherever possible: booleans, ints,
floats, ``(float, float)`` pairs and frozensets of variable indices.  The
two extras defined here are ``INF`` (the infinity token of the min/max path
semirings, kept distinct from float infinity so naturals stay exact) and
``Poly`` (canonical sparse multivariate polynomials for the sensitivity and
provenance-polynomial carriers).

Value text grammar:
    0.6          decimal literal
    inf          the infinity token
    (0.6,1)      pair
    {1,3,7}      finite set of variable indices
    x            the labeled variable's own indeterminate
    -            "not applicable" (positive-only semirings)
Simple polynomial expressions such as ``1-x`` or ``0.3*x2`` are accepted as
a superset so complement labels of symbolic variables are expressible.
"""

import re

from .errors import ParseError

COEF_DROP = 1e-15


class _Infinity:
    """Distinguished infinity token; orders above every int."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("amckit-inf")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INF = _Infinity()


def nat_add(a, b):
    if a is INF or b is INF:
        return INF
    return a + b


def nat_min(a, b):
    return b if a is INF else (a if b is INF else min(a, b))


def nat_max(a, b):
    return a if a is INF else (b if b is INF else max(a, b))


def is_nat(v):
    return v is INF or (isinstance(v, int) and not isinstance(v, bool) and v >= 0)


class Poly:
    """Canonical sparse multivariate polynomial.

    Terms map monomials to nonzero coefficients; a monomial is a tuple of
    ``(variable, exponent)`` pairs sorted by variable with all exponents
    >= 1, the empty tuple being the constant term.  Float coefficients with
    magnitude below ``COEF_DROP`` are dropped so arithmetic stays canonical.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for mono, coef in (terms or {}).items():
            if isinstance(coef, float) and abs(coef) < COEF_DROP:
                continue
            if coef == 0:
                continue
            clean[mono] = coef
        self.terms = clean

    @classmethod
    def constant(cls, c):
        return cls({(): c})

    @classmethod
    def variable(cls, v, coef=1):
        return cls({((v, 1),): coef})

    @classmethod
    def coerce(cls, value):
        if isinstance(value, Poly):
            return value
        return cls.constant(value)

    def __add__(self, other):
        other = Poly.coerce(other)
        out = dict(self.terms)
        for mono, coef in other.terms.items():
            out[mono] = out.get(mono, 0) + coef
        return Poly(out)

    def __mul__(self, other):
        other = Poly.coerce(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = _mono_mul(m1, m2)
                out[mono] = out.get(mono, 0) + c1 * c2
        return Poly(out)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_constant(self):
        return not self.terms or set(self.terms) == {()}

    def constant_value(self):
        return self.terms.get((), 0)

    def evaluate(self, point):
        """Substitute ``point[var]`` for every indeterminate."""
        total = 0.0
        for mono, coef in self.terms.items():
            term = coef
            for var, exp in mono:
                term *= point[var] ** exp
            total += term
        return total

    def close_to(self, other, tol):
        other = Poly.coerce(other)
        for mono in set(self.terms) | set(other.terms):
            if abs(self.terms.get(mono, 0) - other.terms.get(mono, 0)) > tol:
                return False
        return True

    def __repr__(self):
        return "Poly(%s)" % format_value(self)


def _mono_mul(m1, m2):
    exps = dict(m1)
    for var, exp in m2:
        exps[var] = exps.get(var, 0) + exp
    return tuple(sorted(exps.items()))


def _num_str(x):
    if isinstance(x, float) and x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def format_value(v):
    """Render a carrier value in the labeling-file grammar."""
    if v is INF:
        return "inf"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return _num_str(v)
    if isinstance(v, tuple) and len(v) == 2:
        return "(%s,%s)" % (_num_str(v[0]), _num_str(v[1]))
    if isinstance(v, frozenset):
        return "{%s}" % ",".join(str(i) for i in sorted(v))
    if isinstance(v, Poly):
        return _format_poly(v)
    raise TypeError("cannot render value %r" % (v,))


def _format_poly(p):
    if not p.terms:
        return "0"
    parts = []
    for mono, coef in sorted(p.terms.items()):
        factors = ["x%d" % var if exp == 1 else "x%d^%d" % (var, exp)
                   for var, exp in mono]
        if not factors:
            parts.append(_num_str(coef))
        elif coef == 1:
            parts.append("*".join(factors))
        elif coef == -1:
            parts.append("-" + "*".join(factors))
        else:
            parts.append("*".join([_num_str(coef)] + factors))
    out = parts[0]
    for part in parts[1:]:
        out += " - " + part[1:] if part.startswith("-") else " + " + part
    return out


_NUM_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def _parse_number(tok):
    if _NUM_RE.match(tok):
        if re.match(r"^[+-]?\d+$", tok):
            return int(tok)
        return float(tok)
    return None


def parse_value(token, own_var=None, line=None):
    """Parse one value token; ``own_var`` resolves the ``x`` shorthand.

    Returns ``None`` for the ``-`` (not applicable) token.
    """
    tok = token.strip()
    if tok == "-":
        return None
    if tok == "inf":
        return INF
    if tok in ("true", "false"):
        return tok == "true"
    if tok.startswith("(") and tok.endswith(")"):
        inner = tok[1:-1].split(",")
        if len(inner) != 2:
            raise ParseError("pair value needs two components: %r" % token, line)
        a, b = (_parse_number(part.strip()) for part in inner)
        if a is None or b is None:
            raise ParseError("bad pair value %r" % token, line)
        return (float(a), float(b))
    if tok.startswith("{") and tok.endswith("}"):
        inner = tok[1:-1].strip()
        if not inner:
            return frozenset()
        try:
            return frozenset(int(part) for part in inner.split(","))
        except ValueError:
            raise ParseError("bad set value %r" % token, line) from None
    num = _parse_number(tok)
    if num is not None:
        return num
    return _parse_poly_expr(tok, own_var, line)


def _parse_poly_expr(tok, own_var, line):
    # sums/differences of terms, each term a product of numbers and x / xN
    text = tok.replace(" ", "")
    if not text:
        raise ParseError("empty value", line)
    pieces = re.split(r"(?=[+-])", text)
    poly = Poly()
    for piece in pieces:
        if not piece:
            continue
        sign = 1
        if piece[0] in "+-":
            sign = -1 if piece[0] == "-" else 1
            piece = piece[1:]
        coef = sign
        mono = {}
        for factor in piece.split("*"):
            num = _parse_number(factor)
            if num is not None:
                coef *= num
                continue
            m = re.match(r"^x(\d*)(?:\^(\d+))?$", factor)
            if not m:
                raise ParseError("bad value %r" % tok, line)
            var = int(m.group(1)) if m.group(1) else own_var
            if var is None:
                raise ParseError("bare 'x' outside a variable record: %r" % tok, line)
            mono[var] = mono.get(var, 0) + int(m.group(2) or 1)
        key = tuple(sorted(mono.items()))
        poly = poly + Poly({key: coef})
    return poly
