"""DIMACS CNF parsing and the CNF -> OBDD -> sd-DNNF pipeline.

DIMACS format: comment lines start with 'c', the header is
``p cnf <vars> <clauses>``, and each clause is a whitespace-separated list
of nonzero literals terminated by 0 (clauses may span lines).  Duplicate
literals in a clause are dropped; tautological clauses (v and -v together)
are removed with a notice.
"""

from dataclasses import dataclass, field

from .circuit import smooth
from .errors import ParseError
from .obdd import OP_AND, OP_OR, ObddStore, obdd_to_circuit


@dataclass(frozen=True)
class Cnf:
    variable_count: int
    clauses: tuple
    notices: tuple = field(default=(), compare=False)


def parse_dimacs(text):
    header = None
    literals = []
    clauses = []
    notices = []
    clause_line = None
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise ParseError("duplicate problem line", lineno)
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise ParseError("expected 'p cnf <vars> <clauses>'", lineno)
            try:
                header = (int(fields[2]), int(fields[3]))
            except ValueError:
                raise ParseError("non-numeric problem line", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise ParseError("negative count in problem line", lineno)
            continue
        if header is None:
            raise ParseError("clause before problem line", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError("non-numeric literal %r" % tok,
                                 lineno) from None
            if lit == 0:
                _finish_clause(literals, clauses, notices, clause_line)
                literals = []
                clause_line = None
                continue
            if abs(lit) > header[0]:
                raise ParseError("literal %d out of range 1..%d"
                                 % (lit, header[0]), lineno)
            if clause_line is None:
                clause_line = lineno
            literals.append(lit)
    if header is None:
        raise ParseError("no problem line found")
    if literals:
        raise ParseError("last clause lacks its terminating 0", clause_line)
    expected = header[1]
    actual = len(clauses) + sum(1 for n in notices if n.startswith("dropped"))
    if actual != expected:
        raise ParseError("problem line declares %d clauses but body has %d"
                         % (expected, actual))
    return Cnf(header[0], tuple(clauses), tuple(notices))


def _finish_clause(literals, clauses, notices, lineno):
    seen = []
    for lit in literals:
        if lit not in seen:
            seen.append(lit)
    if any(-lit in seen for lit in seen):
        notices.append("dropped tautological clause at line %s" % lineno)
        return
    clauses.append(tuple(seen))


def compile_cnf_to_obdd(cnf, order=None):
    """Conjoin per-clause diagrams on a balanced schedule."""
    if order is None:
        order = range(1, cnf.variable_count + 1)
    order = tuple(order)
    missing = set(range(1, cnf.variable_count + 1)) - set(order)
    if missing:
        raise ValueError("order lacks variables %s" % sorted(missing))
    store = ObddStore(order)
    parts = []
    for clause in cnf.clauses:
        if not clause:
            return store.false
        acc = store.false
        for lit in clause:
            ref = store.mk_var(abs(lit))
            if lit < 0:
                ref = store.negate(ref)
            acc = store.apply(OP_OR, acc, ref)
        parts.append(acc)
    if not parts:
        return store.true
    while len(parts) > 1:
        parts = [store.apply(OP_AND, parts[k], parts[k + 1])
                 if k + 1 < len(parts) else parts[k]
                 for k in range(0, len(parts), 2)]
    return parts[0]


def compile_cnf_to_sddnnf(cnf, order=None):
    """CNF to a smooth deterministic decomposable circuit over all variables."""
    ref = compile_cnf_to_obdd(cnf, order)
    circuit = obdd_to_circuit(ref, cnf.variable_count)
    return smooth(circuit, extend_root=True)
