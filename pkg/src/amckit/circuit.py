"""NNF circuit data model, c2d file format, property checks, smoothing.

File format (c2d convention):
    header                 nnf <node-count> <edge-count> <variable-count>
    leaf                   L <signed-literal>
    conjunction            A <child-count> <child-ids...>
    disjunction            O <decision-var-or-0> <child-count> <child-ids...>
Node ids are 0-based line positions after the header; children must precede
their parents; the root is the last node.  ``A 0`` encodes true and
``O 0 0`` false.  The disjunction line's first field is a decision-variable
hint: it is preserved on round-trips but never trusted for determinism.

Circuits are immutable after construction.  Structural hashing at build
time deduplicates shared subcircuits, so node indices are not generally
those of the source file, but semantics and round-trip identity on already
deduplicated circuits are preserved.
"""

import enum
from dataclasses import dataclass, field

from .errors import BudgetError, ParseError


class Kind(enum.IntEnum):
    FALSE = 0
    TRUE = 1
    LITERAL = 2
    AND = 3
    OR = 4


@dataclass(frozen=True)
class Node:
    kind: Kind
    literal: int = 0
    children: tuple = ()
    hint: int = 0

    def key(self):
        return (int(self.kind), self.literal, self.children, self.hint)


@dataclass(frozen=True)
class Circuit:
    variable_count: int
    nodes: tuple
    root: int

    def __len__(self):
        return len(self.nodes)


class CircuitBuilder:
    """Append-only builder with structural hashing of nodes."""

    def __init__(self, variable_count):
        self.variable_count = variable_count
        self._nodes = []
        self._index = {}

    def _add(self, node):
        key = node.key()
        found = self._index.get(key)
        if found is None:
            found = len(self._nodes)
            self._nodes.append(node)
            self._index[key] = found
        return found

    def true(self):
        return self._add(Node(Kind.TRUE))

    def false(self):
        return self._add(Node(Kind.FALSE))

    def literal(self, lit):
        var = abs(lit)
        if not 1 <= var <= self.variable_count:
            raise ValueError("literal %d out of range 1..%d"
                             % (lit, self.variable_count))
        return self._add(Node(Kind.LITERAL, literal=lit))

    def conj(self, children):
        children = tuple(children)
        if not children:
            return self.true()
        self._check_children(children)
        return self._add(Node(Kind.AND, children=children))

    def disj(self, children, hint=0):
        children = tuple(children)
        if not children:
            return self.false()
        self._check_children(children)
        return self._add(Node(Kind.OR, children=children, hint=hint))

    def _check_children(self, children):
        for c in children:
            if not 0 <= c < len(self._nodes):
                raise ValueError("child index %d does not exist yet" % c)

    def copy_node(self, node, mapped_children):
        if node.kind == Kind.AND:
            return self.conj(mapped_children)
        if node.kind == Kind.OR:
            return self.disj(mapped_children, hint=node.hint)
        if node.kind == Kind.LITERAL:
            return self.literal(node.literal)
        return self.true() if node.kind == Kind.TRUE else self.false()

    def finish(self, root):
        if not 0 <= root < len(self._nodes):
            raise ValueError("root index %d does not exist" % root)
        # nodes after the root cannot be its ancestors (topological order),
        # so they are unreachable scaffolding; drop them
        nodes = tuple(self._nodes[:root + 1])
        return Circuit(self.variable_count, nodes, root)


def parse_nnf(text):
    """Parse the c2d NNF format into a (deduplicated) circuit."""
    lines = text.splitlines()
    header = None
    raw = []
    raw_lines = []
    for lineno, rawline in enumerate(lines, start=1):
        line = rawline.strip()
        if not line or line.startswith("c"):
            continue
        fields = line.split()
        if header is None:
            if fields[0] != "nnf" or len(fields) != 4:
                raise ParseError("expected header 'nnf <nodes> <edges> <vars>'",
                                 lineno)
            try:
                header = tuple(int(f) for f in fields[1:])
            except ValueError:
                raise ParseError("non-numeric header field", lineno) from None
            if min(header) < 0:
                raise ParseError("negative header count", lineno)
            continue
        raw.append(fields)
        raw_lines.append(lineno)
    if header is None:
        raise ParseError("no nnf header found")
    node_count, _, variable_count = header
    if len(raw) != node_count:
        raise ParseError("header declares %d nodes but body has %d"
                         % (node_count, len(raw)),
                         raw_lines[-1] if raw_lines else None)

    builder = CircuitBuilder(variable_count)
    remap = []
    for own, (fields, lineno) in enumerate(zip(raw, raw_lines)):
        tag = fields[0]
        try:
            args = [int(f) for f in fields[1:]]
        except ValueError:
            raise ParseError("non-numeric field in %r" % " ".join(fields),
                             lineno) from None
        if tag == "L":
            if len(args) != 1 or args[0] == 0:
                raise ParseError("leaf needs one nonzero literal", lineno)
            if abs(args[0]) > variable_count:
                raise ParseError("variable %d out of range 1..%d"
                                 % (abs(args[0]), variable_count), lineno)
            remap.append(builder.literal(args[0]))
        elif tag == "A":
            if not args or args[0] != len(args) - 1:
                raise ParseError("conjunction child count mismatch", lineno)
            remap.append(builder.conj(_remap_children(args[1:], own, remap,
                                                      lineno)))
        elif tag == "O":
            if len(args) < 2 or args[1] != len(args) - 2:
                raise ParseError("disjunction child count mismatch", lineno)
            remap.append(builder.disj(_remap_children(args[2:], own, remap,
                                                      lineno),
                                      hint=args[0]))
        else:
            raise ParseError("unknown node tag %r" % tag, lineno)
    if not remap:
        raise ParseError("circuit has no nodes")
    return builder.finish(remap[-1])


def _remap_children(ids, own, remap, lineno):
    out = []
    for child in ids:
        if child >= own:
            raise ParseError("child %d does not precede node %d"
                             % (child, own), lineno)
        if child < 0:
            raise ParseError("negative child index", lineno)
        out.append(remap[child])
    return out


def write_nnf(circuit):
    """Render a circuit in the c2d NNF format (root last)."""
    edges = sum(len(n.children) for n in circuit.nodes)
    out = ["nnf %d %d %d" % (len(circuit.nodes), edges,
                             circuit.variable_count)]
    for node in circuit.nodes:
        if node.kind == Kind.TRUE:
            out.append("A 0")
        elif node.kind == Kind.FALSE:
            out.append("O 0 0")
        elif node.kind == Kind.LITERAL:
            out.append("L %d" % node.literal)
        elif node.kind == Kind.AND:
            out.append("A %d %s" % (len(node.children),
                                    " ".join(map(str, node.children))))
        else:
            out.append("O %d %d %s" % (node.hint, len(node.children),
                                       " ".join(map(str, node.children))))
    return "\n".join(out) + "\n"


def _mention_masks(circuit):
    masks = []
    for node in circuit.nodes:
        if node.kind == Kind.LITERAL:
            masks.append(1 << abs(node.literal))
        elif node.kind in (Kind.AND, Kind.OR):
            m = 0
            for c in node.children:
                m |= masks[c]
            masks.append(m)
        else:
            masks.append(0)
    return masks


def _mask_vars(mask):
    out = []
    v = 1
    while mask >> v:
        if (mask >> v) & 1:
            out.append(v)
        v += 1
    return out


def mentioned_vars(circuit):
    """Per-node sets of variables mentioned by each subcircuit."""
    return tuple(frozenset(_mask_vars(m)) for m in _mention_masks(circuit))


@dataclass(frozen=True)
class DecompositionWitness:
    and_node: int
    variable: int
    child_a: int
    child_b: int


@dataclass(frozen=True)
class SmoothnessWitness:
    or_node: int
    child_a: int
    child_b: int
    variable: int


@dataclass(frozen=True)
class DeterminismWitness:
    or_node: int
    child_a: int
    child_b: int
    model: tuple


def check_decomposable(circuit):
    """(flag, witness): do all AND children have pairwise disjoint variables?"""
    masks = _mention_masks(circuit)
    for idx, node in enumerate(circuit.nodes):
        if node.kind != Kind.AND:
            continue
        seen = 0
        for pos, child in enumerate(node.children):
            overlap = masks[child] & seen
            if overlap:
                var = _mask_vars(overlap)[0]
                other = next(p for p in node.children[:pos]
                             if masks[p] & (1 << var))
                return False, DecompositionWitness(idx, var, other, child)
            seen |= masks[child]
    return True, None


def check_smooth(circuit):
    """(flag, witness): do all OR children mention identical variable sets?"""
    masks = _mention_masks(circuit)
    for idx, node in enumerate(circuit.nodes):
        if node.kind != Kind.OR:
            continue
        first = node.children[0]
        for child in node.children[1:]:
            diff = masks[first] ^ masks[child]
            if diff:
                var = _mask_vars(diff)[0]
                return False, SmoothnessWitness(idx, first, child, var)
    return True, None


def _decision_literal(circuit, child):
    """Literals asserted directly by a child of a disjunction."""
    node = circuit.nodes[child]
    if node.kind == Kind.LITERAL:
        return {node.literal}
    if node.kind == Kind.AND:
        return {circuit.nodes[c].literal for c in node.children
                if circuit.nodes[c].kind == Kind.LITERAL}
    return set()


def check_deterministic_syntactic(circuit):
    """Structural shortcut: every OR is a two-child decision on a variable.

    Sound but incomplete for semantic determinism.
    """
    for node in circuit.nodes:
        if node.kind != Kind.OR or len(node.children) <= 1:
            continue
        if len(node.children) != 2:
            return False
        lits_a = _decision_literal(circuit, node.children[0])
        lits_b = _decision_literal(circuit, node.children[1])
        if not any(-lit in lits_b for lit in lits_a):
            return False
    return True


def check_deterministic_semantic(circuit, budget=24):
    """(flag, witness): are OR children pairwise logically inconsistent?

    flag is True/False when decided or None when some OR node's child pair
    mentions more than ``budget`` variables (never a silent pass).  A False
    flag carries a shared model of two children as its witness.
    """
    from .obdd import OP_AND, OP_OR, ObddStore

    masks = _mention_masks(circuit)
    store = ObddStore(range(1, circuit.variable_count + 1))
    diagrams = {}

    def diagram(idx):
        hit = diagrams.get(idx)
        if hit is not None:
            return hit
        node = circuit.nodes[idx]
        if node.kind == Kind.TRUE:
            ref = store.true
        elif node.kind == Kind.FALSE:
            ref = store.false
        elif node.kind == Kind.LITERAL:
            ref = store.mk_var(abs(node.literal))
            if node.literal < 0:
                ref = store.negate(ref)
        else:
            op = OP_AND if node.kind == Kind.AND else OP_OR
            ref = diagram(node.children[0])
            for child in node.children[1:]:
                ref = store.apply(op, ref, diagram(child))
        diagrams[idx] = ref
        return ref

    undecided = False
    for idx, node in enumerate(circuit.nodes):
        if node.kind != Kind.OR or len(node.children) <= 1:
            continue
        kids = node.children
        for i in range(len(kids)):
            for j in range(i + 1, len(kids)):
                pair_mask = masks[kids[i]] | masks[kids[j]]
                if bin(pair_mask).count("1") > budget:
                    undecided = True
                    continue
                both = store.apply(OP_AND, diagram(kids[i]), diagram(kids[j]))
                if not store.is_false(both):
                    partial = store.satisfying_assignment(both)
                    model = tuple(v if partial.get(v, False) else -v
                                  for v in _mask_vars(pair_mask))
                    return False, DeterminismWitness(idx, kids[i], kids[j],
                                                     model)
    if undecided:
        return None, None
    return True, None


@dataclass(frozen=True)
class PropertyReport:
    decomposable: bool
    decomposable_witness: object
    deterministic: object  # True / False / None (undecided within budget)
    deterministic_witness: object
    smooth: bool
    smooth_witness: object
    class_label: str
    qualifier: str = ""  # "at least " when determinism is undecided

    def flags(self):
        return (self.decomposable, self.deterministic, self.smooth)


def class_name(decomposable, deterministic, smooth):
    name = "DNNF" if decomposable else "NNF"
    prefix = ("s" if smooth else "") + ("d" if deterministic else "")
    return prefix + "-" + name if prefix else name


def classify_circuit(circuit, budget=24):
    """Run all three property checks and name the circuit class."""
    dec, dec_wit = check_decomposable(circuit)
    smo, smo_wit = check_smooth(circuit)
    if check_deterministic_syntactic(circuit):
        det, det_wit = True, None
    else:
        det, det_wit = check_deterministic_semantic(circuit, budget)
    qualifier = ""
    if det is None:
        qualifier = "at least "
    label = class_name(dec, bool(det), smo)
    return PropertyReport(dec, dec_wit, det, det_wit, smo, smo_wit,
                          label, qualifier)


def smooth(circuit, extend_root=False):
    """Conjoin OR children with (v OR -v) gadgets for their missing variables.

    Gadgets target each OR node's own mentioned-variable union; with
    ``extend_root`` the root is additionally extended to the full declared
    variable set (needed when a non-neutral task must honor unmentioned
    variables).  Preserves decomposability, determinism and the model set
    over the declared variables.
    """
    masks = _mention_masks(circuit)
    builder = CircuitBuilder(circuit.variable_count)
    gadgets = {}

    def gadget(v):
        hit = gadgets.get(v)
        if hit is None:
            hit = builder.disj([builder.literal(v), builder.literal(-v)],
                               hint=v)
            gadgets[v] = hit
        return hit

    changed = False
    remap = []
    for idx, node in enumerate(circuit.nodes):
        if node.kind != Kind.OR:
            remap.append(builder.copy_node(node,
                                           [remap[c] for c in node.children]))
            continue
        union = masks[idx]
        new_children = []
        for child in node.children:
            missing = union & ~masks[child]
            mapped = remap[child]
            if missing:
                changed = True
                mapped = builder.conj([mapped] + [gadget(v)
                                                  for v in _mask_vars(missing)])
            new_children.append(mapped)
        remap.append(builder.disj(new_children, hint=node.hint))

    root = remap[circuit.root]
    if extend_root and circuit.nodes[circuit.root].kind != Kind.FALSE:
        full = 0
        for v in range(1, circuit.variable_count + 1):
            full |= 1 << v
        missing = full & ~masks[circuit.root]
        if missing:
            changed = True
            root = builder.conj([root] + [gadget(v)
                                          for v in _mask_vars(missing)])
    if not changed:
        return circuit
    return builder.finish(root)


def enumeration_budget_check(circuit, budget):
    if circuit.variable_count > budget:
        raise BudgetError(
            "enumeration over %d variables needs 2^%d = %d assignments "
            "(budget allows 2^%d)"
            % (circuit.variable_count, circuit.variable_count,
               1 << circuit.variable_count, budget))
