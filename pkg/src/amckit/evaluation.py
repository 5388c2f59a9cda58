"""Bottom-up circuit evaluation and the circuit-class soundness gate.

``evaluate`` is the plain single-pass algorithm: true nodes yield the times
unit, false nodes the plus unit, literals their label, disjunctions fold
children with plus and conjunctions with times.  Shared subcircuits are
computed once (nodes are stored in topological order).  ``evaluate_checked``
wraps it with the task-profile classification that decides which circuit
classes make the computation sound, and can refuse, repair by smoothing, or
force through with a warning.
"""

from dataclasses import dataclass

from .circuit import Kind, class_name, classify_circuit, mentioned_vars, smooth
from .errors import LabelingError, UnsoundError, UnsupportedLiteralError
from .semiring import check_pair_properties


@dataclass(frozen=True)
class TaskProfile:
    plus_idempotent: bool
    pair_neutral: bool
    times_idempotent_consistency_preserving: bool


@dataclass(frozen=True)
class CircuitClass:
    decomposable: bool
    deterministic: bool
    smooth: bool

    @property
    def name(self):
        return class_name(self.decomposable, self.deterministic, self.smooth)


def task_profile_of(desc, lab):
    """Profile flags of a semiring/labeling pair (labeling re-verified)."""
    props = check_pair_properties(desc, lab)
    return TaskProfile(props.plus_idempotent, props.pair_neutral,
                       props.times_idempotent_consistency_preserving)


def required_circuit_class(profile):
    """The Table-2 cell: which circuit properties the profile still needs."""
    return CircuitClass(
        decomposable=not profile.times_idempotent_consistency_preserving,
        deterministic=not profile.plus_idempotent,
        smooth=not profile.pair_neutral,
    )


def is_sound(actual, profile):
    required = required_circuit_class(profile)
    return ((actual.decomposable or not required.decomposable)
            and (actual.deterministic or not required.deterministic)
            and (actual.smooth or not required.smooth))


def _check_labels(circuit, desc, lab):
    if lab.variable_count < circuit.variable_count:
        raise LabelingError("labeling covers %d of %d circuit variables"
                            % (lab.variable_count, circuit.variable_count))
    if not desc.supports_negative_literals:
        for node in circuit.nodes:
            if node.kind == Kind.LITERAL and node.literal < 0:
                raise UnsupportedLiteralError(
                    "%s applies to positive literals only but the circuit "
                    "contains literal %d" % (desc.name, node.literal))


def evaluate(circuit, desc, lab):
    """Value of the circuit under the semiring and labeling (one pass)."""
    _check_labels(circuit, desc, lab)
    values = []
    for node in circuit.nodes:
        if node.kind == Kind.TRUE:
            values.append(desc.one)
        elif node.kind == Kind.FALSE:
            values.append(desc.zero)
        elif node.kind == Kind.LITERAL:
            values.append(lab.label(node.literal))
        else:
            op = desc.times if node.kind == Kind.AND else desc.plus
            acc = values[node.children[0]]
            for child in node.children[1:]:
                acc = op(acc, values[child])
            values.append(acc)
    return values[circuit.root]


@dataclass
class EvalNote:
    """Provenance of a checked evaluation."""

    detected_class: str
    required_class: str
    sound: bool
    repaired: bool = False
    forced: bool = False
    extended_vars: tuple = ()
    warnings: tuple = ()

    @property
    def status(self):
        if self.repaired:
            return "repaired"
        return "sound" if self.sound else "unsound"


MODES = ("strict", "repair", "force")


def evaluate_checked(circuit, desc, lab, mode="strict", extend=True,
                     budget=24):
    """Classify, gate, then evaluate; returns (value, note).

    strict refuses unsound pairings; repair applies smoothing when
    smoothness is the only missing required property (the one repair that
    is polytime and preserves the other two properties); force evaluates
    anyway and marks the note unsound.  With ``extend``, labeled variables
    the circuit never mentions multiply into the root as
    plus(label(v), label(-v)), honoring the model count over the full
    declared variable set.
    """
    if mode not in MODES:
        raise ValueError("mode must be one of %s" % (MODES,))
    _check_labels(circuit, desc, lab)
    profile = task_profile_of(desc, lab)
    required = required_circuit_class(profile)
    report = classify_circuit(circuit, budget)
    actual = CircuitClass(report.decomposable, bool(report.deterministic),
                          report.smooth)
    warnings = []
    if report.deterministic is None:
        warnings.append("determinism undecided within budget; "
                        "treated as absent")

    repaired = False
    missing = _missing(actual, required)
    if missing:
        if mode == "repair" and missing == ["smoothness"]:
            circuit = smooth(circuit, extend_root=extend)
            actual = CircuitClass(actual.decomposable, actual.deterministic,
                                  True)
            repaired = True
        elif mode == "strict":
            raise UnsoundError(
                "circuit class %s lacks %s required for %s (Table 2 cell %s)"
                % (actual.name, ", ".join(missing), desc.name, required.name))
        else:
            warnings.append("unsound: circuit class %s lacks %s (needs %s)"
                            % (actual.name, ", ".join(missing),
                               required.name))

    value = evaluate(circuit, desc, lab)

    extended = ()
    if extend:
        root_vars = mentioned_vars(circuit)[circuit.root]
        missing_vars = [v for v in range(1, lab.variable_count + 1)
                        if v not in root_vars]
        if missing_vars and circuit.nodes[circuit.root].kind != Kind.FALSE:
            for v in missing_vars:
                pair = desc.plus(lab.label_or_unit(v, desc),
                                 lab.label_or_unit(-v, desc))
                value = desc.times(value, pair)
            extended = tuple(missing_vars)

    note = EvalNote(
        detected_class=report.qualifier + report.class_label,
        required_class=required.name,
        sound=not _missing(actual, required),
        repaired=repaired,
        forced=(mode == "force" and bool(missing) and not repaired),
        extended_vars=extended,
        warnings=tuple(warnings),
    )
    return value, note


def _missing(actual, required):
    out = []
    if required.decomposable and not actual.decomposable:
        out.append("decomposability")
    if required.deterministic and not actual.deterministic:
        out.append("determinism")
    if required.smooth and not actual.smooth:
        out.append("smoothness")
    return out
