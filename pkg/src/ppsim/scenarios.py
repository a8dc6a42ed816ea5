"""Named pre/post-selection experiments with their expected results.

Each constructor returns a :class:`Scenario` whose ``expected`` entries are
literal values; :func:`run_scenario` recomputes every one of them through
the generic operations and reports the differences.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from . import contextuality as ctx
from .hilbert import (
    SpectralObservable,
    StateVector,
    identity,
    involution_observable,
    pauli_string,
    product_state,
    projector_observable,
    qubit,
    state,
)
from .pps import (
    PPSEnsemble,
    abl,
    is_definite,
    product_rule_audit,
    sequential_distribution,
    weak_value,
)

CHECK_TOL = 1e-9
KINDS = ("abl", "definite", "weak", "sequential", "product_rule", "search")


class ScenarioError(RuntimeError):
    pass


@dataclass(frozen=True)
class Expectation:
    """One expected result.

    ``abl``: probability ``value`` of eigenvalue ``outcome`` for observable ``target``.
    ``definite``: ``target`` is found with certainty and equals ``value``.
    ``weak``: weak value of operator ``target``.
    ``sequential``: ideal measurements of the observables in ``target``, in
    order; ``value`` is the probability of joint ``outcome``, or when
    ``product`` is set, of the outcomes multiplying to ``product``.
    ``product_rule``: whether ``(AB)_w != A_w B_w`` for the pair ``target``.
    ``search``: number of noncontextual assignments of built-in table ``target``.
    """

    kind: str
    target: str | tuple[str, ...]
    value: float | bool
    outcome: float | tuple[float, ...] | None = None
    product: float | None = None


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    pps: PPSEnsemble
    observables: dict[str, SpectralObservable]
    expected: tuple[Expectation, ...]
    operators: dict[str, np.ndarray] = field(default_factory=dict)

    def operator(self, name: str) -> np.ndarray:
        if name in self.operators:
            return self.operators[name]
        if name in self.observables:
            return self.observables[name].op
        raise KeyError(f"{self.name}: unknown operator {name!r}")


def _observables(*obs: SpectralObservable) -> dict[str, SpectralObservable]:
    return {o.name: o for o in obs}


def _occupations(name_fmt: str, first: np.ndarray, second: np.ndarray) -> list[SpectralObservable]:
    """Projectors onto the four joint sign sectors of two commuting involutions."""
    eye = np.eye(first.shape[0])
    out = []
    for a, b in itertools.product((1, -1), repeat=2):
        label = name_fmt.format("+" if a > 0 else "-", "+" if b > 0 else "-")
        out.append(projector_observable(label, (eye + a * first) / 2 @ (eye + b * second) / 2))
    return out


def three_box() -> Scenario:
    pre = state([1, 1, 1])
    post = state([1, 1, -1])
    boxes = [projector_observable(f"P_{b}", np.diag(np.eye(3)[i])) for i, b in enumerate("ABC")]
    obs = _observables(*boxes)
    expected = (
        Expectation("abl", "P_A", 1.0, outcome=1.0),
        Expectation("abl", "P_B", 1.0, outcome=1.0),
        Expectation("weak", "P_A", 1.0),
        Expectation("weak", "P_B", 1.0),
        Expectation("weak", "P_C", -1.0),
        Expectation("weak", "P_A+P_B+P_C", 1.0),
        Expectation("sequential", ("P_A", "P_B"), 0.0, outcome=(1.0, 1.0)),
        Expectation("product_rule", ("P_A", "P_B"), True),
    )
    return Scenario("three_box", PPSEnsemble(pre, post), obs, expected, {"P_A+P_B+P_C": identity(3)})


def mermin_nonet(variant: str = "a") -> Scenario:
    ps = lambda spec, name: pauli_string(spec, 2, name=name)  # noqa: E731
    x1, x2 = ps("x@0", "X1"), ps("x@1", "X2")
    y1, y2 = ps("y@0", "Y1"), ps("y@1", "Y2")
    x1x2, y1y2 = ps("x@0 x@1", "X1X2"), ps("y@0 y@1", "Y1Y2")
    s13, s23 = ps("x@0 y@1", "X1Y2"), ps("x@1 y@0", "X2Y1")
    z1z2 = ps("z@0 z@1", "Z1Z2")
    s_prod = involution_observable("X1Y2*X2Y1", s13.op @ s23.op)
    occ = _occupations("N{}{}", s13.op, s23.op)
    obs = _observables(x1, x2, y1, y2, x1x2, y1y2, s13, s23, z1z2, s_prod, *occ)
    ops = {"N_sum": sum(o.op for o in occ)}

    if variant == "a":
        pre = product_state(qubit("x", 1), qubit("x", 1))
        post = product_state(qubit("y", 1), qubit("y", 1))
        definite = ["X1", "X2", "Y1", "Y2", "X1X2", "Y1Y2", "X1Y2", "X2Y1"]
        expected = [Expectation("definite", n, 1.0) for n in definite]
        expected += [
            Expectation("definite", "Z1Z2", -1.0),
            Expectation("sequential", ("X1", "Y2", "X2", "Y1"), 1.0, product=-1.0),
            Expectation("weak", "X1Y2*X2Y1", -1.0),
            Expectation("product_rule", ("X1Y2", "X2Y1"), True),
            Expectation("weak", "N++", 0.5),
            Expectation("weak", "N+-", 0.5),
            Expectation("weak", "N-+", 0.5),
            Expectation("weak", "N--", -0.5),
            Expectation("weak", "N_sum", 1.0),
        ]
    elif variant == "b":
        pre = product_state(qubit("x", 1), qubit("y", 1))
        post = product_state(qubit("y", 1), qubit("x", 1))
        definite = ["X1", "Y2", "Y1", "X2", "X1Y2", "X2Y1"]
        expected = [Expectation("definite", n, 1.0) for n in definite]
        expected += [
            Expectation("definite", "Z1Z2", 1.0),
            Expectation("weak", "Z1Z2", 1.0),
            Expectation("weak", "N_sum", 1.0),
        ]
    else:
        raise ValueError(f"unknown nonet variant {variant!r}")
    return Scenario(f"mermin_nonet_{variant}", PPSEnsemble(pre, post), obs, tuple(expected), ops)


def epr_ancilla() -> Scenario:
    """System spin (site 0) entangled with an ancilla qubit (site 1).

    The ancilla operators are ``f0 = Z`` and ``f1 = X`` on site 1, so ``f1``
    flips the ``f0`` label. The pre-selection is
    ``(|up>|f0=-1> - |down>|f0=+1>) / sqrt(2)``, which ``X1 f0 + f1 Z1``
    annihilates; the post-selection is ``|X1=+1>|f0=+1>``.
    """
    ps = lambda spec, name: pauli_string(spec, 2, name=name)  # noqa: E731
    z1, x1 = ps("z@0", "Z1"), ps("x@0", "X1")
    f0, f1 = ps("z@1", "F0"), ps("x@1", "F1")
    x1f0, f1z1 = ps("x@0 z@1", "X1F0"), ps("z@0 x@1", "F1Z1")
    occ = _occupations("N{}{}", z1.op, f1.op)
    obs = _observables(z1, x1, f0, f1, x1f0, f1z1, *occ)
    ops = {"X1F0+F1Z1": x1f0.op + f1z1.op, "N_sum": sum(o.op for o in occ)}
    up_m = product_state(qubit("z", 1), qubit("z", -1))
    dn_p = product_state(qubit("z", -1), qubit("z", 1))
    pre = StateVector((up_m.amps - dn_p.amps) / np.sqrt(2), (2, 2))
    post = product_state(qubit("x", 1), qubit("z", 1))
    expected = (
        Expectation("definite", "X1F0", 1.0),
        Expectation("weak", "X1F0", 1.0),
        Expectation("weak", "X1F0+F1Z1", 0.0),
        Expectation("weak", "Z1", -1.0),
        Expectation("weak", "F1", -1.0),
        Expectation("weak", "F1Z1", -1.0),
        Expectation("product_rule", ("F1", "Z1"), True),
        Expectation("weak", "N++", -0.5),
        Expectation("weak", "N+-", 0.5),
        Expectation("weak", "N-+", 0.5),
        Expectation("weak", "N--", 0.5),
        Expectation("weak", "N_sum", 1.0),
    )
    return Scenario("epr_ancilla", PPSEnsemble(pre, post), obs, expected, ops)


def ghz() -> Scenario:
    ps = lambda spec, name: pauli_string(spec, 3, name=name)  # noqa: E731
    pairs = [ps("y@1 y@2", "Y2Y3"), ps("y@0 y@1", "Y1Y2"), ps("y@0 y@2", "Y1Y3")]
    a_ops = [
        ps("x@0 y@1 y@2", "A1"),
        ps("y@0 x@1 y@2", "A2"),
        ps("y@0 y@1 x@2", "A3"),
        ps("x@0 x@1 x@2", "A4"),
    ]
    eye2 = np.eye(2)
    y = np.array([[0, -1j], [1j, 0]])
    occ = []
    for signs in itertools.product((1, -1), repeat=3):
        p = np.ones((1, 1))
        for s in signs:
            p = np.kron(p, (eye2 + s * y) / 2)
        occ.append(projector_observable("N" + "".join("+" if s > 0 else "-" for s in signs), p))
    obs = _observables(*pairs, *a_ops, *occ)
    ops = {"N_sum": sum(o.op for o in occ)}
    pre = StateVector(np.array([1, 0, 0, 0, 0, 0, 0, -1]) / np.sqrt(2), (2, 2, 2))
    post = product_state(qubit("x", -1), qubit("x", -1), qubit("x", -1))
    expected = [Expectation("weak", p.name, -1.0) for p in pairs]
    expected += [Expectation("definite", "Y1Y2", -1.0)]
    expected += [
        Expectation("weak", o.name, -0.25 if o.name in ("N+++", "N---") else 0.25) for o in occ
    ]
    expected += [
        Expectation("weak", "N_sum", 1.0),
        Expectation("search", "ghz", 0),
    ]
    return Scenario("ghz", PPSEnsemble(pre, post), obs, tuple(expected), ops)


SCENARIOS = {
    "three_box": three_box,
    "mermin_nonet_a": lambda: mermin_nonet("a"),
    "mermin_nonet_b": lambda: mermin_nonet("b"),
    "epr_ancilla": epr_ancilla,
    "ghz": ghz,
}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]()
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; known: {', '.join(SCENARIOS)}") from None


@dataclass(frozen=True)
class ReportEntry:
    kind: str
    target: str | list[str]
    expected: float | bool
    computed: float | bool
    error: float
    passed: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


@dataclass(frozen=True)
class ScenarioReport:
    scenario: str
    entries: tuple[ReportEntry, ...]

    @property
    def overall(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def failures(self) -> list[ReportEntry]:
        return [e for e in self.entries if not e.passed]

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "entries": [e.to_dict() for e in self.entries],
            "overall": self.overall,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioReport":
        entries = tuple(
            ReportEntry(e["kind"], e["target"], e["expected"], e["computed"], e["error"], e["pass"])
            for e in d["entries"]
        )
        return cls(d["scenario"], entries)

    def to_csv(self) -> str:
        lines = ["kind,target,expected,computed,error,pass"]
        for e in self.entries:
            target = e.target if isinstance(e.target, str) else " ".join(e.target)
            lines.append(
                f"{e.kind},{target},{_num(e.expected)},{_num(e.computed)},{e.error:.17g},{str(e.passed).lower()}"
            )
        return "\n".join(lines) + "\n"


def _num(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    return format(float(x), ".17g")


def _evaluate(s: Scenario, e: Expectation):
    """Return the computed value (real, or bool) and its error against ``e.value``."""
    if e.kind == "abl":
        p = abl(s.pps, s.observables[e.target]).prob(e.outcome)
        return p, abs(p - e.value)
    if e.kind == "definite":
        lam = is_definite(s.pps, s.observables[e.target])
        if lam is None:
            return float("nan"), float("inf")
        return lam, abs(lam - e.value)
    if e.kind == "weak":
        w = weak_value(s.pps, s.operator(e.target))
        return w.real, abs(w - e.value)
    if e.kind == "sequential":
        dist = sequential_distribution(s.pps, [s.observables[n] for n in e.target])
        p = dist.products().prob(e.product) if e.product is not None else dist.prob(e.outcome)
        return p, abs(p - e.value)
    if e.kind == "product_rule":
        a, b = (s.observables[n] for n in e.target)
        flag = product_rule_audit(s.pps, a, b).violation
        return flag, float(flag != e.value)
    if e.kind == "search":
        count = len(ctx.search_assignments(ctx.builtin_table(e.target)))
        return count, float(abs(count - e.value))
    raise ScenarioError(f"unknown expectation kind {e.kind!r}")


def run_scenario(s: Scenario, tol: float = CHECK_TOL) -> ScenarioReport:
    entries = []
    for e in s.expected:
        try:
            computed, err = _evaluate(s, e)
        except Exception as exc:
            raise ScenarioError(f"{s.name}: {e.kind} {e.target}: {exc}") from exc
        target = e.target if isinstance(e.target, str) else list(e.target)
        computed = bool(computed) if isinstance(e.value, bool) else float(computed)
        entries.append(ReportEntry(e.kind, target, e.value, computed, float(err), bool(err <= tol)))
    return ScenarioReport(s.name, tuple(entries))
