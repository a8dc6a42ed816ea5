"""Noncontextual value assignments over commuting contexts.

A :class:`ContextTable` lists ±1-valued observables and groups them into
contexts, each carrying the value the product of its members must take.
Without a reference state the product is an operator identity
(``prod = r * I``); with one it is an eigenvalue condition on that state
(``prod |psi> = r |psi>``).

Text format, one directive per line, ``#`` starts a comment::

    sites 2                 # optional, otherwise inferred
    obs X1   x@0
    obs X1X2 x@0 x@1
    ctx +1 X1 X2 X1X2
    amp 01 0.7071 [imag]    # optional sparse reference-state amplitude
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .hilbert import (
    STRUCT_TOL,
    HilbertError,
    SpectralObservable,
    StateVector,
    commutator_norm,
    normalize,
    pauli_string,
    parse_pauli_spec,
)

MAX_OBSERVABLES = 30
PRODUCT_TOL = 1e-8
_CHUNK = 1 << 20


class TableError(ValueError):
    pass


class TableParseError(TableError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


@dataclass(frozen=True)
class Context:
    members: tuple[int, ...]
    required: int

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(int(i) for i in self.members))
        object.__setattr__(self, "required", int(self.required))


@dataclass(frozen=True, eq=False)
class ContextTable:
    observables: tuple[SpectralObservable, ...]
    contexts: tuple[Context, ...]
    state: StateVector | None = None
    name: str = ""

    def __post_init__(self):
        names = [o.name for o in self.observables]
        if len(set(names)) != len(names):
            raise TableError("observable names must be unique")
        for o in self.observables:
            if not set(o.eigenvalues) <= {1.0, -1.0}:
                raise TableError(f"{o.name} is not ±1-valued")
        n = len(self.observables)
        for k, c in enumerate(self.contexts):
            if c.required not in (1, -1):
                raise TableError(f"context {k}: required product must be ±1")
            if not c.members or any(not 0 <= i < n for i in c.members):
                raise TableError(f"context {k}: bad member indices {c.members}")
        if self.state is not None and self.observables and self.state.dim != self.observables[0].dim:
            raise TableError("reference state dimension does not match observables")

    @property
    def names(self) -> list[str]:
        return [o.name for o in self.observables]

    def context_label(self, k: int) -> str:
        c = self.contexts[k]
        return f"{k}:{{{' '.join(self.names[i] for i in c.members)}}}={c.required:+d}"

    def masks(self) -> list[int]:
        """Context membership as bit masks; observable ``i`` is bit ``N-1-i``."""
        n = len(self.observables)
        out = []
        for c in self.contexts:
            m = 0
            for i in c.members:
                m ^= 1 << (n - 1 - i)
            out.append(m)
        return out


@dataclass(frozen=True)
class TableReport:
    commutator_residuals: tuple[float, ...]
    product_residuals: tuple[float, ...]

    @property
    def max_residual(self) -> float:
        return max(self.commutator_residuals + self.product_residuals, default=0.0)


def verify_table(table: ContextTable, tol: float = PRODUCT_TOL) -> TableReport:
    comms, prods = [], []
    for k, c in enumerate(table.contexts):
        ops = [table.observables[i].op for i in c.members]
        comm = max((commutator_norm(a, b) for a, b in itertools.combinations(ops, 2)), default=0.0)
        if comm >= STRUCT_TOL:
            raise TableError(f"context {table.context_label(k)}: members do not commute ({comm:.3g})")
        prod = ops[0]
        for a in ops[1:]:
            prod = prod @ a
        if table.state is None:
            res = float(np.linalg.norm(prod - c.required * np.eye(prod.shape[0])))
        else:
            psi = table.state.amps
            res = float(np.linalg.norm(prod @ psi - c.required * psi))
        if res >= tol:
            raise TableError(f"context {table.context_label(k)}: product residual {res:.3g}")
        comms.append(comm)
        prods.append(res)
    return TableReport(tuple(comms), tuple(prods))


def _decode(x: int, names: list[str]) -> dict[str, int]:
    n = len(names)
    return {name: -1 if (x >> (n - 1 - i)) & 1 else 1 for i, name in enumerate(names)}


def search_assignments(table: ContextTable) -> list[dict[str, int]]:
    """Every ±1 assignment obeying the product constraint of each context.

    Exhaustive scan of all 2**N assignments, returned in lexicographic order
    over observables in table order with +1 before -1.
    """
    n = len(table.observables)
    if n > MAX_OBSERVABLES:
        raise TableError(f"{n} observables exceeds the exhaustive-search limit {MAX_OBSERVABLES}")
    masks = np.array(table.masks(), dtype=np.uint64)
    parity = np.array([c.required == -1 for c in table.contexts], dtype=np.uint8)
    hits = []
    for start in range(0, 1 << n, _CHUNK):
        xs = np.arange(start, min(start + _CHUNK, 1 << n), dtype=np.uint64)
        ok = np.ones(xs.size, dtype=bool)
        for m, p in zip(masks, parity):
            ok &= (np.bitwise_count(xs & m) & 1) == p
        hits.extend(int(x) for x in xs[ok])
    return [_decode(x, table.names) for x in hits]


def count_assignments(table: ContextTable) -> int:
    return 1 << len(table.observables)


def parity_obstruction(table: ContextTable) -> list[int] | None:
    """Indices of contexts that cover each observable an even number of times
    while their required products multiply to -1, or ``None`` if no such set exists.

    Found by Gaussian elimination over GF(2) on the context masks.
    """
    pivots: dict[int, tuple[int, int, int]] = {}
    for k, (mask, c) in enumerate(zip(table.masks(), table.contexts)):
        rhs, combo = int(c.required == -1), 1 << k
        while mask:
            lead = mask.bit_length() - 1
            if lead not in pivots:
                pivots[lead] = (mask, rhs, combo)
                break
            pm, pr, pc = pivots[lead]
            mask, rhs, combo = mask ^ pm, rhs ^ pr, combo ^ pc
        if mask == 0 and rhs == 1:
            return [j for j in range(len(table.contexts)) if (combo >> j) & 1]
    return None


def parse_table(text: str, name: str = "") -> ContextTable:
    obs_specs: list[tuple[int, str, list]] = []
    ctx_lines: list[tuple[int, int, list[str]]] = []
    amps: dict[str, complex] = {}
    sites = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            if head == "sites":
                sites = int(rest[0])
            elif head == "obs":
                if not rest:
                    raise TableParseError(lineno, "obs needs a name")
                obs_specs.append((lineno, rest[0], parse_pauli_spec(" ".join(rest[1:]))))
                if any(o[1] == rest[0] for o in obs_specs[:-1]):
                    raise TableParseError(lineno, f"duplicate observable {rest[0]!r}")
            elif head == "ctx":
                if len(rest) < 2 or rest[0] not in ("+1", "-1", "1"):
                    raise TableParseError(lineno, "expected: ctx <+1|-1> <name> ...")
                ctx_lines.append((lineno, int(rest[0]), rest[1:]))
            elif head == "amp":
                bits = rest[0]
                if set(bits) - {"0", "1"}:
                    raise TableParseError(lineno, f"bad basis label {bits!r}")
                amps[bits] = complex(float(rest[1]), float(rest[2]) if len(rest) > 2 else 0.0)
            else:
                raise TableParseError(lineno, f"unknown directive {head!r}")
        except (IndexError, ValueError, HilbertError) as e:
            if isinstance(e, TableParseError):
                raise
            raise TableParseError(lineno, str(e)) from None
    if sites is None:
        used = [s for _, _, spec in obs_specs for s, _ in spec]
        sites = max([s + 1 for s in used] + [len(b) for b in amps] + [1])
    observables = []
    for lineno, oname, spec in obs_specs:
        try:
            observables.append(pauli_string(spec, sites, name=oname))
        except HilbertError as e:
            raise TableParseError(lineno, f"observable {oname}: {e}") from None
    index = {o.name: i for i, o in enumerate(observables)}
    contexts = []
    for lineno, req, members in ctx_lines:
        missing = [m for m in members if m not in index]
        if missing:
            raise TableParseError(lineno, f"unknown observable(s) {missing}")
        contexts.append(Context(tuple(index[m] for m in members), req))
    state = None
    if amps:
        vec = np.zeros(2**sites, dtype=complex)
        for bits, a in amps.items():
            if len(bits) != sites:
                raise TableError(f"basis label {bits!r} does not have {sites} sites")
            vec[int(bits, 2)] = a
        state = normalize(vec, (2,) * sites)
    return ContextTable(tuple(observables), tuple(contexts), state, name)


def load_table(path_or_name: str | Path) -> ContextTable:
    """Read a table file, or a built-in table by name (see :data:`BUILTIN_TABLES`)."""
    p = Path(path_or_name)
    if p.is_file():
        return parse_table(p.read_text(encoding="utf-8"), p.stem)
    if str(path_or_name) in BUILTIN_TABLES:
        return builtin_table(str(path_or_name))
    raise FileNotFoundError(f"no table file or built-in table named {path_or_name!r}")


BUILTIN_TABLES = ("mermin_square", "ghz", "ghz_operators")


def builtin_table(name: str) -> ContextTable:
    if name not in BUILTIN_TABLES:
        raise KeyError(name)
    text = resources.files("ppsim.tables").joinpath(f"{name}.txt").read_text(encoding="utf-8")
    return parse_table(text, name)
