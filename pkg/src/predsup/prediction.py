"""Three-valued membership, prediction vectors and evaluation presets."""

from __future__ import annotations

import enum
import itertools
import json
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

from .automaton import Automaton


class Mark(enum.IntEnum):
    """Membership of a reach set in the critical states.

    The integer values fix the canonical order ``N < U < Y``.
    """

    N = 0
    U = 1
    Y = 2

    def __str__(self):
        return self.name


MARKS = (Mark.N, Mark.U, Mark.Y)

Vector = tuple  # tuple[Mark, ...] of length horizon + 1


def vec(text: str | Iterable[str]) -> Vector:
    """``vec("NYN") -> (Mark.N, Mark.Y, Mark.N)``."""
    return tuple(Mark[c] for c in text)


def format_vector(v: Sequence[Mark]) -> str:
    return "".join(m.name for m in v)


def membership(q: Iterable[int], critical: Iterable[int]) -> Mark:
    """Y if ``q`` lies inside ``critical``, N if disjoint, U otherwise."""
    q = frozenset(q)
    if not q:
        raise ValueError("membership of an empty state set is undefined")
    inside = q & frozenset(critical)
    if len(inside) == len(q):
        return Mark.Y
    if not inside:
        return Mark.N
    return Mark.U


def combine(marks: Iterable[Mark]) -> Mark | None:
    """Fold successor marks: Y if all Y, N if all N, U otherwise.

    Returns None for an empty collection; a state with no successor has no
    well-defined future mark.
    """
    seen = set(marks)
    if not seen:
        return None
    if len(seen) == 1:
        return next(iter(seen))
    return Mark.U


def iter_vectors(horizon: int, first: Mark | None = None):
    """All vectors of length ``horizon + 1`` in N < U < Y order, optionally
    with entry 0 fixed."""
    heads = MARKS if first is None else (first,)
    for h in heads:
        for tail in itertools.product(MARKS, repeat=horizon):
            yield (h,) + tail


def u_leq(v: Sequence[Mark], w: Sequence[Mark]) -> bool:
    """``v <=_U w``: every U of ``v`` at instants >= 1 is also a U of ``w``."""
    if len(v) != len(w):
        raise ValueError("prediction vectors of different lengths")
    return all(w[i] is Mark.U for i in range(1, len(v)) if v[i] is Mark.U)


def u_less(v: Sequence[Mark], w: Sequence[Mark]) -> bool:
    return u_leq(v, w) and any(
        v[i] is not Mark.U and w[i] is Mark.U for i in range(1, len(v))
    )


# ---------------------------------------------------------------------------
# properties

PREDICATES = ("pre_opacity", "predictability")


@dataclass(frozen=True)
class PropertySpec:
    """A prediction-based property: critical states plus an evaluation preset.

    ``critical`` holds state indices.  For ``predictability`` it is the fault
    set; the remaining states are the normal ones.
    """

    critical: frozenset
    horizon: int
    kind: str
    K: int
    M: int

    def __post_init__(self):
        object.__setattr__(self, "critical", frozenset(self.critical))
        if self.kind not in PREDICATES:
            raise ValueError(f"unknown predicate {self.kind!r}; expected one of {PREDICATES}")
        if self.horizon < 0:
            raise ValueError("horizon must be non-negative")
        if not 0 <= self.K <= self.M <= self.horizon:
            raise ValueError(f"need 0 <= K <= M <= H, got K={self.K}, M={self.M}, H={self.horizon}")

    def evaluate(self, vectors: Iterable[Sequence[Mark]]) -> bool:
        return evaluate(self, vectors)


def evaluate(spec: PropertySpec, vectors: Iterable[Sequence[Mark]]) -> bool:
    vectors = list(vectors)
    for v in vectors:
        if len(v) != spec.horizon + 1:
            raise ValueError(f"vector of length {len(v)} under horizon {spec.horizon}")
    if spec.kind == "pre_opacity":
        return all(
            any(v[k] is not Mark.Y for v in vectors)
            for k in range(spec.K, spec.M + 1)
        )
    return all(v[spec.K] is Mark.N for v in vectors) or all(
        v[spec.M] is Mark.Y for v in vectors
    )


def faults_permanent(G: Automaton, faults: Iterable[int]) -> bool:
    """True if no transition leaves the fault set."""
    faults = frozenset(faults)
    return all(y in faults for x in faults for _, y in G.successors(x))


def property_from_dict(G: Automaton, data: dict, horizon: int | None = None) -> PropertySpec:
    """Build a spec from ``{"critical": [...], "horizon": H, "predicate": {...}}``.

    ``horizon`` overrides the value in ``data`` when given.
    """
    try:
        pred = data["predicate"]
        critical = G.indices(data["critical"])
        H = data["horizon"] if horizon is None else horizon
        spec = PropertySpec(critical, int(H), pred["kind"], int(pred["K"]), int(pred["M"]))
    except KeyError as exc:
        raise ValueError(f"property spec: {exc.args[0]}") from None
    if spec.kind == "predictability" and not faults_permanent(G, spec.critical):
        warnings.warn("fault states are not permanent in this plant", stacklevel=2)
    return spec


def property_to_dict(G: Automaton, spec: PropertySpec) -> dict:
    return {
        "critical": [G.name(x) for x in sorted(spec.critical)],
        "horizon": spec.horizon,
        "predicate": {"kind": spec.kind, "K": spec.K, "M": spec.M},
    }


def load_property(G: Automaton, path, horizon: int | None = None) -> PropertySpec:
    with open(path, encoding="utf-8") as fh:
        return property_from_dict(G, json.load(fh), horizon)
