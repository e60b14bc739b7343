"""Outcome records and their deterministic JSON encoding."""

from dataclasses import dataclass, field, fields, is_dataclass
from fractions import Fraction

import numpy as np


def encode(obj):
    """JSON-ready copy of ``obj``: Fractions become ints or ``"p/q"`` strings, arrays become lists."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else str(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if x != x or x in (float("inf"), float("-inf")):
            return str(x)
        return x
    if isinstance(obj, (complex, np.complexfloating)):
        return [encode(obj.real), encode(obj.imag)]
    if isinstance(obj, np.ndarray):
        return [encode(x) for x in obj.tolist()] if obj.dtype != object else [encode(x) for x in obj]
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(x) for x in obj]
    if is_dataclass(obj):
        return {f.name: encode(getattr(obj, f.name)) for f in fields(obj)}
    raise TypeError(f"cannot encode {type(obj).__name__}")


@dataclass(frozen=True)
class PartitionCertificate:
    """A split (I, I^c) of a family with the dimensions of both spans; indices are 1-based."""

    subset: tuple
    complement: tuple
    dim_subset: int
    dim_complement: int
    n: int

    @property
    def verdict(self):
        if self.dim_subset < self.n and self.dim_complement < self.n:
            return "BothDeficient"
        return "Spanning"

    @property
    def both_hyperplanes(self):
        return self.dim_subset == self.dim_complement == self.n - 1

    def as_sets(self):
        return frozenset([frozenset(self.subset), frozenset(self.complement)])

    def to_dict(self):
        return {
            "subset": list(self.subset),
            "complement": list(self.complement),
            "dim_subset": self.dim_subset,
            "dim_complement": self.dim_complement,
            "ambient_dim": self.n,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class Certificate:
    """Decision on one property plus whatever backs it up.

    ``decision`` is ``PASS``/``FAIL`` for combinatorial checks; FAIL always
    carries a witness.
    """

    property: str
    decision: str
    arithmetic_mode: str
    witness: object = None
    details: dict = field(default_factory=dict)
    notes: tuple = ()

    @property
    def passed(self):
        return self.decision.startswith("PASS")

    @property
    def failed(self):
        return self.decision == "FAIL"

    def to_dict(self):
        out = {f.name: encode(getattr(self, f.name)) for f in fields(self)}
        out["notes"] = list(self.notes)
        return out


@dataclass(frozen=True)
class PRCertificate(Certificate):
    """Phase / norm retrieval outcome.

    ``PASS_exact`` is backed by an exact combinatorial criterion,
    ``PASS_budgeted`` by a finite multistart search that found nothing, and
    ``FAIL`` by a verified witness pair.
    """

    search_budget: int = 0
    min_residual: float = None
    verification: str = None
