"""Semi-decision results shared by the word, graph and loop layers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

# Verdicts named *UpTo are evidence only as far as the stated depth.
CONCLUSIVE = {
    "DistinctAt",
    "ExceededAt",
    "ViolationAt",
    "TrivialAt",
    "NonConvergentWitness",
}


def _flat(w: Any) -> Any:
    if not isinstance(w, tuple):
        return w
    if all(isinstance(x, tuple) for x in w):
        # a pair of words
        return " | ".join(" ".join(map(str, x)) or "eps" for x in w)
    return "/".join(map(str, w))


@dataclass(frozen=True)
class Verdict:
    kind: str
    depth: int | None = None
    level: int | None = None
    position: int | None = None
    count: int | None = None
    witness: Any = None
    exact: bool = False
    detail: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def conclusive(self) -> bool:
        return self.exact or self.kind in CONCLUSIVE

    @property
    def ok(self) -> bool:
        """True for verdicts that report agreement/validity rather than a defect."""
        return self.kind in {
            "EqualUpTo",
            "ReducedUpTo",
            "BoundedUpTo",
            "CoherentUpTo",
            "TreeUpTo",
            "SeparatedUpTo",
            "NoWitnessUpTo",
            "NontrivialUpTo",
            "TrivialAt",
        }

    def __str__(self) -> str:
        parts = [
            f"{k}={v}"
            for k, v in (
                ("depth", self.depth),
                ("level", self.level),
                ("position", self.position),
                ("count", self.count),
                ("witness", self.witness),
            )
            if v is not None
        ]
        if self.exact:
            parts.append("exact")
        return f"{self.kind}({', '.join(parts)})"

    def record(self) -> dict[str, Any]:
        """Flat key/value view used by the line-oriented CLI output."""
        out: dict[str, Any] = {"verdict": self.kind}
        for k in ("depth", "level", "position", "count", "witness"):
            v = getattr(self, k)
            if v is not None:
                out[k] = _flat(v) if k == "witness" else v
        out["conclusive"] = str(self.conclusive).lower()
        return out
