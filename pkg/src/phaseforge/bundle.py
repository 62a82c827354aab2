"""Self-contained instance bundles: signals, domains, and the claims to check.

A builder emits a Bundle; ``verification.run_claims`` executes it. Bundles
round-trip through JSON so the CLI subcommands compose through pipes, and a
stored bundle is sufficient to reproduce every verdict.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import scalars
from .continuous import ContinuousSignal, ContinuousStencil, DeltaTrain
from .geometry import ConvexBody
from .lattice import LatticeSignal, Stencil

BUNDLE_FORMAT = "ambiguity-bundle/1"


@dataclass
class Claim:
    """One machine-checkable assertion, naming its checking operation."""

    name: str
    kind: str
    expected: bool
    checker: str  # "module.operation" that decides the claim
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "expected": self.expected,
            "checker": self.checker,
            "params": self.params,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Claim":
        return cls(
            name=obj["name"],
            kind=obj["kind"],
            expected=bool(obj["expected"]),
            checker=obj["checker"],
            params=obj.get("params", {}),
        )


@dataclass
class Background:
    """Reference/candidate split for background (holographic) instances."""

    w0: object
    w1: object
    w2: object
    reference_domain: ConvexBody  # holds the reference signal w0
    candidate_domain: ConvexBody  # holds both candidates w1, w2

    def to_json(self) -> dict:
        return {
            "w0": signal_to_json(self.w0),
            "w1": signal_to_json(self.w1),
            "w2": signal_to_json(self.w2),
            "reference_domain": self.reference_domain.to_json(),
            "candidate_domain": self.candidate_domain.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Background":
        return cls(
            w0=signal_from_json(obj["w0"]),
            w1=signal_from_json(obj["w1"]),
            w2=signal_from_json(obj["w2"]),
            reference_domain=ConvexBody.from_json(obj["reference_domain"]),
            candidate_domain=ConvexBody.from_json(obj["candidate_domain"]),
        )


def signal_to_json(sig) -> dict:
    return sig.to_json()


def signal_from_json(obj: dict):
    if obj.get("atoms") is None and "train" in obj:
        return DeltaTrain.from_json(obj)
    if "entries" in obj:
        return LatticeSignal.from_json(obj)
    if "atoms" in obj:
        return ContinuousSignal.from_json(obj)
    raise ValueError("unrecognized signal JSON")


def stencil_from_json(obj: dict, mode: str):
    if mode == "continuous":
        return ContinuousStencil.from_json(obj)
    return Stencil.from_json(obj)


@dataclass
class Bundle:
    construction: str  # CLI vocabulary: example1, example2, thm1..thm4
    mode: str  # "discrete" | "continuous"
    dim: int
    claims: list[Claim]
    stencil: object | None = None
    source: object | None = None
    signals: dict = field(default_factory=dict)
    phase: object | None = None
    background: Background | None = None
    downgraded: bool = False
    notes: list[str] = field(default_factory=list)
    params: dict = field(default_factory=dict)

    def resolve(self, slot: str):
        """Look a claim parameter slot up in the bundle."""
        if slot in self.signals:
            return self.signals[slot]
        if slot == "stencil":
            return self.stencil
        if slot == "source":
            return self.source
        if slot == "phase":
            return self.phase
        if self.background is not None:
            if slot in ("w0", "w1", "w2"):
                return getattr(self.background, slot)
            if slot in ("reference_domain", "candidate_domain"):
                return getattr(self.background, slot)
        raise KeyError(f"bundle has no slot {slot!r}")

    def claim_names(self) -> list[str]:
        return [c.name for c in self.claims]

    def to_json(self) -> dict:
        return {
            "format": BUNDLE_FORMAT,
            "construction": self.construction,
            "mode": self.mode,
            "dim": self.dim,
            "params": self.params,
            "stencil": self.stencil.to_json() if self.stencil is not None else None,
            "source": signal_to_json(self.source) if self.source is not None else None,
            "signals": {k: signal_to_json(v) for k, v in self.signals.items()},
            "phase": scalars.render(self.phase) if self.phase is not None else None,
            "background": self.background.to_json() if self.background else None,
            "downgraded": self.downgraded,
            "notes": self.notes,
            "claims": [c.to_json() for c in self.claims],
        }

    def dumps(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json(), indent=indent)

    @classmethod
    def from_json(cls, obj: dict) -> "Bundle":
        if obj.get("format") != BUNDLE_FORMAT:
            raise ValueError(f"not a {BUNDLE_FORMAT} document")
        mode = obj["mode"]
        return cls(
            construction=obj["construction"],
            mode=mode,
            dim=int(obj["dim"]),
            params=obj.get("params", {}),
            stencil=stencil_from_json(obj["stencil"], mode) if obj.get("stencil") else None,
            source=signal_from_json(obj["source"]) if obj.get("source") else None,
            signals={k: signal_from_json(v) for k, v in obj.get("signals", {}).items()},
            phase=scalars.scalar_from_json(obj["phase"]) if obj.get("phase") else None,
            background=Background.from_json(obj["background"]) if obj.get("background") else None,
            downgraded=bool(obj.get("downgraded", False)),
            notes=list(obj.get("notes", [])),
            claims=[Claim.from_json(c) for c in obj.get("claims", [])],
        )

    @classmethod
    def loads(cls, text: str) -> "Bundle":
        return cls.from_json(json.loads(text))
