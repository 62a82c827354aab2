"""Continuous-domain signals built from axis-aligned box atoms.

A box atom has an elementary closed-form Fourier transform in every
dimension, so finite sums of shifted boxes give exact spectra without
quadrature. Delta trains (formal sums of point masses on the integer
lattice) carry the bridge between the continuous and discrete transforms.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from . import lattice, scalars
from .lattice import LatticeSignal, match_keyed_association, AssociationWitness
from .scalars import GaussianRational

_TWO_PI = 2.0 * math.pi


def _as_coords(x, dim: int | None = None):
    if isinstance(x, (int, float, Fraction)) and not isinstance(x, bool):
        x = (x,)
    coords = tuple(scalars.as_coord(c) for c in x)
    if dim is not None and len(coords) != dim:
        raise ValueError(f"expected {dim} coordinates, got {x!r}")
    return coords


def _coords_exact(coords) -> bool:
    return all(isinstance(c, Fraction) for c in coords)


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _vneg(a):
    return tuple(-x for x in a)


class BoxAtom:
    """Indicator of the open axis-aligned box center +- halfwidth."""

    __slots__ = ("center", "halfwidth")

    def __init__(self, center, halfwidth):
        self.center = _as_coords(center)
        self.halfwidth = _as_coords(halfwidth, len(self.center))
        if any(float(h) <= 0 for h in self.halfwidth):
            raise ValueError("halfwidths must be strictly positive")

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def exact(self) -> bool:
        return _coords_exact(self.center) and _coords_exact(self.halfwidth)

    def same_geometry(self, other: "BoxAtom", tol: float = 1e-12) -> bool:
        return scalars.coords_close(self.center, other.center, tol) and scalars.coords_close(
            self.halfwidth, other.halfwidth, tol
        )

    def translated(self, y) -> "BoxAtom":
        return BoxAtom(_vadd(self.center, _as_coords(y, self.dim)), self.halfwidth)

    def reflected(self, y=None) -> "BoxAtom":
        """Image under x -> y - x (the box stays a box, same halfwidth)."""
        y = (Fraction(0),) * self.dim if y is None else _as_coords(y, self.dim)
        return BoxAtom(_vsub(y, self.center), self.halfwidth)

    def open_overlaps(self, other: "BoxAtom") -> bool:
        """True when the open boxes intersect (a shared boundary does not count)."""
        for c1, h1, c2, h2 in zip(self.center, self.halfwidth, other.center, other.halfwidth):
            if abs(float(c1) - float(c2)) >= float(h1) + float(h2):
                return False
        return True

    def corners(self):
        """All 2^d closed-box corners as float tuples."""
        d = self.dim
        for mask in range(1 << d):
            yield tuple(
                float(self.center[j]) + (1 if mask >> j & 1 else -1) * float(self.halfwidth[j])
                for j in range(d)
            )

    def min_halfwidth(self) -> float:
        return min(float(h) for h in self.halfwidth)

    def __repr__(self):
        return f"BoxAtom(center={self.center}, halfwidth={self.halfwidth})"


class ContinuousSignal:
    """Finite sum of complex-weighted box atoms, in merged canonical form.

    Atoms with identical geometry are merged on construction and zero
    coefficients pruned. Distinct atoms whose open boxes intersect are
    rejected unless ``declare_overlaps`` is set: overlapping atoms are fine
    for spectra (linearity) but make pointwise-modulus reasoning ambiguous,
    so the overlap must be an explicit choice.
    """

    __slots__ = ("dim", "atoms", "exact", "has_overlaps")

    def __init__(self, dim: int, atom_pairs, *, declare_overlaps: bool = False,
                 prune: bool = False):
        if dim < 1:
            raise ValueError("dimension must be positive")
        merged: list[list] = []
        for coef, atom in atom_pairs:
            if atom.dim != dim:
                raise ValueError("atom dimension mismatch")
            for slot in merged:
                if slot[1].same_geometry(atom):
                    slot[0] = slot[0] + coef
                    break
            else:
                merged.append([scalars.as_scalar(coef), atom])
        pairs = [(c, a) for c, a in merged if not scalars.is_zero(c)]
        exact = all(scalars.is_exact(c) and a.exact for c, a in pairs)
        if not exact:
            pairs = [(complex(scalars.as_scalar(c)), a) for c, a in pairs]
        if prune and not exact and pairs:
            peak = max(abs(c) for c, _ in pairs)
            pairs = [(c, a) for c, a in pairs if abs(c) > lattice.PRUNE_REL * peak]
        pairs.sort(key=lambda ca: _atom_sort_key(ca[1]))
        overlaps = False
        for i in range(len(pairs)):
            for j in range(i + 1, len(pairs)):
                if pairs[i][1].open_overlaps(pairs[j][1]):
                    overlaps = True
        if overlaps and not declare_overlaps:
            raise ValueError(
                "distinct atoms overlap; pass declare_overlaps=True to accept"
            )
        self.dim = dim
        self.atoms = tuple((c, a) for c, a in pairs)
        self.exact = exact if pairs else True
        self.has_overlaps = overlaps

    @property
    def is_zero(self) -> bool:
        return not self.atoms

    def min_halfwidth(self) -> float:
        if self.is_zero:
            return 1.0
        return min(a.min_halfwidth() for _, a in self.atoms)

    def max_modulus(self) -> float:
        if self.is_zero:
            return 0.0
        return math.sqrt(max(float(scalars.modulus_squared(c)) for c, _ in self.atoms))

    def scaled(self, factor) -> "ContinuousSignal":
        factor = scalars.as_scalar(factor)
        return ContinuousSignal(
            self.dim, [(factor * c, a) for c, a in self.atoms], declare_overlaps=True
        )

    def shifted(self, y) -> "ContinuousSignal":
        """x -> w(x - y)."""
        return ContinuousSignal(
            self.dim, [(c, a.translated(y)) for c, a in self.atoms], declare_overlaps=True
        )

    def conj_reflected(self, y=None) -> "ContinuousSignal":
        """x -> conj(w(y - x))."""
        return ContinuousSignal(
            self.dim,
            [(scalars.conjugate(c), a.reflected(y)) for c, a in self.atoms],
            declare_overlaps=True,
        )

    def __add__(self, other: "ContinuousSignal") -> "ContinuousSignal":
        if not isinstance(other, ContinuousSignal):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return ContinuousSignal(
            self.dim, list(self.atoms) + list(other.atoms), declare_overlaps=True
        )

    def __sub__(self, other: "ContinuousSignal") -> "ContinuousSignal":
        return self + other.scaled(-1)

    def __eq__(self, other):
        """Formal equality of the merged atom lists (exact geometry)."""
        if not isinstance(other, ContinuousSignal):
            return NotImplemented
        if self.dim != other.dim or len(self.atoms) != len(other.atoms):
            return False
        for (c1, a1), (c2, a2) in zip(self.atoms, other.atoms):
            if not a1.same_geometry(a2):
                return False
            if scalars.as_scalar(c1) != scalars.as_scalar(c2):
                return False
        return True

    def __repr__(self):
        inner = ", ".join(
            f"{scalars.format_scalar(c)}*{a!r}" for c, a in self.atoms
        )
        return f"ContinuousSignal(dim={self.dim}, [{inner}])"

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "atoms": [
                {
                    "coef": scalars.render(c),
                    "center": [scalars.render_coord(x) for x in a.center],
                    "halfwidth": [scalars.render_coord(x) for x in a.halfwidth],
                }
                for c, a in self.atoms
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ContinuousSignal":
        pairs = [
            (
                scalars.scalar_from_json(e["coef"]),
                BoxAtom(
                    [scalars.coord_from_json(x) for x in e["center"]],
                    [scalars.coord_from_json(x) for x in e["halfwidth"]],
                ),
            )
            for e in obj.get("atoms") or []
        ]
        return cls(int(obj["dim"]), pairs, declare_overlaps=True)


def _atom_sort_key(atom: BoxAtom):
    return tuple(float(c) for c in atom.center) + tuple(float(h) for h in atom.halfwidth)


class DeltaTrain:
    """Formal sum of point masses on the integer lattice: u = sum v(y) d(x-y)."""

    __slots__ = ("dim", "train")

    def __init__(self, train: LatticeSignal):
        self.dim = train.dim
        self.train = train

    @property
    def is_zero(self) -> bool:
        return self.train.is_zero

    def __eq__(self, other):
        if not isinstance(other, DeltaTrain):
            return NotImplemented
        return self.train == other.train

    def to_json(self) -> dict:
        return {"dim": self.dim, "atoms": None, "train": self.train.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "DeltaTrain":
        return cls(LatticeSignal.from_json(obj["train"]))


def as_delta_train(v: LatticeSignal) -> DeltaTrain:
    return DeltaTrain(v)


def lattice_reduce(w) -> LatticeSignal:
    """The lattice signal carried by a delta train (the continuous-to-discrete
    bridge); lattice signals pass through unchanged."""
    if isinstance(w, LatticeSignal):
        return w
    if isinstance(w, DeltaTrain):
        return w.train
    raise ValueError("input is not a delta train")


class ContinuousStencil:
    """Finite tap set with real-vector offsets acting by w -> sum a_y w(.+y)."""

    __slots__ = ("dim", "taps", "exact")

    def __init__(self, dim: int, taps):
        if dim < 1:
            raise ValueError("dimension must be positive")
        items = taps.items() if isinstance(taps, dict) else taps
        acc = {}
        for y, a in items:
            coords = _as_coords(y, dim)
            if coords in acc:
                raise ValueError(f"duplicate tap offset {coords}")
            acc[coords] = scalars.as_scalar(a)
        for y, a in acc.items():
            if scalars.is_zero(a):
                raise ValueError(f"tap coefficient at {y} must be nonzero")
        if not acc:
            raise ValueError("a stencil needs at least one tap")
        self.dim = dim
        self.taps = dict(sorted(acc.items(), key=lambda kv: tuple(float(c) for c in kv[0])))
        self.exact = all(
            scalars.is_exact(a) and _coords_exact(y) for y, a in self.taps.items()
        )

    @property
    def offsets(self):
        return tuple(self.taps)

    def symbol(self, p) -> complex:
        acc = 0j
        for y, a in self.taps.items():
            acc += complex(scalars.as_scalar(a)) * cmath.exp(-1j * _dot(p, y))
        return acc

    def adjoint(self) -> "ContinuousStencil":
        return ContinuousStencil(
            self.dim, {_vneg(y): scalars.conjugate(a) for y, a in self.taps.items()}
        )

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        offs = list(self.taps)
        return all(any(scalars.coords_close(_vneg(y), z, tol) for z in offs) for y in offs)

    def signature_items(self):
        """Point masses at -y with value a_y, for self-association checks."""
        return [(_vneg(y), (), a) for y, a in self.taps.items()]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "taps": [
                {"x": [scalars.render_coord(c) for c in y], **scalars.render(a)}
                for y, a in self.taps.items()
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ContinuousStencil":
        taps = [
            (tuple(scalars.coord_from_json(c) for c in t["x"]), scalars.scalar_from_json(t))
            for t in obj.get("taps", [])
        ]
        return cls(int(obj["dim"]), taps)


def _dot(p, x) -> float:
    return sum(float(pj) * float(xj) for pj, xj in zip(p, x))


def ft_eval(w, p) -> complex:
    """Closed-form transform: each box contributes
    coef * e^{i p.c} * prod_j 2 sin(p_j h_j)/p_j, all over (2*pi)^d."""
    if isinstance(w, DeltaTrain):
        return lattice.dft_eval(w.train, p)
    acc = 0j
    for coef, atom in w.atoms:
        term = complex(scalars.as_scalar(coef)) * cmath.exp(1j * _dot(p, atom.center))
        for pj, hj in zip(p, atom.halfwidth):
            pj = float(pj)
            hj = float(hj)
            term *= (2.0 * math.sin(pj * hj) / pj) if pj != 0.0 else 2.0 * hj
        acc += term
    return acc / (_TWO_PI ** w.dim)


def apply_continuous(stencil: ContinuousStencil, w: ContinuousSignal) -> ContinuousSignal:
    """f(x) = sum_y a_y w(x + y): atoms translate by -y and scale by a_y;
    identical geometries merge, zero results are pruned."""
    if stencil.dim != w.dim:
        raise ValueError("dimension mismatch between stencil and signal")
    pairs = []
    for y, a in stencil.taps.items():
        ny = _vneg(y)
        for coef, atom in w.atoms:
            pairs.append((a * coef, atom.translated(ny)))
    return ContinuousSignal(w.dim, pairs, declare_overlaps=True, prune=True)


def apply_continuous_adjoint(stencil: ContinuousStencil, w: ContinuousSignal) -> ContinuousSignal:
    """g(x) = sum_y conj(a_y) w(x - y)."""
    return apply_continuous(stencil.adjoint(), w)


@dataclass(frozen=True)
class SampledMagnitudeComparison:
    equal: bool
    max_deviation: float
    peak: float
    span: float
    grid: int

    def __bool__(self) -> bool:
        return self.equal

    def certificate(self) -> dict:
        return {
            "method": "sampled",
            "max_deviation": self.max_deviation,
            "peak": self.peak,
            "span": self.span,
            "grid": self.grid,
        }


def sampled_magnitude_equal(f, g, grid: int = 4096,
                            rel_tol: float = 1e-10) -> SampledMagnitudeComparison:
    """Sample | |f^|^2 - |g^|^2 | on a grid^d lattice over [-S, S]^d.

    The span S = 4*pi / (smallest atom halfwidth) covers several sinc lobes
    per axis (delta trains use the torus span pi). Equal means the maximum
    deviation is at most ``rel_tol`` times the peak of |f^|^2, with a
    strictly positive peak.
    """
    if grid < 2:
        raise ValueError("grid must have at least 2 points per axis")
    if f.dim != g.dim:
        raise ValueError("dimension mismatch")
    if isinstance(f, DeltaTrain) and isinstance(g, DeltaTrain):
        span = math.pi
    else:
        widths = [s.min_halfwidth() for s in (f, g) if isinstance(s, ContinuousSignal)]
        span = 4.0 * math.pi / min(widths)
    d = f.dim
    max_dev = 0.0
    peak = 0.0
    idx = [0] * d
    for flat in range(grid ** d):
        rem = flat
        for j in range(d):
            idx[j] = rem % grid
            rem //= grid
        p = [-span + 2.0 * span * i / grid for i in idx]
        mf = abs(ft_eval(f, p)) ** 2
        mg = abs(ft_eval(g, p)) ** 2
        max_dev = max(max_dev, abs(mf - mg))
        peak = max(peak, mf)
    equal = peak > 0.0 and max_dev <= rel_tol * peak
    return SampledMagnitudeComparison(
        equal=equal, max_deviation=max_dev, peak=peak, span=span, grid=grid
    )


def pointwise_modulus_equal(f: ContinuousSignal, g: ContinuousSignal,
                            tol: float = 1e-12) -> bool:
    """|f| == |g| as functions: the atom geometries must coincide as sets and
    matching coefficients must share their modulus. Requires overlap-free
    signals (on an overlap the modulus is not determined per coefficient)."""
    if f.dim != g.dim:
        raise ValueError("dimension mismatch")
    if f.has_overlaps or g.has_overlaps:
        raise ValueError("pointwise modulus is undecidable for overlapping atoms")
    if len(f.atoms) != len(g.atoms):
        return False
    exact = f.exact and g.exact
    for (c1, a1), (c2, a2) in zip(f.atoms, g.atoms):
        if not a1.same_geometry(a2, tol=1e-12):
            return False
        m1, m2 = scalars.modulus_squared(c1), scalars.modulus_squared(c2)
        if exact:
            if m1 != m2:
                return False
        else:
            scale = max(float(m1), float(m2), 1.0)
            if abs(float(m1) - float(m2)) > tol * scale:
                return False
    return True


def _signal_items(w: ContinuousSignal):
    return [(a.center, a.halfwidth, c) for c, a in w.atoms]


def find_association(f: ContinuousSignal, g: ContinuousSignal,
                     tol: float = 1e-9) -> AssociationWitness | None:
    """Trivial-ambiguity search over formal box-atom sums.

    Signals must be in merged canonical form (the constructor guarantees
    it); atoms are compared as formal terms, with the box geometry riding
    along unchanged under shifts and reflecting under conjugate reflection.
    """
    if f.dim != g.dim:
        raise ValueError("dimension mismatch")
    if f.is_zero or g.is_zero:
        raise ValueError("association is defined for nonzero signals")
    exact = f.exact and g.exact
    value_tol = tol * max(f.max_modulus(), g.max_modulus(), 1.0)
    for kind in ("shift", "conj-reflect"):
        hit = match_keyed_association(
            _signal_items(f), _signal_items(g), kind, exact=exact, value_tol=value_tol
        )
        if hit is not None:
            y, ratio = hit
            return AssociationWitness(kind=kind, phase=ratio, shift=y)
    return None


def is_self_conj_associated(w, tol: float = 1e-9) -> bool:
    """Self conjugate-reflection test for continuous signals and stencils."""
    if isinstance(w, ContinuousStencil):
        items = w.signature_items()
        exact = w.exact
        scale = max((math.sqrt(float(scalars.modulus_squared(a))) for a in w.taps.values()),
                    default=1.0)
    elif isinstance(w, ContinuousSignal):
        if w.is_zero:
            raise ValueError("association is defined for nonzero signals")
        items = _signal_items(w)
        exact = w.exact
        scale = w.max_modulus()
    elif isinstance(w, DeltaTrain):
        return lattice.is_self_conj_associated(w.train, tol)
    else:
        raise TypeError(f"unsupported operand {w!r}")
    hit = match_keyed_association(
        items, items, "conj-reflect", exact=exact, value_tol=tol * max(scale, 1.0)
    )
    return hit is not None
