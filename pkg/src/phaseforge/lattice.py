"""Finitely supported complex signals on Z^d and finite-difference stencils.

Everything here is a pure value; operations return new objects. When all
inputs carry exact Gaussian-rational values the outputs stay exact, so the
magnitude and association decisions below are genuine identities rather
than tolerance checks. Fourier magnitudes are compared through the
autocorrelation: two signals share |transform|^2 exactly when their lag
tables coincide, which turns an uncountable pointwise statement into a
finite one.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from . import scalars
from .scalars import GaussianRational

Point = tuple[int, ...]

# Relative threshold for discarding cancellation noise after operator
# application in floating mode; exact zeros are always dropped.
PRUNE_REL = 1e-14

_TWO_PI = 2.0 * math.pi


def as_point(x, dim: int | None = None) -> Point:
    if isinstance(x, (int,)) and not isinstance(x, bool):
        pt = (x,)
    else:
        pt = tuple(x)
    out = []
    for c in pt:
        ci = int(c)
        if ci != c:
            raise ValueError(f"lattice coordinates must be integers, got {x!r}")
        out.append(ci)
    if dim is not None and len(out) != dim:
        raise ValueError(f"expected a point of dimension {dim}, got {x!r}")
    return tuple(out)


def _add(a: Point, b: Point) -> Point:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Point, b: Point) -> Point:
    return tuple(x - y for x, y in zip(a, b))


def _neg(a: Point) -> Point:
    return tuple(-x for x in a)


def _canonical_values(raw: dict):
    """Coerce values; returns (entries, exact). Mixed input demotes to complex."""
    vals = {k: scalars.as_scalar(v) for k, v in raw.items()}
    exact = all(isinstance(v, GaussianRational) for v in vals.values())
    if not exact:
        vals = {k: complex(v) for k, v in vals.items()}
    return vals, exact


class LatticeSignal:
    """Sparse map from lattice points to nonzero values. Treat as immutable."""

    __slots__ = ("dim", "entries", "exact")

    def __init__(self, dim: int, entries=(), *, prune: bool = False):
        if dim < 1:
            raise ValueError("dimension must be positive")
        items = entries.items() if isinstance(entries, dict) else entries
        acc: dict[Point, object] = {}
        for x, v in items:
            p = as_point(x, dim)
            acc[p] = acc.get(p, 0) + v
        vals, exact = _canonical_values(acc)
        vals = {k: v for k, v in vals.items() if not scalars.is_zero(v)}
        if prune and not exact and vals:
            peak = max(abs(v) for v in vals.values())
            vals = {k: v for k, v in vals.items() if abs(v) > PRUNE_REL * peak}
        self.dim = dim
        self.entries = dict(sorted(vals.items()))
        self.exact = exact if self.entries else True

    # -- basic queries -------------------------------------------------
    @property
    def support(self) -> tuple[Point, ...]:
        return tuple(self.entries)

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def value(self, x):
        return self.entries.get(as_point(x, self.dim), GaussianRational(0) if self.exact else 0j)

    def energy(self):
        """Sum of squared moduli (the zero-lag autocorrelation value)."""
        total = Fraction(0) if self.exact else 0.0
        for v in self.entries.values():
            total += scalars.modulus_squared(v)
        return total

    def max_modulus(self) -> float:
        if self.is_zero:
            return 0.0
        return math.sqrt(max(float(scalars.modulus_squared(v)) for v in self.entries.values()))

    def bounding_box(self):
        if self.is_zero:
            return None
        los = tuple(min(p[j] for p in self.entries) for j in range(self.dim))
        his = tuple(max(p[j] for p in self.entries) for j in range(self.dim))
        return los, his

    # -- transforms of the domain ---------------------------------------
    def shifted(self, y) -> "LatticeSignal":
        """x -> w(x - y)  (graph moved by +y)."""
        y = as_point(y, self.dim)
        return LatticeSignal(self.dim, {_add(x, y): v for x, v in self.entries.items()})

    def conj_reflected(self, y=None) -> "LatticeSignal":
        """x -> conj(w(y - x)); y defaults to the origin."""
        y = (0,) * self.dim if y is None else as_point(y, self.dim)
        return LatticeSignal(
            self.dim, {_sub(y, x): scalars.conjugate(v) for x, v in self.entries.items()}
        )

    def scaled(self, c) -> "LatticeSignal":
        c = scalars.as_scalar(c)
        return LatticeSignal(self.dim, {x: c * v for x, v in self.entries.items()})

    def __add__(self, other: "LatticeSignal") -> "LatticeSignal":
        if not isinstance(other, LatticeSignal):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        acc = dict(self.entries)
        for x, v in other.entries.items():
            acc[x] = acc.get(x, 0) + v
        return LatticeSignal(self.dim, acc)

    def __sub__(self, other: "LatticeSignal") -> "LatticeSignal":
        return self + other.scaled(-1)

    def __eq__(self, other):
        if not isinstance(other, LatticeSignal):
            return NotImplemented
        return self.dim == other.dim and self.entries == other.entries

    def __repr__(self):
        inner = ", ".join(f"{x}: {scalars.format_scalar(v)}" for x, v in self.entries.items())
        return f"LatticeSignal(dim={self.dim}, {{{inner}}})"

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "entries": [
                {"x": list(x), **scalars.render(v)} for x, v in self.entries.items()
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LatticeSignal":
        entries = [
            (tuple(e["x"]), scalars.scalar_from_json(e)) for e in obj.get("entries", [])
        ]
        return cls(int(obj["dim"]), entries)


def delta(dim: int, point=None, value=1) -> LatticeSignal:
    """Kronecker impulse at ``point`` (origin by default)."""
    p = (0,) * dim if point is None else as_point(point, dim)
    return LatticeSignal(dim, {p: value})


def signal(dim: int, mapping) -> LatticeSignal:
    return LatticeSignal(dim, mapping)


class Stencil:
    """Finite tap set with nonzero coefficients, acting by w -> sum a_y w(.+y)."""

    __slots__ = ("dim", "taps", "exact")

    def __init__(self, dim: int, taps):
        if dim < 1:
            raise ValueError("dimension must be positive")
        items = taps.items() if isinstance(taps, dict) else taps
        acc: dict[Point, object] = {}
        for y, a in items:
            p = as_point(y, dim)
            if p in acc:
                raise ValueError(f"duplicate tap offset {p}")
            acc[p] = a
        vals, exact = _canonical_values(acc)
        for y, a in vals.items():
            if scalars.is_zero(a):
                raise ValueError(f"tap coefficient at {y} must be nonzero")
        if not vals:
            raise ValueError("a stencil needs at least one tap")
        self.dim = dim
        self.taps = dict(sorted(vals.items()))
        self.exact = exact

    @property
    def offsets(self) -> tuple[Point, ...]:
        return tuple(self.taps)

    def signature(self) -> LatticeSignal:
        """The stencil as a signal with value a_y at -y.

        The positive global scale that makes its transform equal the symbol
        is omitted: association checks are invariant under it.
        """
        return LatticeSignal(self.dim, {_neg(y): a for y, a in self.taps.items()})

    def adjoint(self) -> "Stencil":
        return Stencil(self.dim, {_neg(y): scalars.conjugate(a) for y, a in self.taps.items()})

    def symbol(self, p) -> complex:
        """Trigonometric polynomial sum_y a_y e^{-i p.y}."""
        acc = 0j
        for y, a in self.taps.items():
            acc += complex(scalars.as_scalar(a)) * cmath.exp(-1j * _dot(p, y))
        return acc

    def is_symmetric(self) -> bool:
        """True when the offset set is closed under negation."""
        offs = set(self.taps)
        return all(_neg(y) in offs for y in offs)

    def __eq__(self, other):
        if not isinstance(other, Stencil):
            return NotImplemented
        return self.dim == other.dim and self.taps == other.taps

    def __repr__(self):
        inner = ", ".join(f"{y}: {scalars.format_scalar(a)}" for y, a in self.taps.items())
        return f"Stencil(dim={self.dim}, {{{inner}}})"

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "taps": [{"x": list(y), **scalars.render(a)} for y, a in self.taps.items()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Stencil":
        taps = [(tuple(t["x"]), scalars.scalar_from_json(t)) for t in obj.get("taps", [])]
        return cls(int(obj["dim"]), taps)


def _dot(p, x) -> float:
    return sum(float(pj) * float(xj) for pj, xj in zip(p, x))


def apply_stencil(stencil: Stencil, w: LatticeSignal) -> LatticeSignal:
    """f(x) = sum_y a_y w(x + y); cancellation noise is pruned in float mode."""
    if stencil.dim != w.dim:
        raise ValueError("dimension mismatch between stencil and signal")
    acc: dict[Point, object] = {}
    for y, a in stencil.taps.items():
        for x, v in w.entries.items():
            pos = _sub(x, y)
            acc[pos] = acc.get(pos, 0) + a * v
    return LatticeSignal(w.dim, acc, prune=True)


def apply_adjoint(stencil: Stencil, w: LatticeSignal) -> LatticeSignal:
    """g(x) = sum_y conj(a_y) w(x - y)."""
    if stencil.dim != w.dim:
        raise ValueError("dimension mismatch between stencil and signal")
    acc: dict[Point, object] = {}
    for y, a in stencil.taps.items():
        ca = scalars.conjugate(a)
        for x, v in w.entries.items():
            pos = _add(x, y)
            acc[pos] = acc.get(pos, 0) + ca * v
    return LatticeSignal(w.dim, acc, prune=True)


def dft_eval(w: LatticeSignal, p) -> complex:
    """(2*pi)^{-d} sum_x e^{i p.x} w(x), summed in lexicographic point order."""
    acc = 0j
    for x in w.entries:  # entries are stored sorted
        acc += complex(scalars.as_scalar(w.entries[x])) * cmath.exp(1j * _dot(p, x))
    return acc / (_TWO_PI ** w.dim)


class Autocorrelation:
    """Lag table r(k) = sum_x w(x+k) conj(w(x)); Hermitian by construction."""

    __slots__ = ("dim", "lags", "exact")

    def __init__(self, dim: int, lags: dict, exact: bool):
        self.dim = dim
        self.lags = dict(sorted(lags.items()))
        self.exact = exact

    def value(self, k):
        return self.lags.get(as_point(k, self.dim), GaussianRational(0) if self.exact else 0j)

    @property
    def support(self) -> tuple[Point, ...]:
        return tuple(self.lags)

    def __eq__(self, other):
        if not isinstance(other, Autocorrelation):
            return NotImplemented
        return self.dim == other.dim and self.lags == other.lags

    def __repr__(self):
        inner = ", ".join(f"{k}: {scalars.format_scalar(v)}" for k, v in self.lags.items())
        return f"Autocorrelation(dim={self.dim}, {{{inner}}})"


def autocorrelation(w: LatticeSignal) -> Autocorrelation:
    """Each unordered support pair is computed once and mirrored, so the
    Hermitian symmetry r(-k) = conj(r(k)) holds exactly even in float mode."""
    items = list(w.entries.items())
    lags: dict[Point, object] = {}
    for i, (x1, v1) in enumerate(items):
        for x2, v2 in items[i:]:
            t = v1 * scalars.conjugate(v2)
            k = _sub(x1, x2)
            if x1 == x2:
                lags[k] = lags.get(k, 0) + t
            else:
                lags[k] = lags.get(k, 0) + t
                lags[_neg(k)] = lags.get(_neg(k), 0) + scalars.conjugate(t)
    lags = {k: v for k, v in lags.items() if not scalars.is_zero(v)}
    return Autocorrelation(w.dim, lags, w.exact)


@dataclass(frozen=True)
class MagnitudeComparison:
    """Outcome of an exact (or per-lag tolerant) Fourier-magnitude comparison."""

    equal: bool
    trivially_zero: bool
    exact: bool
    max_deviation: float
    worst_lag: Point | None
    lhs_at_worst: complex
    rhs_at_worst: complex

    def __bool__(self) -> bool:
        return self.equal

    def certificate(self) -> dict:
        return {
            "method": "autocorrelation",
            "exact": self.exact,
            "trivially_zero": self.trivially_zero,
            "max_deviation": self.max_deviation,
            "worst_lag": list(self.worst_lag) if self.worst_lag is not None else None,
            "lhs_at_worst": [self.lhs_at_worst.real, self.lhs_at_worst.imag],
            "rhs_at_worst": [self.rhs_at_worst.real, self.rhs_at_worst.imag],
        }


def compare_fourier_magnitude(f: LatticeSignal, g: LatticeSignal,
                              tol: float = 1e-12) -> MagnitudeComparison:
    """|f-transform|^2 == |g-transform|^2, decided on the lag tables.

    Exact inputs are compared exactly; otherwise each lag must agree to
    ``tol`` absolute. A pair of zero signals compares unequal but is flagged
    ``trivially_zero``.
    """
    if f.dim != g.dim:
        raise ValueError("dimension mismatch")
    rf, rg = autocorrelation(f), autocorrelation(g)
    exact = rf.exact and rg.exact
    worst = (0.0, None, 0j, 0j)
    for k in sorted(set(rf.lags) | set(rg.lags)):
        a = complex(scalars.as_scalar(rf.value(k)))
        b = complex(scalars.as_scalar(rg.value(k)))
        dev = abs(a - b)
        if dev > worst[0]:
            worst = (dev, k, a, b)
    if exact:
        equal_lags = rf.lags == rg.lags
    else:
        equal_lags = worst[0] <= tol
    trivially_zero = f.is_zero and g.is_zero
    return MagnitudeComparison(
        equal=equal_lags and not f.is_zero,
        trivially_zero=trivially_zero,
        exact=exact,
        max_deviation=worst[0],
        worst_lag=worst[1],
        lhs_at_worst=worst[2],
        rhs_at_worst=worst[3],
    )


def equal_fourier_magnitude(f: LatticeSignal, g: LatticeSignal, tol: float = 1e-12) -> bool:
    return compare_fourier_magnitude(f, g, tol).equal


@dataclass(frozen=True)
class ModulusComparison:
    equal: bool
    worst_point: tuple | None
    max_deviation: float

    def __bool__(self) -> bool:
        return self.equal

    def certificate(self) -> dict:
        return {
            "max_deviation": self.max_deviation,
            "worst_point": list(self.worst_point) if self.worst_point is not None else None,
        }


def compare_pointwise_modulus(f: LatticeSignal, g: LatticeSignal,
                              tol: float = 1e-12) -> ModulusComparison:
    """|f(x)| == |g(x)| at every lattice point (exact on exact inputs)."""
    if f.dim != g.dim:
        raise ValueError("dimension mismatch")
    exact = f.exact and g.exact
    equal = True
    worst = (0.0, None)
    for x in sorted(set(f.entries) | set(g.entries)):
        m1 = scalars.modulus_squared(f.value(x))
        m2 = scalars.modulus_squared(g.value(x))
        if exact:
            if m1 != m2:
                equal = False
        dev = abs(math.sqrt(float(m1)) - math.sqrt(float(m2)))
        if dev > worst[0]:
            worst = (dev, x)
    if not exact:
        scale = max(f.max_modulus(), g.max_modulus(), 1.0)
        equal = worst[0] <= tol * scale
    return ModulusComparison(equal=equal, worst_point=worst[1], max_deviation=worst[0])


# --- trivial-ambiguity (association) search ---------------------------------

@dataclass(frozen=True)
class AssociationWitness:
    """A verified trivial ambiguity: g = phase * f(. - shift) for kind
    "shift", or g(x) = phase * conj(f(shift - x)) for kind "conj-reflect"."""

    kind: str  # "shift" | "conj-reflect"
    phase: object  # unit-modulus scalar; exact when the search ran exactly
    shift: tuple

    @property
    def alpha(self) -> float:
        return scalars.phase_angle(self.phase)

    def apply(self, w: LatticeSignal) -> LatticeSignal:
        if self.kind == "shift":
            return w.shifted(self.shift).scaled(self.phase)
        return w.conj_reflected(self.shift).scaled(self.phase)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "phase": scalars.render(self.phase),
            "alpha": self.alpha,
            "shift": [scalars.render_coord(scalars.as_coord(c)) for c in self.shift],
        }


def _vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _vec_neg(a):
    return tuple(-x for x in a)


def _sort_key(pos, inv):
    return tuple(float(c) for c in pos) + tuple(float(c) for c in inv)


def match_keyed_association(f_items, g_items, kind: str, *, exact: bool,
                            value_tol: float, coord_tol: float = 1e-12):
    """Shared alignment engine for the association search.

    ``f_items``/``g_items`` are lists of ``(pos, inv, value)`` where ``pos``
    is the coordinate tuple the transforms act on and ``inv`` is carried
    unchanged (empty for lattice points, the halfwidth for box atoms). The
    candidate shift is forced by aligning extremal elements, the phase by
    the value ratio there; the single candidate is then verified everywhere.
    Returns ``(shift, phase)`` or ``None``.
    """
    if len(f_items) != len(g_items):
        return None
    g_sorted = sorted(g_items, key=lambda it: _sort_key(it[0], it[1]))
    g0 = g_sorted[0]
    if kind == "shift":
        f_star = min(f_items, key=lambda it: _sort_key(it[0], it[1]))
        y = _vec_sub(g0[0], f_star[0])
        base = f_star[2]
    elif kind == "conj-reflect":
        f_star = min(f_items, key=lambda it: _sort_key(_vec_neg(it[0]), it[1]))
        y = _vec_add(g0[0], f_star[0])
        base = scalars.conjugate(f_star[2])
    else:
        raise ValueError(f"unknown association kind {kind!r}")
    if not scalars.coords_close(g0[1], f_star[1], coord_tol):
        return None
    ratio = scalars.as_scalar(g0[2]) / base
    if not scalars.unit_modulus(ratio, 1e-9 if not exact else 0.0):
        return None
    image = []
    for pos, inv, v in f_items:
        if kind == "shift":
            image.append((_vec_add(pos, y), inv, ratio * v))
        else:
            image.append((_vec_sub(y, pos), inv, ratio * scalars.conjugate(v)))
    image.sort(key=lambda it: _sort_key(it[0], it[1]))
    for (p1, i1, v1), (p2, i2, v2) in zip(image, g_sorted):
        if not scalars.coords_close(p1, p2, coord_tol):
            return None
        if not scalars.coords_close(i1, i2, coord_tol):
            return None
        if exact:
            if scalars.as_scalar(v1) != scalars.as_scalar(v2):
                return None
        elif abs(complex(scalars.as_scalar(v1)) - complex(scalars.as_scalar(v2))) > value_tol:
            return None
    return y, ratio


def _lattice_items(w: LatticeSignal):
    return [(x, (), v) for x, v in w.entries.items()]


def find_association(f: LatticeSignal, g: LatticeSignal,
                     tol: float = 1e-9) -> AssociationWitness | None:
    """Search for a trivial ambiguity carrying f onto g.

    The shift kind is tried first, so ``find_association(f, f)`` always
    returns the identity shift witness. The search is finite: the candidate
    shift is forced by support alignment and verified by reconstruction.
    """
    if f.dim != g.dim:
        raise ValueError("dimension mismatch")
    if f.is_zero or g.is_zero:
        raise ValueError("association is defined for nonzero signals")
    exact = f.exact and g.exact
    value_tol = tol * max(f.max_modulus(), g.max_modulus(), 1.0)
    for kind in ("shift", "conj-reflect"):
        hit = match_keyed_association(
            _lattice_items(f), _lattice_items(g), kind, exact=exact, value_tol=value_tol
        )
        if hit is not None:
            y, ratio = hit
            return AssociationWitness(kind=kind, phase=ratio, shift=tuple(int(c) for c in y))
    return None


def is_self_conj_associated(w: LatticeSignal, tol: float = 1e-9) -> bool:
    """True when w coincides with a modulated conjugate reflection of itself.

    The only possible shift is forced by the support (it must satisfy
    supp w = -supp w + y), so a single candidate check decides.
    """
    if w.is_zero:
        raise ValueError("association is defined for nonzero signals")
    value_tol = tol * max(w.max_modulus(), 1.0)
    hit = match_keyed_association(
        _lattice_items(w), _lattice_items(w), "conj-reflect",
        exact=w.exact, value_tol=value_tol,
    )
    return hit is not None


def signals_close(a: LatticeSignal, b: LatticeSignal, tol: float = 1e-9) -> bool:
    """Exact equality for exact pairs; support equality plus per-point
    tolerance otherwise."""
    if a.dim != b.dim:
        return False
    if a.exact and b.exact:
        return a.entries == b.entries
    if set(a.entries) != set(b.entries):
        return False
    scale = max(a.max_modulus(), b.max_modulus(), 1.0)
    return all(
        abs(complex(scalars.as_scalar(a.entries[x])) - complex(scalars.as_scalar(b.entries[x])))
        <= tol * scale
        for x in a.entries
    )


def sampled_magnitude_deviation(f: LatticeSignal, g: LatticeSignal,
                                points_per_axis: int):
    """Max | |f^|^2 - |g^|^2 | and peak |f^|^2 over a regular torus grid.

    Cross-checks the exact lag-table comparison on [-pi, pi)^d samples.
    """
    if f.dim != g.dim:
        raise ValueError("dimension mismatch")
    if points_per_axis < 2:
        raise ValueError("grid must have at least 2 points per axis")
    d = f.dim
    max_dev = 0.0
    peak = 0.0
    idx = [0] * d
    total = points_per_axis ** d
    for flat in range(total):
        rem = flat
        for j in range(d):
            idx[j] = rem % points_per_axis
            rem //= points_per_axis
        p = [-math.pi + _TWO_PI * i / points_per_axis for i in idx]
        mf = abs(dft_eval(f, p)) ** 2
        mg = abs(dft_eval(g, p)) ** 2
        max_dev = max(max_dev, abs(mf - mg))
        peak = max(peak, mf)
    return max_dev, peak
