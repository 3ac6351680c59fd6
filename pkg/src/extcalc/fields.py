"""Multivector fields over (k, n) space-time and the differential operator.

Two backends satisfy the same small protocol (``signature``, ``grade``,
``evaluate``, ``partial_at``):

* ``AnalyticField`` is a finite sum of modes, each the product of a constant
  multivector amplitude, a monomial, a cosine or complex-exponential waveform
  in the metric pairing xi . x, and an optional Gaussian envelope.  The family
  is closed under partial differentiation, so derivatives are exact.
* ``GridField`` samples a field on a rectangular lattice and differentiates
  with second-order central differences.

The wave phase is theta(x) = 2 pi sum_i Delta_ii xi_i x_i + phi, i.e. the
metric dot product of the frequency covector with the position.  This is the
pairing under which a complex-exponential mode turns the interior derivative
into the algebraic contraction j 2 pi xi applied to the amplitude.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .algebra import (
    Bitensor,
    Multivector,
    SpacetimeSignature,
    dot,
    left_interior,
    wedge,
)

__all__ = [
    "FieldDomainError",
    "GaussianEnvelope",
    "Mode",
    "AnalyticField",
    "GridField",
    "ComponentBitensorField",
    "partial_derivative",
    "exterior_derivative",
    "interior_derivative",
    "dalembertian",
    "exterior_derivative_field",
    "interior_derivative_field",
    "interior_derivative_bitensor",
    "product_rule_check",
    "plane_wave",
    "polynomial_field",
    "constant_field",
]

WAVE_COS = "cos"
WAVE_EXP = "exp"


class FieldDomainError(ValueError):
    """Evaluation requested outside the domain a backend can serve."""


def as_point(sig: SpacetimeSignature, x: Sequence[float]) -> np.ndarray:
    point = np.asarray(x, dtype=float)
    if point.shape != (sig.dim,):
        raise ValueError(f"point has shape {point.shape}, expected ({sig.dim},)")
    return point


@dataclass(frozen=True)
class GaussianEnvelope:
    """exp(-|x - center|^2 / (2 width^2)), isotropic over all axes."""

    center: tuple[float, ...]
    width: float

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError("envelope width must be positive")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    def value(self, x: np.ndarray) -> float:
        d = x - np.asarray(self.center)
        return math.exp(-float(d @ d) / (2.0 * self.width ** 2))

    def values(self, points: np.ndarray) -> np.ndarray:
        d = points - np.asarray(self.center)
        return np.exp(-np.einsum("pi,pi->p", d, d) / (2.0 * self.width ** 2))

    def truncation_radius(self, cutoff: float = 1e-12) -> float:
        """Distance from the center beyond which the envelope drops below cutoff."""
        return self.width * math.sqrt(2.0 * math.log(1.0 / cutoff))


@dataclass(frozen=True)
class Mode:
    """One analytic term: amplitude * poly(x) * waveform(theta(x)) * envelope(x).

    ``poly`` holds per-axis monomial exponents taken around ``poly_center``;
    all-zero exponents make the factor 1.  ``xi`` is the frequency covector
    entering theta through the metric pairing.
    """

    amplitude: Multivector
    xi: tuple[float, ...] = ()
    phase: float = 0.0
    waveform: str = WAVE_COS
    poly: tuple[int, ...] = ()
    poly_center: tuple[float, ...] = ()
    envelope: GaussianEnvelope | None = None

    def __post_init__(self):
        dim = self.amplitude.signature.dim
        object.__setattr__(self, "xi", _pad(self.xi, dim))
        object.__setattr__(self, "poly", tuple(int(p) for p in _pad(self.poly, dim)))
        if any(p < 0 for p in self.poly):
            raise ValueError("monomial exponents must be nonnegative")
        center = self.poly_center
        if not center and self.envelope is not None:
            center = self.envelope.center
        object.__setattr__(self, "poly_center", _pad(center, dim))
        if self.waveform not in (WAVE_COS, WAVE_EXP):
            raise ValueError(f"unknown waveform {self.waveform!r}")

    def phase_gradient(self, axis: int) -> float:
        sig = self.amplitude.signature
        return 2.0 * math.pi * sig.metric(axis) * self.xi[axis]

    def _theta(self, x: np.ndarray) -> float:
        sig = self.amplitude.signature
        return 2.0 * math.pi * sum(sig.metric(i) * self.xi[i] * x[i] for i in sig.axes()) + self.phase

    def scalar_factor(self, x: np.ndarray) -> complex:
        value: complex = 1.0
        for i, p in enumerate(self.poly):
            if p:
                value *= (x[i] - self.poly_center[i]) ** p
        theta = self._theta(x)
        value *= math.cos(theta) if self.waveform == WAVE_COS else cmath.exp(1j * theta)
        if self.envelope is not None:
            value *= self.envelope.value(x)
        return value

    def scalar_factors(self, points: np.ndarray) -> np.ndarray:
        sig = self.amplitude.signature
        metric = np.array([sig.metric(i) for i in sig.axes()], dtype=float)
        theta = 2.0 * math.pi * points @ (metric * np.asarray(self.xi)) + self.phase
        value = np.cos(theta) if self.waveform == WAVE_COS else np.exp(1j * theta)
        for i, p in enumerate(self.poly):
            if p:
                value = value * (points[:, i] - self.poly_center[i]) ** p
        if self.envelope is not None:
            value = value * self.envelope.values(points)
        return value

    def derivative_modes(self, axis: int) -> list["Mode"]:
        """Exact partial derivative along one axis as a list of modes."""
        out: list[Mode] = []
        # monomial factor
        p = self.poly[axis]
        if p:
            lowered = list(self.poly)
            lowered[axis] = p - 1
            out.append(replace(self, amplitude=self.amplitude * p, poly=tuple(lowered)))
        # waveform factor
        slope = self.phase_gradient(axis)
        if slope != 0.0:
            if self.waveform == WAVE_COS:
                out.append(replace(self, amplitude=self.amplitude * slope,
                                   phase=self.phase + 0.5 * math.pi))
            else:
                out.append(replace(self, amplitude=self.amplitude * (1j * slope)))
        # envelope factor: -(x_a - c_a)/w^2 splits over the monomial center
        if self.envelope is not None:
            w2 = self.envelope.width ** 2
            raised = list(self.poly)
            raised[axis] += 1
            out.append(replace(self, amplitude=self.amplitude * (-1.0 / w2), poly=tuple(raised)))
            shift = self.poly_center[axis] - self.envelope.center[axis]
            if shift:
                out.append(replace(self, amplitude=self.amplitude * (-shift / w2)))
        return [m for m in out if m.amplitude]


def _pad(values: Iterable[float], dim: int) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    if not out:
        return (0.0,) * dim
    if len(out) != dim:
        raise ValueError(f"expected {dim} entries, got {len(out)}")
    return out


class AnalyticField:
    """Fixed-grade multivector field given by a finite list of analytic modes."""

    __slots__ = ("signature", "grade", "modes", "_partials")

    def __init__(self, signature: SpacetimeSignature, grade: int, modes: Iterable[Mode] = ()):
        self.signature = signature
        self.grade = grade
        # merge modes sharing every scalar factor; keeps derived fields compact
        merged: dict[tuple, Mode] = {}
        for mode in modes:
            if mode.amplitude.signature != signature:
                raise ValueError("mode amplitude signature does not match the field")
            if mode.amplitude.grade != grade:
                raise ValueError(f"mode amplitude grade {mode.amplitude.grade} != field grade {grade}")
            if not mode.amplitude:
                continue
            key = (mode.xi, mode.phase, mode.waveform, mode.poly, mode.poly_center, mode.envelope)
            held = merged.get(key)
            merged[key] = mode if held is None else replace(held, amplitude=held.amplitude + mode.amplitude)
        self.modes = tuple(m for m in merged.values() if m.amplitude)
        self._partials: dict[int, AnalyticField] = {}

    def evaluate(self, x: Sequence[float]) -> Multivector:
        point = as_point(self.signature, x)
        total = Multivector.zero(self.signature, self.grade)
        for mode in self.modes:
            total = total + mode.amplitude * mode.scalar_factor(point)
        return total

    def partial_field(self, axis: int) -> "AnalyticField":
        cached = self._partials.get(axis)
        if cached is None:
            modes: list[Mode] = []
            for mode in self.modes:
                modes.extend(mode.derivative_modes(axis))
            cached = AnalyticField(self.signature, self.grade, modes)
            self._partials[axis] = cached
        return cached

    def partial_at(self, axis: int, x: Sequence[float]) -> Multivector:
        return self.partial_field(axis).evaluate(x)

    def component_lists(self) -> list[tuple[int, ...]]:
        return list(combinations(range(self.signature.dim), self.grade))

    def is_complex(self) -> bool:
        if any(m.waveform == WAVE_EXP for m in self.modes):
            return True
        return any(isinstance(c, complex) for m in self.modes for c in m.amplitude.terms.values())

    def evaluate_components(self, points: np.ndarray) -> np.ndarray:
        """Dense (npoints, ncomp) evaluation in component_lists order."""
        lists = self.component_lists()
        index = {idx: pos for pos, idx in enumerate(lists)}
        dtype = complex if self.is_complex() else float
        out = np.zeros((len(points), len(lists)), dtype=dtype)
        for mode in self.modes:
            dense = np.zeros(len(lists), dtype=dtype)
            for idx, c in mode.amplitude.terms.items():
                dense[index[idx]] = c
            out += np.outer(mode.scalar_factors(points), dense)
        return out

    def __add__(self, other: "AnalyticField") -> "AnalyticField":
        if self.signature != other.signature or self.grade != other.grade:
            raise ValueError("cannot add fields with different signature or grade")
        return AnalyticField(self.signature, self.grade, self.modes + other.modes)

    def __mul__(self, factor: complex) -> "AnalyticField":
        return AnalyticField(self.signature, self.grade,
                             [replace(m, amplitude=m.amplitude * factor) for m in self.modes])

    __rmul__ = __mul__

    def __neg__(self) -> "AnalyticField":
        return self * -1

    def map_amplitudes(self, fn, grade: int) -> "AnalyticField":
        """New field with every mode amplitude passed through a linear map."""
        modes = [replace(m, amplitude=fn(m.amplitude)) for m in self.modes]
        return AnalyticField(self.signature, grade, [m for m in modes if m.amplitude])


def constant_field(value: Multivector) -> AnalyticField:
    return AnalyticField(value.signature, value.grade, [Mode(amplitude=value)])


def plane_wave(amplitude: Multivector, xi: Sequence[float], phase: float = 0.0,
               waveform: str = WAVE_COS, envelope: GaussianEnvelope | None = None) -> AnalyticField:
    mode = Mode(amplitude=amplitude, xi=tuple(xi), phase=phase, waveform=waveform, envelope=envelope)
    return AnalyticField(amplitude.signature, amplitude.grade, [mode])


def polynomial_field(amplitude: Multivector, exponents: Sequence[int],
                     center: Sequence[float] = ()) -> AnalyticField:
    mode = Mode(amplitude=amplitude, poly=tuple(exponents), poly_center=tuple(center))
    return AnalyticField(amplitude.signature, amplitude.grade, [mode])


class GridField:
    """Field sampled on a rectangular lattice; central-difference derivatives."""

    __slots__ = ("signature", "grade", "origin", "spacing", "values", "_lists", "_index")

    def __init__(self, signature: SpacetimeSignature, grade: int,
                 origin: Sequence[float], spacing: Sequence[float], values: np.ndarray):
        self.signature = signature
        self.grade = grade
        self.origin = np.asarray(origin, dtype=float)
        self.spacing = np.asarray(spacing, dtype=float)
        if self.origin.shape != (signature.dim,) or self.spacing.shape != (signature.dim,):
            raise ValueError("origin and spacing must have one entry per axis")
        if np.any(self.spacing <= 0):
            raise ValueError("grid spacings must be positive")
        self._lists = list(combinations(range(signature.dim), grade))
        values = np.asarray(values, dtype=float)
        if values.ndim != signature.dim + 1 or values.shape[-1] != len(self._lists):
            raise ValueError(f"values must have shape (*sites, {len(self._lists)})")
        self.values = values
        self._index = {idx: pos for pos, idx in enumerate(self._lists)}

    @classmethod
    def sample(cls, source: AnalyticField, origin: Sequence[float], spacing: Sequence[float],
               counts: Sequence[int]) -> "GridField":
        sig = source.signature
        origin = np.asarray(origin, dtype=float)
        spacing = np.asarray(spacing, dtype=float)
        counts = tuple(int(c) for c in counts)
        axes = [origin[i] + spacing[i] * np.arange(counts[i]) for i in range(sig.dim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        points = np.stack([m.reshape(-1) for m in mesh], axis=1)
        dense = source.evaluate_components(points).real
        return cls(sig, source.grade, origin, spacing, dense.reshape(*counts, -1))

    def _site(self, x: np.ndarray) -> tuple[int, ...]:
        rel = (x - self.origin) / self.spacing
        site = np.rint(rel).astype(int)
        if np.any(np.abs(rel - site) > 1e-8):
            raise FieldDomainError(f"point {x.tolist()} is not on the sampling lattice")
        shape = self.values.shape[:-1]
        if np.any(site < 0) or np.any(site >= np.asarray(shape)):
            raise FieldDomainError(f"point {x.tolist()} lies outside the sampled lattice")
        return tuple(int(s) for s in site)

    def _from_dense(self, dense: np.ndarray) -> Multivector:
        return Multivector(self.signature, self.grade,
                           {idx: dense[pos] for idx, pos in self._index.items() if dense[pos] != 0})

    def evaluate(self, x: Sequence[float]) -> Multivector:
        point = as_point(self.signature, x)
        return self._from_dense(self.values[self._site(point)])

    def partial_at(self, axis: int, x: Sequence[float]) -> Multivector:
        point = as_point(self.signature, x)
        site = self._site(point)
        if site[axis] - 1 < 0 or site[axis] + 1 >= self.values.shape[axis]:
            raise FieldDomainError(f"axis {axis} neighbours of site {site} fall outside the lattice")
        fwd = list(site)
        bwd = list(site)
        fwd[axis] += 1
        bwd[axis] -= 1
        dense = (self.values[tuple(fwd)] - self.values[tuple(bwd)]) / (2.0 * self.spacing[axis])
        return self._from_dense(dense)


# ---------------------------------------------------------------------------
# derivative operators
# ---------------------------------------------------------------------------

def partial_derivative(f, axis: int, x: Sequence[float]) -> Multivector:
    """Partial derivative of the field along one axis, exact or central-difference."""
    if not 0 <= axis < f.signature.dim:
        raise IndexError(f"axis {axis} out of range")
    return f.partial_at(axis, x)


def exterior_derivative(f, x: Sequence[float]) -> Multivector:
    """Grade-raising derivative: sum_i Delta_ii e_i wedge (d_i f) at x."""
    sig = f.signature
    if f.grade >= sig.dim:
        return Multivector.zero(sig, 0)
    total = Multivector.zero(sig, f.grade + 1)
    for i in sig.axes():
        part = f.partial_at(i, x)
        if part:
            total = total + sig.metric(i) * wedge(Multivector.blade(sig, (i,)), part)
    return total


def interior_derivative(f, x: Sequence[float], axes: Iterable[int] | None = None) -> Multivector:
    """Grade-lowering derivative; ``axes`` restricts the operator (time or space parts)."""
    sig = f.signature
    if f.grade == 0:
        return Multivector.zero(sig, 0)
    total = Multivector.zero(sig, f.grade - 1)
    for i in (sig.axes() if axes is None else axes):
        part = f.partial_at(i, x)
        if part:
            total = total + sig.metric(i) * left_interior(Multivector.blade(sig, (i,)), part)
    return total


def dalembertian(f: AnalyticField, x: Sequence[float]) -> Multivector:
    """The scalar wave operator sum_i Delta_ii d_i d_i applied to the field."""
    sig = f.signature
    total = Multivector.zero(sig, f.grade)
    for i in sig.axes():
        total = total + sig.metric(i) * f.partial_field(i).partial_at(i, x)
    return total


def exterior_derivative_field(f: AnalyticField) -> AnalyticField:
    """The exterior derivative as a new analytic field (exact mode algebra)."""
    sig = f.signature
    if f.grade >= sig.dim:
        return AnalyticField(sig, 0)
    modes: list[Mode] = []
    for i in sig.axes():
        basis = Multivector.blade(sig, (i,), sig.metric(i))
        for mode in f.partial_field(i).modes:
            amp = wedge(basis, mode.amplitude)
            if amp:
                modes.append(replace(mode, amplitude=amp))
    return AnalyticField(sig, f.grade + 1, modes)


def interior_derivative_field(f: AnalyticField) -> AnalyticField:
    """The interior derivative as a new analytic field (exact mode algebra)."""
    sig = f.signature
    if f.grade == 0:
        return AnalyticField(sig, 0)
    modes: list[Mode] = []
    for i in sig.axes():
        basis = Multivector.blade(sig, (i,), sig.metric(i))
        for mode in f.partial_field(i).modes:
            amp = left_interior(basis, mode.amplitude)
            if amp:
                modes.append(replace(mode, amplitude=amp))
    return AnalyticField(sig, f.grade - 1, modes)


# ---------------------------------------------------------------------------
# bitensor fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComponentBitensorField:
    """Symmetric bitensor field built from grade-0 analytic component fields."""

    signature: SpacetimeSignature
    comps: dict

    def __post_init__(self):
        fixed = {}
        for (i, j), comp in self.comps.items():
            key = (i, j) if i <= j else (j, i)
            fixed[key] = comp
        object.__setattr__(self, "comps", fixed)

    def evaluate(self, x: Sequence[float]) -> Bitensor:
        return Bitensor(self.signature,
                        {key: comp.evaluate(x).scalar_value() for key, comp in self.comps.items()})

    def partial_at(self, axis: int, x: Sequence[float]) -> Bitensor:
        return Bitensor(self.signature,
                        {key: comp.partial_at(axis, x).scalar_value() for key, comp in self.comps.items()})


def interior_derivative_bitensor(tf, x: Sequence[float]) -> Multivector:
    """Interior derivative of a bitensor field: sum_{i,j} d_j T_ij e_i.

    Defers to the field's own ``divergence`` when it provides one (quadratic
    tensor fields share contractions across axes there)."""
    fast = getattr(tf, "divergence", None)
    if fast is not None:
        return fast(x)
    sig = tf.signature
    out: dict[tuple[int, ...], complex] = {}
    for j in sig.axes():
        dj = tf.partial_at(j, x)
        for i in sig.axes():
            value = dj.get(i, j)
            if value:
                out[(i,)] = out.get((i,), 0) + value
    return Multivector(sig, 1, out)


def product_rule_check(v, w, x: Sequence[float]) -> float:
    """Residual of the derivative product rule at one point.

    For a grade-(r-1) field v and a grade-r field w this is the absolute
    difference between the interior derivative of the grade-1 field v
    interior w and the two-term expansion through the exterior and interior
    derivatives of the factors.
    """
    sig = v.signature
    if w.grade != v.grade + 1:
        raise ValueError("product rule expects grades (r-1, r)")
    vx = v.evaluate(x)
    wx = w.evaluate(x)
    div_u: complex = 0
    for i in sig.axes():
        du = left_interior(v.partial_at(i, x), wx) + left_interior(vx, w.partial_at(i, x))
        contracted = left_interior(Multivector.blade(sig, (i,)), du)
        div_u += sig.metric(i) * contracted.scalar_value()
    term1 = dot(exterior_derivative(v, x), wx)
    term2 = (-1) ** v.grade * dot(interior_derivative(w, x), vx)
    return abs(div_u - term1 - term2)
