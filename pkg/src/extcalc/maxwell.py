"""Generalized Maxwell equations for a grade-r field with a grade-(r-1) source.

The differential system is: interior derivative of F equals J, exterior
derivative of F equals zero.  This module evaluates those residuals pointwise,
handles potentials and gauge residuals, the per-mode Fourier (algebraic) form,
the integral form over boxes, the degrees-of-freedom count, and the packing
of classical (E, B, rho, j) data into the bivector form on (1, 3) space-time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import (
    GradeError,
    Multivector,
    SpacetimeSignature,
    dot,
    left_interior,
    merge_with_sign,
    wedge,
)
from .fields import (
    AnalyticField,
    dalembertian,
    exterior_derivative,
    exterior_derivative_field,
    interior_derivative,
)
from .integrate import DEFAULT_POINTS, HypersurfaceBox, circulation, flux

__all__ = [
    "MaxwellSystem",
    "ClassicalFields",
    "maxwell_residuals",
    "charge_conservation_residual",
    "field_from_potential",
    "lorenz_gauge_residual",
    "wave_equation_residual",
    "transverse_gauge_residuals",
    "harmonic_gauge_residual",
    "fourier_maxwell_residuals",
    "null_support_violation",
    "null_frequency",
    "dof_count",
    "classical_pack",
    "classical_unpack",
    "classical_vector_residuals",
    "residuals_to_classical",
    "integral_maxwell_check",
]

MINKOWSKI = SpacetimeSignature(1, 3)
SPACE_AXES_3D = (1, 2, 3)


@dataclass(frozen=True)
class MaxwellSystem:
    """A field grade r, the Maxwell field F, and the source J (grade r-1)."""

    signature: SpacetimeSignature
    r: int
    F: object
    J: object = None

    def __post_init__(self):
        if not 1 <= self.r <= self.signature.dim:
            raise GradeError(f"field grade {self.r} out of range 1..{self.signature.dim}")
        if self.F.signature != self.signature or self.F.grade != self.r:
            raise GradeError("F must have the declared signature and grade r")
        if self.J is None:
            object.__setattr__(self, "J", AnalyticField(self.signature, self.r - 1))
        if self.J.signature != self.signature or self.J.grade != self.r - 1:
            raise GradeError("J must have the declared signature and grade r-1")


def maxwell_residuals(system: MaxwellSystem, x: Sequence[float]) -> tuple[Multivector, Multivector]:
    """(interior derivative of F minus J, exterior derivative of F) at x."""
    inhom = interior_derivative(system.F, x) - system.J.evaluate(x)
    hom = exterior_derivative(system.F, x)
    return inhom, hom


def charge_conservation_residual(system: MaxwellSystem, x: Sequence[float]) -> Multivector:
    """Interior derivative of the source at x; the zero scalar when r = 1."""
    return interior_derivative(system.J, x)


def field_from_potential(potential: AnalyticField) -> AnalyticField:
    """F as the exterior derivative of a grade-(r-1) potential (exact modes)."""
    return exterior_derivative_field(potential)


def lorenz_gauge_residual(potential, x: Sequence[float]) -> Multivector:
    """Interior derivative of the potential; zero in the Lorenz gauge."""
    return interior_derivative(potential, x)


def wave_equation_residual(potential: AnalyticField, source, x: Sequence[float]) -> Multivector:
    """(-1)^(r-1) (wave operator) A - J at x; the Maxwell residual under Lorenz gauge."""
    r = potential.grade + 1
    value = ((-1) ** (r - 1)) * dalembertian(potential, x)
    if source is not None:
        value = value - source.evaluate(x)
    return value


def transverse_gauge_residuals(potential, x: Sequence[float]) -> tuple[Multivector, Multivector]:
    """Time-restricted and space-restricted interior derivatives of the potential."""
    sig = potential.signature
    time_part = interior_derivative(potential, x, axes=range(sig.k))
    space_part = interior_derivative(potential, x, axes=range(sig.k, sig.dim))
    return time_part, space_part


def harmonic_gauge_residual(gauge: AnalyticField, x: Sequence[float]) -> Multivector:
    """Interior of exterior derivative of a gauge field; zero when it is harmonic
    and the gauge preserves the Lorenz condition (exact for grade-0 gauge)."""
    return interior_derivative(exterior_derivative_field(gauge), x)


# ---------------------------------------------------------------------------
# Fourier (algebraic) form
# ---------------------------------------------------------------------------

def _as_covector(sig: SpacetimeSignature, xi) -> Multivector:
    if isinstance(xi, Multivector):
        if xi.grade != 1:
            raise GradeError("frequency covector must have grade 1")
        return xi
    return Multivector.vector(sig, xi)


def fourier_maxwell_residuals(xi, f_hat: Multivector,
                              j_hat: Multivector | None = None) -> tuple[Multivector, Multivector]:
    """Per-mode algebraic residuals (j 2 pi xi interior F_hat - J_hat, xi wedge F_hat)."""
    sig = f_hat.signature
    cov = _as_covector(sig, xi)
    inhom = (2j * math.pi) * left_interior(cov, f_hat)
    if j_hat is not None:
        inhom = inhom - j_hat
    hom = wedge(cov, f_hat)
    return inhom, hom


def null_support_violation(xi, f_hat: Multivector, tol: float = 1e-10) -> dict:
    """Check that a source-free mode with both residuals below tol sits on the
    null cone.  Reports the contradiction magnitude |xi . xi| * |F_hat|."""
    sig = f_hat.signature
    cov = _as_covector(sig, xi)
    inhom, hom = fourier_maxwell_residuals(cov, f_hat)
    xi_sq = dot(cov, cov)
    satisfied = inhom.max_abs() <= tol * 2 * math.pi and hom.max_abs() <= tol
    violation = abs(xi_sq) * f_hat.max_abs() if satisfied else 0.0
    return {
        "xi_dot_xi": xi_sq,
        "residuals_satisfied": satisfied,
        "violation": violation,
        "consistent": (not satisfied) or violation <= tol,
    }


def null_frequency(xi_bar, axis: int, sig: SpacetimeSignature | None = None) -> Multivector | None:
    """Complete a frequency covector with zero component on ``axis`` to a null one.

    Returns the covector whose ``axis`` component is the positive root of
    chi^2 = -Delta_ll (xi_bar . xi_bar), or None when the radicand is negative.
    """
    if isinstance(xi_bar, Multivector):
        sig = xi_bar.signature
        cov = xi_bar
    else:
        if sig is None:
            raise ValueError("a signature is required when xi_bar is a plain sequence")
        cov = Multivector.vector(sig, xi_bar)
    if cov.grade != 1:
        raise GradeError("xi_bar must have grade 1")
    if cov.coeff((axis,)) != 0:
        raise ValueError(f"xi_bar must have a zero component on axis {axis}")
    radicand = -sig.metric(axis) * dot(cov, cov)
    if radicand < 0:
        return None
    chi = math.sqrt(radicand)
    return cov + Multivector.blade(sig, (axis,), chi)


def dof_count(r: int, k: int, n: int) -> int:
    """Propagating degrees of freedom: binomial(k + n - 2, r - 1)."""
    if k < 1 or n < 1:
        raise ValueError("degrees of freedom need at least one time and one space axis")
    if not 1 <= r <= k + n:
        raise GradeError(f"grade {r} out of range 1..{k + n}")
    return math.comb(k + n - 2, r - 1)


# ---------------------------------------------------------------------------
# classical (1,3) bridge
# ---------------------------------------------------------------------------

def _require_spatial(field, name: str):
    for mode in field.modes:
        for indices in mode.amplitude.terms:
            if 0 in indices:
                raise ValueError(f"{name} must have purely spatial components")


@dataclass(frozen=True)
class ClassicalFields:
    """Classical electrodynamics data on (1, 3): E, B, charge and current density.

    E, B, j are grade-1 analytic fields with spatial components only; rho has
    grade 0.  All live on the shared Minkowski signature with axis 0 as time.
    """

    E: AnalyticField
    B: AnalyticField
    rho: AnalyticField
    j: AnalyticField

    def __post_init__(self):
        for name, fld, grade in (("E", self.E, 1), ("B", self.B, 1), ("rho", self.rho, 0), ("j", self.j, 1)):
            if fld.signature != MINKOWSKI:
                raise ValueError(f"{name} must live on the (1,3) signature")
            if fld.grade != grade:
                raise GradeError(f"{name} must have grade {grade}")
        _require_spatial(self.E, "E")
        _require_spatial(self.B, "B")
        _require_spatial(self.j, "j")


def _spatial_hodge(v: Multivector) -> Multivector:
    """Hodge complement within the three space axes of (1, 3)."""
    out = {}
    for (i,), c in v.terms.items():
        comp = tuple(a for a in SPACE_AXES_3D if a != i)
        _, sign = merge_with_sign((i,), comp)
        out[comp] = sign * c
    return Multivector(MINKOWSKI, 2, out)


def _spatial_inv_hodge(b: Multivector) -> Multivector:
    out = {}
    for indices, c in b.terms.items():
        comp = tuple(a for a in SPACE_AXES_3D if a not in indices)
        _, sign = merge_with_sign(comp, indices)
        out[comp] = sign * c
    return Multivector(MINKOWSKI, 1, out)


def classical_pack(cf: ClassicalFields) -> MaxwellSystem:
    """Build the grade-2 system F = e_0 wedge E + spatial Hodge of B, J = rho e_0 + j."""
    e0 = Multivector.blade(MINKOWSKI, (0,))
    f_field = cf.E.map_amplitudes(lambda a: wedge(e0, a), 2) + cf.B.map_amplitudes(_spatial_hodge, 2)
    j_field = cf.rho.map_amplitudes(lambda a: Multivector.blade(MINKOWSKI, (0,), a.scalar_value()), 1) + cf.j
    return MaxwellSystem(signature=MINKOWSKI, r=2, F=f_field, J=j_field)


def classical_unpack(system: MaxwellSystem) -> ClassicalFields:
    """Split a (1,3) grade-2 system back into E, B, rho, j."""
    if system.signature != MINKOWSKI or system.r != 2:
        raise GradeError("classical_unpack requires signature (1,3) and r = 2")
    e0 = Multivector.blade(MINKOWSKI, (0,))

    def spatial_part(a: Multivector) -> Multivector:
        return Multivector(a.signature, a.grade,
                           {idx: c for idx, c in a.terms.items() if 0 not in idx})

    e_field = system.F.map_amplitudes(lambda a: left_interior(e0, a), 1)
    b_field = system.F.map_amplitudes(lambda a: _spatial_inv_hodge(spatial_part(a)), 1)
    rho = system.J.map_amplitudes(lambda a: Multivector.scalar(MINKOWSKI, a.coeff((0,))), 0)
    j_field = system.J.map_amplitudes(spatial_part, 1)
    return ClassicalFields(E=e_field, B=b_field, rho=rho, j=j_field)


def classical_vector_residuals(cf: ClassicalFields, x: Sequence[float]) -> dict:
    """The four vector-calculus Maxwell residuals evaluated independently.

    Returns gauss = div E - rho, faraday = curl E + dB/dt, monopole = div B,
    ampere = curl B - j - dE/dt, using only per-component partial derivatives.
    """
    def comp(field, i):
        return field.evaluate(x).coeff((i,))

    def dcomp(field, axis, i):
        return field.partial_at(axis, x).coeff((i,))

    def curl(field):
        return np.array([
            dcomp(field, 2, 3) - dcomp(field, 3, 2),
            dcomp(field, 3, 1) - dcomp(field, 1, 3),
            dcomp(field, 1, 2) - dcomp(field, 2, 1),
        ])

    def div(field):
        return sum(dcomp(field, i, i) for i in SPACE_AXES_3D)

    gauss = div(cf.E) - cf.rho.evaluate(x).scalar_value()
    faraday = curl(cf.E) + np.array([dcomp(cf.B, 0, i) for i in SPACE_AXES_3D])
    monopole = div(cf.B)
    ampere = curl(cf.B) - np.array([comp(cf.j, i) for i in SPACE_AXES_3D]) \
        - np.array([dcomp(cf.E, 0, i) for i in SPACE_AXES_3D])
    return {"gauss": gauss, "faraday": faraday, "monopole": monopole, "ampere": ampere}


def residuals_to_classical(inhom: Multivector, hom: Multivector) -> dict:
    """Map the (1,3), r = 2 multivector residual pair onto the classical four."""
    gauss = inhom.coeff((0,))
    ampere = np.array([inhom.coeff((i,)) for i in SPACE_AXES_3D])
    faraday = np.array([-hom.coeff((0, 2, 3)), hom.coeff((0, 1, 3)), -hom.coeff((0, 1, 2))])
    monopole = hom.coeff((1, 2, 3))
    return {"gauss": gauss, "faraday": faraday, "monopole": monopole, "ampere": ampere}


# ---------------------------------------------------------------------------
# integral form
# ---------------------------------------------------------------------------

def integral_maxwell_check(system: MaxwellSystem,
                           circulation_box: HypersurfaceBox | None = None,
                           flux_box: HypersurfaceBox | None = None,
                           points: int = DEFAULT_POINTS, panels: int = 1) -> tuple[float | None, float | None]:
    """Integral-form residuals over box boundaries.

    The circulation of F around the boundary of an (r+1)-box must vanish; the
    flux of F across the boundary of a (k+n-r+1)-box must equal the flux of J
    through the box.  Returns absolute residuals, None for a skipped check.
    """
    sig = system.signature
    circ_res = None
    if circulation_box is not None:
        if circulation_box.dim != system.r + 1:
            raise GradeError(f"circulation box must have dimension {system.r + 1}")
        total = sum(circulation(system.F, face, points, panels)
                    for face in circulation_box.boundary_faces())
        circ_res = abs(total)
    flux_res = None
    if flux_box is not None:
        expected = sig.dim - system.r + 1
        if flux_box.dim != expected:
            raise GradeError(f"flux box must have dimension {expected}")
        boundary = None
        for face in flux_box.boundary_faces():
            term = flux(system.F, face, points, panels)
            boundary = term if boundary is None else boundary + term
        through = flux(system.J, flux_box, points, panels)
        flux_res = (boundary - through).max_abs()
    return circ_res, flux_res
