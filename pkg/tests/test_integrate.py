import math

import numpy as np
import pytest

from extcalc.algebra import GradeError, Multivector, SpacetimeSignature
from extcalc.fields import (
    AnalyticField,
    ComponentBitensorField,
    GaussianEnvelope,
    Mode,
    constant_field,
    plane_wave,
    polynomial_field,
)
from extcalc.integrate import (
    HypersurfaceBox,
    bitensor_stokes_check,
    circulation,
    flux,
    gauss_legendre_rule,
    stokes_circulation_check,
    stokes_flux_check,
)

EUC2 = SpacetimeSignature(0, 2)
EUC3 = SpacetimeSignature(0, 3)
MINK2 = SpacetimeSignature(1, 1)


def unit_square(sig=EUC2, orientation=1):
    return HypersurfaceBox(sig, intervals={0: (0.0, 1.0), 1: (0.0, 1.0)}, fixed={}, orientation=orientation)


def test_gauss_legendre_rule_integrates_polynomials_exactly():
    nodes, weights = gauss_legendre_rule(-1.0, 2.0, points=4, panels=3)
    got = float(np.sum(weights * nodes ** 5))
    assert got == pytest.approx((2.0 ** 6 - 1.0) / 6.0, abs=1e-12)


def test_box_validation():
    with pytest.raises(ValueError):
        HypersurfaceBox(EUC2, intervals={0: (0, 1)}, fixed={})  # axis 1 unspecified
    with pytest.raises(ValueError):
        HypersurfaceBox(EUC2, intervals={0: (1, 1)}, fixed={1: 0.0})  # degenerate
    with pytest.raises(ValueError):
        HypersurfaceBox(EUC2, intervals={0: (0, 1)}, fixed={0: 0.0, 1: 0.0})


# ---------------------------------------------------------------------------
# circulation
# ---------------------------------------------------------------------------

def test_circulation_zero_field():
    f = AnalyticField(EUC2, 1)
    box = HypersurfaceBox(EUC2, intervals={0: (0, 1)}, fixed={1: 0.0})
    assert circulation(f, box) == 0


def test_circulation_dimension_mismatch():
    f = constant_field(Multivector.blade(EUC2, (0,)))
    with pytest.raises(GradeError):
        circulation(f, unit_square())


def test_green_theorem_circulation():
    # f = -x_1 e_0 + x_0 e_1 around the unit square: 2 * area = 2
    f = polynomial_field(Multivector.blade(EUC2, (0,), -1.0), (0, 1)) + \
        polynomial_field(Multivector.blade(EUC2, (1,), 1.0), (1, 0))
    total = sum(circulation(f, face) for face in unit_square().boundary_faces())
    assert total == pytest.approx(2.0, abs=1e-12)


def test_circulation_of_gradient_around_closed_boundary():
    # w = x_0^2 x_1, gradient field circulates to zero around any closed loop
    grad = polynomial_field(Multivector.blade(EUC2, (0,), 2.0), (1, 1)) + \
        polynomial_field(Multivector.blade(EUC2, (1,), 1.0), (2, 0))
    total = sum(circulation(grad, face) for face in unit_square().boundary_faces())
    assert abs(total) < 1e-12


def test_circulation_right_interior_form_agrees():
    rng = np.random.default_rng(2)
    amp = Multivector(EUC3, 2, {idx: float(rng.normal()) for idx in EUC3.index_lists(2)})
    f = plane_wave(amp, xi=(0.3, -0.2, 0.5))
    box = HypersurfaceBox(EUC3, intervals={0: (0, 1), 2: (-0.5, 0.5)}, fixed={1: 0.25})
    a = circulation(f, box)
    b = circulation(f, box, use_right_interior=True)
    assert a == pytest.approx(b, abs=1e-12)


# ---------------------------------------------------------------------------
# flux
# ---------------------------------------------------------------------------

def test_flux_constant_across_unit_square():
    f = constant_field(Multivector.blade(EUC3, (2,)))
    box = HypersurfaceBox(EUC3, intervals={0: (0, 1), 1: (0, 1)}, fixed={2: 0.3})
    got = flux(f, box)
    assert got.grade == 0
    assert got.scalar_value() == pytest.approx(1.0, abs=1e-12)


def test_flux_full_dimension_is_volume_integral():
    f = constant_field(Multivector.blade(EUC2, (1,), 3.0))
    box = HypersurfaceBox(EUC2, intervals={0: (0, 2), 1: (0, 1)}, fixed={})
    got = flux(f, box)
    assert got.grade == 1
    assert got.coeff((1,)) == pytest.approx(6.0, abs=1e-12)
    assert got.coeff((0,)) == 0


def test_flux_low_dimension_returns_zero():
    f = constant_field(Multivector.blade(EUC3, (0,)))
    box = HypersurfaceBox(EUC3, intervals={1: (0, 1)}, fixed={0: 0.0, 2: 0.0})
    got = flux(f, box)  # box dim 1 < 3 - 1
    assert got.is_zero()


def test_flux_zero_field():
    f = AnalyticField(EUC3, 1)
    box = HypersurfaceBox(EUC3, intervals={0: (0, 1), 1: (0, 1)}, fixed={2: 0.0})
    assert flux(f, box).is_zero()


# ---------------------------------------------------------------------------
# Stokes: circulation form
# ---------------------------------------------------------------------------

def test_stokes_circulation_constant_field():
    f = constant_field(Multivector.blade(EUC2, (0,), 1.5))
    lhs, rhs, residual = stokes_circulation_check(f, unit_square())
    assert abs(lhs) < 1e-12 and abs(rhs) < 1e-12 and residual < 1e-12


def test_stokes_circulation_polynomial():
    rng = np.random.default_rng(8)
    sig = EUC3
    modes = []
    for idx in sig.index_lists(1):
        exps = tuple(int(rng.integers(0, 3)) for _ in range(3))
        modes.append(Mode(amplitude=Multivector.blade(sig, idx, float(rng.normal())), poly=exps))
    f = AnalyticField(sig, 1, modes)
    box = HypersurfaceBox(sig, intervals={0: (-0.4, 0.3), 2: (0.1, 0.8)}, fixed={1: 0.2})
    lhs, rhs, residual = stokes_circulation_check(f, box)
    assert residual < 1e-10 * max(1.0, abs(lhs))


def test_stokes_circulation_gradient_field():
    # a gradient field has zero exterior derivative: both sides vanish
    omega = polynomial_field(Multivector.scalar(EUC2, 1.0), (2, 1))
    from extcalc.fields import exterior_derivative_field

    grad = exterior_derivative_field(omega)
    lhs, rhs, residual = stokes_circulation_check(grad, unit_square())
    assert abs(lhs) < 1e-12
    assert abs(rhs) < 1e-12
    assert residual < 1e-12


def test_stokes_circulation_minkowski_wave():
    sig = SpacetimeSignature(1, 2)
    rng = np.random.default_rng(9)
    amp = Multivector(sig, 1, {idx: float(rng.normal()) for idx in sig.index_lists(1)})
    f = plane_wave(amp, xi=(0.4, 0.3, -0.2), phase=0.5)
    box = HypersurfaceBox(sig, intervals={0: (0.0, 0.7), 1: (-0.3, 0.4)}, fixed={2: 0.1})
    lhs, rhs, residual = stokes_circulation_check(f, box, points=12)
    assert residual < 1e-10


# ---------------------------------------------------------------------------
# Stokes: flux form
# ---------------------------------------------------------------------------

def test_stokes_flux_polynomial_bivector():
    sig = EUC3
    rng = np.random.default_rng(10)
    modes = []
    for idx in sig.index_lists(2):
        exps = tuple(int(rng.integers(0, 3)) for _ in range(3))
        modes.append(Mode(amplitude=Multivector.blade(sig, idx, float(rng.normal())), poly=exps))
    f = AnalyticField(sig, 2, modes)
    box = HypersurfaceBox(sig, intervals={0: (0, 0.6), 1: (0, 0.5), 2: (-0.2, 0.4)}, fixed={})
    lhs, rhs, residual = stokes_flux_check(f, box)
    assert residual < 1e-10 * max(1.0, lhs.max_abs())


def test_stokes_flux_enveloped_wave_minkowski():
    sig = MINK2
    amp = Multivector(sig, 1, {(0,): 0.8, (1,): -0.6})
    env = GaussianEnvelope(center=(0.1, -0.1), width=1.4)
    f = plane_wave(amp, xi=(0.9, 0.7), phase=0.2, envelope=env)
    box = HypersurfaceBox(sig, intervals={0: (-0.5, 0.5), 1: (-0.4, 0.6)}, fixed={})
    lhs, rhs, residual = stokes_flux_check(f, box, points=14)
    assert residual < 1e-9 * max(1.0, lhs.max_abs())


def test_stokes_flux_partial_dimension_box():
    # flux Stokes on a 2-box inside (0,3) for a grade-2 field
    sig = EUC3
    rng = np.random.default_rng(13)
    modes = []
    for idx in sig.index_lists(2):
        exps = tuple(int(rng.integers(0, 2)) for _ in range(3))
        modes.append(Mode(amplitude=Multivector.blade(sig, idx, float(rng.normal())), poly=exps))
    f = AnalyticField(sig, 2, modes)
    box = HypersurfaceBox(sig, intervals={0: (0, 0.7), 2: (0, 0.5)}, fixed={1: -0.2})
    lhs, rhs, residual = stokes_flux_check(f, box)
    assert residual < 1e-10 * max(1.0, lhs.max_abs())


# ---------------------------------------------------------------------------
# Stokes: bitensor form
# ---------------------------------------------------------------------------

def test_bitensor_stokes_constant():
    comps = {(i, j): constant_field(Multivector.scalar(EUC2, 1.0)) for i in range(2) for j in range(i, 2)}
    tf = ComponentBitensorField(EUC2, comps)
    box = unit_square()
    lhs, rhs, residual = bitensor_stokes_check(tf, box)
    assert lhs.max_abs() < 1e-12
    assert residual < 1e-12


def test_bitensor_stokes_linear_components():
    sig = SpacetimeSignature(1, 2)
    rng = np.random.default_rng(14)
    comps = {}
    for i in range(3):
        for j in range(i, 3):
            field = polynomial_field(Multivector.scalar(sig, float(rng.normal())), (1, 0, 0)) + \
                polynomial_field(Multivector.scalar(sig, float(rng.normal())), (0, 1, 0)) + \
                polynomial_field(Multivector.scalar(sig, float(rng.normal())), (0, 0, 1)) + \
                constant_field(Multivector.scalar(sig, float(rng.normal())))
            comps[(i, j)] = field
    tf = ComponentBitensorField(sig, comps)
    box = HypersurfaceBox(sig, intervals={0: (0, 0.5), 1: (-0.3, 0.3), 2: (0.1, 0.9)}, fixed={})
    lhs, rhs, residual = bitensor_stokes_check(tf, box)
    assert residual < 1e-10 * max(1.0, lhs.max_abs())


def test_bitensor_stokes_requires_full_dimension():
    comps = {(0, 0): constant_field(Multivector.scalar(EUC2, 1.0))}
    tf = ComponentBitensorField(EUC2, comps)
    box = HypersurfaceBox(EUC2, intervals={0: (0, 1)}, fixed={1: 0.0})
    with pytest.raises(GradeError):
        bitensor_stokes_check(tf, box)


def test_reversed_orientation_flips_signs():
    f = polynomial_field(Multivector.blade(EUC2, (0,), -1.0), (0, 1)) + \
        polynomial_field(Multivector.blade(EUC2, (1,), 1.0), (1, 0))
    plus = sum(circulation(f, face) for face in unit_square(orientation=1).boundary_faces())
    minus = sum(circulation(f, face) for face in unit_square(orientation=-1).boundary_faces())
    assert plus == pytest.approx(-minus, abs=1e-12)
