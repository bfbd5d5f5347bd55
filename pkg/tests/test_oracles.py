from math import pi, sqrt

import numpy as np
import pytest

from conftest import two_wire
from skinprox.geometry import MU0, Conductor, HarmonicLayout
from skinprox.green import assemble_green, green_mutual_entry
from skinprox.oracles import (
    MeshValidityError,
    TwoWireSpec,
    disc_filaments,
    filament_solve,
    green_quadrature,
    skin_depth,
    two_wire_hf,
    two_wire_wide,
)
from skinprox.solver import pul_partial, reference_reduce

COPPER = 58e6


def spec(f, separation=0.1):
    return TwoWireSpec(radius=0.01, separation=separation, conductivity=COPPER, frequency=f)


# ---------------------------------------------------------------- formulas


def test_skin_depth_values_and_scaling():
    assert skin_depth(50.0, COPPER) == pytest.approx(9.345900061927292e-3, rel=1e-12)
    assert skin_depth(1e6, COPPER) == pytest.approx(6.608549310080563e-5, rel=1e-12)
    assert skin_depth(4e3, COPPER) == pytest.approx(skin_depth(1e3, COPPER) / 2.0, rel=1e-12)
    with pytest.raises(ValueError):
        skin_depth(0.0, COPPER)


def test_two_wire_spec_invariant():
    with pytest.raises(ValueError, match="separation"):
        TwoWireSpec(radius=0.01, separation=0.02, conductivity=COPPER, frequency=50.0)


def test_two_wire_hf_frozen_values():
    r, ell = two_wire_hf(spec(1e6))
    assert r == pytest.approx(0.00847579379526013, rel=1e-12)
    assert ell == pytest.approx(9.169726678244712e-07, rel=1e-12)
    r25, ell25 = two_wire_hf(spec(1e6, separation=0.025))
    assert r25 == pytest.approx(0.013840913308956662, rel=1e-12)
    assert ell25 == pytest.approx(2.7725887222397814e-07, rel=1e-12)


def test_two_wire_hf_limits():
    # wide separation: proximity factor -> 1
    r_wide, _ = two_wire_hf(spec(1e6, separation=10.0))
    delta = skin_depth(1e6, COPPER)
    surface = 1.0 / (COPPER * delta) / (pi * 0.01)
    assert r_wide == pytest.approx(surface, rel=1e-6)
    # touching wires: resistance diverges
    r_touch, _ = two_wire_hf(spec(1e6, separation=0.02 * (1.0 + 1e-9)))
    assert r_touch > 1e3 * surface


def test_two_wire_wide_dc_limit():
    z = two_wire_wide(spec(0.01))
    assert z.real == pytest.approx(2.0 / (COPPER * pi * 0.01**2), rel=1e-6)


def test_two_wire_wide_high_frequency_limit():
    z = two_wire_wide(spec(1e6))
    delta = skin_depth(1e6, COPPER)
    surface = 1.0 / (COPPER * delta) / (2 * pi * 0.01)
    assert z.real / 2.0 == pytest.approx(surface, rel=5e-3)


def test_two_wire_wide_frozen_1khz():
    # frozen from a 50-digit Kelvin-function evaluation
    z = two_wire_wide(spec(1e3))
    assert z.real == pytest.approx(0.00029214620947159204, rel=1e-10)
    assert z.imag == pytest.approx(0.0060214212073360013, rel=1e-10)


def test_hf_and_wide_agree_in_overlap_corner():
    # D/2a = 5, fully developed skin: both formulas describe the same line
    r_hf, _ = two_wire_hf(spec(1e6))
    z = two_wire_wide(spec(1e6))
    assert abs(z.real - r_hf) / r_hf < 0.03


# ---------------------------------------------------------------- quadrature


def test_quadrature_reproduces_log_term():
    p = Conductor(id=1, center_x=0, center_y=0, radius=0.01, conductivity=COPPER)
    q = Conductor(id=2, center_x=0.1, center_y=0, radius=0.01, conductivity=COPPER)
    val = green_quadrature(p, q, 0, 0, points=512)
    assert abs(val - np.log(0.1) / (2 * pi)) < 1e-10


def test_quadrature_zero_case():
    p = Conductor(id=1, center_x=0, center_y=0, radius=0.01, conductivity=COPPER)
    q = Conductor(id=2, center_x=0.05, center_y=0.02, radius=0.012, conductivity=COPPER)
    assert abs(green_quadrature(p, q, 1, 2, points=512)) < 1e-10
    assert abs(green_quadrature(p, q, 2, 1, points=512) -
               green_mutual_entry(p, q, 2, 1)) < 1e-10


def test_quadrature_point_count_convergence():
    p = Conductor(id=1, center_x=0, center_y=0, radius=0.01, conductivity=COPPER)
    q = Conductor(id=2, center_x=0.021, center_y=0, radius=0.01, conductivity=COPPER)
    coarse = green_quadrature(p, q, -2, 1, points=256)
    fine = green_quadrature(p, q, -2, 1, points=512)
    assert abs(coarse - fine) < 1e-10
    with pytest.raises(ValueError):
        green_quadrature(p, q, 0, 0, points=16)


# ---------------------------------------------------------------- filaments


def test_disc_filaments_tile_the_disc():
    x, y, area = disc_filaments(0.01, 8)
    assert area.sum() == pytest.approx(pi * 0.01**2, rel=1e-12)
    assert np.hypot(x, y).max() < 0.01


def test_filament_dc_resistance():
    z = filament_solve(two_wire(0.025), 2 * pi * 1.0, 8)
    assert z.shape == (1, 1)
    assert z[0, 0].real == pytest.approx(2.0 / (COPPER * pi * 0.01**2), rel=1e-2)


def test_filament_low_frequency_internal_inductance():
    # wide separation: loop L - external L = 2 * mu0 / (8 pi)
    cs = two_wire(0.1)
    z = filament_solve(cs, 2 * pi * 1.0, 10)[0, 0]
    l_loop = z.imag / (2 * pi * 1.0)
    l_ext = MU0 / pi * np.arccosh(5.0)
    internal_per_wire = (l_loop - l_ext) / 2.0
    assert internal_per_wire == pytest.approx(MU0 / (8 * pi), rel=0.02)


def test_filament_matches_surface_operator_solver():
    cs = two_wire(0.025)
    gm = assemble_green(cs, HarmonicLayout.uniform(2, 4))
    for f in (50.0, 500.0):
        z_fil = filament_solve(cs, 2 * pi * f, 12)[0, 0]
        z_sol = reference_reduce(pul_partial(cs, gm, 2 * pi * f).impedance, 1)[0, 0]
        assert abs(z_fil - z_sol) / abs(z_sol) < 0.02


def test_filament_mesh_convergence():
    cs = two_wire(0.025)
    omega = 2 * pi * 500.0
    z = [filament_solve(cs, omega, rings)[0, 0] for rings in (7, 10, 14)]
    step1 = abs(z[1] - z[0])
    step2 = abs(z[2] - z[1])
    assert step2 < step1


def test_filament_validity_guards():
    cs = two_wire(0.025)
    with pytest.raises(MeshValidityError, match="frequency too high"):
        filament_solve(cs, 2 * pi * 50e3, 10)  # above the oracle frequency cap
    with pytest.raises(MeshValidityError, match="frequency too high"):
        filament_solve(cs, 2 * pi * 10e3, 3)  # filaments far coarser than delta/2
    with pytest.raises(MeshValidityError, match="filament count"):
        filament_solve(cs, 2 * pi * 1.0, 80)
