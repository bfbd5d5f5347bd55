"""Invariant suite over randomized geometries.

The same checks run (with a fixed-seed generator) inside the acceptance
suite; here hypothesis explores the space more aggressively.
"""

from math import cos, pi, sin

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_cross_section
from skinprox.geometry import Conductor, CrossSection, HarmonicLayout
from skinprox.green import assemble_green
from skinprox.solver import pul_partial, reference_reduce


def flip_permutation(layout: HarmonicLayout) -> np.ndarray:
    flip = np.arange(layout.size)
    for p in range(len(layout.orders)):
        blk = layout.block(p)
        flip[blk] = flip[blk][::-1]
    return flip


def transformed(cs: CrossSection, angle: float, dx: float, dy: float) -> CrossSection:
    moved = []
    for c in cs:
        x = cos(angle) * c.center_x - sin(angle) * c.center_y + dx
        y = sin(angle) * c.center_x + cos(angle) * c.center_y + dy
        moved.append(Conductor(
            id=c.id, center_x=x, center_y=y, radius=c.radius,
            conductivity=c.conductivity, rel_permeability=c.rel_permeability,
            rel_permittivity=c.rel_permittivity, role=c.role, connection=c.connection,
        ))
    return CrossSection(conductors=tuple(moved), outer_permittivity=cs.outer_permittivity)


def check_green_structure(cs, layout):
    gm = assemble_green(cs, layout)
    flip = flip_permutation(layout)
    assert np.array_equal(gm.data, np.conj(gm.data[np.ix_(flip, flip)]))
    for p in range(len(cs)):
        for q in range(len(cs)):
            if p == q:
                continue
            for n in range(1, layout.orders[q] + 1):
                for n_row in range(1, layout.orders[p] + 1):
                    assert gm.data[layout.index(p, n_row), layout.index(q, n)] == 0.0
                    assert gm.data[layout.index(p, -n_row), layout.index(q, -n)] == 0.0
    return gm


def check_solution_invariants(cs, orders, omega):
    layout = HarmonicLayout.from_orders(orders)
    gm = check_green_structure(cs, layout)
    result = pul_partial(cs, gm, omega)
    impedance = result.impedance

    # reciprocity
    asym = np.linalg.norm(impedance - impedance.T) / np.linalg.norm(impedance)
    assert asym <= 1e-8

    # dissipation: loop-reduced resistance is positive semi-definite
    if len(cs) >= 2:
        loop = reference_reduce(impedance, len(cs) - 1)
        r = loop.real
        sym = 0.5 * (r + r.T)
        eigs = np.linalg.eigvalsh(sym)
        assert eigs.min() >= -1e-12 * max(np.linalg.norm(sym), 1e-300)

    return result


@given(seed=st.integers(min_value=0, max_value=2**32 - 1),
       f_exp=st.floats(min_value=0.0, max_value=6.0))
@settings(max_examples=50)
def test_randomized_invariants(seed, f_exp):
    rng = np.random.default_rng(seed)
    cs, orders = random_cross_section(rng)
    omega = 2 * pi * 10.0**f_exp
    check_solution_invariants(cs, orders, omega)


@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=30)
def test_permutation_equivariance(seed):
    rng = np.random.default_rng(seed)
    cs, orders = random_cross_section(rng)
    omega = 2 * pi * 1e3
    perm = rng.permutation(len(cs))

    base = pul_partial(cs, assemble_green(cs, HarmonicLayout.from_orders(orders)), omega)
    shuffled_cs = CrossSection(conductors=tuple(cs[int(i)] for i in perm),
                               outer_permittivity=cs.outer_permittivity)
    shuffled_orders = tuple(orders[int(i)] for i in perm)
    shuffled = pul_partial(
        shuffled_cs, assemble_green(shuffled_cs, HarmonicLayout.from_orders(shuffled_orders)),
        omega,
    )
    expected_r = base.resistance[np.ix_(perm, perm)]
    expected_l = base.inductance[np.ix_(perm, perm)]
    assert np.allclose(shuffled.resistance, expected_r, rtol=1e-10, atol=0)
    assert np.allclose(shuffled.inductance, expected_l, rtol=1e-10,
                       atol=1e-10 * np.abs(expected_l).max())


@given(seed=st.integers(min_value=0, max_value=2**32 - 1),
       angle=st.floats(min_value=0.0, max_value=2 * pi),
       dx=st.floats(min_value=-1.0, max_value=1.0),
       dy=st.floats(min_value=-1.0, max_value=1.0))
@settings(max_examples=30)
def test_rigid_motion_invariance(seed, angle, dx, dy):
    rng = np.random.default_rng(seed)
    cs, orders = random_cross_section(rng)
    omega = 2 * pi * 50.0
    layout = HarmonicLayout.from_orders(orders)

    base = pul_partial(cs, assemble_green(cs, layout), omega)
    moved_cs = transformed(cs, angle, dx, dy)
    moved = pul_partial(moved_cs, assemble_green(moved_cs, layout), omega)

    scale_r = np.abs(base.resistance).max()
    scale_l = np.abs(base.inductance).max()
    assert np.allclose(moved.resistance, base.resistance, rtol=0, atol=1e-10 * scale_r)
    assert np.allclose(moved.inductance, base.inductance, rtol=0, atol=1e-10 * scale_l)
