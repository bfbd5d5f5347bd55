"""Discrete surface admittance operator for round conductors.

Each conductor is replaced by the surrounding medium plus an equivalent
surface current; per spatial harmonic n the current coefficient is a
scalar admittance times the boundary field coefficient. The operator is
therefore diagonal in the harmonic basis, depends only on |n|, and is
local to each conductor.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi, sqrt

import numpy as np

from .geometry import MU0, Conductor, CrossSection, HarmonicLayout
from .specfun import bessel_j_ratio


@dataclass(frozen=True)
class SurfaceAdmittance:
    """Diagonal of the discrete surface admittance operator [S].

    Indexed by a :class:`HarmonicLayout`; entries for (p, n) and (p, -n)
    are equal.
    """

    diagonal: np.ndarray
    frequency: float
    layout: HarmonicLayout


def wavenumbers(conductor: Conductor, outer_permittivity: float, omega: float):
    """Wavenumber inside ``conductor`` and in the outer medium at ``omega``.

    The interior branch is fixed so that Im(k) <= 0 (fields decay away
    from the surface into the conductor with the exp(j*omega*t)
    convention).
    """
    if omega <= 0:
        raise ValueError("frequency must be positive")
    k = np.sqrt(complex(omega * conductor.mu * (omega * conductor.permittivity - 1j * conductor.conductivity)))
    if k.imag > 0:
        k = -k
    k_out = omega * sqrt(MU0 * outer_permittivity)
    return k, k_out


def admittance_entry(n: int, conductor: Conductor, outer_permittivity: float, omega: float) -> complex:
    """Surface admittance for harmonic ``n`` of a single conductor [S].

    Two-term Bessel-ratio expression; the first term carries the interior
    material (including mu_r != 1), the second removes the response of
    the outer medium filling the conductor's footprint. For matched media
    the terms cancel exactly and the entry is zero.
    """
    k, k_out = wavenumbers(conductor, outer_permittivity, omega)
    a = conductor.radius
    mu = conductor.mu
    if k == k_out and mu == MU0:
        return 0.0 + 0.0j
    m = abs(n)
    t_in = (k * a / mu) * bessel_j_ratio(m, k * a)
    t_out = (k_out * a / MU0) * bessel_j_ratio(m, k_out * a)
    return (2.0 * pi / (1j * omega)) * (t_in - t_out)


def assemble_admittance(cs: CrossSection, layout: HarmonicLayout, omega: float) -> SurfaceAdmittance:
    """Fill the length-N admittance diagonal for a cross section."""
    if len(layout.orders) != len(cs):
        raise ValueError("layout does not match the cross section")
    diag = np.zeros(layout.size, dtype=complex)
    for p, conductor in enumerate(cs):
        i0 = layout.zero_index(p)
        for n in range(layout.orders[p] + 1):
            value = admittance_entry(n, conductor, cs.outer_permittivity, omega)
            diag[i0 + n] = value
            diag[i0 - n] = value
    return SurfaceAdmittance(diagonal=diag, frequency=omega / (2.0 * pi), layout=layout)
