"""Independent reference computations for validation and cross-checks.

Three unrelated routes to the same physics live here:

* closed-form two-wire line formulas (high-frequency asymptote and the
  Kelvin-function internal impedance valid at wide separation),
* a periodic-trapezoid quadrature evaluator of the interaction-matrix
  double integral (pins down every analytic entry case),
* a brute-force conductor-partitioning (filament) impedance solver.

They are shipped, not test-only, so users can reproduce the validation
studies from the command line.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import acosh, pi, sqrt

import numpy as np

from .geometry import MU0, Conductor, CrossSection
from .specfun import kelvin_funcs


class MeshValidityError(ValueError):
    """The filament mesh cannot represent the requested frequency."""


@dataclass(frozen=True)
class TwoWireSpec:
    """Two identical parallel round wires: geometry, material, frequency."""

    radius: float
    separation: float
    conductivity: float
    rel_permeability: float = 1.0
    frequency: float = 50.0

    def __post_init__(self):
        if self.separation <= 2.0 * self.radius:
            raise ValueError("separation must exceed the wire diameter")
        if self.radius <= 0 or self.conductivity <= 0 or self.frequency <= 0:
            raise ValueError("radius, conductivity and frequency must be positive")


def skin_depth(frequency: float, conductivity: float, mu: float = MU0) -> float:
    """Skin depth 1/sqrt(pi * f * mu * sigma) [m]."""
    if frequency <= 0 or conductivity <= 0 or mu <= 0:
        raise ValueError("frequency, conductivity and permeability must be positive")
    return 1.0 / sqrt(pi * frequency * mu * conductivity)


def two_wire_hf(spec: TwoWireSpec) -> tuple[float, float]:
    """Loop resistance and inductance in the fully-developed-skin limit.

    R = (R_s / pi a) * (D/2a) / sqrt((D/2a)^2 - 1) with surface resistance
    R_s = 1/(sigma * delta); L is the external loop inductance
    (mu0/pi) * acosh(D/2a). Valid at high frequency; includes proximity.
    """
    delta = skin_depth(spec.frequency, spec.conductivity, spec.rel_permeability * MU0)
    rs = 1.0 / (spec.conductivity * delta)
    ratio = spec.separation / (2.0 * spec.radius)
    resistance = rs / (pi * spec.radius) * ratio / sqrt(ratio * ratio - 1.0)
    inductance = MU0 / pi * acosh(ratio)
    return resistance, inductance


def two_wire_wide(spec: TwoWireSpec) -> complex:
    """Loop impedance with the exact isolated-wire internal impedance.

    Z = 2 * Z_int + j*omega*L_ext, where Z_int follows from the Kelvin
    functions at xi = sqrt(2) * a / delta. Valid at any frequency but
    assumes wide separation (no proximity redistribution).
    """
    delta = skin_depth(spec.frequency, spec.conductivity, spec.rel_permeability * MU0)
    xi = sqrt(2.0) * spec.radius / delta
    ber, bei, berp, beip = kelvin_funcs(xi)
    z_int = (
        1.0 / (sqrt(2.0) * pi * spec.radius * spec.conductivity * delta)
        * (ber + 1j * bei) / (beip - 1j * berp)
    )
    l_ext = MU0 / pi * acosh(spec.separation / (2.0 * spec.radius))
    return 2.0 * z_int + 1j * (2.0 * pi * spec.frequency) * l_ext


# --------------------------------------------------------------------------
# quadrature oracle for interaction-matrix entries


def green_quadrature(p: Conductor, q: Conductor, n_row: int, n_col: int, points: int = 512) -> complex:
    """Direct numerical evaluation of the interaction double integral.

    Nested periodic trapezoid rule with ``points`` samples per angle;
    converges spectrally for non-touching conductors. Self blocks are not
    supported (the integrand is singular there and the closed forms are
    elementary anyway).
    """
    if points < 64:
        raise ValueError("use at least 64 quadrature points per angle")
    if (p.center_x, p.center_y) == (q.center_x, q.center_y):
        raise ValueError("quadrature oracle handles distinct conductors only")
    th = 2.0 * pi * np.arange(points) / points
    th_p = th[:, None]
    th_q = th[None, :]
    dx = (p.center_x + p.radius * np.cos(th_p)) - (q.center_x + q.radius * np.cos(th_q))
    dy = (p.center_y + p.radius * np.sin(th_p)) - (q.center_y + q.radius * np.sin(th_q))
    log_dist = 0.5 * np.log(dx * dx + dy * dy)
    phase = np.exp(1j * (n_col * th_q - n_row * th_p))
    return complex((log_dist * phase).sum() / (points * points * 2.0 * pi))


# --------------------------------------------------------------------------
# filament (conductor partitioning) brute-force solver

#: validity caps: the filament oracle exists to validate low/mid-frequency
#: proximity, not to compete with the surface-operator solver
FILAMENT_MAX_FREQUENCY = 20e3
FILAMENT_MAX_COUNT = 10_000


def disc_filaments(radius: float, rings: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Annular-sector partition of a disc: centroids (x, y) and exact areas.

    Ring k of width radius/rings carries 6k sectors (one center filament
    for k = 0), which keeps filament areas roughly equal, hexagonal-grid
    style. Areas sum to the disc area exactly.
    """
    if rings < 1:
        raise ValueError("need at least one ring")
    xs, ys, areas = [0.0], [0.0], [pi * (radius / rings) ** 2]
    for k in range(1, rings):
        r1 = radius * k / rings
        r2 = radius * (k + 1) / rings
        sectors = 6 * k
        dphi = 2.0 * pi / sectors
        # radial centroid of an annular sector
        rc = (2.0 / 3.0) * (r2**3 - r1**3) / (r2**2 - r1**2)
        area = 0.5 * (r2**2 - r1**2) * dphi
        for s in range(sectors):
            phi = (s + 0.5) * dphi
            xs.append(rc * np.cos(phi))
            ys.append(rc * np.sin(phi))
            areas.append(area)
    return np.array(xs), np.array(ys), np.array(areas)


def filament_solve(cs: CrossSection, omega: float, mesh_density: int, ref: int | None = None) -> np.ndarray:
    """Loop-reduced impedance matrix from a filament partition [ohm/m].

    Each conductor is split into ``mesh_density`` radial rings of
    filaments; a filament contributes its DC resistance plus partial
    mutual inductances (log of center distances, geometric-mean-distance
    self term e^{-1/4} r_eq). Filaments of one conductor are bundled as
    parallel branches, and the result is loop-reduced against conductor
    ``ref`` (default: the last one).

    Validity guard: filament size must stay below half a skin depth.
    """
    if omega <= 0:
        raise ValueError("frequency must be positive")
    f = omega / (2.0 * pi)
    if f > FILAMENT_MAX_FREQUENCY:
        raise MeshValidityError(
            f"frequency too high for mesh: {f:g} Hz exceeds the "
            f"{FILAMENT_MAX_FREQUENCY:g} Hz filament-oracle cap"
        )
    P = len(cs)
    if ref is None:
        ref = P - 1
    if not 0 <= ref < P:
        raise ValueError("reference index out of range")

    xs, ys, areas, owner = [], [], [], []
    for p, c in enumerate(cs):
        if c.conductivity <= 0:
            raise ValueError("filament oracle needs conductive conductors")
        h = c.radius / mesh_density
        delta = skin_depth(f, c.conductivity, c.rel_permeability * MU0)
        if h > delta / 2.0:
            raise MeshValidityError(
                f"frequency too high for mesh: filament size {h:g} m exceeds "
                f"half the skin depth {delta / 2.0:g} m of conductor {c.id}"
            )
        fx, fy, fa = disc_filaments(c.radius, mesh_density)
        xs.append(fx + c.center_x)
        ys.append(fy + c.center_y)
        areas.append(fa)
        owner.append(np.full(len(fa), p))
    x = np.concatenate(xs)
    y = np.concatenate(ys)
    area = np.concatenate(areas)
    owner = np.concatenate(owner)
    count = len(x)
    if count > FILAMENT_MAX_COUNT:
        raise MeshValidityError(f"filament count {count} exceeds the {FILAMENT_MAX_COUNT} cap")

    dist = np.hypot(x[:, None] - x[None, :], y[:, None] - y[None, :])
    r_eq = np.sqrt(area / pi)
    np.fill_diagonal(dist, np.exp(-0.25) * r_eq)
    sigma = np.array([cs[p].conductivity for p in owner])
    z = 1j * omega * MU0 / (2.0 * pi) * np.log(1.0 / dist)
    z[np.diag_indices_from(z)] += 1.0 / (sigma * area)

    incidence = np.zeros((count, P))
    incidence[np.arange(count), owner] = 1.0
    bundle_admittance = incidence.T @ np.linalg.solve(z, incidence)
    z_cond = np.linalg.inv(bundle_admittance)

    keep = [i for i in range(P) if i != ref]
    return (
        z_cond[np.ix_(keep, keep)]
        - z_cond[keep, ref][:, None]
        - z_cond[ref, keep][None, :]
        + z_cond[ref, ref]
    )
