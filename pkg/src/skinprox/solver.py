"""Dense solver for per-unit-length series impedance matrices.

At each frequency the surface-operator diagonal is combined with the
frequency-independent interaction matrix into

    A = I - j*omega*mu0 * diag(ys) @ G,

which is factorized once and solved against P right-hand sides (one per
conductor). The inverse of the resulting P x P terminal matrix splits
into the partial resistance and inductance matrices. Partial values are
defined against a remote common reference; loop, grounded-system and
sequence forms are derived by the reduction helpers below.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import pi

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.linalg.lapack import zgecon

from .admittance import assemble_admittance, wavenumbers
from .geometry import MU0, CrossSection, HarmonicLayout
from .green import GreenMatrix, assemble_green
from .specfun import bessel_j_quotient

#: Condition-number threshold above which a solve emits a warning.
CONDITION_WARN = 1e12


class SolverError(RuntimeError):
    """Linear system could not be solved reliably."""

    def __init__(self, message: str, condition: float | None = None):
        super().__init__(message)
        self.condition = condition


@dataclass(frozen=True)
class SolveSettings:
    """Truncation orders and frequency grid for a sweep.

    ``orders`` is either one global order or a per-conductor sequence.
    The grid is either an explicit ``freqs`` tuple or a log-spaced grid
    described by ``f_min``/``f_max``/``points_per_decade``.
    """

    orders: int | tuple[int, ...] = 3
    freqs: tuple[float, ...] = ()
    f_min: float | None = None
    f_max: float | None = None
    points_per_decade: int | None = None

    def orders_for(self, count: int) -> tuple[int, ...]:
        if isinstance(self.orders, int):
            if self.orders < 0:
                raise ValueError("truncation order must be non-negative")
            return (self.orders,) * count
        orders = tuple(int(n) for n in self.orders)
        if len(orders) != count:
            raise ValueError(f"got {len(orders)} orders for {count} conductors")
        if any(n < 0 for n in orders):
            raise ValueError("truncation orders must be non-negative")
        return orders

    def frequencies(self) -> tuple[float, ...]:
        if self.freqs:
            freqs = tuple(float(f) for f in self.freqs)
            if any(f <= 0 for f in freqs):
                raise ValueError("frequencies must be positive")
            if any(b <= a for a, b in zip(freqs, freqs[1:])):
                raise ValueError("frequencies must be strictly ascending")
            return freqs
        if self.f_min is None and self.f_max is None:
            return ()
        if self.f_min is None or self.f_max is None or self.points_per_decade is None:
            raise ValueError("log grid needs f_min, f_max and points_per_decade")
        if self.f_min <= 0 or self.f_max < self.f_min:
            raise ValueError("log grid needs 0 < f_min <= f_max")
        if self.f_max == self.f_min:
            return (float(self.f_min),)
        decades = np.log10(self.f_max / self.f_min)
        count = int(round(self.points_per_decade * decades)) + 1
        grid = np.logspace(np.log10(self.f_min), np.log10(self.f_max), count)
        return tuple(float(f) for f in grid)


@dataclass(frozen=True)
class PulResult:
    """Per-frequency partial resistance [ohm/m] and inductance [H/m]."""

    frequency: float
    resistance: np.ndarray
    inductance: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def impedance(self) -> np.ndarray:
        """Complex series impedance R + j*omega*L [ohm/m]."""
        return self.resistance + 1j * (2.0 * pi * self.frequency) * self.inductance


def selector_indices(layout: HarmonicLayout) -> np.ndarray:
    """Row indices of the n = 0 coefficients (the implicit selector matrix).

    Column p of the selector has its single 1 at ``selector_indices[p]``;
    applying its transpose to the current coefficient vector extracts the
    conductor currents.
    """
    return np.array(layout.zero_indices())


def _terminal_matrix(cs: CrossSection, green: GreenMatrix, omega: float):
    """Factor the system and return (X, z0, condition) where X = A^-1 Ys U."""
    ys = assemble_admittance(cs, green.layout, omega).diagonal
    A = (-1j * omega * MU0) * (ys[:, None] * green.data)
    n = A.shape[0]
    A.flat[:: n + 1] += 1.0
    anorm = np.linalg.norm(A, 1)
    lu, piv = lu_factor(A, overwrite_a=True, check_finite=False)
    rcond, info = zgecon(lu, anorm)
    if info != 0 or not np.isfinite(rcond) or rcond == 0.0:
        raise SolverError("ill-conditioned system: singular operator matrix", condition=np.inf)
    condition = 1.0 / rcond
    if condition > CONDITION_WARN:
        warnings.warn(f"system condition estimate {condition:.3e}", stacklevel=3)
    z0 = selector_indices(green.layout)
    rhs = np.zeros((n, len(cs)), dtype=complex)
    rhs[z0, np.arange(len(cs))] = ys[z0]
    x = lu_solve((lu, piv), rhs, check_finite=False)
    return x, z0, condition


def pul_partial(cs: CrossSection, green: GreenMatrix, omega: float) -> PulResult:
    """Partial R'(omega), L'(omega) matrices of a cross section.

    ``green`` must have been assembled for the same geometry and layout;
    it is reused untouched, which is what makes frequency sweeps cheap.
    """
    if omega <= 0:
        raise ValueError("frequency must be positive")
    if len(green.layout.orders) != len(cs):
        raise ValueError("interaction matrix does not match the cross section")
    x, z0, condition = _terminal_matrix(cs, green, omega)
    terminal = x[z0, :]
    cond_terminal = np.linalg.cond(terminal)
    if not np.isfinite(cond_terminal):
        raise SolverError("ill-conditioned system: singular terminal matrix",
                          condition=cond_terminal)
    if cond_terminal > CONDITION_WARN:
        warnings.warn(f"terminal matrix condition estimate {cond_terminal:.3e}", stacklevel=2)
    try:
        impedance = np.linalg.inv(terminal)
    except np.linalg.LinAlgError as exc:
        raise SolverError("ill-conditioned system: singular terminal matrix",
                          condition=cond_terminal) from exc
    if not np.all(np.isfinite(impedance)):
        raise SolverError("solver produced non-finite impedance entries",
                          condition=condition)
    asym = np.linalg.norm(impedance - impedance.T) / np.linalg.norm(impedance)
    if asym > 1e-8:
        warnings.warn(f"impedance matrix asymmetry {asym:.3e}", stacklevel=2)
    return PulResult(
        frequency=omega / (2.0 * pi),
        resistance=impedance.real.copy(),
        inductance=impedance.imag / omega,
        metadata={
            "orders": green.layout.orders,
            "geometry_hash": green.geometry_hash,
            "condition": condition,
            "condition_terminal": float(cond_terminal),
            "asymmetry": float(asym),
        },
    )


def sweep(
    cs: CrossSection,
    settings: SolveSettings,
    green: GreenMatrix | None = None,
    threads: int = 1,
) -> list[PulResult]:
    """Solve every frequency in the grid, assembling the matrix only once.

    Per-frequency solves are independent; with ``threads`` > 1 they run
    concurrently against the shared read-only matrix. Output order always
    follows the frequency grid.
    """
    freqs = settings.frequencies()
    if not freqs:
        return []
    orders = settings.orders_for(len(cs))
    if green is None:
        green = assemble_green(cs, HarmonicLayout.from_orders(orders))
    elif green.layout.orders != orders:
        raise ValueError("provided interaction matrix was assembled for different orders")

    def solve_one(f: float) -> PulResult:
        try:
            return pul_partial(cs, green, 2.0 * pi * f)
        except SolverError as exc:
            raise SolverError(f"at {f:g} Hz: {exc}", condition=exc.condition) from exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(solve_one, freqs))
    return [solve_one(f) for f in freqs]


# --------------------------------------------------------------------------
# reductions


def reference_reduce(impedance: np.ndarray, ref: int) -> np.ndarray:
    """Loop impedances with conductor ``ref`` as voltage reference and return.

    The additive gauge constant of the logarithmic kernel cancels exactly
    in this combination.
    """
    Z = np.asarray(impedance)
    P = Z.shape[0]
    if Z.shape != (P, P) or P < 2:
        raise ValueError("need a square matrix of at least two conductors")
    if not 0 <= ref < P:
        raise ValueError(f"reference index {ref} out of range")
    keep = [i for i in range(P) if i != ref]
    return (
        Z[np.ix_(keep, keep)]
        - Z[keep, ref][:, None]
        - Z[ref, keep][None, :]
        + Z[ref, ref]
    )


def kron_reduce(impedance: np.ndarray, grounded) -> np.ndarray:
    """Schur-complement elimination of zero-voltage-drop conductors.

    Operates on whatever impedance matrix it is given; for physically
    meaningful grounded-system results feed it reference-consistent
    (loop-reduced) impedances, or use :func:`eliminate_grounded`.
    """
    Z = np.asarray(impedance)
    grounded = sorted(set(int(g) for g in grounded))
    P = Z.shape[0]
    if any(not 0 <= g < P for g in grounded):
        raise ValueError("grounded index out of range")
    kept = [i for i in range(P) if i not in grounded]
    if not kept:
        raise ValueError("at least one conductor must be kept")
    if not grounded:
        return Z.copy()
    Zkk = Z[np.ix_(kept, kept)]
    Zkg = Z[np.ix_(kept, grounded)]
    Zgk = Z[np.ix_(grounded, kept)]
    Zgg = Z[np.ix_(grounded, grounded)]
    try:
        correction = Zkg @ np.linalg.solve(Zgg, Zgk)
    except np.linalg.LinAlgError as exc:
        raise SolverError("grounded subsystem singular") from exc
    return Zkk - correction


def eliminate_grounded(impedance: np.ndarray, grounded) -> np.ndarray:
    """Reduce partial impedances to the kept conductors, screens grounded.

    Grounded conductors are bonded to a common zero-voltage reference, so
    return current flows through them. One grounded conductor serves as
    the voltage reference (making the matrix gauge-free), the remaining
    grounded conductors are Kron-eliminated. Row/column order of the kept
    conductors is preserved.
    """
    Z = np.asarray(impedance)
    grounded = sorted(set(int(g) for g in grounded))
    if not grounded:
        return Z.copy()
    P = Z.shape[0]
    if any(not 0 <= g < P for g in grounded):
        raise ValueError("grounded index out of range")
    ref = grounded[-1]
    reduced = reference_reduce(Z, ref)
    survivors = [i for i in range(P) if i != ref]
    grounded_pos = [survivors.index(g) for g in grounded[:-1]]
    return kron_reduce(reduced, grounded_pos)


def sequence_impedances(z3: np.ndarray) -> tuple[complex, complex]:
    """Positive- and zero-sequence impedance of a balanced 3 x 3 matrix.

    With s the mean diagonal and m the mean off-diagonal entry, the
    positive sequence is s - m and the zero sequence s + 2m.
    """
    Z = np.asarray(z3)
    if Z.shape != (3, 3):
        raise ValueError("sequence impedances need a 3 x 3 matrix")
    s = np.trace(Z) / 3.0
    m = (np.sum(Z) - np.trace(Z)) / 6.0
    return complex(s - m), complex(s + 2.0 * m)


# --------------------------------------------------------------------------
# interior field reconstruction


def current_density(
    cs: CrossSection,
    green: GreenMatrix,
    omega: float,
    drive: np.ndarray,
    points: np.ndarray,
) -> np.ndarray:
    """Longitudinal current density [A/m^2] at interior sample points.

    ``drive`` holds the P conductor currents [A]; ``points`` is a (K, 2)
    array of (x, y) positions, each strictly inside some conductor. The
    boundary-field coefficients are recovered from the solved system and
    continued inward with overflow-safe scaled Bessel quotients.
    """
    if omega <= 0:
        raise ValueError("frequency must be positive")
    drive = np.asarray(drive, dtype=complex)
    if drive.shape != (len(cs),):
        raise ValueError("drive must supply one current per conductor")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != 2:
        raise ValueError("points must be an array of (x, y) pairs")

    layout = green.layout
    ys = assemble_admittance(cs, layout, omega).diagonal
    x, z0, _ = _terminal_matrix(cs, green, omega)
    terminal = x[z0, :]
    coeff_currents = x @ np.linalg.solve(terminal, drive)

    # assign each point to its conductor
    owner = np.full(len(pts), -1, dtype=int)
    for p, c in enumerate(cs):
        r = np.hypot(pts[:, 0] - c.center_x, pts[:, 1] - c.center_y)
        inside = r < c.radius * (1.0 - 1e-12)
        owner[inside & (owner < 0)] = p
    if np.any(owner < 0):
        bad = pts[owner < 0][0]
        raise ValueError(f"exterior point ({bad[0]:g}, {bad[1]:g}) is not inside any conductor")

    density = np.zeros(len(pts), dtype=complex)
    for p in np.unique(owner):
        c = cs[p]
        if c.conductivity == 0.0:
            continue
        sel = owner == p
        local_x = pts[sel, 0] - c.center_x
        local_y = pts[sel, 1] - c.center_y
        r = np.hypot(local_x, local_y)
        theta = np.arctan2(local_y, local_x)
        k, _ = wavenumbers(c, cs.outer_permittivity, omega)
        i0 = layout.zero_index(p)
        total = np.zeros(sel.sum(), dtype=complex)
        for n in range(-layout.orders[p], layout.orders[p] + 1):
            ysn = ys[i0 + n]
            if ysn == 0:
                continue
            boundary_coeff = coeff_currents[i0 + n] / ysn
            radial = bessel_j_quotient(abs(n), k * r, k * c.radius)
            total += boundary_coeff * radial * np.exp(1j * n * theta)
        density[sel] = c.conductivity * total
    return density
