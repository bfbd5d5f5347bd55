"""Numerically robust Bessel-function kernels for complex arguments.

The surface-admittance operator needs the logarithmic derivative
J'_n(z)/J_n(z) at arguments up to |z| ~ 1e4 with strongly negative
imaginary part (high frequency times high conductivity), where J_n itself
overflows double precision. The ratio is therefore evaluated without ever
forming J_n:

* modified Lentz continued fraction for J_{n+1}(z)/J_n(z) at large |z|,
* downward recurrence on the same ratio near the origin,
* the identity J'_n/J_n = n/z - J_{n+1}/J_n.

Kelvin functions (used by the analytic two-wire reference formulas) are
delegated to scipy, which stays accurate over the needed range.
"""

from __future__ import annotations

import numpy as np
from scipy import special as _sp

_MAX_CF_ITER = 200_000
_CONVERGENCE = 1e-16
# pole alarm: legitimate ratios are O(1 + n/|z|); anything wildly larger
# means z sits on a zero of J_n
_POLE_FACTOR = 1e8


class RatioPoleError(ArithmeticError):
    """The requested ratio has a pole: z is on or near a zero of J_n."""


def bessel_j_next_ratio(n: int, z: complex) -> complex:
    """Ratio J_{n+1}(z) / J_n(z) for integer n >= 0 and complex z != 0.

    Uses the continued fraction

        J_{n+1}/J_n = 1/(2(n+1)/z - 1/(2(n+2)/z - ...))

    evaluated by the modified Lentz algorithm for |z| >= max(10, 2n), and
    by downward recurrence (equivalent to summing the fraction from a far
    tail) otherwise, where Lentz convergence degrades.
    """
    if n < 0:
        raise ValueError("order must be non-negative")
    z = complex(z)
    if z == 0:
        raise RatioPoleError("J_{n+1}/J_n undefined at z = 0")

    if abs(z) < max(10.0, 2.0 * n):
        return _ratio_downward(n, z)
    return _ratio_lentz(n, z)


def _ratio_downward(n: int, z: complex) -> complex:
    # start depth covers both the order and the oscillatory region ~ |z|
    top = n + 32 + int(2.0 * abs(z))
    r = z / (2.0 * (top + 1))  # small-argument estimate of J_{top+1}/J_top
    for m in range(top, n, -1):
        den = 2.0 * m / z - r
        if den == 0:
            den = 1e-290
        r = 1.0 / den
    if not np.isfinite(r.real) or not np.isfinite(r.imag):
        raise RatioPoleError(f"ratio evaluation diverged at n={n}, z={z!r}")
    return r


def _ratio_lentz(n: int, z: complex) -> complex:
    tiny = 1e-290
    f = complex(tiny)
    c = f
    d = 0.0j
    for k in range(1, _MAX_CF_ITER + 1):
        b = 2.0 * (n + k) / z
        a = 1.0 if k == 1 else -1.0
        d = b + a * d
        if d == 0:
            d = tiny
        c = b + a / c
        if c == 0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < _CONVERGENCE:
            if not np.isfinite(f.real) or not np.isfinite(f.imag):
                raise RatioPoleError(f"continued fraction diverged at n={n}, z={z!r}")
            return f
    raise RatioPoleError(f"continued fraction did not converge at n={n}, z={z!r}")


def bessel_j_ratio(n: int, z: complex) -> complex:
    """Logarithmic derivative J'_n(z) / J_n(z) for integer n >= 0.

    Relative accuracy ~1e-12 or better away from zeros of J_n; arguments
    near a zero raise :class:`RatioPoleError` (not reached for lossy
    conductors, whose wavenumber has negative imaginary part while the
    zeros of J_n are real).
    """
    if n < 0:
        raise ValueError("order must be non-negative")
    z = complex(z)
    if z == 0:
        if n == 0:
            return 0.0 + 0.0j
        raise RatioPoleError("J'_n/J_n has a pole at z = 0 for n >= 1")
    ratio = n / z - bessel_j_next_ratio(n, z)
    if abs(ratio) > _POLE_FACTOR * (1.0 + abs(n / z)):
        raise RatioPoleError(f"z={z!r} lies near a zero of J_{n}")
    return ratio


def bessel_j_quotient(n: int, z_num, z_den: complex):
    """Overflow-safe J_n(z_num) / J_n(z_den) for Im(z) <= 0 arguments.

    Scaled Bessel evaluation keeps both factors bounded; the growth
    exp(|Im z_num| - |Im z_den|) is restored explicitly, which for
    interior points of a conductor (|z_num| <= |z_den| along the same
    ray) is a decaying factor. ``z_num`` may be an array.
    """
    z_num = np.asarray(z_num, dtype=complex)
    z_den = complex(z_den)
    den = _sp.jve(n, z_den)
    if den == 0 or not np.isfinite(den):
        raise RatioPoleError(f"J_{n} vanishes at the reference argument {z_den!r}")
    num = _sp.jve(n, z_num)
    out = num / den * np.exp(np.abs(z_num.imag) - abs(z_den.imag))
    return out if out.shape else complex(out)


def kelvin_funcs(xi: float) -> tuple[float, float, float, float]:
    """Kelvin functions (ber, bei, ber', bei') of order zero at xi >= 0.

    ber + j*bei is J_0(xi * exp(j*3*pi/4)); the primes are derivatives
    with respect to xi.
    """
    if xi < 0:
        raise ValueError("xi must be non-negative")
    if xi == 0:
        return 1.0, 0.0, 0.0, 0.0
    return (
        float(_sp.ber(xi)),
        float(_sp.bei(xi)),
        float(_sp.berp(xi)),
        float(_sp.beip(xi)),
    )
