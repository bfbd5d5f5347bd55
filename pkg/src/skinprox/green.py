"""Frequency-independent interaction matrix of the boundary integral equation.

The logarithmic free-space kernel, tested against Fourier harmonics on
every pair of circular contours, has closed-form moments. Assembly is
therefore purely analytic: no numerical quadrature appears anywhere in
the production path, which is what makes frequency sweeps cheap (the
matrix is built once and reused for every frequency sample).

Entry conventions (block (p, q), row harmonic n', column harmonic n):

* self block: diagonal ln(a_p)/(2*pi) at n' = n = 0, -1/(4*pi*|n|) at
  n' = n != 0, zero elsewhere;
* mutual block, n = 0 column: ln(d_pq)/(2*pi) at n' = 0 and a closed
  power formula otherwise;
* mutual block, n > 0: zero for n' >= 1 (no poles inside the contour
  integral), a binomial formula for n' <= 0;
* mutual block, n < 0: complex conjugate of the (-n', -n) entry.

Lengths inside logarithms are in meters; the additive gauge constant this
fixes is common to all blocks and cancels in loop-reduced impedances.
"""

from __future__ import annotations

import hashlib
import os
import struct
from dataclasses import dataclass
from math import lgamma, log, pi

import numpy as np

from .geometry import Conductor, CrossSection, HarmonicLayout, geometry_hash

#: Instrumentation: number of times assemble_green has run in this process.
ASSEMBLY_COUNT = 0


@dataclass(frozen=True)
class GreenMatrix:
    """Dense interaction matrix plus the layout it is indexed by."""

    data: np.ndarray
    layout: HarmonicLayout
    geometry_hash: str


def green_self_block(radius: float, order: int) -> np.ndarray:
    """Self block of a conductor with the given radius and truncation order."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    size = 2 * order + 1
    block = np.zeros((size, size), dtype=complex)
    block[order, order] = log(radius) / (2.0 * pi)
    for n in range(1, order + 1):
        block[order + n, order + n] = -1.0 / (4.0 * pi * n)
        block[order - n, order - n] = -1.0 / (4.0 * pi * n)
    return block


def green_mutual_entry(p: Conductor, q: Conductor, n_row: int, n_col: int) -> complex:
    """Entry (n_row, n_col) of the mutual block of two distinct conductors.

    Scalar reference implementation of the closed forms; the vectorized
    assembly below must agree with it entry by entry.
    """
    if n_col < 0 or (n_col == 0 and n_row < 0):
        return complex(np.conj(green_mutual_entry(p, q, -n_row, -n_col)))
    dx = p.center_x - q.center_x
    dy = p.center_y - q.center_y
    w = dx - 1j * dy
    d = abs(w)
    if d == 0:
        raise ValueError("mutual entry requires distinct conductor centers")
    u = w / d
    if n_col == 0:
        if n_row == 0:
            return complex(log(d) / (2.0 * pi))
        return -(1.0 / (4.0 * pi * n_row)) * (p.radius / d) ** n_row * (-u) ** n_row
    if n_row >= 1:
        return 0.0 + 0.0j
    m = -n_row
    log_mag = (
        n_col * log(q.radius / d)
        + m * log(p.radius / d)
        + lgamma(n_col + m)
        - lgamma(m + 1)
        - lgamma(n_col)
    )
    sign = -1.0 if m % 2 else 1.0
    return -(sign / (4.0 * pi * n_col)) * np.exp(log_mag) * np.conj(u) ** (n_col + m)


def assemble_green(cs: CrossSection, layout: HarmonicLayout) -> GreenMatrix:
    """Assemble the dense N x N matrix for a validated cross section.

    Only depends on geometry, never on frequency; cache and reuse across
    sweeps (see :data:`ASSEMBLY_COUNT` for reuse instrumentation).
    """
    global ASSEMBLY_COUNT
    if len(layout.orders) != len(cs):
        raise ValueError("layout does not match the cross section")
    P = len(cs)
    data = np.zeros((layout.size, layout.size), dtype=complex)
    z0 = np.array(layout.zero_indices())
    orders = np.array(layout.orders)
    max_order = int(orders.max()) if P else 0

    for p, c in enumerate(cs):
        blk = layout.block(p)
        data[blk, blk] = green_self_block(c.radius, layout.orders[p])

    if P > 1:
        pi_idx, qi_idx = np.meshgrid(np.arange(P), np.arange(P), indexing="ij")
        off = pi_idx != qi_idx
        pi_idx, qi_idx = pi_idx[off], qi_idx[off]

        x = np.array([c.center_x for c in cs])
        y = np.array([c.center_y for c in cs])
        a = np.array([c.radius for c in cs])
        w = (x[pi_idx] - x[qi_idx]) - 1j * (y[pi_idx] - y[qi_idx])
        d = np.abs(w)
        u = w / d
        rows0 = z0[pi_idx]
        cols0 = z0[qi_idx]
        ord_p = orders[pi_idx]
        ord_q = orders[qi_idx]

        # radius/distance ratios as cumulative powers (all < 1 for separated pairs)
        ratio_p = np.ones((max_order + 1, len(d)))
        ratio_q = np.ones((max_order + 1, len(d)))
        for k in range(1, max_order + 1):
            ratio_p[k] = ratio_p[k - 1] * (a[pi_idx] / d)
            ratio_q[k] = ratio_q[k - 1] * (a[qi_idx] / d)
        neg_u_pow = np.ones((max_order + 1, len(d)), dtype=complex)
        conj_u_pow = np.ones((2 * max_order + 1, len(d)), dtype=complex)
        for k in range(1, max_order + 1):
            neg_u_pow[k] = neg_u_pow[k - 1] * (-u)
        cu = np.conj(u)
        for k in range(1, 2 * max_order + 1):
            conj_u_pow[k] = conj_u_pow[k - 1] * cu

        # n = 0 column
        data[rows0, cols0] = np.log(d) / (2.0 * pi)
        for n_row in range(1, max_order + 1):
            sel = ord_p >= n_row
            val = -(1.0 / (4.0 * pi * n_row)) * ratio_p[n_row][sel] * neg_u_pow[n_row][sel]
            r, ccol = rows0[sel], cols0[sel]
            data[r + n_row, ccol] = val
            data[r - n_row, ccol] = np.conj(val)

        # n > 0 columns, rows n' <= 0, and their conjugate mirrors (n < 0)
        for n_col in range(1, max_order + 1):
            for m in range(0, max_order + 1):
                sel = (ord_q >= n_col) & (ord_p >= m)
                if not sel.any():
                    continue
                binom = np.exp(lgamma(n_col + m) - lgamma(m + 1) - lgamma(n_col))
                sign = -1.0 if m % 2 else 1.0
                val = (
                    -(sign / (4.0 * pi * n_col))
                    * ratio_q[n_col][sel]
                    * ratio_p[m][sel]
                    * conj_u_pow[n_col + m][sel]
                )
                if binom != 1.0:
                    val = val * binom
                r, ccol = rows0[sel], cols0[sel]
                data[r - m, ccol + n_col] = val
                data[r + m, ccol - n_col] = np.conj(val)

    ASSEMBLY_COUNT += 1
    return GreenMatrix(data=data, layout=layout, geometry_hash=geometry_hash(cs))


# --------------------------------------------------------------------------
# binary cache: header {magic, version, N, key} + row-major little-endian
# complex doubles

_MAGIC = b"RWGC"
_VERSION = 1


def _cache_key(cs: CrossSection, layout: HarmonicLayout) -> bytes:
    h = hashlib.sha256()
    h.update(geometry_hash(cs).encode())
    h.update(repr(layout.orders).encode())
    return h.digest()


def save_green_cache(path, green: GreenMatrix, cs: CrossSection) -> None:
    """Write the matrix to ``path`` atomically (temp file + rename)."""
    key = _cache_key(cs, green.layout)
    payload = np.ascontiguousarray(green.data, dtype=np.complex128).astype("<c16", copy=False)
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<IQ", _VERSION, green.data.shape[0]))
        fh.write(key)
        fh.write(payload.tobytes())
    os.replace(tmp, path)


def load_green_cache(path, cs: CrossSection, layout: HarmonicLayout):
    """Load a cached matrix; returns None when the file does not match."""
    try:
        with open(path, "rb") as fh:
            if fh.read(4) != _MAGIC:
                return None
            version, n = struct.unpack("<IQ", fh.read(12))
            if version != _VERSION or n != layout.size:
                return None
            if fh.read(32) != _cache_key(cs, layout):
                return None
            raw = fh.read(16 * n * n)
            if len(raw) != 16 * n * n:
                return None
    except OSError:
        return None
    data = np.frombuffer(raw, dtype="<c16").reshape(n, n).astype(complex)
    return GreenMatrix(data=data, layout=layout, geometry_hash=geometry_hash(cs))
