"""Cross-section data model for systems of parallel round conductors.

All lengths are SI meters internally; ``load_cross_section`` accepts files
written in millimeters. A cross section is immutable after construction and
safe to share between worker threads.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass
from importlib import resources
from math import cos, hypot, pi, sin, sqrt

MU0 = 4e-7 * pi
EPS0 = 8.8541878128e-12

ROLES = ("phase", "screen", "armor", "other")
CONNECTIONS = ("kept", "grounded")


class CrossSectionError(ValueError):
    """Raised for malformed cross-section files or dictionaries."""


@dataclass(frozen=True)
class Conductor:
    """One solid round conductor.

    Coordinates and radius are in meters, conductivity in S/m. Magnetic
    conductors are described by ``rel_permeability`` > 1. ``connection``
    marks whether the conductor is kept as an explicit terminal or is
    continuously grounded (eliminated in reduced impedance matrices).
    """

    id: int
    center_x: float
    center_y: float
    radius: float
    conductivity: float
    rel_permeability: float = 1.0
    rel_permittivity: float = 1.0
    role: str = "other"
    connection: str = "kept"

    @property
    def mu(self) -> float:
        """Absolute permeability [H/m]."""
        return self.rel_permeability * MU0

    @property
    def permittivity(self) -> float:
        """Absolute permittivity [F/m]."""
        return self.rel_permittivity * EPS0


@dataclass(frozen=True)
class CrossSection:
    """Ordered collection of conductors in a homogeneous outer medium.

    ``outer_permittivity`` is absolute [F/m]; the outer permeability is
    fixed at mu0 (free space).
    """

    conductors: tuple[Conductor, ...]
    outer_permittivity: float = EPS0

    def __post_init__(self):
        object.__setattr__(self, "conductors", tuple(self.conductors))

    def __len__(self) -> int:
        return len(self.conductors)

    def __iter__(self):
        return iter(self.conductors)

    def __getitem__(self, i) -> Conductor:
        return self.conductors[i]

    def index_of(self, conductor_id: int) -> int:
        for i, c in enumerate(self.conductors):
            if c.id == conductor_id:
                return i
        raise KeyError(f"no conductor with id {conductor_id}")

    @property
    def kept_indices(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.conductors) if c.connection == "kept")

    @property
    def grounded_indices(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.conductors) if c.connection == "grounded")


def center_distance(cs: CrossSection, p: int, q: int) -> float:
    """Euclidean distance between the centers of conductors ``p`` and ``q``."""
    if p == q:
        raise ValueError("center_distance requires two distinct conductors")
    if not (0 <= p < len(cs)) or not (0 <= q < len(cs)):
        raise IndexError("conductor index out of range")
    cp, cq = cs[p], cs[q]
    return hypot(cp.center_x - cq.center_x, cp.center_y - cq.center_y)


def validate(cs: CrossSection, gap_tol: float = 0.0) -> list[str]:
    """Check all cross-section invariants and return a list of violations.

    An empty list means the cross section is usable. Tangent conductor
    pairs (distance equal to the sum of radii, within floating-point
    slack) are allowed but reported through ``warnings`` since layered
    wire constructions are often geometrically tangent.
    """
    violations: list[str] = []
    if len(cs) < 1:
        violations.append("cross section must contain at least one conductor")

    seen: dict[int, int] = {}
    for c in cs:
        if c.id in seen:
            violations.append(f"conductor id {c.id} is not unique")
        seen[c.id] = c.id
        if not c.radius > 0:
            violations.append(f"conductor {c.id}: radius > 0 violated (radius={c.radius})")
        if c.conductivity < 0:
            violations.append(f"conductor {c.id}: conductivity >= 0 violated")
        if not c.rel_permeability > 0:
            violations.append(f"conductor {c.id}: rel_permeability > 0 violated")
        if not (c.rel_permittivity >= 1.0 or c.rel_permittivity == 0.0):
            violations.append(
                f"conductor {c.id}: rel_permittivity must be >= 1 (or 0 for vacuum-like)"
            )
        if c.role not in ROLES:
            violations.append(f"conductor {c.id}: unknown role {c.role!r}")
        if c.connection not in CONNECTIONS:
            violations.append(f"conductor {c.id}: unknown connection {c.connection!r}")

    for p in range(len(cs)):
        for q in range(p + 1, len(cs)):
            if cs[p].radius <= 0 or cs[q].radius <= 0:
                continue
            d = center_distance(cs, p, q)
            s = cs[p].radius + cs[q].radius
            slack = 1e-12 * s
            if d + slack < s + gap_tol:
                violations.append(
                    f"conductors {cs[p].id} and {cs[q].id} overlap: "
                    f"distance {d:.6g} < {s + gap_tol:.6g}"
                )
            elif gap_tol == 0.0 and d <= s + slack:
                warnings.warn(
                    f"conductors {cs[p].id} and {cs[q].id} are tangent",
                    stacklevel=2,
                )
    return violations


# --------------------------------------------------------------------------
# harmonic bookkeeping


@dataclass(frozen=True)
class HarmonicLayout:
    """Mapping (conductor p, harmonic n) -> global coefficient index.

    Conductor p contributes the 2*N_p + 1 harmonics n = -N_p .. +N_p,
    stored contiguously in conductor order. The total vector length is
    ``size`` = sum_p (2*N_p + 1).
    """

    orders: tuple[int, ...]
    offsets: tuple[int, ...]
    size: int

    @classmethod
    def from_orders(cls, orders) -> "HarmonicLayout":
        orders = tuple(int(n) for n in orders)
        if any(n < 0 for n in orders):
            raise ValueError("truncation orders must be non-negative")
        offsets = []
        pos = 0
        for n in orders:
            offsets.append(pos)
            pos += 2 * n + 1
        return cls(orders=orders, offsets=tuple(offsets), size=pos)

    @classmethod
    def uniform(cls, count: int, order: int) -> "HarmonicLayout":
        return cls.from_orders([order] * count)

    def index(self, p: int, n: int) -> int:
        if abs(n) > self.orders[p]:
            raise IndexError(f"harmonic {n} outside order {self.orders[p]} of conductor {p}")
        return self.offsets[p] + n + self.orders[p]

    def conductor_harmonic(self, idx: int) -> tuple[int, int]:
        """Inverse of :meth:`index`."""
        if not 0 <= idx < self.size:
            raise IndexError("coefficient index out of range")
        # offsets are sorted; linear scan is fine at the sizes involved
        p = 0
        for cand, off in enumerate(self.offsets):
            if off <= idx:
                p = cand
            else:
                break
        return p, idx - self.offsets[p] - self.orders[p]

    def zero_index(self, p: int) -> int:
        """Global index of the n = 0 coefficient of conductor p."""
        return self.offsets[p] + self.orders[p]

    def zero_indices(self) -> list[int]:
        return [self.zero_index(p) for p in range(len(self.orders))]

    def block(self, p: int) -> slice:
        return slice(self.offsets[p], self.offsets[p] + 2 * self.orders[p] + 1)


# --------------------------------------------------------------------------
# bundled benchmark geometries


def three_phase_armored_cable() -> CrossSection:
    """Three-phase armored cable benchmark (293 round subconductors).

    Three copper cores (r = 10 mm, sigma = 58e6 S/m) in touching trefoil,
    each surrounded by a wire screen of 50 copper wires (r = 0.5 mm) on a
    ring of radius 14.5 mm, enclosed by a steel armor (sigma = 1e7 S/m,
    mu_r = 100) of two staggered layers of 70 wires (d = 3 mm) whose outer
    layer touches the armor outer diameter of 88.26 mm.

    Cores are kept phase terminals; screen and armor wires are grounded.
    """
    conductors: list[Conductor] = []
    cid = 1

    # single-core cable outer radius: core 10 + insulation 4 + wire screen 1 + jacket 2 [mm]
    cable_outer = 0.017
    trefoil_ring = 2.0 * cable_outer / sqrt(3.0)
    screen_ring = 0.0145  # core radius + insulation + screen wire radius

    cable_centers = []
    for i in range(3):
        ang = 2.0 * pi * i / 3.0
        cx, cy = trefoil_ring * cos(ang), trefoil_ring * sin(ang)
        cable_centers.append((cx, cy))
        conductors.append(
            Conductor(
                id=cid, center_x=cx, center_y=cy, radius=0.010,
                conductivity=58e6, role="phase", connection="kept",
            )
        )
        cid += 1

    for cx, cy in cable_centers:
        for k in range(50):
            ang = 2.0 * pi * k / 50.0
            conductors.append(
                Conductor(
                    id=cid,
                    center_x=cx + screen_ring * cos(ang),
                    center_y=cy + screen_ring * sin(ang),
                    radius=0.0005,
                    conductivity=58e6,
                    role="screen",
                    connection="grounded",
                )
            )
            cid += 1

    armor_wire_radius = 0.0015
    outer_ring = 0.08826 / 2.0 - armor_wire_radius
    for layer in range(2):
        ring = outer_ring - layer * 2.0 * armor_wire_radius
        # half-pitch stagger between layers keeps the layers clear of each other
        phase = layer * pi / 70.0
        for k in range(70):
            ang = 2.0 * pi * k / 70.0 + phase
            conductors.append(
                Conductor(
                    id=cid,
                    center_x=ring * cos(ang),
                    center_y=ring * sin(ang),
                    radius=armor_wire_radius,
                    conductivity=1e7,
                    rel_permeability=100.0,
                    role="armor",
                    connection="grounded",
                )
            )
            cid += 1

    return CrossSection(conductors=tuple(conductors))


# --------------------------------------------------------------------------
# JSON round-trip and hashing


def cross_section_from_dict(doc: dict) -> CrossSection:
    """Build a cross section from the documented JSON structure."""
    if not isinstance(doc, dict):
        raise CrossSectionError("cross-section document must be a JSON object")
    units = doc.get("units", "m")
    if units not in ("m", "mm"):
        raise CrossSectionError(f"units must be 'm' or 'mm', got {units!r}")
    scale = 1e-3 if units == "mm" else 1.0
    eps_out = float(doc.get("outer_rel_permittivity", 1.0)) * EPS0
    raw = doc.get("conductors")
    if not isinstance(raw, list) or not raw:
        raise CrossSectionError("field 'conductors' must be a non-empty list")
    conductors = []
    for i, item in enumerate(raw):
        try:
            conductors.append(
                Conductor(
                    id=int(item["id"]),
                    center_x=float(item["x"]) * scale,
                    center_y=float(item["y"]) * scale,
                    radius=float(item["radius"]) * scale,
                    conductivity=float(item["sigma"]),
                    rel_permeability=float(item.get("mu_r", 1.0)),
                    rel_permittivity=float(item.get("eps_r", 1.0)),
                    role=item.get("role", "other"),
                    connection=item.get("connection", "kept"),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CrossSectionError(f"conductors[{i}]: {exc}") from exc
    return CrossSection(conductors=tuple(conductors), outer_permittivity=eps_out)


def cross_section_to_dict(cs: CrossSection, units: str = "m") -> dict:
    scale = 1e3 if units == "mm" else 1.0
    return {
        "units": units,
        "outer_rel_permittivity": cs.outer_permittivity / EPS0,
        "conductors": [
            {
                "id": c.id,
                "x": c.center_x * scale,
                "y": c.center_y * scale,
                "radius": c.radius * scale,
                "sigma": c.conductivity,
                "mu_r": c.rel_permeability,
                "eps_r": c.rel_permittivity,
                "role": c.role,
                "connection": c.connection,
            }
            for c in cs
        ],
    }


def load_cross_section(path) -> CrossSection:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CrossSectionError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return cross_section_from_dict(doc)


def save_cross_section(cs: CrossSection, path, units: str = "m") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(cross_section_to_dict(cs, units=units), fh, indent=2, sort_keys=True)
        fh.write("\n")


def bundled_cross_section(name: str) -> CrossSection:
    """Load one of the cross sections shipped with the package.

    Available names: ``two_wire_d100``, ``two_wire_d25``,
    ``three_phase_armored``.
    """
    ref = resources.files("skinprox.data").joinpath(f"{name}.json")
    with resources.as_file(ref) as path:
        return load_cross_section(path)


def geometry_hash(cs: CrossSection) -> str:
    """Stable content hash of geometry and material data (hex digest)."""
    doc = cross_section_to_dict(cs, units="m")
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()
