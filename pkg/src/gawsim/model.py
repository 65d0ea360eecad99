"""Domain model for giant atoms coupled to a mirror-terminated 1D waveguide.

The waveguide occupies the positive x semi-axis and is closed by a perfect
mirror at x = 0.  Every coupling site ("connection point") is described by
its distance from the mirror expressed directly as the phase phi = k0*x a
resonant photon picks up on the way, and by a local decay rate gamma in
units of a reference rate.  Storing phases instead of (k0, x) pairs removes
a unit-consistency hazard: all coefficient formulas depend only on phase
sums and differences.

Two-atom systems with two connection points each come in three canonical
orderings along the line (nearest the mirror first):

    braided   a, b, a, b
    separate  a, a, b, b
    nested    a, b, b, a

with points at phases theta/2, 3*theta/2, 5*theta/2, 7*theta/2 and a uniform
decay rate.  ``build_canonical`` constructs these; ``build_custom`` accepts
arbitrary validated layouts (per-point rates and spacings).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from .errors import LayoutError

#: Hard cap on the number of atoms in any layout.
MAX_ATOMS = 64

#: Cap for code paths that build dense operators on the full 2**M space.
MAX_ATOMS_DENSE = 6


class Configuration(str, Enum):
    """The three canonical orderings of two two-point giant atoms."""

    BRAIDED = "braided"
    SEPARATE = "separate"
    NESTED = "nested"


_ATOM_ORDER = {
    Configuration.BRAIDED: (0, 1, 0, 1),
    Configuration.SEPARATE: (0, 0, 1, 1),
    Configuration.NESTED: (0, 1, 1, 0),
}


def canonical_atom_order(kind: Configuration) -> tuple[int, ...]:
    """Atom assignment of the four canonical points, nearest the mirror first."""
    return _ATOM_ORDER[Configuration(kind)]


@dataclass(frozen=True)
class ConnectionPoint:
    """A single atom-waveguide coupling site.

    Attributes
    ----------
    atom_id : int
        Index of the owning atom.
    phase : float
        Distance from the mirror as a phase, phi = k0*x >= 0 (radians).
    gamma : float
        Local decay rate at this point, >= 0, in units of the reference rate.
    """

    atom_id: int
    phase: float
    gamma: float

    def __post_init__(self):
        if self.phase < 0:
            raise LayoutError(f"connection point phase must be >= 0, got {self.phase}")
        if self.gamma < 0:
            raise LayoutError(f"connection point decay rate must be >= 0, got {self.gamma}")


@dataclass(frozen=True)
class GiantAtomSpec:
    """A two-level atom with one or more connection points.

    ``omega`` is the bare transition frequency.  It only enters the network
    Hamiltonian before moving to the interaction picture; all coefficient
    formulas are frame-independent, so 0.0 is a fine default.
    """

    atom_id: int
    points: tuple[ConnectionPoint, ...]
    omega: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise LayoutError(f"atom {self.atom_id} has no connection points")
        for p in self.points:
            if p.atom_id != self.atom_id:
                raise LayoutError(
                    f"connection point with atom_id={p.atom_id} assigned to atom {self.atom_id}"
                )


@dataclass(frozen=True)
class WaveguideLayout:
    """A validated arrangement of giant atoms along the semi-infinite waveguide.

    Atoms are indexed 0..M-1 in the order given; all connection-point phases
    must be pairwise distinct (coincident points are rejected, see
    ``build_canonical`` for the theta = 0 limit).
    """

    atoms: tuple[GiantAtomSpec, ...]
    all_points: tuple[ConnectionPoint, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if not self.atoms:
            raise LayoutError("layout needs at least one atom")
        if len(self.atoms) > MAX_ATOMS:
            raise LayoutError(f"layout has {len(self.atoms)} atoms, cap is {MAX_ATOMS}")
        for i, atom in enumerate(self.atoms):
            if atom.atom_id != i:
                raise LayoutError(
                    f"atoms must be indexed 0..M-1 in order; position {i} has id {atom.atom_id}"
                )
        pts = sorted((p for atom in self.atoms for p in atom.points), key=lambda p: p.phase)
        for a, b in zip(pts, pts[1:]):
            if b.phase <= a.phase:
                raise LayoutError(
                    f"coincident connection points at phase {a.phase} "
                    f"(atoms {a.atom_id} and {b.atom_id})"
                )
        object.__setattr__(self, "all_points", tuple(pts))

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    @property
    def omegas(self) -> tuple[float, ...]:
        return tuple(atom.omega for atom in self.atoms)


@dataclass(frozen=True)
class CanonicalConfig:
    """One-parameter family for the three canonical two-atom setups.

    ``theta`` is the phase shift between adjacent connection points; the
    nearest point sits at theta/2 from the mirror.  ``gamma`` is the uniform
    per-point decay rate.
    """

    kind: Configuration
    gamma: float = 1.0
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Configuration(self.kind))
        if self.gamma <= 0:
            raise LayoutError(f"gamma must be > 0, got {self.gamma}")
        if self.theta < 0:
            raise LayoutError(f"theta must be >= 0, got {self.theta}")


def build_canonical(config: CanonicalConfig) -> WaveguideLayout:
    """Expand a canonical configuration into an explicit two-atom layout.

    Points sit at phases theta/2, 3*theta/2, 5*theta/2, 7*theta/2 with the
    atom ordering fixed by ``config.kind``.  theta = 0 would collapse all
    four points onto the mirror and is rejected; the theta -> 0 physics is
    available through the closed-form coefficient functions, which remain
    well defined there.
    """
    order = _ATOM_ORDER[config.kind]
    phases = [(2 * i + 1) * config.theta / 2 for i in range(4)]
    points: dict[int, list[ConnectionPoint]] = {0: [], 1: []}
    for atom_id, phase in zip(order, phases):
        points[atom_id].append(ConnectionPoint(atom_id, phase, config.gamma))
    atoms = tuple(GiantAtomSpec(j, tuple(points[j])) for j in (0, 1))
    return WaveguideLayout(atoms)


def build_custom(atoms) -> WaveguideLayout:
    """Validate and assemble an arbitrary layout from atom specs."""
    return WaveguideLayout(tuple(atoms))


def layout_from_json(text: str) -> WaveguideLayout:
    """Parse a layout from its JSON representation.

    Schema::

        {"atoms": [{"id": 0, "omega": 1.0,
                    "points": [{"phi": 0.5, "gamma": 1.0}, ...]}, ...]}

    Phases are in radians, rates in units of the reference rate; ``omega``
    is optional and defaults to 0.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LayoutError(f"invalid layout JSON: {exc}") from exc
    if not isinstance(doc, dict) or "atoms" not in doc:
        raise LayoutError('layout JSON must be an object with an "atoms" array')
    atoms = []
    for entry in doc["atoms"]:
        try:
            atom_id = int(entry["id"])
            omega = float(entry.get("omega", 0.0))
            pts = tuple(
                ConnectionPoint(atom_id, float(p["phi"]), float(p["gamma"]))
                for p in entry["points"]
            )
        except (KeyError, TypeError) as exc:
            raise LayoutError(f"malformed atom entry in layout JSON: {entry!r}") from exc
        atoms.append(GiantAtomSpec(atom_id, pts, omega))
    return build_custom(atoms)


def layout_to_json(layout: WaveguideLayout) -> str:
    """Serialize a layout to the JSON schema accepted by ``layout_from_json``."""
    doc = {
        "atoms": [
            {
                "id": atom.atom_id,
                "omega": atom.omega,
                "points": [{"phi": p.phase, "gamma": p.gamma} for p in atom.points],
            }
            for atom in layout.atoms
        ]
    }
    return json.dumps(doc)
