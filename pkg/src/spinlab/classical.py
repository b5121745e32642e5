"""Classical limit of the LMG model on the unit sphere.

With ``X = Jx/j`` etc. and energy per spin pair
``eps(X, Y, Z) = -(gx X^2 + gy Y^2)/2 - h Z`` the motion is

    dX/dt = Y (h - gy Z),  dY/dt = X (gx Z - h),  dZ/dt = X Y (gy - gx).

Fixed points, their linear stability, and the resulting four-zone
classification of parameter space are computed here. Unstable fixed
points mark the energies of excited-state quantum phase transitions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BoundaryError, ConsistencyError, DomainError
from .lmg import LmgParams

SPHERE_TOL = 1e-12
BOUNDARY_TOL = 1e-12
STABILITY_TOL = 1e-9


@dataclass(frozen=True)
class SpherePoint:
    x: float
    y: float
    z: float

    def __post_init__(self):
        r2 = self.x**2 + self.y**2 + self.z**2
        if abs(r2 - 1.0) > SPHERE_TOL:
            raise DomainError(f"point is off the unit sphere (|r|^2 = {r2!r})")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class FixedPoint:
    label: str
    point: Optional[SpherePoint]
    h0: float
    exists: bool
    stable: bool


@dataclass(frozen=True)
class ZoneReport:
    zone: str
    sub_case: Optional[str]
    fixed_points: list[FixedPoint] = field(default_factory=list)
    esqpt_energies: list[float] = field(default_factory=list)

    def by_label(self) -> dict[str, FixedPoint]:
        return {fp.label: fp for fp in self.fixed_points}


def flow(point: SpherePoint, params: LmgParams) -> np.ndarray:
    """Velocity (dX/dt, dY/dt, dZ/dt) at a point of the sphere."""
    x, y, z = point.x, point.y, point.z
    gx, gy, h = params.as_tuple()
    return np.array([y * (h - gy * z), x * (gx * z - h), x * y * (gy - gx)])


def classical_energy(point: SpherePoint, params: LmgParams) -> float:
    gx, gy, h = params.as_tuple()
    return -(gx * point.x**2 + gy * point.y**2) / 2 - h * point.z


def energy_gradient(point: SpherePoint, params: LmgParams) -> np.ndarray:
    gx, gy, h = params.as_tuple()
    return np.array([-gx * point.x, -gy * point.y, -h])


def flow_jacobian(point: SpherePoint, params: LmgParams) -> np.ndarray:
    x, y, z = point.x, point.y, point.z
    gx, gy, h = params.as_tuple()
    return np.array([
        [0.0, h - gy * z, -gy * y],
        [gx * z - h, 0.0, gx * x],
        [y * (gy - gx), x * (gy - gx), 0.0],
    ])


def tangent_basis(point: SpherePoint) -> np.ndarray:
    """Two orthonormal columns spanning the tangent plane at ``point``."""
    n = point.as_array()
    seed = np.eye(3)[np.argmin(np.abs(n))]
    e1 = np.cross(n, seed)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    return np.column_stack([e1, e2])


def linearization_eigenvalues(point: SpherePoint, params: LmgParams) -> np.ndarray:
    """Eigenvalues of the flow Jacobian restricted to the tangent plane.

    The flow is orthogonal to the position everywhere, so at a fixed point
    the Jacobian maps into the tangent plane and this restriction is exact.
    """
    basis = tangent_basis(point)
    return np.linalg.eigvals(basis.T @ flow_jacobian(point, params) @ basis)


def is_stable(point: SpherePoint, params: LmgParams) -> bool:
    """Elliptic (purely imaginary spectrum) fixed points count as stable."""
    return bool(np.max(np.abs(linearization_eigenvalues(point, params).real)) <= STABILITY_TOL)


def _pair(label: str, gamma: float, h: float, axis: int, params: LmgParams) -> list[FixedPoint]:
    h0 = -(h**2 + gamma**2) / (2 * gamma) if gamma != 0 else float("nan")
    if abs(h) >= abs(gamma):
        return [FixedPoint(f"{label}{s}", None, h0, False, False) for s in "+-"]
    z = h / gamma
    r = np.sqrt(1 - z * z)
    out = []
    for sign, s in ((1, "+"), (-1, "-")):
        coords = [0.0, 0.0, z]
        coords[axis] = sign * r
        pt = SpherePoint(*coords)
        out.append(FixedPoint(f"{label}{s}", pt, h0, True, is_stable(pt, params)))
    return out


def fixed_points(params: LmgParams) -> list[FixedPoint]:
    """The six candidate fixed points FP_XZ+-, FP_YZ+-, FP_Z+-.

    Raises
    ------
    BoundaryError
        When ``|h|`` equals ``|gx|`` or ``|gy|``, where fixed points merge.
    """
    gx, gy, h = params.as_tuple()
    if gx == 0 and gy == 0 and h == 0:
        raise DomainError("all-zero parameters have no isolated fixed points")
    for g in (gx, gy):
        if abs(abs(h) - abs(g)) <= BOUNDARY_TOL:
            raise BoundaryError(f"|h| = |gamma| = {abs(g)} is a bifurcation point")
    points = _pair("FP_XZ", gx, h, 0, params) + _pair("FP_YZ", gy, h, 1, params)
    for z, s in ((1.0, "+"), (-1.0, "-")):
        pt = SpherePoint(0.0, 0.0, z)
        points.append(FixedPoint(f"FP_Z{s}", pt, -h * z, True, is_stable(pt, params)))
    return points


def _zone_of(gx: float, gy: float, h: float) -> tuple[str, Optional[str]]:
    ax, ay = abs(gx), abs(gy)
    if ax < h and ay < h:
        return "I", None
    if ax < h < ay:
        return "II", "a"
    if ay < h < ax:
        return "II", "b"
    if h < -gy and h < gx:
        return "III", "a"
    if h < -gx and h < gy:
        return "III", "b"
    if h < gx and h < gy:
        return "IV", "a"
    return "IV", "b"


def _check_stability(zone: str, sub: Optional[str], fps: dict[str, FixedPoint]) -> None:
    z_stable = (fps["FP_Z+"].stable, fps["FP_Z-"].stable)
    xz = [fps["FP_XZ+"], fps["FP_XZ-"]]
    yz = [fps["FP_YZ+"], fps["FP_YZ-"]]

    def pair_state(pair):
        if not all(f.exists for f in pair):
            return "absent"
        flags = {f.stable for f in pair}
        if len(flags) != 1:
            return "mixed"
        return "stable" if flags.pop() else "unstable"

    xs, ys = pair_state(xz), pair_state(yz)
    if zone == "I":
        ok = all(z_stable) and xs == ys == "absent"
    elif zone == "II":
        stable_pair, absent_pair = (ys, xs) if sub == "a" else (xs, ys)
        ok = sorted(z_stable) == [False, True] and stable_pair == "stable" and absent_pair == "absent"
    elif zone == "III":
        ok = not any(z_stable) and xs == ys == "stable"
    else:
        ok = all(z_stable) and sorted([xs, ys]) == ["stable", "unstable"]
    if not ok:
        raise ConsistencyError(
            f"zone {zone}{sub or ''}: stability pattern Z={z_stable}, XZ={xs}, YZ={ys} "
            "contradicts the zone structure")


def classify_zone(params: LmgParams) -> ZoneReport:
    """Zone I-IV (with sub-case) of the classical LMG model.

    Negative ``h`` is mapped to ``|h|``, which leaves the energy landscape
    unchanged under the rotation (X, Y, Z) -> (X, -Y, -Z).
    """
    gx, gy, h = params.as_tuple()
    if h == 0:
        raise DomainError("zone classification needs h != 0")
    h = abs(h)
    for g in (gx, gy):
        if abs(abs(g) - h) <= BOUNDARY_TOL:
            raise BoundaryError(f"|gamma| = h = {h} lies on a zone boundary")
    zone, sub = _zone_of(gx, gy, h)
    if zone == "IV" and abs(gx - gy) <= BOUNDARY_TOL:
        raise BoundaryError("gx = gy in zone IV: fixed points form a degenerate ring")
    canonical = LmgParams(gx, gy, h)
    fps = fixed_points(canonical)
    _check_stability(zone, sub, {fp.label: fp for fp in fps})
    energies: list[float] = []
    for fp in fps:
        if fp.exists and not fp.stable and all(abs(fp.h0 - e) > 1e-12 for e in energies):
            energies.append(float(fp.h0))
    return ZoneReport(zone, sub, fps, sorted(energies))
