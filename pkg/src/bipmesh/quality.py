"""Shape quality of triangles and tetrahedra.

Metrics
-------
h      diameter (longest edge)
rho    diameter of the inscribed ball, ``2 * inradius``
zeta   regularity ``h / rho`` (lower is better)
theta  radius ratio ``3 * inradius / circumradius`` (tetrahedra, in (0, 1])
eta    mean ratio ``12 * (3 * volume)**(2/3) / sum(edge**2)`` (tetrahedra, in (0, 1])

The checks in this module evaluate known inequalities between these metrics
for a single tetrahedron and for the 24 children of its bipartite gridding.
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import geom
from .refine import bipartite_grid_tet

#: Mean-ratio loss factor of one bipartite gridding: ``eta_K <= C * eta_L``.
MEAN_RATIO_LOSS = 36.0 * 9.0 ** (1.0 / 3.0)
#: ``zeta_L <= REGULARITY_LOSS / eta_K**3`` for every child ``L`` of ``K``.
REGULARITY_LOSS = 2.0**6 * 3.0**9
#: Radius-ratio upper bound coefficient: ``theta <= c * eta**(3/4)``.
RADIUS_RATIO_UPPER = 2.0 / 6.0**0.25

# Documented only: no executable check, the local refinement they belong to
# is not implemented here.
QLRS_MEAN_RATIO_FACTOR = 4.0 ** (1.0 / 3.0) / 11.0
QLRS_COMBINED_CONSTANT = 11.0 * 2.0**6 * 3.0**9 / 4.0 ** (1.0 / 3.0)

GLOSSARY = {
    "mean_ratio_loss": MEAN_RATIO_LOSS,
    "regularity_loss": REGULARITY_LOSS,
    "radius_ratio_upper": RADIUS_RATIO_UPPER,
    "qlrs_mean_ratio_factor": QLRS_MEAN_RATIO_FACTOR,
    "qlrs_combined_constant": QLRS_COMBINED_CONSTANT,
}

ZETA_BINS = (1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 25.0, math.inf)
ETA_BINS = tuple(round(0.1 * i, 1) for i in range(11))

BOUND_TOL = 1e-9


@dataclass(frozen=True)
class TriQuality:
    h: float
    rho: float
    zeta: float


@dataclass(frozen=True)
class TetQuality:
    h: float
    rho: float
    zeta: float
    theta: float
    eta: float


def triangle_quality(tri):
    m = geom.triangle_measures(tri)
    rho = 2.0 * m.inradius
    return TriQuality(h=m.diameter, rho=rho, zeta=m.diameter / rho)


def mean_ratio(volume, edge_sq_sum):
    return 12.0 * (3.0 * volume) ** (2.0 / 3.0) / edge_sq_sum


def tet_quality(tet):
    """All five shape metrics of a non-degenerate tetrahedron."""
    m = geom.tet_measures(tet)
    rho = 2.0 * m.inradius
    return TetQuality(
        h=m.diameter,
        rho=rho,
        zeta=m.diameter / rho,
        theta=3.0 * m.inradius / m.circumradius,
        eta=mean_ratio(m.volume, m.edge_sq_sum),
    )


def histogram(values, edges):
    """Counts per ``[edges[i], edges[i+1])``, last bin closed on the right."""
    values = np.asarray(values, dtype=float)
    edges = np.asarray(edges, dtype=float)
    idx = np.searchsorted(edges, values, side="right") - 1
    idx[values == edges[-1]] = len(edges) - 2
    inside = (idx >= 0) & (idx < len(edges) - 1)
    return np.bincount(idx[inside], minlength=len(edges) - 1).tolist()


@dataclass
class QualityReport:
    """Per-element metrics with mesh-level aggregates.

    ``h`` and ``zeta`` are maxima over elements; ``eta_min`` and
    ``theta_min`` are minima (tetrahedral meshes only).
    """

    dim: int
    elements: list
    h: float
    zeta: float
    zeta_histogram: list
    eta_min: float = None
    theta_min: float = None
    eta_histogram: list = None

    def to_dict(self, per_element=False):
        out = {
            "dim": self.dim,
            "elements": len(self.elements),
            "h": self.h,
            "zeta": self.zeta,
        }
        if self.dim == 3:
            out["eta_min"] = self.eta_min
            out["theta_min"] = self.theta_min
        out["histograms"] = {"zeta": {"edges": _json_edges(ZETA_BINS), "counts": self.zeta_histogram}}
        if self.dim == 3:
            out["histograms"]["eta"] = {"edges": list(ETA_BINS), "counts": self.eta_histogram}
        if per_element:
            out["per_element"] = [asdict(q) for q in self.elements]
        return out


def _json_edges(edges):
    return [e if math.isfinite(e) else "inf" for e in edges]


def mesh_quality(mesh):
    """Quality of every element and the mesh size/regularity aggregates."""
    if mesh.dim == 2:
        elements = [triangle_quality(t) for t in mesh.elements()]
    else:
        elements = [tet_quality(t) for t in mesh.elements()]
    zetas = [q.zeta for q in elements]
    report = QualityReport(
        dim=mesh.dim,
        elements=elements,
        h=max((q.h for q in elements), default=0.0),
        zeta=max(zetas, default=0.0),
        zeta_histogram=histogram(zetas, ZETA_BINS),
    )
    if mesh.dim == 3:
        etas = [q.eta for q in elements]
        report.eta_min = min(etas, default=0.0)
        report.theta_min = min((q.theta for q in elements), default=0.0)
        report.eta_histogram = histogram(etas, ETA_BINS)
    return report


@dataclass(frozen=True)
class Inequality:
    """``lhs <= rhs`` evaluated numerically; ``slack = rhs - lhs``."""

    name: str
    lhs: float
    rhs: float
    passed: bool

    @property
    def slack(self):
        return self.rhs - self.lhs

    def to_dict(self):
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "slack": self.slack, "passed": self.passed}


@dataclass
class BoundCheck:
    name: str
    checks: list = field(default_factory=list)
    worst_ratio: float = None

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_dict(self):
        out = {"name": self.name, "passed": self.passed}
        if self.worst_ratio is not None:
            out["worst_ratio"] = self.worst_ratio
        out["min_slack"] = min((c.slack for c in self.checks), default=None)
        out["failures"] = [c.to_dict() for c in self.failures()]
        return out


def verify_shape_inequalities(tet, tol=BOUND_TOL):
    """Check ``eta**3 <= theta <= c * eta**0.75`` and ``zeta <= 3 / eta**3``.

    ``tol`` is absolute.
    """
    q = tet_quality(tet)
    lower = q.eta**3
    upper = RADIUS_RATIO_UPPER * q.eta**0.75
    zeta_cap = 3.0 / q.eta**3
    return BoundCheck(
        "shape_inequalities",
        [
            Inequality("eta^3 <= theta", lower, q.theta, lower <= q.theta + tol),
            Inequality("theta <= 2/6^(1/4) eta^(3/4)", q.theta, upper, q.theta <= upper + tol),
            Inequality("zeta <= 3/eta^3", q.zeta, zeta_cap, q.zeta <= zeta_cap + tol),
        ],
    )


def verify_deterioration_bound(tet, tol=BOUND_TOL):
    """Mean-ratio and regularity loss of the 24 bipartite children of ``tet``.

    For every child ``L`` checks ``eta_K <= 36 * 9**(1/3) * eta_L`` and
    ``zeta_L <= 2**6 * 3**9 / eta_K**3``, each with relative tolerance
    ``tol``. ``worst_ratio`` is the largest observed ``eta_K / eta_L``.
    """
    parent = tet_quality(tet)
    zeta_cap = REGULARITY_LOSS / parent.eta**3
    check = BoundCheck("deterioration_bound")
    worst = 0.0
    for k, child in enumerate(bipartite_grid_tet(tet)):
        q = tet_quality(child)
        worst = max(worst, parent.eta / q.eta)
        rhs = MEAN_RATIO_LOSS * q.eta
        check.checks.append(
            Inequality(f"child {k}: eta_K <= 36*9^(1/3) eta_L", parent.eta, rhs, parent.eta <= rhs * (1 + tol))
        )
        check.checks.append(
            Inequality(f"child {k}: zeta_L <= 2^6 3^9 / eta_K^3", q.zeta, zeta_cap, q.zeta <= zeta_cap * (1 + tol))
        )
    check.worst_ratio = worst
    return check
