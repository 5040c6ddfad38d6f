"""Pointwise Monge-Ampere residuals, the complex gradient Z, and the singular pairing.

For u = log rho, the degenerate complex Monge-Ampere equation (dd^c u)^2 = 0
reduces in coordinates to the scalar identity

    rho * D - B = 0

with D, B the Levi determinant and bordered scalar of the jet.  At strictly
pseudoconvex points (D > 0) the annihilator of dd^c u is spanned by the
complex gradient

    Z^1 = (rho_{2 2bar} rho_1bar - rho_{2 1bar} rho_2bar) / D
    Z^2 = (rho_{1 1bar} rho_2bar - rho_{1 2bar} rho_1bar) / D,

the unique (1,0) field with sum_mu rho_{mu nubar} Z^mu = rho_nubar, and the
equation is equivalent to the eigenfunction identity d(rho)(Z) = rho.

The pairing evaluator treats (1,1)-forms matrix-style,

    ddc_f(V, W) = sum f_{mu nubar} V^mu conj(W^nu),

normalized so that ddc_rho(L, Lbar) = B, which under the equation equals
D * rho for the tangential field L.  On that normalization the singular
metric

    Omega(V, W) = rho * ddc_u(V, W) / D + d(rho)(V) * conj(d(rho)(W)) / rho

satisfies Omega(Z, Z) = rho, Omega(Z, L) = 0, Omega(L, L) = rho wherever the
equation holds; Omega is exposed only through pairings, never as a global
object, since only those combinations extend across degenerate points.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Sequence

from .calculus import HermitianPolynomial, Point, WirtingerJet, eval_jet
from .errors import DegenerateLevi, NonPositiveRho

EPS_D_DEFAULT = 1e-10

Vector = tuple[complex, complex]


@dataclass(frozen=True)
class MAReport:
    """Residual record at one point; `normalized` is dimensionless in [-1, 1]."""

    point: Point
    rho: float
    D: float
    B: float
    residual: float
    normalized: float

    def to_json_dict(self) -> dict:
        z1, z2 = self.point.as_pair()
        return {
            "x1": z1.real, "y1": z1.imag, "x2": z2.real, "y2": z2.imag,
            "rho": self.rho, "D": self.D, "B": self.B,
            "residual": self.residual, "normalized": self.normalized,
        }


@dataclass(frozen=True)
class GradientValue:
    """Value of the complex gradient, with the defect of d(rho)(Z) - rho."""

    Z1: complex
    Z2: complex
    pairing_check: complex

    def as_vector(self) -> Vector:
        return (self.Z1, self.Z2)

    def norm(self) -> float:
        return max(abs(self.Z1), abs(self.Z2))


def ma_residual(jet: WirtingerJet) -> MAReport:
    """Monge-Ampere residual rho*D - B at the jet's point; requires rho > 0."""
    if jet.rho <= 0.0:
        raise NonPositiveRho(f"rho = {jet.rho} <= 0 at {jet.point.as_pair()}")
    residual = jet.rho * jet.D - jet.B
    normalized = residual / (abs(jet.rho * jet.D) + abs(jet.B) + 1e-300)
    return MAReport(jet.point, jet.rho, jet.D, jet.B, residual, normalized)


def complex_gradient(jet: WirtingerJet, eps_D: float = EPS_D_DEFAULT) -> GradientValue:
    """Complex gradient from the 2x2 Levi cofactors; DegenerateLevi when D <= eps_D."""
    if jet.D <= eps_D:
        raise DegenerateLevi(
            f"D = {jet.D} <= {eps_D} at {jet.point.as_pair()}; use the finite-type extension"
        )
    (h11, h12), (h21, h22) = jet.levi
    db1 = jet.d1.conjugate()
    db2 = jet.d2.conjugate()
    Z1 = (h22 * db1 - h21 * db2) / jet.D
    Z2 = (h11 * db2 - h12 * db1) / jet.D
    pairing = jet.d1 * Z1 + jet.d2 * Z2 - jet.rho
    return GradientValue(Z1, Z2, pairing)


class HermitianPairing:
    """(1,1)-form evaluator over one jet: ddc_rho, ddc_u, d(rho), and Omega."""

    def __init__(self, jet: WirtingerJet, eps_D: float = EPS_D_DEFAULT):
        self.jet = jet
        self.eps_D = eps_D

    def d_rho(self, V: Vector) -> complex:
        return self.jet.d1 * V[0] + self.jet.d2 * V[1]

    def ddc_rho(self, V: Vector, W: Vector) -> complex:
        (h11, h12), (h21, h22) = self.jet.levi
        w0 = W[0].conjugate()
        w1 = W[1].conjugate()
        return (h11 * V[0] * w0 + h12 * V[0] * w1 + h21 * V[1] * w0 + h22 * V[1] * w1)

    def ddc_u(self, V: Vector, W: Vector) -> complex:
        if self.jet.rho <= 0.0:
            raise NonPositiveRho(f"rho = {self.jet.rho} <= 0")
        r = self.jet.rho
        return self.ddc_rho(V, W) / r - self.d_rho(V) * self.d_rho(W).conjugate() / r**2

    def omega(self, V: Vector, W: Vector) -> complex:
        if self.jet.rho <= 0.0:
            raise NonPositiveRho(f"rho = {self.jet.rho} <= 0")
        if self.jet.D <= self.eps_D:
            raise DegenerateLevi(f"D = {self.jet.D} <= {self.eps_D}")
        return (self.jet.rho * self.ddc_u(V, W) / self.jet.D
                + self.d_rho(V) * self.d_rho(W).conjugate() / self.jet.rho)


def omega_pairing(jet: WirtingerJet, V: Vector, W: Vector, eps_D: float = EPS_D_DEFAULT) -> complex:
    """Omega(V, conj W) for (1,0) tangent vectors V, W at the jet's point."""
    return HermitianPairing(jet, eps_D).omega(V, W)


def ma_scan(p: HermitianPolynomial, points: Iterable[Point]) -> list[MAReport]:
    return [ma_residual(eval_jet(p, q)) for q in points]


MA_CSV_COLUMNS = ("x1", "y1", "x2", "y2", "rho", "D", "B", "residual", "normalized")


def write_ma_csv(reports: Sequence[MAReport], path, version: str, poly_hash: str) -> None:
    """Plot-ready residual table; metadata rides in leading comment lines."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# mafoliate {version}\n")
        fh.write(f"# poly_sha256 {poly_hash}\n")
        writer = csv.writer(fh)
        writer.writerow(MA_CSV_COLUMNS)
        for rep in reports:
            row = rep.to_json_dict()
            writer.writerow([repr(row[c]) for c in MA_CSV_COLUMNS])
