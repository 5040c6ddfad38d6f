"""Flows of the gradient field, leaf tracing, holomorphic fits, and the headline verdicts.

A leaf of the annihilator foliation through a seed p is parametrized by

    f(t + i s) = phi_t(psi_s(p)),

where phi is the flow of dz/dt = Z(z) and psi the flow of dz/ds = i Z(z);
with that convention f is holomorphic on each leaf, f' = Z(f), the s-flow
preserves rho exactly (d rho / ds = i rho - i rho = 0 wherever d(rho)(Z) =
rho), and rho grows along t at one fixed exponential rate.  The rate is a
parametrization artifact, so it is measured and reported, never asserted
against a fixed constant; classification logic uses ratios of rates only.

Integration uses an adaptive embedded 4(5) Runge-Kutta pair.  A trace switches
from the cofactor gradient to the ray-limit extension when D falls below
eps_D, and back once D exceeds ten times that threshold (hysteresis against
thrashing at the edge of the degenerate set).

The verdict operations:

* ``burns_verify`` checks a positive homogeneous polynomial of degree 2k for
  the chain: log rho solves the Monge-Ampere equation  =>  rho has pure
  bidegree (k, k), plus the extreme-component vanishing and the ray growth
  law log rho(lambda z) = 2k log|lambda| + log rho(z).
* ``fit_holomorphic_Z`` / ``estimate_weights`` recover the linear model of Z
  at its zero; the eigenvalues (c1, c2) are the weights in the circular-domain
  law rho(e^{c1 lambda} z1, e^{c2 lambda} z2) = |e^lambda|^2 rho(z), which
  ``weighted_homogeneity_check`` verifies directly.
* ``level_transport`` moves level sets onto each other with the real flow of
  Z and checks landing and round-trip accuracy.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .calculus import (
    HermitianPolynomial,
    Point,
    bidegree_decompose,
    eval_jet,
    jet_polynomials,
    polynomial_hash,
)
from .errors import (
    ComplexEigenvalues,
    FlowEscape,
    IncompleteTrace,
    NonPositiveRho,
    NonVanishingAtCenter,
    NotHomogeneous,
    NotPositive,
    RankDeficientSamples,
)
from .finite_type import extend_gradient, gradient_anywhere
from .monge_ampere import EPS_D_DEFAULT, complex_gradient, ma_residual


@dataclass(frozen=True)
class FlowConfig:
    """Integrator policy shared by every flow-based operation."""

    rtol: float = 1e-10
    atol: float = 1e-10
    max_steps: int = 500_000
    eps_D: float = EPS_D_DEFAULT
    hysteresis: float = 10.0
    tol_ext: float = 1e-7

    def __post_init__(self):
        if min(self.rtol, self.atol, self.eps_D, self.tol_ext) <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_steps <= 0 or self.hysteresis < 1.0:
            raise ValueError("max_steps must be positive and hysteresis >= 1")


def _pack(z1: complex, z2: complex) -> np.ndarray:
    return np.array([z1.real, z1.imag, z2.real, z2.imag])


def _unpack(y) -> tuple[complex, complex]:
    return complex(y[0], y[1]), complex(y[2], y[3])


class _GradientFlow:
    """ODE right-hand side dz/dtau = rot * Z(z), with degenerate-set handoff."""

    def __init__(self, p: HermitianPolynomial, cfg: FlowConfig, rot: complex):
        self.p = p
        self.cfg = cfg
        self.rot = rot
        self.det = jet_polynomials(p).det
        self.extended = False
        self.evals = 0

    def __call__(self, _t, y):
        self.evals += 1
        if self.evals > self.cfg.max_steps:
            raise FlowEscape(f"flow exceeded the step budget of {self.cfg.max_steps}")
        z1, z2 = _unpack(y)
        if self.p(z1, z2).real <= 0.0:
            raise FlowEscape(f"flow left the domain rho > 0 at ({z1}, {z2})")
        q = Point(z1, z2)
        D = self.det(z1, z2).real
        if self.extended:
            if D > self.cfg.hysteresis * self.cfg.eps_D:
                self.extended = False
        elif D <= self.cfg.eps_D:
            self.extended = True
        if self.extended:
            g = extend_gradient(self.p, q, eps_D=self.cfg.eps_D, tol_ext=self.cfg.tol_ext)
        else:
            g = complex_gradient(eval_jet(self.p, q), self.cfg.eps_D)
        w1 = self.rot * g.Z1
        w2 = self.rot * g.Z2
        return np.array([w1.real, w1.imag, w2.real, w2.imag])


def _flow_states(rhs, y0: np.ndarray, values, cfg: FlowConfig) -> np.ndarray:
    """States of the flow at the requested parameter values (0 is the seed)."""
    values = np.asarray(values, dtype=float)
    states = np.empty((len(values), 4))
    order = list(np.argsort(values))
    neg = [i for i in order if values[i] < 0][::-1]
    pos = [i for i in order if values[i] >= 0]
    for idx_list in (neg, pos):
        if not idx_list:
            continue
        ts = values[idx_list]
        target = ts[-1]
        if target == 0.0:
            for i in idx_list:
                states[i] = y0
            continue
        sol = solve_ivp(rhs, (0.0, float(target)), np.asarray(y0, dtype=float),
                        method="RK45", rtol=cfg.rtol, atol=cfg.atol, t_eval=ts)
        if not sol.success:
            raise FlowEscape(f"integration failed: {sol.message}")
        for col, i in enumerate(idx_list):
            states[i] = sol.y[:, col]
    return states


def flow_point(p: HermitianPolynomial, q: Point, time: float,
               cfg: FlowConfig | None = None, rot: complex = 1.0) -> Point:
    """Single endpoint of the flow dz/dtau = rot * Z(z) started at q."""
    cfg = cfg or FlowConfig()
    rhs = _GradientFlow(p, cfg, rot)
    state = _flow_states(rhs, _pack(*q.as_pair()), [time], cfg)[0]
    return Point(*_unpack(state))


def make_grid(t_min: float, t_max: float, s_min: float, s_max: float,
              step: float) -> tuple[np.ndarray, np.ndarray]:
    nt = int(round((t_max - t_min) / step)) + 1
    ns = int(round((s_max - s_min) / step)) + 1
    return t_min + step * np.arange(nt), s_min + step * np.arange(ns)


@dataclass(eq=False)
class LeafTrace:
    """Image of a (t, s) grid under f(t + i s) = phi_t(psi_s(seed)), with node data."""

    poly: HermitianPolynomial
    seed: Point
    t_values: np.ndarray
    s_values: np.ndarray
    points: np.ndarray       # shape (nt, ns, 2), complex
    rho_values: np.ndarray   # shape (nt, ns)
    u_values: np.ndarray     # log of rho_values
    diagnostics: dict
    cfg: FlowConfig
    complete: bool = True


def trace_leaf(p: HermitianPolynomial, seed: Point, t_values, s_values,
               cfg: FlowConfig | None = None) -> LeafTrace:
    """Integrate the two real flows of Z over the grid and record rho and u."""
    cfg = cfg or FlowConfig()
    z1, z2 = seed.as_pair()
    rho0 = p(z1, z2).real
    if rho0 <= 0.0:
        raise NonPositiveRho(f"rho(seed) = {rho0} <= 0")
    t_values = np.asarray(t_values, dtype=float)
    s_values = np.asarray(s_values, dtype=float)
    y0 = _pack(z1, z2)

    s_states = _flow_states(_GradientFlow(p, cfg, 1j), y0, s_values, cfg)
    nt, ns = len(t_values), len(s_values)
    points = np.empty((nt, ns, 2), dtype=complex)
    for j in range(ns):
        t_states = _flow_states(_GradientFlow(p, cfg, 1.0 + 0j), s_states[j], t_values, cfg)
        for i in range(nt):
            points[i, j] = _unpack(t_states[i])

    rho_values = np.empty((nt, ns))
    for i in range(nt):
        for j in range(ns):
            rho_values[i, j] = p(points[i, j, 0], points[i, j, 1]).real
    if np.any(rho_values <= 0.0):
        raise FlowEscape("a grid node left the domain rho > 0")
    u_values = np.log(rho_values)

    diag = _trace_diagnostics(seed, t_values, s_values, points, rho_values, u_values,
                              s_states, rho0, p)
    return LeafTrace(p, seed, t_values, s_values, points, rho_values, u_values, diag, cfg)


def _trace_diagnostics(seed, t_values, s_values, points, rho_values, u_values,
                       s_states, rho0, p) -> dict:
    diag: dict = {}
    # level preservation along the s-flow
    s_rho = np.array([p(*_unpack(st)).real for st in s_states])
    diag["level_drift"] = float(np.max(np.abs(s_rho - rho0))) / rho0

    # exponential growth fit per s-line, plus constancy across sub-intervals
    if len(t_values) >= 3:
        slopes = np.array([np.polyfit(t_values, u_values[:, j], 1)[0]
                           for j in range(len(s_values))])
        rate = float(np.mean(slopes))
        half = len(t_values) // 2
        sub = []
        for j in range(len(s_values)):
            c_lo = np.polyfit(t_values[:half + 1], u_values[:half + 1, j], 1)[0]
            c_hi = np.polyfit(t_values[half:], u_values[half:, j], 1)[0]
            sub.append(abs(c_hi - c_lo) / max(abs(rate), 1e-30))
        diag["growth_rate"] = rate
        diag["growth_subinterval_spread"] = float(np.max(sub))
        dt = np.diff(t_values)
        inst = np.diff(u_values, axis=0) / dt[:, None]
        diag["growth_pointwise_spread"] = float(np.max(np.abs(inst - rate))) / max(abs(rate), 1e-30)

    # distance to the complex line through the seed (meaningful for homogeneous rho)
    v = np.array(seed.as_pair())
    v = v / np.linalg.norm(v)
    flat = points.reshape(-1, 2)
    inner = flat @ v.conjugate()
    residual = flat - np.outer(inner, v)
    norms = np.linalg.norm(flat, axis=1)
    diag["radiality_defect"] = float(np.max(np.linalg.norm(residual, axis=1) / norms))
    return diag


@dataclass(frozen=True)
class LeafDiagnostics:
    """Grid-based checks of harmonicity, growth, and the parametrization law f' = Z(f)."""

    h_t: float
    h_s: float
    harmonicity_defect: float
    monotone_growth: bool
    parametrization_defect: float
    min_gradient_norm: float
    growth_rate: float
    growth_subinterval_spread: float
    level_drift: float


def _uniform_step(values: np.ndarray, label: str) -> float:
    d = np.diff(values)
    if len(d) == 0:
        raise IncompleteTrace(f"need at least two {label} nodes")
    if np.max(np.abs(d - d[0])) > 1e-9 * abs(d[0]):
        raise IncompleteTrace(f"{label} grid is not uniform")
    return float(d[0])


def leaf_diagnostics(trace: LeafTrace) -> LeafDiagnostics:
    """Five-point Laplacian of u, monotone growth of u in t, and max |f' - Z(f)|."""
    if not trace.complete:
        raise IncompleteTrace("trace grid is not fully populated")
    u = trace.u_values
    nt, ns = u.shape
    if nt < 3 or ns < 3:
        raise IncompleteTrace("diagnostics need at least a 3 x 3 grid")
    ht = _uniform_step(trace.t_values, "t")
    hs = _uniform_step(trace.s_values, "s")

    lap = ((u[2:, 1:-1] - 2 * u[1:-1, 1:-1] + u[:-2, 1:-1]) / ht**2
           + (u[1:-1, 2:] - 2 * u[1:-1, 1:-1] + u[1:-1, :-2]) / hs**2)
    harmonicity = float(np.max(np.abs(lap)))

    monotone = bool(np.all(np.diff(u, axis=0) > 0))

    pts = trace.points
    fd = (pts[2:, :, :] - pts[:-2, :, :]) / (2 * ht)
    par_defect = 0.0
    min_grad = math.inf
    for i in range(1, nt - 1):
        for j in range(ns):
            q = Point(pts[i, j, 0], pts[i, j, 1])
            g = gradient_anywhere(trace.poly, q, eps_D=trace.cfg.eps_D,
                                  tol_ext=trace.cfg.tol_ext)
            zf = np.array(g.as_vector())
            min_grad = min(min_grad, float(np.linalg.norm(zf)))
            par_defect = max(par_defect, float(np.max(np.abs(fd[i - 1, j] - zf))))

    d = trace.diagnostics
    return LeafDiagnostics(ht, hs, harmonicity, monotone, par_defect, min_grad,
                           d.get("growth_rate", math.nan),
                           d.get("growth_subinterval_spread", math.nan),
                           d["level_drift"])


LEAF_CSV_COLUMNS = ("t", "s", "x1", "y1", "x2", "y2", "rho", "u")


def write_leaf_csv(trace: LeafTrace, path, version: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# mafoliate {version}\n")
        fh.write(f"# poly_sha256 {polynomial_hash(trace.poly)}\n")
        writer = csv.writer(fh)
        writer.writerow(LEAF_CSV_COLUMNS)
        for i, t in enumerate(trace.t_values):
            for j, s in enumerate(trace.s_values):
                z1, z2 = trace.points[i, j]
                writer.writerow([repr(float(t)), repr(float(s)),
                                 repr(z1.real), repr(z1.imag), repr(z2.real), repr(z2.imag),
                                 repr(float(trace.rho_values[i, j])),
                                 repr(float(trace.u_values[i, j]))])


# ---------------------------------------------------------------------------
# holomorphic fit of Z and the weight model
# ---------------------------------------------------------------------------


def _holomorphic_basis(degree: int) -> list[tuple[int, int]]:
    return [(a, b) for total in range(degree + 1) for a in range(total, -1, -1)
            for b in (total - a,)]


@dataclass(frozen=True)
class HolomorphicFit:
    """Least-squares model of Z on holomorphic monomials z1^a z2^b (no conjugates)."""

    degree: int
    coeff1: dict
    coeff2: dict
    max_residual: float
    holdout_pairing_residual: float

    @classmethod
    def from_components(cls, coeff1: dict, coeff2: dict, degree: int) -> "HolomorphicFit":
        return cls(degree, dict(coeff1), dict(coeff2), 0.0, math.nan)

    def evaluate(self, z1: complex, z2: complex) -> tuple[complex, complex]:
        out = []
        for coeffs in (self.coeff1, self.coeff2):
            out.append(sum(c * z1**a * z2**b for (a, b), c in coeffs.items()))
        return (out[0], out[1])

    def constant_part(self) -> tuple[complex, complex]:
        return (self.coeff1.get((0, 0), 0j), self.coeff2.get((0, 0), 0j))

    def jacobian_at_zero(self) -> np.ndarray:
        return np.array([
            [self.coeff1.get((1, 0), 0j), self.coeff1.get((0, 1), 0j)],
            [self.coeff2.get((1, 0), 0j), self.coeff2.get((0, 1), 0j)],
        ])

    def nonlinear_mass(self) -> float:
        mass = 0.0
        for coeffs in (self.coeff1, self.coeff2):
            for (a, b), c in coeffs.items():
                if a + b >= 2:
                    mass = max(mass, abs(c))
        return mass

    def coefficient(self, component: int, key: tuple[int, int]) -> complex:
        return (self.coeff1 if component == 1 else self.coeff2).get(key, 0j)


def fit_holomorphic_Z(p: HermitianPolynomial, samples: Sequence[Point], degree: int,
                      eps_D: float = EPS_D_DEFAULT) -> HolomorphicFit:
    """Fit each gradient component on holomorphic monomials up to `degree`.

    The tail fifth of `samples` is withheld from the fit and used only for the
    reported residual of d(rho)(Z_fit) - rho.
    """
    basis = _holomorphic_basis(degree)
    n = len(samples)
    if n < 3 * len(basis):
        raise RankDeficientSamples(f"{n} samples for {len(basis)} basis monomials (need 3x)")
    n_hold = max(2, n // 5)
    if n - n_hold < 3 * len(basis):
        n_hold = n - 3 * len(basis)
    fit_set = samples[:n - n_hold]
    holdout = samples[n - n_hold:]

    A = np.empty((len(fit_set), len(basis)), dtype=complex)
    Zs = np.empty((len(fit_set), 2), dtype=complex)
    for i, q in enumerate(fit_set):
        z1, z2 = q.as_pair()
        A[i] = [z1**a * z2**b for a, b in basis]
        g = complex_gradient(eval_jet(p, q), eps_D)
        Zs[i] = g.as_vector()
    coeffs = []
    for comp in range(2):
        sol, _res, rank, _sv = np.linalg.lstsq(A, Zs[:, comp], rcond=None)
        if rank < len(basis):
            raise RankDeficientSamples(f"sample matrix rank {rank} < {len(basis)}")
        coeffs.append({key: complex(c) for key, c in zip(basis, sol)})
    fitted = A @ np.array([[coeffs[c][key] for key in basis] for c in range(2)]).T
    max_residual = float(np.max(np.abs(fitted - Zs)))

    fit = HolomorphicFit(degree, coeffs[0], coeffs[1], max_residual, 0.0)
    hold_res = 0.0
    for q in holdout:
        jet = eval_jet(p, q)
        Z1, Z2 = fit.evaluate(*q.as_pair())
        gap = abs(jet.d1 * Z1 + jet.d2 * Z2 - jet.rho) / jet.rho
        hold_res = max(hold_res, gap)
    return HolomorphicFit(degree, coeffs[0], coeffs[1], max_residual, hold_res)


_SPHERE_SPECIAL = [
    (1, 0), (0, 1), (1j, 0), (0, 1j),
    (2**-0.5, 2**-0.5), (2**-0.5, -(2**-0.5)), (2**-0.5, 2**-0.5 * 1j), (2**-0.5 * 1j, 2**-0.5),
]


def _sphere_directions(count: int, seed: int = 718281828) -> np.ndarray:
    """Deterministic unit vectors in C^2, always including the axis and diagonal points."""
    rng = np.random.default_rng(seed)
    raw = rng.normal(size=(max(count - len(_SPHERE_SPECIAL), 0), 4))
    vecs = [np.array(v, dtype=complex) for v in _SPHERE_SPECIAL]
    for row in raw:
        v = np.array([complex(row[0], row[1]), complex(row[2], row[3])])
        vecs.append(v / np.linalg.norm(v))
    return np.array(vecs)


@dataclass(frozen=True)
class ZeroSetReport:
    """Shell minima of |Z_fit| near the origin and any other numerical zeros found."""

    isolated_zero_at_origin: bool
    linear_min_singular: float
    origin_value: float
    min_on_unit_sphere: float
    shell_minima: tuple
    other_zeros: tuple


def zero_set_check(fit: HolomorphicFit, search_radius: float = 1.0,
                   n_directions: int = 240, n_radii: int = 6,
                   zero_tol: float = 1e-7) -> ZeroSetReport:
    """Verify min |Z| >= c r on shrinking spheres (isolated zero) and report stray zeros."""
    dirs = _sphere_directions(n_directions)
    J = fit.jacobian_at_zero()
    smin = float(np.linalg.svd(J, compute_uv=False)[-1])
    origin_value = float(np.hypot(*[abs(c) for c in fit.evaluate(0.0, 0.0)]))

    shell_minima = []
    other_zeros = []
    for j in range(n_radii):
        r = search_radius * 0.5**j
        vals = np.array([float(np.linalg.norm(fit.evaluate(r * d[0], r * d[1])))
                         for d in dirs])
        shell_minima.append((r, float(vals.min())))
        for d in dirs[vals < zero_tol * (1.0 + r)]:
            other_zeros.append(Point(r * d[0], r * d[1]))

    unit_vals = [np.linalg.norm(fit.evaluate(d[0], d[1])) for d in dirs]
    min_unit = float(np.min(unit_vals))

    isolated = smin > zero_tol and all(m >= 0.5 * smin * r for r, m in shell_minima)
    return ZeroSetReport(isolated, smin, origin_value, min_unit,
                         tuple(shell_minima), tuple(other_zeros[:32]))


@dataclass(frozen=True)
class WeightEstimate:
    """Eigenvalues of the linear part of Z at its zero, sorted ascending."""

    c1: float
    c2: float
    jacobian: tuple
    residual: float


def estimate_weights(fit: HolomorphicFit, tol: float = 1e-8) -> WeightEstimate:
    J = fit.jacobian_at_zero()
    scale = 1.0 + float(np.max(np.abs(J)))
    const = fit.constant_part()
    if max(abs(const[0]), abs(const[1])) > tol * scale:
        raise NonVanishingAtCenter(f"fitted field is {const} at the origin")
    vals, vecs = np.linalg.eig(J)
    if float(np.max(np.abs(vals.imag))) > tol * (1.0 + float(np.max(np.abs(vals)))):
        raise ComplexEigenvalues(f"eigenvalues {vals} are not real within tolerance")
    try:
        recon = vecs @ np.diag(vals) @ np.linalg.inv(vecs)
        residual = float(np.linalg.norm(recon - J) / (1.0 + np.linalg.norm(J)))
    except np.linalg.LinAlgError:
        residual = math.inf
    c_sorted = sorted(float(v) for v in vals.real)
    return WeightEstimate(c_sorted[0], c_sorted[1],
                          tuple(map(tuple, J.tolist())), residual)


def weighted_homogeneity_check(p: HermitianPolynomial, c1: float, c2: float,
                               trials: int = 1000, seed: int = 0) -> float:
    """Max relative defect of rho(e^{c1 L} z1, e^{c2 L} z2) = |e^L|^2 rho(z) over random (z, L)."""
    if c1 <= 0 or c2 <= 0:
        raise ValueError("weights must be positive")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        row = rng.normal(size=4)
        v = np.array([complex(row[0], row[1]), complex(row[2], row[3])])
        v *= rng.uniform(0.5, 1.5) / np.linalg.norm(v)
        lam = complex(rng.uniform(-1.0, 1.0), rng.uniform(-math.pi, math.pi))
        lhs = p(np.exp(c1 * lam) * v[0], np.exp(c2 * lam) * v[1]).real
        rhs = math.exp(2.0 * lam.real) * p(v[0], v[1]).real
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    return worst


# ---------------------------------------------------------------------------
# level-set transport
# ---------------------------------------------------------------------------


def level_set_samples(p: HermitianPolynomial, r: float, count: int,
                      seed: int = 0) -> list[Point]:
    """Points on {rho = r}, found by radial root-finding along random directions."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        row = rng.normal(size=4)
        v = np.array([complex(row[0], row[1]), complex(row[2], row[3])])
        v /= np.linalg.norm(v)

        def along(t: float) -> float:
            return p(t * v[0], t * v[1]).real - r

        hi = 1.0
        for _ in range(80):
            if along(hi) > 0:
                break
            hi *= 1.5
        else:
            raise ValueError(f"cannot bracket the level rho = {r} along {v}")
        t_star = brentq(along, 1e-12, hi, xtol=1e-14, rtol=8.9e-16)
        out.append(Point(t_star * v[0], t_star * v[1]))
    return out


@dataclass(frozen=True)
class TransportReport:
    """Landing and round-trip accuracy of the real-flow transport between level sets."""

    r1: float
    r2: float
    rate: float
    time: float
    max_landing_defect: float
    max_roundtrip_defect: float
    landing_defects: tuple
    roundtrip_defects: tuple


def level_transport(p: HermitianPolynomial, r1: float, r2: float,
                    samples: Sequence[Point], cfg: FlowConfig | None = None) -> TransportReport:
    """Flow {rho = r1} onto {rho = r2} for the time predicted by the measured rate."""
    if r1 <= 0 or r2 <= 0:
        raise ValueError("level values must be positive")
    cfg = cfg or FlowConfig()
    if not samples:
        raise ValueError("need at least one sample on the source level set")

    probe_time = 0.05
    probe_end = flow_point(p, samples[0], probe_time, cfg)
    rho_end = p(*probe_end.as_pair()).real
    rho_start = p(*samples[0].as_pair()).real
    rate = (math.log(rho_end) - math.log(rho_start)) / probe_time
    T = math.log(r2 / r1) / rate

    landing, roundtrip = [], []
    for q in samples:
        fwd = flow_point(p, q, T, cfg)
        rho_f = p(*fwd.as_pair()).real
        landing.append(abs(rho_f - r2) / r2)
        back = flow_point(p, fwd, -T, cfg)
        disp = np.linalg.norm(np.array(back.as_pair()) - np.array(q.as_pair()))
        roundtrip.append(float(disp) / (1.0 + q.norm()))
    return TransportReport(r1, r2, rate, T, max(landing), max(roundtrip),
                           tuple(landing), tuple(roundtrip))


# ---------------------------------------------------------------------------
# homogeneous-polynomial verdict
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BurnsVerdict:
    """Joint record of the Monge-Ampere flag, bidegree purity, and growth law."""

    k: int
    is_ma: bool
    ma_max_normalized: float
    ma_worst_point: Point
    bidegree_pure: bool
    components: tuple
    extreme_components_vanish: bool
    growth_bound: float
    min_on_sphere: float
    theorem_consistent: bool


def _positive_min_on_sphere(p: HermitianPolynomial, n_samples: int, rng) -> tuple[float, Point]:
    dirs = _sphere_directions(8)
    best_val, best_dir = math.inf, dirs[0]
    batches = [dirs]
    raw = rng.normal(size=(max(n_samples - len(dirs), 0), 4))
    cloud = np.empty((len(raw), 2), dtype=complex)
    cloud[:, 0] = raw[:, 0] + 1j * raw[:, 1]
    cloud[:, 1] = raw[:, 2] + 1j * raw[:, 3]
    cloud /= np.linalg.norm(cloud, axis=1)[:, None]
    batches.append(cloud)
    for batch in batches:
        for v in batch:
            val = p(v[0], v[1]).real
            if val < best_val:
                best_val, best_dir = val, v
    # local refinement around the worst direction
    for shrink in (0.3, 0.1, 0.03):
        raw = rng.normal(size=(2000, 4))
        pert = np.empty((len(raw), 2), dtype=complex)
        pert[:, 0] = best_dir[0] + shrink * (raw[:, 0] + 1j * raw[:, 1])
        pert[:, 1] = best_dir[1] + shrink * (raw[:, 2] + 1j * raw[:, 3])
        pert /= np.linalg.norm(pert, axis=1)[:, None]
        for v in pert:
            val = p(v[0], v[1]).real
            if val < best_val:
                best_val, best_dir = val, v
    return best_val, Point(best_dir[0], best_dir[1])


def burns_verify(p: HermitianPolynomial, sphere_samples: int = 10_000,
                 ma_samples: int = 2000, growth_rays: int = 64,
                 ma_threshold: float = 1e-9, d_cutoff: float = 1e-6,
                 seed: int = 0) -> BurnsVerdict:
    """Homogeneity-gated verdict: MA statistics, bidegree purity, and ray growth."""
    degrees = p.total_degrees()
    if len(degrees) != 1:
        raise NotHomogeneous(f"mixed total degrees {sorted(degrees)}")
    total = degrees.pop()
    if total == 0 or total % 2 != 0:
        raise NotHomogeneous(f"total degree {total} admits no (k, k) bidegree")
    k = total // 2

    rng = np.random.default_rng(seed)
    min_sphere, worst = _positive_min_on_sphere(p, sphere_samples, rng)
    if min_sphere <= 0.0:
        raise NotPositive(f"rho = {min_sphere} at {worst.as_pair()}", witness=worst)

    profile = bidegree_decompose(p)
    comps = tuple(sorted(profile.components))
    pure = comps == ((k, k),)
    extreme_vanish = (0, total) not in profile.components and (total, 0) not in profile.components

    det = jet_polynomials(p).det
    ma_max, ma_point = 0.0, Point(1.0, 0.0)
    accepted, attempts = 0, 0
    while accepted < ma_samples and attempts < 50 * ma_samples:
        attempts += 1
        row = rng.normal(size=4)
        v = np.array([complex(row[0], row[1]), complex(row[2], row[3])])
        v *= rng.uniform(0.5, 1.5) / np.linalg.norm(v)
        q = Point(v[0], v[1])
        if det(v[0], v[1]).real <= d_cutoff:
            continue
        accepted += 1
        rep = ma_residual(eval_jet(p, q))
        if abs(rep.normalized) > ma_max:
            ma_max, ma_point = abs(rep.normalized), q
    is_ma = ma_max < ma_threshold

    growth = 0.0
    mags = np.logspace(-3, 3, 13)
    for _ in range(growth_rays):
        row = rng.normal(size=4)
        v = np.array([complex(row[0], row[1]), complex(row[2], row[3])])
        v /= np.linalg.norm(v)
        base = math.log(p(v[0], v[1]).real)
        for mag in mags:
            lam = mag * np.exp(2j * math.pi * rng.uniform())
            val = math.log(p(lam * v[0], lam * v[1]).real)
            growth = max(growth, abs(val - 2 * k * math.log(mag) - base))

    return BurnsVerdict(k, is_ma, ma_max, ma_point, pure, comps, extreme_vanish,
                        growth, min_sphere, (not is_ma) or pure)
