"""Per-mode characteristic polynomials, spectra, and stability classification.

On the circle the coupling blocks are circulant, so the system decomposes
into independent Fourier modes phi_m = 2*pi*m/n.  Each mode contributes the
roots of a small characteristic polynomial Q(nu, phi): degree six for three
agent types, degree four for two.  Linear stability means the only
eigenvalue on the closed right half-plane is the double zero at phi = 0
(the rigid in-formation motion) with a one-dimensional eigenspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.polynomial import polynomial as npp

from .conditions import D_func
from .errors import DegenerateLeadingCoefficient, SizeError
from .model import Arrangement, FlockSpec, alphas_betas, assemble_periodic

CLASSIFY_TOL = 1e-9

_ZERO_EIGENVALUE_SCALE = 1e-8

_RESIDUAL_SCALE = 1e-8

_GEOMETRIC_CHECK_MAX_CELLS = 64


@dataclass(frozen=True)
class CharPoly:
    """Coefficients a_0..a_d of one mode's characteristic polynomial."""

    phi: float
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex))
        self.coeffs.setflags(write=False)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, nu: complex) -> complex:
        return complex(npp.polyval(nu, self.coeffs))


@dataclass(frozen=True)
class ModeSpectrum:
    """All roots of one mode, sorted by descending real part."""

    phi: float
    eigenvalues: np.ndarray
    residuals: np.ndarray
    coeff_scale: float

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)
        self.residuals.setflags(write=False)

    def zero_threshold(self) -> float:
        d = len(self.eigenvalues)
        return _ZERO_EIGENVALUE_SCALE * (1.0 + self.coeff_scale ** (1.0 / d))


class Stability(Enum):
    STABLE = "stable"
    MARGINALLY_UNSTABLE = "marginally-unstable"
    UNSTABLE = "unstable"


@dataclass(frozen=True)
class StabilityVerdict:
    status: Stability
    zero_multiplicity: int
    max_real_part: float
    witness_phi: float
    witness_eigenvalue: complex
    a2_at_zero: complex | None = None
    geometric_multiplicity: int | None = None

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "zero_multiplicity": self.zero_multiplicity,
            "max_real_part": self.max_real_part,
            "witness": {
                "phi": self.witness_phi,
                "re": self.witness_eigenvalue.real,
                "im": self.witness_eigenvalue.imag,
            },
            "a2_at_zero": None
            if self.a2_at_zero is None
            else {"re": self.a2_at_zero.real, "im": self.a2_at_zero.imag},
            "geometric_multiplicity": self.geometric_multiplicity,
        }


def _entry_polys_triatomic(spec: FlockSpec, phi: float):
    em, ep = np.exp(-1j * phi), np.exp(1j * phi)
    a1, a2, a3 = spec.agents
    return [
        [
            np.array([a1.g_x, a1.g_v, -1.0], dtype=complex),
            np.array([a1.g_x * a1.rho_x[1], a1.g_v * a1.rho_v[1]], dtype=complex),
            np.array([a1.g_x * a1.rho_x[-1] * em, a1.g_v * a1.rho_v[-1] * em]),
        ],
        [
            np.array([a2.g_x * a2.rho_x[-1], a2.g_v * a2.rho_v[-1]], dtype=complex),
            np.array([a2.g_x, a2.g_v, -1.0], dtype=complex),
            np.array([a2.g_x * a2.rho_x[1], a2.g_v * a2.rho_v[1]], dtype=complex),
        ],
        [
            np.array([a3.g_x * a3.rho_x[1] * ep, a3.g_v * a3.rho_v[1] * ep]),
            np.array([a3.g_x * a3.rho_x[-1], a3.g_v * a3.rho_v[-1]], dtype=complex),
            np.array([a3.g_x, a3.g_v, -1.0], dtype=complex),
        ],
    ]


def _lambda_mu(agent, which: str, type_index: int, phi: float) -> tuple[complex, complex]:
    """Cross-type (lambda) and same-type (mu) circulant symbols of one agent."""
    rho = agent.rho_x if which == "x" else agent.rho_v
    em, ep = np.exp(-1j * phi), np.exp(1j * phi)
    if type_index == 0:
        lam = rho[1] + rho[-1] * em
    else:
        lam = rho[-1] + rho[1] * ep
    mu = 1.0 + rho[2] * ep + rho[-2] * em
    return lam, mu


def _entry_polys_diatomic(spec: FlockSpec, phi: float):
    a1, a2 = spec.agents
    lx1, mx1 = _lambda_mu(a1, "x", 0, phi)
    lv1, mv1 = _lambda_mu(a1, "v", 0, phi)
    lx2, mx2 = _lambda_mu(a2, "x", 1, phi)
    lv2, mv2 = _lambda_mu(a2, "v", 1, phi)
    return [
        [
            np.array([a1.g_x * mx1, a1.g_v * mv1, -1.0]),
            np.array([a1.g_x * lx1, a1.g_v * lv1]),
        ],
        [
            np.array([a2.g_x * lx2, a2.g_v * lv2]),
            np.array([a2.g_x * mx2, a2.g_v * mv2, -1.0]),
        ],
    ]


def char_poly(spec: FlockSpec, phi: float) -> CharPoly:
    """Characteristic polynomial of the mode at angle phi.

    The coefficients come from expanding the determinant of the small
    matrix whose entries are degree <= 2 polynomials in the eigenvalue
    variable; no root finding is involved.
    """
    if spec.arrangement is Arrangement.TRIATOMIC_NN:
        m = _entry_polys_triatomic(spec, phi)
        det = npp.polysub(
            npp.polymul(m[0][0], npp.polysub(npp.polymul(m[1][1], m[2][2]),
                                             npp.polymul(m[1][2], m[2][1]))),
            npp.polymul(m[0][1], npp.polysub(npp.polymul(m[1][0], m[2][2]),
                                             npp.polymul(m[1][2], m[2][0]))),
        )
        det = npp.polyadd(
            det,
            npp.polymul(m[0][2], npp.polysub(npp.polymul(m[1][0], m[2][1]),
                                             npp.polymul(m[1][1], m[2][0]))),
        )
    else:
        m = _entry_polys_diatomic(spec, phi)
        det = npp.polysub(npp.polymul(m[0][0], m[1][1]), npp.polymul(m[0][1], m[1][0]))
    coeffs = np.zeros(spec.arrangement.degree + 1, dtype=complex)
    coeffs[: len(det)] = det
    return CharPoly(phi=phi, coeffs=coeffs)


def a0_constant_term(spec: FlockSpec, phi: float) -> complex:
    """Constant coefficient of Q(nu, phi) from its closed form.

    An independent derivation of ``char_poly(spec, phi).coeffs[0]``; the
    two must agree to roundoff, which the test suite cross-checks.
    """
    if spec.arrangement is Arrangement.TRIATOMIC_NN:
        g = spec.agents[0].g_x * spec.agents[1].g_x * spec.agents[2].g_x
        return g * D_func(*(a.rho_x[1] for a in spec.agents), phi)
    a1, a2 = spec.agents
    lx1, mx1 = _lambda_mu(a1, "x", 0, phi)
    lx2, mx2 = _lambda_mu(a2, "x", 1, phi)
    return a1.g_x * a2.g_x * (mx1 * mx2 - lx1 * lx2)


def a0_derivative_at_zero(spec: FlockSpec) -> complex:
    """d a_0 / d phi at phi = 0, in closed form."""
    if spec.arrangement is Arrangement.TRIATOMIC_NN:
        g = spec.agents[0].g_x * spec.agents[1].g_x * spec.agents[2].g_x
        a, b, c = (agent.rho_x[1] for agent in spec.agents)
        return g * 1j * (a * b * c + (1 + a) * (1 + b) * (1 + c))
    a1, a2 = spec.agents
    ab = alphas_betas(spec)
    lam1, mu1 = _lambda_mu(a1, "x", 0, 0.0)
    lam2, mu2 = _lambda_mu(a2, "x", 1, 0.0)
    dlam1 = -1j * a1.rho_x[-1]
    dlam2 = 1j * a2.rho_x[1]
    dmu1 = 1j * ab.beta_x[0][2]
    dmu2 = 1j * ab.beta_x[1][2]
    return a1.g_x * a2.g_x * (
        dmu1 * mu2 + mu1 * dmu2 - dlam1 * lam2 - lam1 * dlam2
    )


def mode_roots(cp: CharPoly) -> ModeSpectrum:
    """Roots of one mode polynomial via the balanced companion matrix."""
    coeffs = cp.coeffs
    scale = float(np.abs(coeffs).max())
    if abs(coeffs[-1]) <= 1e-12 * max(scale, 1.0):
        raise DegenerateLeadingCoefficient(
            f"leading coefficient {coeffs[-1]} too small at phi={cp.phi}"
        )
    roots = np.roots(coeffs[::-1])
    order = np.lexsort((-roots.imag, -roots.real))
    roots = roots[order]
    residuals = np.abs(npp.polyval(roots, coeffs))
    return ModeSpectrum(
        phi=cp.phi, eigenvalues=roots, residuals=residuals, coeff_scale=scale
    )


def spectrum_periodic(spec: FlockSpec, n: int) -> list[ModeSpectrum]:
    """Spectra of all n Fourier modes of the circle system."""
    if n < 3:
        raise SizeError(f"need n >= 3 cells per type, got {n}")
    return [mode_roots(char_poly(spec, 2.0 * np.pi * m / n)) for m in range(n)]


def _geometric_multiplicity(spec: FlockSpec, n: int) -> int:
    """Kernel dimension of the dense circle matrix (numerical rank via SVD)."""
    m = assemble_periodic(spec, n).entries
    sigma = np.linalg.svd(m, compute_uv=False)
    threshold = sigma[0] * m.shape[0] * np.finfo(float).eps
    return int(np.sum(sigma <= threshold))


def classify(
    spectra: list[ModeSpectrum],
    tol: float = CLASSIFY_TOL,
    *,
    spec: FlockSpec | None = None,
) -> StabilityVerdict:
    """Classify a periodic spectrum.

    Stable demands a double zero at phi = 0 (and nowhere else), geometric
    multiplicity one, and every other eigenvalue strictly left of -tol.
    Any eigenvalue right of +tol is Unstable; everything in between (extra
    eigenvalues stuck on the imaginary axis) is MarginallyUnstable.

    The geometric multiplicity is read off the dense circle matrix for
    small systems; for larger ones a nonvanishing quadratic coefficient at
    phi = 0 together with the double zero certifies it.
    """
    zero_total = 0
    zeros_at_mode0 = 0
    max_re = -np.inf
    witness_phi = float("nan")
    witness = complex("nan")
    for ms in spectra:
        thr = ms.zero_threshold()
        small = np.abs(ms.eigenvalues) < thr
        zero_total += int(small.sum())
        if ms.phi == 0.0:
            zeros_at_mode0 += int(small.sum())
        others = ms.eigenvalues[~small]
        if len(others):
            re = others.real.max()
            if re > max_re:
                max_re = re
                witness_phi = ms.phi
                witness = complex(others[others.real.argmax()])

    a2 = None
    geometric = None
    geometric_ok = True
    if spec is not None:
        n = len(spectra)
        a2 = complex(char_poly(spec, 0.0).coeffs[2])
        if n <= _GEOMETRIC_CHECK_MAX_CELLS:
            geometric = _geometric_multiplicity(spec, n)
            geometric_ok = geometric == 1
        else:
            geometric_ok = abs(a2) > tol

    if max_re > tol:
        status = Stability.UNSTABLE
    elif (
        zeros_at_mode0 == 2
        and zero_total == 2
        and max_re < -tol
        and geometric_ok
    ):
        status = Stability.STABLE
    else:
        status = Stability.MARGINALLY_UNSTABLE
    return StabilityVerdict(
        status=status,
        zero_multiplicity=zero_total,
        max_real_part=float(max_re),
        witness_phi=witness_phi,
        witness_eigenvalue=witness,
        a2_at_zero=a2,
        geometric_multiplicity=geometric,
    )
