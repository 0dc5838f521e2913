"""Cutoff profiles, paraboloid kernels, and the averaging operator.

Two cutoffs are supported on Z:

* sharp: weight 1 on {1, ..., N}, 0 elsewhere.  This reproduces the plain
  paraboloid average exactly (integer counts).
* smooth: a [0,1]-valued even profile equal to 1 on (-N, N), vanishing
  outside (-2N, 2N), whose discrete derivative s_k has sup <= C1/N and
  total variation <= C2/N with recorded constants C1 = 2, C2 = 16.

The smooth ramp is a polynomial smoothstep: ramp_order r gives the degree
2r-1 step with r-1 vanishing derivatives at both ends, so the default
r = 3 is the quintic 6u^5 - 15u^4 + 10u^3 and the profile is C^2.  That
regularity is what makes the discrete derivative's variation decay like
1/N instead of O(1).

The kernel places weight sigma(k_1)...sigma(k_{n-1}) at the lattice point
(k_1, ..., k_{n-1}, k_1^2 + ... + k_{n-1}^2); averaging divides the
convolution with the reflected kernel by N^(n-1), which matches the
forward-translate convention A f(x) = N^{1-n} sum_k w(k) f(x + (k, |k|^2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .lattice import LatticeFunction, convolve, reflect
from .reports import ExperimentReport

__all__ = [
    "CutoffProfile",
    "OperatorParams",
    "cutoff_value",
    "cutoff_checks",
    "paraboloid_kernel",
    "average",
    "RAMP_SUP_CONSTANT",
    "RAMP_TV_CONSTANT",
]

# Recorded absolute constants for the default (quintic) ramp:
#   N * sup_k |s_k| <= 2  and  N * sum_k |s_{k+1} - s_k| <= 16.
RAMP_SUP_CONSTANT = 2.0
RAMP_TV_CONSTANT = 16.0


def _smoothstep(u: np.ndarray, order: int) -> np.ndarray:
    """Polynomial step of degree 2*order - 1: 0 -> 1 on [0, 1], C^(order-1).

    S(u) = u^order * sum_{k=0}^{order-1} C(order-1+k, k) C(2*order-1, order-1-k) (-u)^k
    order 2 is the cubic 3u^2 - 2u^3; order 3 the quintic 6u^5 - 15u^4 + 10u^3.
    """
    m = order - 1
    u = np.clip(u, 0.0, 1.0)
    acc = np.zeros_like(u)
    for k in range(m + 1):
        coeff = math.comb(m + k, k) * math.comb(2 * m + 1, m - k)
        acc += coeff * (-u) ** k
    return u ** (m + 1) * acc


@dataclass(frozen=True)
class CutoffProfile:
    """The weight profile sigma: Z -> [0, 1] at scale N."""

    kind: str  # "sharp" | "smooth"
    N: int
    ramp_order: int = 3

    def __post_init__(self):
        if self.kind not in ("sharp", "smooth"):
            raise ValueError(f"kind must be 'sharp' or 'smooth', got {self.kind!r}")
        if self.N < 1:
            raise ValueError("N must be a positive integer")
        if self.ramp_order < 1:
            raise ValueError("ramp_order must be >= 1")
        if self.kind == "smooth" and self.N < 4:
            raise ValueError("smooth cutoff needs N >= 4 so the ramps have room")

    def value(self, k) -> float | np.ndarray:
        k = np.asarray(k)
        if self.kind == "sharp":
            out = ((k >= 1) & (k <= self.N)).astype(float)
        else:
            u = (np.abs(k) - self.N) / self.N
            out = 1.0 - _smoothstep(u, self.ramp_order)
            out = np.where(np.abs(k) >= 2 * self.N, 0.0, out)
            out = np.where(np.abs(k) < self.N, 1.0, out)
        return out if out.ndim else float(out)

    def support(self) -> np.ndarray:
        """Integers where sigma is nonzero."""
        return _support_weights(self)[0]

    def weights(self) -> np.ndarray:
        return _support_weights(self)[1]

    def mass(self) -> float:
        """l^1 norm of sigma (exactly N for the sharp kind)."""
        if self.kind == "sharp":
            return float(self.N)
        return float(np.sum(self.weights()))


@lru_cache(maxsize=256)
def _support_weights(profile: CutoffProfile) -> tuple[np.ndarray, np.ndarray]:
    """Cached (support, weights) arrays; hot paths evaluate sums per call."""
    if profile.kind == "sharp":
        ks = np.arange(1, profile.N + 1)
    else:
        ks = np.arange(-2 * profile.N + 1, 2 * profile.N)
    ws = np.asarray(profile.value(ks), dtype=float)
    ks.setflags(write=False)
    ws.setflags(write=False)
    return ks, ws


def cutoff_value(profile: CutoffProfile, k: int) -> float:
    return float(profile.value(k))


def cutoff_checks(profile: CutoffProfile) -> ExperimentReport:
    """Measure the discrete-derivative bounds of a smooth profile.

    Reports N*sup|s_k| and N*TV(s) for s_k = sigma(k+1) - sigma(k); both must
    stay below the recorded constants for every N.  The sharp profile is
    rejected: its derivative has O(1) jumps, not O(1/N).
    """
    if profile.kind != "smooth":
        raise ValueError("cutoff_checks requires a smooth profile")
    N = profile.N
    ks = np.arange(-2 * N - 2, 2 * N + 2)
    sigma = np.asarray(profile.value(ks), dtype=float)
    s = sigma[1:] - sigma[:-1]
    sup_ratio = N * float(np.max(np.abs(s)))
    tv_ratio = N * float(np.sum(np.abs(s[1:] - s[:-1])))
    ok = sup_ratio <= RAMP_SUP_CONSTANT and tv_ratio <= RAMP_TV_CONSTANT
    return ExperimentReport(
        name="cutoff_checks",
        params={"N": N, "ramp_order": profile.ramp_order},
        values={
            "sup_ratio": sup_ratio,
            "tv_ratio": tv_ratio,
            "sup_constant": RAMP_SUP_CONSTANT,
            "tv_constant": RAMP_TV_CONSTANT,
        },
        passed=ok,
    )


@dataclass(frozen=True)
class OperatorParams:
    """Ambient dimension n >= 2, scale N, and the cutoff profile."""

    n: int
    N: int
    cutoff: CutoffProfile = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("ambient dimension n must be >= 2")
        if self.N < 1:
            raise ValueError("N must be a positive integer")
        if self.cutoff is None:
            object.__setattr__(self, "cutoff", CutoffProfile("sharp", self.N))
        if self.cutoff.N != self.N:
            raise ValueError("cutoff scale differs from operator scale")

    @staticmethod
    def sharp(n: int, N: int) -> "OperatorParams":
        return OperatorParams(n, N, CutoffProfile("sharp", N))

    @staticmethod
    def smooth(n: int, N: int, ramp_order: int = 3) -> "OperatorParams":
        return OperatorParams(n, N, CutoffProfile("smooth", N, ramp_order))


def paraboloid_kernel(params: OperatorParams) -> LatticeFunction:
    """Kernel with weight prod_i sigma(k_i) at (k_1,...,k_{n-1}, |k|^2).

    The first n-1 coordinates determine the point, so the support size is
    (#supp sigma)^(n-1) and the sup norm is the largest single weight (= 1).
    """
    n, cutoff = params.n, params.cutoff
    ks = cutoff.support()
    ws = cutoff.weights()
    if len(ks) ** (n - 1) > 20_000_000:
        raise ValueError("kernel support too large to enumerate")
    data = {}
    for combo in product(range(len(ks)), repeat=n - 1):
        kp = tuple(int(ks[i]) for i in combo)
        w = float(np.prod([ws[i] for i in combo])) if n > 2 else float(ws[combo[0]])
        point = kp + (sum(c * c for c in kp),)
        data[point] = w
    return LatticeFunction(n, data)


def average(f: LatticeFunction, params: OperatorParams) -> LatticeFunction:
    """A f(x) = N^{1-n} sum_k w(k) f(x + (k, |k|^2)).

    Implemented as convolution with the reflected kernel followed by the
    N^{1-n} normalization, which reproduces the forward-translate convention
    bit for bit: the convolution is exact on integer-valued f with the sharp
    cutoff, and the single final division is correctly rounded.
    """
    if f.dim != params.n:
        raise ValueError(f"function dim {f.dim} != operator dim {params.n}")
    kernel = paraboloid_kernel(params)
    raw = convolve(reflect(kernel), f)
    scale = float(params.N ** (params.n - 1))
    return LatticeFunction(params.n, {p: v / scale for p, v in raw.items()})
