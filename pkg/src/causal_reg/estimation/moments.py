"""Sample moments and empirical risk functionals, pure functions on EnvPair data."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray

from causal_reg.errors import InvalidInput
from causal_reg.linalg import SymMatrix, clip_psd, pinv_psd, psd_sqrt
from causal_reg.models import Dataset, EnvPair

log = structlog.get_logger("moments")


@dataclass(frozen=True)
class EnvMoments:
    """Second moments of one environment with 1/n normalization."""

    xx: NDArray[np.float64]
    xy: NDArray[np.float64]
    yy: float
    n: int

    @classmethod
    def of(cls, d: Dataset) -> EnvMoments:
        return cls(
            xx=d.x.T @ d.x / d.n,
            xy=d.x.T @ d.y / d.n,
            yy=float(d.y @ d.y / d.n),
            n=d.n,
        )

    def risk(self, beta: ArrayLike) -> float:
        """βᵀ(XᵀX/n)β − 2βᵀ(Xᵀy/n) + yᵀy/n."""
        b = np.asarray(beta, dtype=np.float64)
        return float(b @ self.xx @ b - 2.0 * b @ self.xy + self.yy)


@dataclass(frozen=True, eq=False)
class MomentSummary:
    """Ĝ, Ẑ, Ĝ⁺, Ẑ⁺ and the per-environment moments they come from."""

    g_diff: SymMatrix
    g_plus: SymMatrix
    z_diff: NDArray[np.float64]
    z_plus: NDArray[np.float64]
    shifted: EnvMoments
    obs: EnvMoments
    clip_tol: float = np.inf

    @property
    def p(self) -> int:
        return self.z_diff.shape[0]

    @property
    def yy_e(self) -> float:
        return self.shifted.yy

    @property
    def yy_o(self) -> float:
        return self.obs.yy

    @property
    def n_e(self) -> int:
        return self.shifted.n

    @property
    def n_o(self) -> int:
        return self.obs.n

    @cached_property
    def _g_diff_clip(self) -> tuple[SymMatrix, int]:
        clipped, n_clipped = clip_psd(self.g_diff, self.clip_tol)
        if n_clipped:
            log.debug("negative_eigenvalues_clipped", matrix="g_diff", count=n_clipped)
        return clipped, n_clipped

    @property
    def g_diff_psd(self) -> SymMatrix:
        """clip(Ĝ): Ĝ with its negative eigenvalues zeroed."""
        return self._g_diff_clip[0]

    @property
    def n_clipped(self) -> int:
        """How many eigenvalues of Ĝ were clipped to zero."""
        return self._g_diff_clip[1]

    @cached_property
    def g_plus_psd(self) -> SymMatrix:
        return clip_psd(self.g_plus, np.inf)[0]

    @cached_property
    def g_diff_pinv(self) -> SymMatrix:
        return pinv_psd(self.g_diff_psd, clip_tol=np.inf)


def compute_moments(pair: EnvPair, clip_tol: float = np.inf) -> MomentSummary:
    """Ĝ = XₑᵀXₑ/nₑ − XₒᵀXₒ/nₒ, Ẑ likewise, and the + counterparts."""
    if pair.shifted.p != pair.obs.p:
        raise InvalidInput("environments have different covariate counts")
    me = EnvMoments.of(pair.shifted)
    mo = EnvMoments.of(pair.obs)
    summary = MomentSummary(
        g_diff=SymMatrix.from_array(me.xx - mo.xx),
        g_plus=SymMatrix.from_array(me.xx + mo.xx),
        z_diff=me.xy - mo.xy,
        z_plus=me.xy + mo.xy,
        shifted=me,
        obs=mo,
        clip_tol=clip_tol,
    )
    log.debug("moments_computed", p=summary.p, n_e=me.n, n_o=mo.n)
    return summary


def _beta(beta: ArrayLike, p: int) -> NDArray[np.float64]:
    b = np.asarray(beta, dtype=np.float64).reshape(-1)
    if b.shape != (p,):
        raise InvalidInput(f"beta has length {b.shape[0]}, expected {p}")
    return b


def empirical_risk(d: Dataset, beta: ArrayLike) -> float:
    """(1/n)·Σᵢ (yᵢ − βᵀxᵢ)²."""
    r = d.y - d.x @ _beta(beta, d.p)
    return float(r @ r / d.n)


def risk_sum_hat(pair: EnvPair, beta: ArrayLike) -> float:
    """Pooled empirical risk R̂ₑ + R̂ₒ."""
    return empirical_risk(pair.shifted, beta) + empirical_risk(pair.obs, beta)


def risk_diff_hat(pair: EnvPair, beta: ArrayLike) -> float:
    """Empirical risk difference R̂ₑ − R̂ₒ (shifted minus observational)."""
    return empirical_risk(pair.shifted, beta) - empirical_risk(pair.obs, beta)


def regularizer_norm_hat(m: MomentSummary, beta: ArrayLike) -> float:
    """(clip(Ĝ)β − Ẑ)ᵀ · clip(Ĝ)^g · (clip(Ĝ)β − Ẑ)."""
    b = _beta(beta, m.p)
    r = m.g_diff_psd.entries @ b - m.z_diff
    return max(float(r @ m.g_diff_pinv.entries @ r), 0.0)


def regularizer_norm_hat_sqrt(m: MomentSummary, beta: ArrayLike) -> float:
    """‖(S^g)ᵀ(clip(Ĝ)β − Ẑ)‖₂² with S = psd_sqrt(clip(Ĝ)); same value, two factor steps."""
    b = _beta(beta, m.p)
    s = psd_sqrt(m.g_diff_psd, clip_tol=np.inf)
    s_g = pinv_psd(s, clip_tol=np.inf)
    v = s_g.entries.T @ (m.g_diff_psd.entries @ b - m.z_diff)
    return float(v @ v)
