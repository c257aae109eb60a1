"""Finite-sample worst-risk bounds: pure functions, no sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from causal_reg.errors import InvalidInput
from causal_reg.models import Dataset, EnvPair
from causal_reg.population import PopulationQuantities


def phi(p: int, n: float, q: float = 1.0, var_y: float = 1.0, max_var_x: float = 1.0) -> float:
    """V[Y]·max_k V[X_k]·(√(a/n) + a/n) with a = 4q + 8·ln p; 0 at n = ∞."""
    if p < 1:
        raise InvalidInput(f"p must be >= 1, got {p}")
    if not n >= 1:
        raise InvalidInput(f"n must be >= 1, got {n}")
    if not q > 0:
        raise InvalidInput(f"q must be positive, got {q}")
    if var_y < 0 or max_var_x < 0:
        raise InvalidInput("variances must be nonneg")
    if math.isinf(n):
        return 0.0
    a = 4.0 * q + 8.0 * math.log(p)
    return var_y * max_var_x * (math.sqrt(a / n) + a / n)


def _variances(d: Dataset) -> tuple[float, float]:
    ddof = 1 if d.n > 1 else 0
    return float(np.var(d.y, ddof=ddof)), float(np.max(np.var(d.x, axis=0, ddof=ddof)))


@dataclass(frozen=True)
class BoundInputs:
    """Dimension, sample sizes, tail parameter and the variances entering φ.

    plug_in records whether the variances are sample estimates.
    """

    p: int
    n_e: float
    n_o: float
    var_y_e: float
    var_y_o: float
    max_var_x_e: float
    max_var_x_o: float
    q: float = 1.0
    plug_in: bool = True

    @classmethod
    def from_pair(cls, pair: EnvPair, q: float = 1.0) -> BoundInputs:
        vy_e, vx_e = _variances(pair.shifted)
        vy_o, vx_o = _variances(pair.obs)
        return cls(
            p=pair.p, n_e=pair.shifted.n, n_o=pair.obs.n,
            var_y_e=vy_e, var_y_o=vy_o, max_var_x_e=vx_e, max_var_x_o=vx_o,
            q=q, plug_in=True,
        )

    @classmethod
    def from_population(
        cls, pq: PopulationQuantities, n_e: float, n_o: float, q: float = 1.0,
    ) -> BoundInputs:
        return cls(
            p=pq.p, n_e=n_e, n_o=n_o,
            var_y_e=pq.y_variance(1.0),
            var_y_o=pq.y_variance(0.0),
            max_var_x_e=float(np.max(np.diag(pq.x_second_moment(1.0)))),
            max_var_x_o=float(np.max(np.diag(pq.x_second_moment(0.0)))),
            q=q, plug_in=False,
        )

    @property
    def phi_e(self) -> float:
        return phi(self.p, self.n_e, self.q, self.var_y_e, self.max_var_x_e)

    @property
    def phi_o(self) -> float:
        return phi(self.p, self.n_o, self.q, self.var_y_o, self.max_var_x_o)

    @property
    def phi_plus(self) -> float:
        """φ₊ = φ(p, n_e) + φ(p, n_o)."""
        return self.phi_e + self.phi_o


def _l1_factor(beta: ArrayLike) -> float:
    """‖β‖₁² + 1."""
    b = np.asarray(beta, dtype=np.float64).reshape(-1)
    return float(np.abs(b).sum()) ** 2 + 1.0


def _check_tau(tau: float) -> None:
    if tau < 0:
        raise InvalidInput(f"tau must be nonneg, got {tau}")


def bound_core(r_pred_hat: float, r_diff_hat: float, tau: float) -> float:
    """½R̂pred + ((1+2τ)/2)·|R̂diff|."""
    _check_tau(tau)
    return 0.5 * r_pred_hat + 0.5 * (1.0 + 2.0 * tau) * abs(r_diff_hat)


def eta(inputs: BoundInputs, beta: ArrayLike, tau: float) -> float:
    """(1+τ)(‖β‖₁²+1)·φ₊."""
    _check_tau(tau)
    return (1.0 + tau) * _l1_factor(beta) * inputs.phi_plus


def worst_risk_bound(
    inputs: BoundInputs,
    beta: ArrayLike,
    r_pred_hat: float,
    r_diff_hat: float,
    tau: float,
) -> float:
    """Upper bound on the population worst risk over C_{1+τ}."""
    return bound_core(r_pred_hat, r_diff_hat, tau) + eta(inputs, beta, tau)


def sample_risk_bound(
    inputs: BoundInputs,
    beta: ArrayLike,
    r_pred_hat: float,
    r_diff_hat: float,
    tau: float,
    n_new: float,
    var_y_new: float | None = None,
    max_var_x_new: float | None = None,
) -> float:
    """Upper bound on the empirical risk of a fresh sample of size n_new.

    The new sample's variances default to the shifted environment's.
    """
    phi_new = phi(
        inputs.p,
        n_new,
        inputs.q,
        inputs.var_y_e if var_y_new is None else var_y_new,
        inputs.max_var_x_e if max_var_x_new is None else max_var_x_new,
    )
    slack = _l1_factor(beta) * ((1.0 + tau) * inputs.phi_plus + phi_new)
    return bound_core(r_pred_hat, r_diff_hat, tau) + slack


def normalized_excess_risk(beta: ArrayLike, sup_risk: float, core: float, tau: float) -> float:
    """(sup_τ R(β) − core) / ((1+τ)(‖β‖₁²+1))."""
    _check_tau(tau)
    return (sup_risk - core) / ((1.0 + tau) * _l1_factor(beta))


def predicted_excess_risk(inputs: BoundInputs) -> float:
    """The normalized slack the bound allows, φ₊."""
    return inputs.phi_plus
