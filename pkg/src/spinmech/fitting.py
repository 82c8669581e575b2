"""Levenberg-Marquardt least squares shared by the field, resonator and echo fits."""
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, RankDeficient

LAMBDA_START = 1e-3
LAMBDA_FACTOR = 10.0
LAMBDA_MAX = 1e16


@dataclass
class LMResult:
    x: np.ndarray
    residuals: np.ndarray
    jacobian: np.ndarray
    iterations: int
    converged: bool

    @property
    def cost(self):
        return float(self.residuals @ self.residuals)

    def covariance(self, scale_by_residual=True):
        """Parameter covariance ``s^2 (J^T J)^-1``.

        With ``scale_by_residual`` the residual variance ``s^2`` is estimated
        from the sum of squares over ``n - p`` degrees of freedom.
        """
        cov = _inverse_normal_matrix(self.jacobian)
        if scale_by_residual:
            dof = self.residuals.size - self.x.size
            s2 = self.cost / dof if dof > 0 else np.inf
            cov = cov * s2
        return cov


def _column_norms(jac):
    d = np.sqrt(np.einsum("ij,ij->j", jac, jac))
    return d


def _check_rank(jac, rcond):
    d = _column_norms(jac)
    if np.any(d == 0.0) or not np.all(np.isfinite(d)):
        raise RankDeficient("a parameter has no influence on the residuals")
    sv = np.linalg.svd(jac / d, compute_uv=False)
    if sv[-1] <= rcond * sv[0]:
        raise RankDeficient(
            f"Jacobian is rank deficient (singular value ratio {sv[-1] / sv[0]:.3g})")


def _inverse_normal_matrix(jac):
    d = _column_norms(jac)
    d = np.where(d == 0.0, 1.0, d)
    js = jac / d
    inv = np.linalg.pinv(js.T @ js)
    return inv / np.outer(d, d)


def levenberg_marquardt(fun, jac, x0, *, max_iter=200, xtol=1e-13, ftol=1e-15,
                        rcond=1e-12, lambda0=LAMBDA_START):
    """Minimise ``sum(fun(x)**2)`` with Marquardt-scaled damping.

    ``fun(x)`` returns the residual vector, ``jac(x)`` its Jacobian. The damping
    term is ``lambda * diag(J^T J)``; lambda starts at ``lambda0``, is divided
    by 10 after an accepted step and multiplied by 10 after a rejected one.

    Raises
    ------
    RankDeficient
        If the Jacobian at the start or at the solution is numerically
        rank deficient.
    NoConvergence
        If ``max_iter`` trial steps pass without meeting the tolerances.
    """
    x = np.array(x0, dtype=float)
    r = np.asarray(fun(x), dtype=float)
    J = np.asarray(jac(x), dtype=float)
    if r.size < x.size:
        raise RankDeficient(f"{r.size} residuals for {x.size} parameters")
    _check_rank(J, rcond)
    cost = float(r @ r)
    lam = lambda0
    converged = cost == 0.0
    it = 0
    while not converged:
        if it >= max_iter:
            raise NoConvergence(f"no convergence after {max_iter} iterations")
        it += 1
        # Marquardt step from the column-scaled augmented least-squares
        # problem; avoids squaring the condition number of J
        dnorm = _column_norms(J)
        dnorm = np.where(dnorm > 0, dnorm, 1.0)
        Js = J / dnorm
        aug = np.vstack([Js, np.sqrt(lam) * np.eye(x.size)])
        rhs = np.concatenate([-r, np.zeros(x.size)])
        step = np.linalg.lstsq(aug, rhs, rcond=None)[0] / dnorm
        x_new = x + step
        r_new = np.asarray(fun(x_new), dtype=float)
        cost_new = float(r_new @ r_new) if np.all(np.isfinite(r_new)) else np.inf
        if cost_new < cost:
            small_step = np.linalg.norm(dnorm * step) <= xtol * (np.linalg.norm(dnorm * x_new) + xtol)
            small_gain = cost - cost_new <= ftol * cost
            x, r, cost = x_new, r_new, cost_new
            J = np.asarray(jac(x), dtype=float)
            lam = max(lam / LAMBDA_FACTOR, 1e-20)
            converged = small_step or small_gain or cost == 0.0
        else:
            lam *= LAMBDA_FACTOR
            if lam > LAMBDA_MAX:
                # no descent left even for vanishing steps: numerical minimum
                converged = True
    _check_rank(J, rcond)
    return LMResult(x=x, residuals=r, jacobian=J, iterations=it, converged=True)
