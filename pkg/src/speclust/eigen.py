"""Restarted Lanczos eigensolver for symmetric operators.

Computes the k algebraically largest eigenpairs through a
reverse-communication interface: the session hands out a vector, the
caller applies the operator and hands the product back, and the session
advances one Lanczos step. The basis is fully reorthogonalized every
step (two classical Gram-Schmidt passes). When the subspace is full the
projected eigenproblem is solved densely; unconverged runs restart
thickly, retaining the wanted Ritz vectors in the basis, so the
projected matrix is tridiagonal with an arrowhead column after each
restart and is therefore stored dense.

Invariant subspaces (a residual numerically zero before the basis is
full) are escaped by injecting a fresh orthogonal direction drawn from
the session RNG, with zero coupling recorded in the projection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadConfig,
    Breakdown,
    MaxRestartsExceeded,
    NotConverged,
    NotSquare,
    NotSymmetric,
    SpeclustError,
)
from .sparse import CsrMatrix

__all__ = [
    "LanczosConfig",
    "EigenBasis",
    "RciSession",
    "default_subspace_dim",
    "rci_new",
    "rci_advance",
    "rci_extract",
    "eigensolve",
]

NEED_MATVEC = "need_matvec"
CONVERGED = "converged"
FAILED = "failed"

_BREAKDOWN_RTOL = 1e-13


def default_subspace_dim(n: int, k: int) -> int:
    """Default Lanczos basis size: 2k with a floor of k+8, capped at n."""
    return min(n, max(2 * k, k + 8))


@dataclass(frozen=True)
class LanczosConfig:
    """Solver parameters. ``m`` is the subspace dimension; when None it
    is sized by :func:`default_subspace_dim` at session creation."""

    k: int
    m: int | None = None
    tol: float = 1e-8
    max_restarts: int = 300
    seed: int = 0


@dataclass(frozen=True)
class EigenBasis:
    """k eigenpairs: values sorted descending, unit-norm vector columns,
    and the true residual norm per pair."""

    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray

    def __post_init__(self):
        for name in ("values", "vectors", "residuals"):
            a = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            a.flags.writeable = False
            object.__setattr__(self, name, a)


class RciSession:
    """Single-owner mutable Lanczos state.

    While ``state == "need_matvec"`` the caller must write the operator
    applied to ``in_slot`` into ``out_slot`` and call
    :func:`rci_advance`.
    """

    def __init__(self, n: int, cfg: LanczosConfig):
        k = cfg.k
        m = cfg.m if cfg.m is not None else default_subspace_dim(n, k)
        if not (1 <= k < m <= n):
            raise BadConfig(f"need 1 <= k < m <= n, got k={k}, m={m}, n={n}")
        if not cfg.tol > 0:
            raise BadConfig(f"tol must be positive, got {cfg.tol}")
        if cfg.max_restarts < 0:
            raise BadConfig(f"max_restarts must be nonnegative, got {cfg.max_restarts}")
        self.n = n
        self.k = k
        self.m = m
        self.tol = float(cfg.tol)
        self.max_restarts = cfg.max_restarts
        self.state = NEED_MATVEC
        self.out_slot = np.zeros(n)
        self.restart_count = 0
        self.breakdown_count = 0
        self.residual_history: list[float] = []
        self._rng = np.random.default_rng(cfg.seed)
        self._basis = np.zeros((n, m + 1))
        self._proj = np.zeros((m, m))
        self._scale = 0.0
        self._values = None
        self._vectors = None
        self._estimates = None
        self._pending_verify = None
        start = self._rng.standard_normal(n)
        self._basis[:, 0] = start / np.linalg.norm(start)
        self._j = 0
        self._set_in_slot()

    def _set_in_slot(self):
        v = np.ascontiguousarray(self._basis[:, self._j])
        v.flags.writeable = False
        self.in_slot = v

    def _orthogonalize(self, w: np.ndarray, count: int) -> np.ndarray:
        basis = self._basis[:, :count]
        for _ in range(2):
            w = w - basis @ (basis.T @ w)
        return w

    def _fresh_direction(self, count: int, is_breakdown: bool = True) -> np.ndarray:
        """Unit vector orthogonal to the current basis, for escaping an
        invariant subspace or seeding a verification sweep."""
        for _ in range(3):
            v = self._orthogonalize(self._rng.standard_normal(self.n), count)
            norm = np.linalg.norm(v)
            if norm > 1e-6 * np.sqrt(self.n):
                if is_breakdown:
                    self.breakdown_count += 1
                return v / norm
        self.state = FAILED
        raise Breakdown(
            f"could not extend the basis past {count} vectors"
        )

    def _advance(self) -> str:
        if self.state != NEED_MATVEC:
            raise SpeclustError(f"advance called in state {self.state!r}")
        j = self._j
        q = self._basis[:, j]
        w = np.asarray(self.out_slot, dtype=np.float64).copy()
        if w.shape != (self.n,):
            raise BadConfig(f"out_slot must have shape ({self.n},)")
        if not np.all(np.isfinite(w)):
            raise BadConfig("out_slot contains non-finite values")
        alpha = q @ w
        self._proj[j, j] = alpha
        w -= self._basis[:, : j + 1] @ self._proj[: j + 1, j]
        w = self._orthogonalize(w, j + 1)
        beta = float(np.linalg.norm(w))
        self._scale = max(self._scale, abs(alpha), beta)
        if j + 1 == self.m:
            self._finish_sweep(w, beta)
        else:
            if beta > _BREAKDOWN_RTOL * max(1.0, self._scale):
                self._basis[:, j + 1] = w / beta
                self._proj[j, j + 1] = self._proj[j + 1, j] = beta
            else:
                self._basis[:, j + 1] = self._fresh_direction(j + 1)
                self._proj[j, j + 1] = self._proj[j + 1, j] = 0.0
            self._j = j + 1
            self._set_in_slot()
        return self.state

    def _verified(self, theta: np.ndarray) -> bool:
        if self._pending_verify is None:
            return False
        slack = np.maximum(1.0, np.abs(theta)) * max(self.tol, 1e-12)
        return bool(np.all(np.abs(theta - self._pending_verify) <= slack))

    def _finish_sweep(self, w: np.ndarray, beta: float):
        k, m = self.k, self.m
        theta, s = np.linalg.eigh(self._proj)
        order = np.argsort(-theta, kind="stable")
        theta = theta[order]
        s = s[:, order]
        estimates = beta * np.abs(s[m - 1, :k])
        self.residual_history.append(float(estimates.max()))
        converged = bool(
            np.all(estimates <= self.tol * np.maximum(1.0, np.abs(theta[:k])))
        )
        # a single Lanczos recurrence cannot see extra copies of a
        # degenerate eigenvalue, so a converged set is only accepted
        # after a sweep seeded with a fresh random direction confirms
        # the wanted values (unnecessary when the basis spans everything)
        if converged and (m == self.n or self._verified(theta[:k])):
            vectors = self._basis[:, :m] @ s[:, :k]
            vectors /= np.linalg.norm(vectors, axis=0)
            self._values = theta[:k].copy()
            self._vectors = vectors
            self._estimates = estimates
            self.state = CONVERGED
            return
        if self.restart_count >= self.max_restarts:
            self.state = FAILED
            raise MaxRestartsExceeded(
                f"{self.restart_count} restarts without verified convergence; "
                f"worst residual estimate {estimates.max():.3e}",
                values=theta[:k].copy(),
                residuals=estimates,
            )
        # thick restart: keep the wanted Ritz vectors, then continue the
        # recurrence from the current residual direction (or from a
        # random one when starting a verification sweep)
        self.restart_count += 1
        retained = self._basis[:, :m] @ s[:, :k]
        coupling = beta * s[m - 1, :k]
        self._basis[:, :k] = retained
        self._proj[:] = 0.0
        self._proj[np.arange(k), np.arange(k)] = theta[:k]
        if converged:
            self._pending_verify = theta[:k].copy()
            self._basis[:, k] = self._fresh_direction(k, is_breakdown=False)
        else:
            self._pending_verify = None
            if beta > _BREAKDOWN_RTOL * max(1.0, self._scale):
                self._basis[:, k] = w / beta
                self._proj[:k, k] = coupling
                self._proj[k, :k] = coupling
            else:
                self._basis[:, k] = self._fresh_direction(k)
        self._j = k
        self._set_in_slot()

    def _extract(self, apply) -> EigenBasis:
        if self.state != CONVERGED:
            raise NotConverged(f"extract called in state {self.state!r}")
        residuals = np.empty(self.k)
        for i in range(self.k):
            v = self._vectors[:, i]
            residuals[i] = np.linalg.norm(apply(v) - self._values[i] * v)
        return EigenBasis(self._values, self._vectors, residuals)


def rci_new(n: int, cfg: LanczosConfig) -> RciSession:
    """Create a session with a deterministic unit start vector in
    ``in_slot`` and state ``"need_matvec"``."""
    return RciSession(n, cfg)


def rci_advance(session: RciSession) -> str:
    """Advance one Lanczos step after the caller filled ``out_slot``;
    returns the new state."""
    return session._advance()


def rci_extract(session: RciSession, apply) -> EigenBasis:
    """Extract the converged eigenpairs; ``apply`` performs one operator
    application per pair to measure true residuals."""
    return session._extract(apply)


def _fast_apply(a: CsrMatrix):
    rows = a.row_indices()
    n = a.n_rows

    def apply(x: np.ndarray) -> np.ndarray:
        return np.bincount(rows, weights=a.vals * x[a.col_idx], minlength=n)

    return apply


def _check_symmetric(a: CsrMatrix, apply, seed: int):
    rng = np.random.default_rng([seed, 1])
    vmax = float(np.abs(a.vals).max()) if a.nnz else 0.0
    for _ in range(3):
        x = rng.standard_normal(a.n_rows)
        y = rng.standard_normal(a.n_rows)
        gap = abs(x @ apply(y) - y @ apply(x))
        scale = max(1.0, vmax) * np.linalg.norm(x) * np.linalg.norm(y)
        if gap > 1e-10 * scale:
            raise NotSymmetric(f"asymmetry {gap:.3e} exceeds tolerance {1e-10 * scale:.3e}")


def eigensolve(a: CsrMatrix, cfg: LanczosConfig) -> EigenBasis:
    """Top-k eigenpairs of a symmetric sparse matrix: drives the
    reverse-communication loop with the matrix-vector product."""
    if a.n_rows != a.n_cols:
        raise NotSquare(f"eigensolve requires a square matrix, got {a.n_rows}x{a.n_cols}")
    apply = _fast_apply(a)
    _check_symmetric(a, apply, cfg.seed)
    session = rci_new(a.n_rows, cfg)
    while session.state == NEED_MATVEC:
        session.out_slot = apply(session.in_slot)
        rci_advance(session)
    return rci_extract(session, apply)
