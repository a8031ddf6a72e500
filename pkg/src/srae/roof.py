"""Numerical convex-roof minimisation over pure-state decompositions.

Every decomposition of ``rho = sum_j lam_j |v_j><v_j|`` (rank ``r``) into at
most ``m`` pure states is ``|psi~_i> = sum_j U_ij sqrt(lam_j) |v_j>`` for an
``m x r`` isometry ``U``.  Starting from isometries obtained by orthonormalising
seeded complex Gaussian matrices, a derivative-free pattern search applies
pairwise unitary mixings of ensemble members (a Givens rotation by a trial
angle, with a real or imaginary mixing phase, in both directions) and keeps any
move that lowers the ensemble average.  Disjoint member pairs are updated
together following a round-robin schedule, and all restarts advance in lock
step so the measure is evaluated on large batches.  The trial angle halves
whenever a full sweep gains less than ``tolerance``.

The search never differentiates the measure, so non-smooth measures are fine.
Whatever it returns is an upper bound on the true roof; no optimality
certificate is implied.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import linalg
from .measures import Cut, _as_cut
from .states import DensityMatrix, Ensemble, PureState

RANK_TOL = 1e-12
ZERO_WEIGHT = 1e-15


@dataclass(frozen=True)
class RoofConfig:
    """Search settings.  ``ensemble_size=None`` means ``min(r**2, r + 4)``."""

    ensemble_size: int | None = None
    restarts: int = 20
    max_iterations: int = 5000
    tolerance: float = 1e-8
    seed: int = 0
    min_step: float = 1e-3

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be > 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not 0 < self.min_step < np.pi:
            raise ValueError("min_step must lie in (0, pi)")


@dataclass(frozen=True, eq=False)
class RoofResult:
    value: float
    ensemble: Ensemble
    converged: bool
    iterations_used: int
    restart_values: tuple[float, ...] = ()
    label: str = "upper bound"


def _batch_fn(measure, dims, cut: Cut) -> Callable[[np.ndarray], np.ndarray]:
    if hasattr(measure, "batch"):
        return lambda amps: np.asarray(measure.batch(amps, dims, cut), dtype=float)

    def loop(amps):
        flat = amps.reshape(-1, amps.shape[-1])
        vals = [float(measure(PureState(dims, v), cut)) for v in flat]
        return np.asarray(vals).reshape(amps.shape[:-1])

    return loop


def _member_values(x: np.ndarray, fn) -> np.ndarray:
    """``p_i * measure(x_i / sqrt(p_i))`` for unnormalised members ``x``."""
    p = np.einsum("...k,...k->...", x.conj(), x).real
    tiny = p < ZERO_WEIGHT
    safe = np.where(tiny[..., None], 0.0, x / np.sqrt(np.where(tiny, 1.0, p))[..., None])
    # zero-weight members get a placeholder basis vector; their weight is 0 anyway
    safe[..., 0] = np.where(tiny, 1.0, safe[..., 0])
    shape = safe.shape
    vals = fn(safe.reshape(-1, shape[-1])).reshape(shape[:-1])
    return np.where(tiny, 0.0, p * vals)


def _round_robin(m: int) -> list[tuple[np.ndarray, np.ndarray]]:
    idx: list[int | None] = list(range(m)) + ([None] if m % 2 else [])
    n = len(idx)
    rounds = []
    for _ in range(n - 1):
        pairs = [(idx[i], idx[n - 1 - i]) for i in range(n // 2)]
        pairs = [(i, j) for i, j in pairs if i is not None and j is not None]
        rounds.append((np.array([i for i, _ in pairs]), np.array([j for _, j in pairs])))
        idx = [idx[0], idx[-1]] + idx[1:-1]
    return rounds


_PHASES = np.array([1.0, -1.0, 1.0j, -1.0j])


def _pattern_search(b: np.ndarray, m: int, fn, config: RoofConfig):
    r = b.shape[0]
    starts = []
    for k in range(config.restarts):
        rng = np.random.default_rng([config.seed, k])
        g = rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r))
        q, _ = np.linalg.qr(g)
        starts.append(q)
    x = np.stack(starts) @ b  # (R, m, D)
    vals = _member_values(x, fn)
    n_restarts = x.shape[0]
    step = np.full(n_restarts, np.pi / 4)
    active = np.ones(n_restarts, bool)
    sweeps = np.zeros(n_restarts, int)
    schedule = _round_robin(m)
    while active.any():
        idx = np.flatnonzero(active)
        xa, va, sa = x[idx], vals[idx], step[idx]
        before = va.sum(axis=1)
        c = np.cos(sa)[:, None, None, None]
        s = np.sin(sa)[:, None, None, None]
        e = _PHASES[None, None, :, None]
        for i, j in schedule:
            xi, xj = xa[:, i, None, :], xa[:, j, None, :]
            ni = c * xi + s * e * xj
            nj = -s * np.conj(e) * xi + c * xj
            both = _member_values(np.stack([ni, nj]), fn)
            trial = both[0] + both[1]
            best_k = np.argmin(trial, axis=2)
            best = np.take_along_axis(trial, best_k[..., None], 2)[..., 0]
            rr, qq = np.nonzero(best < va[:, i] + va[:, j] - 1e-15)
            if rr.size:
                kk = best_k[rr, qq]
                xa[rr, i[qq]] = ni[rr, qq, kk]
                xa[rr, j[qq]] = nj[rr, qq, kk]
                va[rr, i[qq]] = both[0, rr, qq, kk]
                va[rr, j[qq]] = both[1, rr, qq, kk]
        x[idx], vals[idx] = xa, va
        sweeps[idx] += 1
        stalled = before - va.sum(axis=1) < config.tolerance
        step[idx[stalled]] /= 2
        active &= (step >= config.min_step) & (sweeps < config.max_iterations)
    return x, vals.sum(axis=1), step < config.min_step, sweeps


def _ensemble_from_members(x: np.ndarray, dims, target: DensityMatrix) -> Ensemble:
    p = np.einsum("ik,ik->i", x.conj(), x).real
    keep = p > ZERO_WEIGHT
    x, p = x[keep], p[keep]
    states = tuple(PureState(dims, v / np.sqrt(pi)) for v, pi in zip(x, p))
    return Ensemble(p / p.sum(), states, target=target)


def evaluate_ensemble(ensemble: Ensemble, cut, measure) -> float:
    """Ensemble average ``sum_i p_i measure(psi_i, cut)``."""
    dims = ensemble.dims
    cut = _as_cut(cut, len(dims))
    fn = _batch_fn(measure, dims, cut)
    amps = np.stack([s.amplitudes for s in ensemble.states])
    return float(np.dot(ensemble.weights, fn(amps)))


def optimize_roof(rho: DensityMatrix, cut, measure, config: RoofConfig | None = None) -> RoofResult:
    """Best decomposition found for ``min sum_i p_i measure(psi_i)``.

    Parameters
    ----------
    rho : DensityMatrix
        State to decompose.
    cut : Cut or int
        Passed through to the measure; an int means that subsystem against
        the rest.
    measure : callable
        ``measure(psi, cut) -> float``, nonnegative and deterministic.
        Objects with a ``batch(amps, dims, cut)`` method are evaluated in
        vectorised form.
    config : RoofConfig, optional

    Returns
    -------
    RoofResult
        ``value`` is the lowest ensemble average over all restarts (ties go to
        the lowest restart index) and is always an upper bound on the roof.
        ``converged`` is False when ``max_iterations`` ran out first.
    """
    config = config or RoofConfig()
    dims = rho.dims
    cut = _as_cut(cut, len(dims))
    fn = _batch_fn(measure, dims, cut)
    w, v = linalg.eig_hermitian(rho.matrix)
    keep = w > RANK_TOL
    w, v = w[keep], v[:, keep]
    rank = int(keep.sum())
    if rank == 1:
        psi = PureState.from_unnormalized(dims, v[:, 0])
        ens = Ensemble(np.ones(1), (psi,))
        return RoofResult(evaluate_ensemble(ens, cut, measure), ens, True, 0, ())
    m = config.ensemble_size or min(rank * rank, rank + 4)
    if m < rank:
        raise ValueError(f"ensemble_size {m} is below the rank {rank} of the state")
    b = (v * np.sqrt(w)).T  # row j is sqrt(lam_j) v_j
    x, totals, conv, sweeps = _pattern_search(b, m, fn, config)
    best = int(np.argmin(totals))
    ens = _ensemble_from_members(x[best], dims, target=rho)
    value = evaluate_ensemble(ens, cut, measure)
    return RoofResult(
        value=value,
        ensemble=ens,
        converged=bool(conv[best]),
        iterations_used=int(sweeps[best]),
        restart_values=tuple(float(t) for t in totals),
    )

