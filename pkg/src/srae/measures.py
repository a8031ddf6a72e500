"""Bipartite entanglement measures built on Renyi-alpha entropies.

All entropies are in bits.  ``f_alpha`` maps a squared concurrence ``x`` to
the Renyi-alpha entanglement of a two-qubit (or qubit-qudit) state::

    f_alpha(x) = log2[((1 - sqrt(1-x))/2)**alpha + ((1 + sqrt(1-x))/2)**alpha] / (1 - alpha)

and reduces to the binary entropy of ``(1 + sqrt(1-x))/2`` at ``alpha = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod, sqrt
from typing import Iterable

import numpy as np

from . import linalg
from .errors import DimensionError, MissingConcurrenceError, WindowError
from .states import DensityMatrix, PureState

ALPHA_C = (sqrt(7) - 1) / 2
ALPHA_C2 = (sqrt(13) - 1) / 2
WINDOW_SLACK = 1e-12
EOF_BAND = 1e-6
RANK_TOL = 1e-10
# eigenvalues below this are roundoff; w**alpha would inflate them for alpha < 1
SPECTRUM_FLOOR = 1e-14

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
_YY = np.kron(SIGMA_Y, SIGMA_Y)


@dataclass(frozen=True)
class AlphaOrder:
    """A Renyi order with its validity-window flags."""

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not np.isfinite(a) or a <= 0:
            raise WindowError(f"Renyi order must be positive, got {self.alpha}")
        object.__setattr__(self, "alpha", a)

    @property
    def is_eof_limit(self) -> bool:
        return abs(self.alpha - 1.0) < EOF_BAND

    @property
    def in_two_qubit_window(self) -> bool:
        return self.alpha >= ALPHA_C - WINDOW_SLACK

    @property
    def in_concave_window(self) -> bool:
        return ALPHA_C - WINDOW_SLACK <= self.alpha <= ALPHA_C2 + WINDOW_SLACK

    def __float__(self) -> float:
        return self.alpha


def as_alpha(alpha) -> AlphaOrder:
    return alpha if isinstance(alpha, AlphaOrder) else AlphaOrder(alpha)


def require_two_qubit_window(alpha) -> AlphaOrder:
    a = as_alpha(alpha)
    if not a.in_two_qubit_window:
        raise WindowError(
            f"order outside analytic-formula window: alpha={a.alpha} < (sqrt(7)-1)/2 ~ {ALPHA_C:.6f}"
        )
    return a


def require_concave_window(alpha) -> AlphaOrder:
    a = as_alpha(alpha)
    if not a.in_concave_window:
        raise WindowError(
            f"qubit-qudit closed-form window violated: alpha={a.alpha} not in "
            f"[{ALPHA_C:.6f}, {ALPHA_C2:.6f}]"
        )
    return a


@dataclass(frozen=True)
class Cut:
    """Bipartition of subsystem indices into ``side_a | side_b``."""

    side_a: frozenset
    side_b: frozenset

    def __post_init__(self):
        a, b = frozenset(int(i) for i in self.side_a), frozenset(int(i) for i in self.side_b)
        if not a or not b:
            raise DimensionError("both sides of a cut must be non-empty")
        if a & b:
            raise DimensionError(f"cut sides overlap: {sorted(a & b)}")
        object.__setattr__(self, "side_a", a)
        object.__setattr__(self, "side_b", b)

    @classmethod
    def split(cls, side_a: Iterable[int] | int, n: int) -> "Cut":
        """``side_a`` against every other of the ``n`` subsystems."""
        a = {side_a} if isinstance(side_a, (int, np.integer)) else set(side_a)
        return cls(frozenset(a), frozenset(range(n)) - frozenset(a))

    def check(self, dims) -> None:
        n = len(dims)
        if self.side_a | self.side_b != frozenset(range(n)):
            raise DimensionError(f"cut {self} is not exhaustive over {n} subsystems")

    def dim_a(self, dims) -> int:
        return prod(dims[i] for i in self.side_a)

    def dim_b(self, dims) -> int:
        return prod(dims[i] for i in self.side_b)

    def __str__(self) -> str:
        return f"{sorted(self.side_a)}|{sorted(self.side_b)}"


def _as_cut(cut, n: int) -> Cut:
    return cut if isinstance(cut, Cut) else Cut.split(cut, n)


# -- entropies ----------------------------------------------------------------


def renyi_from_spectrum(w, alpha) -> np.ndarray | float:
    """Renyi-alpha entropy (bits) of spectra along the last axis.

    Zero eigenvalues (anything below 1e-14) contribute nothing; the von
    Neumann entropy is used when ``|alpha - 1| < 1e-6``.
    """
    a = as_alpha(alpha)
    w = np.asarray(w, dtype=float)
    w = np.where(w < SPECTRUM_FLOOR, 0.0, w)
    if a.is_eof_limit:
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(w > 0, -w * np.log2(np.where(w > 0, w, 1.0)), 0.0)
        out = terms.sum(axis=-1)
    else:
        out = np.log2(np.sum(w**a.alpha, axis=-1)) / (1.0 - a.alpha)
    out = np.maximum(out, 0.0) + 0.0  # + 0.0 turns -0.0 into 0.0
    return float(out) if np.ndim(out) == 0 else out


def renyi_entropy(rho, alpha) -> float:
    """Renyi-alpha entropy in bits of a density matrix (or raw Hermitian array)."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else rho
    w = linalg.clip_spectrum(linalg.eigvals_hermitian(m))
    return renyi_from_spectrum(w, alpha)


def pure_renyi_from_c2(x, alpha):
    """Renyi-alpha entropy of a qubit marginal whose state has squared concurrence ``x``.

    This is the pure-state identity behind ``f_alpha``; it holds for every
    ``alpha > 0``, with no window restriction.
    """
    a = as_alpha(alpha)
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    r = np.sqrt(1.0 - x)
    lo, hi = (1.0 - r) / 2.0, (1.0 + r) / 2.0
    if a.is_eof_limit:
        with np.errstate(divide="ignore", invalid="ignore"):
            val = -hi * np.log2(hi) - np.where(lo > 0, lo * np.log2(np.where(lo > 0, lo, 1.0)), 0.0)
    else:
        val = np.log2(lo**a.alpha + hi**a.alpha) / (1.0 - a.alpha)
    val = np.where(x >= 1.0 - 1e-12, 1.0, np.clip(val, 0.0, 1.0)) + 0.0
    return float(val) if np.ndim(val) == 0 else val


def f_alpha(x, alpha):
    """Renyi-alpha entanglement as a function of the squared concurrence.

    Parameters
    ----------
    x : float or array_like
        Squared concurrence; values within 1e-12 outside ``[0, 1]`` are clamped.
    alpha : float or AlphaOrder
        Renyi order, at least ``(sqrt(7)-1)/2``.
    """
    require_two_qubit_window(alpha)
    x = np.asarray(x, dtype=float)
    if np.any(x < -1e-12) or np.any(x > 1 + 1e-12):
        raise ValueError("squared concurrence must lie in [0, 1]")
    return pure_renyi_from_c2(x, alpha)


# -- concurrences -------------------------------------------------------------


def concurrence_pure(psi: PureState, cut) -> float:
    """``sqrt(2 (1 - Tr rho_A^2))`` for the ``side_a`` marginal of ``psi``."""
    cut = _as_cut(cut, psi.n_parties)
    cut.check(psi.dims)
    rho_a = psi.marginal(sorted(cut.side_a))
    purity = float(np.real(np.vdot(rho_a, rho_a)))
    return sqrt(max(0.0, 2.0 * (1.0 - purity)))


def _two_qubit_matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        if tuple(rho.dims) != (2, 2):
            raise DimensionError("two-qubit input required")
        return rho.matrix
    m = np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise DimensionError("two-qubit input required")
    return m


def _wootters_lambdas(rhos: np.ndarray) -> np.ndarray:
    """Square roots of the eigenvalues of ``sqrt(rho) rho~ sqrt(rho)``, descending.

    With ``rho = X X^dagger`` these are the singular values of
    ``X^T (sigma_y x sigma_y) X``.  Taking singular values directly avoids the
    square root of roundoff-level eigenvalues, which would otherwise leave
    errors near 1e-8 on rank-deficient inputs.
    """
    w, v = np.linalg.eigh(rhos)
    w = np.where(w < SPECTRUM_FLOOR, 0.0, w)
    x = v * np.sqrt(w)[..., None, :]
    t = np.swapaxes(x, -1, -2) @ _YY @ x
    return np.linalg.svd(t, compute_uv=False)


def concurrence_wootters(rho) -> float:
    """Two-qubit concurrence ``max(0, l1 - l2 - l3 - l4)`` (Wootters)."""
    m = _two_qubit_matrix(rho)
    linalg.clip_spectrum(linalg.eigvals_hermitian(m))  # rejects non-PSD input
    lam = _wootters_lambdas(m)
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def concurrence_wootters_batch(rhos: np.ndarray) -> np.ndarray:
    """Vectorised Wootters concurrence for a stack of 4x4 density matrices."""
    lam = _wootters_lambdas(np.asarray(rhos, dtype=complex))
    return np.clip(lam[..., 0] - lam[..., 1] - lam[..., 2] - lam[..., 3], 0.0, 1.0)


def pair_squared_concurrences(psi: PureState, focus: int = 0) -> dict[int, float]:
    """Wootters ``C^2`` between ``focus`` and every other qubit of a pure state."""
    others = [i for i in range(psi.n_parties) if i != focus]
    rhos = np.stack([psi.marginal(sorted((focus, i))) for i in others])
    c = concurrence_wootters_batch(rhos)
    return {i: float(ci) ** 2 for i, ci in zip(others, c)}


# -- Renyi-alpha entanglement -------------------------------------------------


def e_alpha_pure(psi: PureState, cut, alpha) -> float:
    """Renyi-alpha entropy of the ``side_a`` marginal of a pure state."""
    cut = _as_cut(cut, psi.n_parties)
    cut.check(psi.dims)
    # the nonzero spectra of the two marginals coincide; diagonalise the smaller
    side = cut.side_a if cut.dim_a(psi.dims) <= cut.dim_b(psi.dims) else cut.side_b
    return renyi_entropy(psi.marginal(sorted(side)), alpha)


def e_alpha_two_qubit(rho, alpha) -> float:
    require_two_qubit_window(alpha)
    return float(f_alpha(concurrence_wootters(rho) ** 2, alpha))


def _ordered(rho: DensityMatrix, cut: Cut) -> tuple[np.ndarray, int, int]:
    order = sorted(cut.side_a) + sorted(cut.side_b)
    m = linalg.permute_subsystems(rho.matrix, rho.dims, order)
    return m, cut.dim_a(rho.dims), cut.dim_b(rho.dims)


def qubit_qudit_squared_concurrence(
    rho: DensityMatrix, cut, c_squared: float | None = None, roof=None
) -> tuple[float, str]:
    """Squared concurrence of a qubit-qudit state and where it came from.

    Sources are tried in order:

    ``"supplied"``
        the caller passed ``c_squared``.
    ``"pure"``
        ``rho`` has rank one.
    ``"logical-qubit"``
        the qudit marginal has support of dimension <= 2, so the state is a
        two-qubit state in disguise and Wootters' formula is exact.
    ``"roof-upper-bound"``
        a :class:`~srae.roof.RoofConfig` was given; the result is the best
        decomposition found for the squared concurrence, an upper bound.

    Raises :class:`MissingConcurrenceError` when none applies.
    """
    cut = _as_cut(cut, rho.n_parties)
    cut.check(rho.dims)
    if cut.dim_a(rho.dims) != 2:
        raise DimensionError("side_a must be a single qubit")
    if c_squared is not None:
        c2 = float(c_squared)
        if not -1e-12 <= c2 <= 1 + 1e-12:
            raise ValueError("squared concurrence must lie in [0, 1]")
        return min(max(c2, 0.0), 1.0), "supplied"
    m, da, db = _ordered(rho, cut)
    w, v = np.linalg.eigh(m)
    if np.sum(w > RANK_TOL) == 1:
        psi = PureState.from_unnormalized((da, db), v[:, -1])
        return concurrence_pure(psi, Cut(frozenset({0}), frozenset({1}))) ** 2, "pure"
    rho_b = linalg.partial_trace(m, (da, db), [1])
    wb, vb = np.linalg.eigh(rho_b)
    support = vb[:, wb > RANK_TOL]
    if support.shape[1] <= 2:
        if support.shape[1] < 2:
            q, _ = np.linalg.qr(np.column_stack([support, np.eye(db)]))
            support = q[:, :2]
        iso = np.kron(np.eye(2), support)
        small = iso.conj().T @ m @ iso
        return concurrence_wootters(0.5 * (small + small.conj().T)) ** 2, "logical-qubit"
    if roof is not None:
        from .roof import optimize_roof

        dm = DensityMatrix._trusted((da, db), m)
        res = optimize_roof(dm, Cut(frozenset({0}), frozenset({1})), SquaredConcurrence(), roof)
        return min(res.value, 1.0), "roof-upper-bound"
    raise MissingConcurrenceError("squared concurrence unavailable")


def e_alpha_2xd(rho: DensityMatrix, cut, alpha, c_squared: float | None = None, roof=None) -> float:
    """Renyi-alpha entanglement of a qubit-qudit mixed state via ``f_alpha(C^2)``.

    Exact inside ``[(sqrt(7)-1)/2, (sqrt(13)-1)/2]``.  See
    :func:`qubit_qudit_squared_concurrence` for how ``C^2`` is obtained; with a
    roof estimate the returned value is an upper bound.
    """
    require_concave_window(alpha)
    c2, _ = qubit_qudit_squared_concurrence(rho, cut, c_squared, roof)
    return float(f_alpha(c2, alpha))


def e_alpha_lower_bound(c_squared: float, alpha) -> float:
    """Lower bound ``f_alpha(C^2)`` on qubit-qudit entanglement for large orders."""
    a = as_alpha(alpha)
    if a.alpha <= ALPHA_C2:
        raise WindowError(
            f"use exact closed form instead: alpha={a.alpha} <= (sqrt(13)-1)/2 ~ {ALPHA_C2:.6f}"
        )
    return float(f_alpha(c_squared, a))


# -- pure-state measures for convex-roof evaluation ---------------------------


class PureMeasure:
    """A deterministic function of a pure state across a cut.

    Subclasses implement :meth:`batch`, which takes normalised amplitude
    vectors stacked along axis 0.  Plain callables ``f(psi, cut)`` can be used
    wherever a measure is expected; these objects are simply faster.
    """

    def batch(self, amps: np.ndarray, dims, cut: Cut) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, psi: PureState, cut) -> float:
        cut = _as_cut(cut, psi.n_parties)
        return float(self.batch(psi.amplitudes[None, :], psi.dims, cut)[0])


def _smaller_side(dims, cut: Cut) -> list[int]:
    return sorted(cut.side_a if cut.dim_a(dims) <= cut.dim_b(dims) else cut.side_b)


def _split_amplitudes(amps, dims, side: list[int]) -> np.ndarray:
    """Reshape amplitude vectors to ``(..., dim(side), dim(rest))`` matrices."""
    amps = np.asarray(amps)
    batch = amps.shape[:-1]
    rest = [i for i in range(len(dims)) if i not in side]
    t = amps.reshape(batch + tuple(dims))
    if side != list(range(len(side))):
        nb = len(batch)
        t = t.transpose(list(range(nb)) + [nb + i for i in side] + [nb + i for i in rest])
    return t.reshape(batch + (prod(dims[i] for i in side), -1))


def _qubit_side_c2(m: np.ndarray) -> np.ndarray:
    # C^2 = 4 det(rho_A) for a 2 x d amplitude matrix
    r00 = np.einsum("...k,...k->...", m[..., 0, :], m[..., 0, :].conj()).real
    r11 = np.einsum("...k,...k->...", m[..., 1, :], m[..., 1, :].conj()).real
    r01 = np.einsum("...k,...k->...", m[..., 0, :], m[..., 1, :].conj())
    return np.clip(4.0 * (r00 * r11 - np.abs(r01) ** 2), 0.0, 1.0)


def _marginal_purity(m: np.ndarray) -> np.ndarray:
    red = m @ np.conj(np.swapaxes(m, -1, -2))
    return np.einsum("...ij,...ij->...", red, red.conj()).real


class SquaredConcurrence(PureMeasure):
    """Pure-state squared concurrence ``2 (1 - Tr rho_A^2)``."""

    def batch(self, amps, dims, cut):
        m = _split_amplitudes(amps, dims, _smaller_side(dims, cut))
        if m.shape[-2] == 2:
            return _qubit_side_c2(m)
        return np.clip(2.0 * (1.0 - _marginal_purity(m)), 0.0, None)

    def __repr__(self):
        return "SquaredConcurrence()"


class RenyiEntanglement(PureMeasure):
    """Pure-state Renyi-alpha entanglement ``S_alpha(rho_A)``."""

    def __init__(self, alpha):
        self.alpha = as_alpha(alpha)

    def batch(self, amps, dims, cut):
        m = _split_amplitudes(amps, dims, _smaller_side(dims, cut))
        if m.shape[-2] == 2:
            return np.asarray(pure_renyi_from_c2(_qubit_side_c2(m), self.alpha))
        red = m @ np.conj(np.swapaxes(m, -1, -2))
        return np.asarray(renyi_from_spectrum(linalg.batched_spectrum(red), self.alpha))

    def __repr__(self):
        return f"RenyiEntanglement(alpha={self.alpha.alpha})"
