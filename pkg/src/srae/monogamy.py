"""Monogamy residuals and multipartite indicators for multiqubit states.

Every residual is reported as ``left - sum(subtracted)`` where the left term is
the focus qubit against the rest and the subtracted terms are two-qubit (or
block) contributions, each raised to the power ``mu`` (``mu = 2`` for the
squared families).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt
from typing import Sequence

import numpy as np
from scipy.optimize import bisect

from . import linalg
from .errors import InvalidStateError, MissingDecompositionError, WindowError
from .measures import (
    ALPHA_C2,
    Cut,
    PureMeasure,
    _qubit_side_c2,
    _split_amplitudes,
    as_alpha,
    concurrence_pure,
    concurrence_wootters_batch,
    e_alpha_pure,
    f_alpha,
    pure_renyi_from_c2,
    qubit_qudit_squared_concurrence,
    renyi_entropy,
    require_concave_window,
    require_two_qubit_window,
)
from .roof import RoofConfig, evaluate_ensemble, optimize_roof
from .states import P0, DensityMatrix, Ensemble, PureState

EXACT = "exact"


@dataclass(frozen=True)
class ConcurrenceProfile:
    """Squared concurrences given as numbers instead of a state.

    ``focus`` is ``C^2`` across the focus-qubit cut and ``pairs`` the
    two-qubit values ``C^2(rho_{A1 Ai})``.
    """

    focus: float
    pairs: tuple[float, ...]

    def __post_init__(self):
        vals = (self.focus,) + tuple(self.pairs)
        if any(not 0.0 <= v <= 1.0 for v in vals):
            raise ValueError("squared concurrences must lie in [0, 1]")
        object.__setattr__(self, "pairs", tuple(float(p) for p in self.pairs))


@dataclass(frozen=True)
class ResidualReport:
    family: str
    left_term: float
    subtracted_terms: tuple[tuple[str, float], ...]
    residual: float
    alpha: float | None
    mu: float
    validity: dict = field(default_factory=dict)
    k_parties: int | None = None

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "left_term": self.left_term,
            "subtracted_terms": [[label, v] for label, v in self.subtracted_terms],
            "residual": self.residual,
            "alpha": self.alpha,
            "mu": self.mu,
            "validity": dict(self.validity),
            "k_parties": self.k_parties,
        }


def _report(family, left, terms, alpha, mu, validity, k=None) -> ResidualReport:
    terms = tuple((str(label), float(v)) for label, v in terms)
    left = float(left)
    return ResidualReport(
        family=family,
        left_term=left,
        subtracted_terms=terms,
        residual=left - sum(v for _, v in terms),
        alpha=None if alpha is None else float(as_alpha(alpha).alpha),
        mu=float(mu),
        validity=validity,
        k_parties=k,
    )


def _require_qubits(state) -> None:
    if any(d != 2 for d in state.dims):
        raise InvalidStateError("qubit systems only")


def _as_pure(state) -> PureState | None:
    """The pure state behind ``state`` if it has rank one, else None."""
    if isinstance(state, PureState):
        return state
    w, v = np.linalg.eigh(state.matrix)
    if np.sum(w > 1e-10) == 1:
        return PureState.from_unnormalized(state.dims, v[:, -1])
    return None


def _check_focus(state, focus: int) -> int:
    focus = int(focus)
    if not 0 <= focus < len(state.dims):
        raise InvalidStateError(f"focus {focus} out of range for {len(state.dims)} parties")
    if len(state.dims) < 3:
        raise InvalidStateError("monogamy residuals need at least three parties")
    return focus


def _pair_c2(state, focus: int, others: Sequence[int]) -> list[float]:
    rhos = np.stack([state.marginal(sorted((focus, i))) for i in others])
    return [float(c) ** 2 for c in concurrence_wootters_batch(rhos)]


def _focus_c2(state, focus: int, c2_focus: float | None, roof: RoofConfig | None):
    """``C^2(focus | rest)`` with its provenance."""
    psi = _as_pure(state) if c2_focus is None else None
    if psi is not None:
        return concurrence_pure(psi, Cut.split(focus, psi.n_parties)) ** 2, "pure"
    if isinstance(state, ConcurrenceProfile):
        return state.focus, "supplied"
    return qubit_qudit_squared_concurrence(state, Cut.split(focus, len(state.dims)), c2_focus, roof)


def _labels(focus, others):
    return [f"A{focus}A{i}" for i in others]


# -- squared concurrence / squared EOF ----------------------------------------


def residual_sc(state, focus: int = 0, c2_focus: float | None = None) -> ResidualReport:
    """``C^2(A1|rest) - sum_i C^2(A1 Ai)``.

    ``state`` may be a pure or mixed qubit state, or a
    :class:`ConcurrenceProfile`.  For mixed states the focus term needs rank
    one, a logical-qubit rest, or ``c2_focus``.
    """
    if isinstance(state, ConcurrenceProfile):
        labels = [f"pair{i}" for i in range(len(state.pairs))]
        return _report("SC", state.focus, zip(labels, state.pairs), None, 2, {"source": "supplied"})
    _require_qubits(state)
    focus = _check_focus(state, focus)
    others = [i for i in range(len(state.dims)) if i != focus]
    left, source = _focus_c2(state, focus, c2_focus, None)
    return _report(
        "SC", left, zip(_labels(focus, others), _pair_c2(state, focus, others)), None, 2, {"left_source": source}
    )


def residual_sef(state, focus: int = 0) -> ResidualReport:
    """Squared entanglement-of-formation residual (``alpha = 1``)."""
    if isinstance(state, ConcurrenceProfile):
        labels = [f"pair{i}" for i in range(len(state.pairs))]
        terms = [(lab, f_alpha(c2, 1.0) ** 2) for lab, c2 in zip(labels, state.pairs)]
        return _report("SEF", f_alpha(state.focus, 1.0) ** 2, terms, 1.0, 2, {"source": "supplied"})
    _require_qubits(state)
    focus = _check_focus(state, focus)
    psi = _as_pure(state)
    if psi is None:
        raise InvalidStateError("pure state required (mixed left term needs a convex roof)")
    return _power_residual(psi, focus, 1.0, 2, "SEF")


# -- Renyi-alpha families -----------------------------------------------------


def _power_residual(psi: PureState, focus: int, alpha, mu, family) -> ResidualReport:
    others = [i for i in range(psi.n_parties) if i != focus]
    left = e_alpha_pure(psi, Cut.split(focus, psi.n_parties), alpha) ** mu
    pairs = _pair_c2(psi, focus, others)
    terms = [(lab, f_alpha(c2, alpha) ** mu) for lab, c2 in zip(_labels(focus, others), pairs)]
    return _report(family, left, terms, alpha, mu, {"left_source": "pure", "window": True})


def _profile_residual(profile: ConcurrenceProfile, alpha, mu, family) -> ResidualReport:
    a = require_two_qubit_window(alpha)
    # the focus cut of a profile is a qubit-qudit mixed state: exact only in the concave window
    left_kind = EXACT if a.in_concave_window else "lower-bound"
    labels = [f"pair{i}" for i in range(len(profile.pairs))]
    terms = [(lab, f_alpha(c2, a) ** mu) for lab, c2 in zip(labels, profile.pairs)]
    return _report(
        family, f_alpha(profile.focus, a) ** mu, terms, a, mu, {"source": "supplied", "left_term": left_kind}
    )


def residual_srae_pure(state, focus: int = 0, alpha=1.0) -> ResidualReport:
    """``E_alpha^2(A1|rest) - sum_i E_alpha^2(rho_{A1 Ai})`` for a pure multiqubit state."""
    require_two_qubit_window(alpha)
    if isinstance(state, ConcurrenceProfile):
        return _profile_residual(state, alpha, 2, "SRAE")
    _require_qubits(state)
    focus = _check_focus(state, focus)
    psi = _as_pure(state)
    if psi is None:
        raise InvalidStateError("pure state required; use tau1 for mixed states")
    return _power_residual(psi, focus, alpha, 2, "SRAE")


def residual_mu(state, focus: int = 0, alpha=1.0, mu: float = 2.0, k: int | None = None, **block) -> ResidualReport:
    """``mu``-th power residual, ``mu >= 2``.

    Without ``k`` every other qubit is a pair term.  With ``k`` the
    hierarchical form of :func:`tau2` is used and ``alpha`` must lie in the
    concave window; ``block`` is forwarded there (``c2_block``, ``roof``).
    """
    if mu < 2:
        raise WindowError(f"power below the monogamous range: mu={mu} < 2")
    if k is not None:
        return tau2(state, focus, k, alpha, mu=mu, **block)
    require_two_qubit_window(alpha)
    if isinstance(state, ConcurrenceProfile):
        return _profile_residual(state, alpha, mu, "MU")
    _require_qubits(state)
    focus = _check_focus(state, focus)
    psi = _as_pure(state)
    if psi is None:
        raise InvalidStateError("pure state required")
    rep = _power_residual(psi, focus, alpha, mu, "MU")
    covered = psi.n_parties == 3 or as_alpha(alpha).in_concave_window
    return ResidualReport(**{**rep.__dict__, "validity": {**rep.validity, "claim_covered": covered}})


def tau2(
    state,
    focus: int = 0,
    k: int = 3,
    alpha=1.0,
    c2_block: float | None = None,
    roof: RoofConfig | None = None,
    c2_focus: float | None = None,
    mu: float = 2.0,
) -> ResidualReport:
    """Hierarchical ``k``-party residual.

    ``E^mu(A1|rest) - sum_{i=2}^{k-1} E^mu(rho_{A1 Ai}) - E^mu(rho_{A1|Ak..An})``
    with parties taken in ascending index order after removing ``focus``.
    The block term uses :func:`~srae.measures.qubit_qudit_squared_concurrence`
    (``c2_block`` or ``roof`` when the block is not a logical qubit).
    """
    a = require_concave_window(alpha)
    _require_qubits(state)
    focus = _check_focus(state, focus)
    n = len(state.dims)
    if not 3 <= k <= n:
        raise ValueError(f"k must lie in 3..{n}, got {k}")
    others = [i for i in range(n) if i != focus]
    pair_parties, block = others[: k - 2], others[k - 2 :]
    psi = _as_pure(state)
    if psi is not None and c2_focus is None:
        left, left_src = e_alpha_pure(psi, Cut.split(focus, n), a), "pure"
    else:
        c2, left_src = _focus_c2(state, focus, c2_focus, roof)
        left = f_alpha(c2, a)
    src = psi if psi is not None else state
    pairs = _pair_c2(src, focus, pair_parties)
    terms = [(lab, f_alpha(c2, a) ** mu) for lab, c2 in zip(_labels(focus, pair_parties), pairs)]
    keep = sorted([focus] + block)
    red = src.marginal(keep)
    red = DensityMatrix._trusted([2] * len(keep), 0.5 * (red + red.conj().T))
    block_cut = Cut.split(keep.index(focus), len(keep))
    c2b, block_src = qubit_qudit_squared_concurrence(red, block_cut, c2_block, roof)
    label = f"A{focus}|" + "".join(f"A{i}" for i in block)
    terms.append((label, f_alpha(c2b, a) ** mu))
    validity = {"left_source": left_src, "block_source": block_src, "window": True}
    family = "TAU2" if mu == 2 else "MU"
    return _report(family, left**mu, terms, a, mu, validity, k=k)


# -- tau1 ---------------------------------------------------------------------


class IndicatorMeasure(PureMeasure):
    """Pure-state indicator ``E^2(A1|rest) - sum_i E^2(rho_{A1 Ai})`` with A1 = ``cut.side_a``."""

    def __init__(self, alpha):
        self.alpha = require_two_qubit_window(alpha)

    def batch(self, amps, dims, cut):
        (focus,) = cut.side_a
        n = len(dims)
        left = pure_renyi_from_c2(_qubit_side_c2(_split_amplitudes(amps, dims, [focus])), self.alpha)
        total = np.asarray(left) ** 2
        for i in range(n):
            if i == focus:
                continue
            rho = linalg.reduced_from_vector(amps, dims, sorted((focus, i)))
            c = concurrence_wootters_batch(rho)
            total = total - np.asarray(f_alpha(c**2, self.alpha)) ** 2
        return total

    def __repr__(self):
        return f"IndicatorMeasure(alpha={self.alpha.alpha})"


def tau1(state, focus: int = 0, alpha=1.0, ensemble: Ensemble | None = None, roof: RoofConfig | None = None) -> float:
    """Convex-roofed indicator of genuine multiqubit entanglement.

    Pure states are evaluated directly.  Mixed states need either a
    decomposition ``ensemble`` (its average is returned) or a ``roof`` config,
    in which case the best decomposition found is used and the value is an
    upper bound.
    """
    require_two_qubit_window(alpha)
    _require_qubits(state)
    focus = _check_focus(state, focus)
    cut = Cut.split(focus, len(state.dims))
    psi = _as_pure(state)
    if psi is not None:
        return residual_srae_pure(psi, focus, alpha).residual
    measure = IndicatorMeasure(alpha)
    if ensemble is not None:
        err = float(np.max(np.abs(ensemble.mixed().matrix - state.matrix)))
        if err > 1e-9:
            raise InvalidStateError(f"ensemble does not mix to the state (max error {err:.3e})")
        return evaluate_ensemble(ensemble, cut, measure)
    if roof is not None:
        return optimize_roof(state, cut, measure, roof).value
    raise MissingDecompositionError("mixed input needs an ensemble or a RoofConfig")


def tau1_ghz_w_mixture(p: float, alpha, p0: float = P0) -> float:
    """Indicator of the GHZ/W mixture from its three-plus-one decomposition.

    Equals ``F tau(psi0(p0)) + (1 - F) tau(W3)`` with ``F = p / p0``.
    """
    from .states import ghz_w_mixture, ghz_w_mixture_ensemble

    return tau1(ghz_w_mixture(p), 0, alpha, ensemble=ghz_w_mixture_ensemble(p, p0))


# -- three-tangle -------------------------------------------------------------


def three_tangle(psi: PureState) -> float:
    """``C^2(A|BC) - C^2(AB) - C^2(AC)`` for a pure three-qubit state (nonnegative up to roundoff)."""
    if not isinstance(psi, PureState) or tuple(psi.dims) != (2, 2, 2):
        raise InvalidStateError("three-tangle needs a pure three-qubit state")
    return residual_sc(psi, 0).residual


def superposition_tangle(p):
    """Signed closed form for the three-tangle of ``sqrt(p)|GHZ3> - sqrt(1-p)|W3>``.

    The tangle itself is the absolute value; the sign is kept so that the
    nontrivial zero can be bracketed.
    """
    p = np.asarray(p, dtype=float)
    return p**2 - (8 * sqrt(6) / 9) * np.sqrt(p * (1 - p) ** 3)


def tangle_zero(lo: float = 0.3, hi: float = 0.9, xtol: float = 1e-10) -> float:
    """Nonzero root of :func:`superposition_tangle` by bisection."""
    return float(bisect(lambda p: float(superposition_tangle(p)), lo, hi, xtol=xtol))


# -- Ou qutrit example --------------------------------------------------------


def ou_residual(alpha) -> ResidualReport:
    """SRaE residual of the Ou antisymmetric state, with the pair terms scored on
    the antisymmetric-pair decomposition (treated as the optimal roof)."""
    from .measures import RenyiEntanglement
    from .states import ou_antisymmetric, ou_pair_ensemble

    psi = ou_antisymmetric()
    left = e_alpha_pure(psi, Cut.split(0, 3), alpha) ** 2
    pair = evaluate_ensemble(ou_pair_ensemble(), Cut.split(0, 2), RenyiEntanglement(alpha))
    terms = [("A0A1", pair**2), ("A0A2", pair**2)]
    return _report("SRAE", left, terms, alpha, 2, {"pair_terms": "assumed-optimal decomposition"})


# -- random states for property scans -----------------------------------------


def random_pure_state(dims, rng: np.random.Generator) -> PureState:
    """Haar-random pure state (normalised complex Gaussian vector)."""
    d = int(np.prod(dims))
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState.from_unnormalized(tuple(dims), v)


def random_density_matrix(dims, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Random mixed state ``G G^dag / Tr`` from a ``d x rank`` complex Gaussian ``G``.

    ``rank=None`` gives the Hilbert-Schmidt ensemble (full rank).
    """
    d = int(np.prod(dims))
    k = rank or d
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    m = g @ g.conj().T
    return DensityMatrix(tuple(dims), m / np.trace(m).real)
