"""State containers, the named multiqubit/qutrit states, and state files.

State file format (JSON)::

    {"kind": "pure" | "density",
     "dims": [2, 2, ...],
     "data": [[re, im], ...]}   # amplitudes, or the row-major matrix

"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from math import prod
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from . import linalg
from .errors import InvalidStateError, NotHermitianError

STATE_TOL = 1e-10
MIX_TOL = 1e-9

# tangle zero of the GHZ/W superposition, kept at its printed value
P0 = 0.627


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


def _check_dims(dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise InvalidStateError(f"dims must be positive integers, got {dims}")
    return dims


@dataclass(frozen=True, eq=False)
class PureState:
    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != prod(dims):
            raise InvalidStateError(f"expected {prod(dims)} amplitudes for dims {dims}, got {amps.size}")
        if not np.all(np.isfinite(amps)):
            raise InvalidStateError("amplitudes must be finite")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > STATE_TOL:
            raise InvalidStateError(f"norm deviates from 1 ({norm:.12g})")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", _freeze(amps))

    @classmethod
    def from_unnormalized(cls, dims, amplitudes) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(dims, amps / np.linalg.norm(amps))

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    def marginal(self, keep) -> np.ndarray:
        return linalg.reduced_from_vector(self.amplitudes, self.dims, keep)

    def density(self) -> "DensityMatrix":
        return density_of(self)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        m = np.asarray(self.matrix, dtype=complex)
        d = prod(dims)
        if m.shape != (d, d):
            raise InvalidStateError(f"matrix shape {m.shape} does not match dims {dims}")
        if not np.all(np.isfinite(m)):
            raise InvalidStateError("matrix entries must be finite")
        if not linalg.is_hermitian(m, STATE_TOL):
            raise InvalidStateError("matrix not Hermitian")
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > STATE_TOL:
            raise InvalidStateError(f"trace deviates from 1 ({tr:.12g})")
        try:
            w = linalg.eigvals_hermitian(m)
        except NotHermitianError as exc:  # pragma: no cover - checked above
            raise InvalidStateError(str(exc)) from exc
        if w[-1] < -STATE_TOL:
            raise InvalidStateError(f"matrix not PSD (min eigenvalue {w[-1]:.3e})")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", _freeze(0.5 * (m + m.conj().T)))

    @classmethod
    def _trusted(cls, dims, matrix) -> "DensityMatrix":
        # skip validation for matrices built internally from valid states
        obj = object.__new__(cls)
        object.__setattr__(obj, "dims", tuple(int(d) for d in dims))
        object.__setattr__(obj, "matrix", _freeze(matrix))
        return obj

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    def partial_trace(self, keep) -> "DensityMatrix":
        keep = sorted(set(keep))
        red = linalg.partial_trace(self.matrix, self.dims, keep)
        return DensityMatrix._trusted([self.dims[i] for i in keep], 0.5 * (red + red.conj().T))

    def marginal(self, keep) -> np.ndarray:
        return linalg.partial_trace(self.matrix, self.dims, keep)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


State = Union[PureState, DensityMatrix]


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Pure-state decomposition ``sum_i w_i |psi_i><psi_i|``."""

    weights: np.ndarray
    states: tuple[PureState, ...]
    target: DensityMatrix | None = field(default=None)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        states = tuple(self.states)
        if len(states) != w.size or not states:
            raise InvalidStateError("ensemble needs one weight per member and at least one member")
        if np.any(w < -STATE_TOL):
            raise InvalidStateError("ensemble weights must be nonnegative")
        if abs(w.sum() - 1.0) > STATE_TOL:
            raise InvalidStateError(f"ensemble weights sum to {w.sum():.12g}, not 1")
        if len({s.dims for s in states}) != 1:
            raise InvalidStateError("ensemble members must share dims")
        w = np.clip(w, 0.0, None)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", states)
        if self.target is not None:
            err = float(np.max(np.abs(self.mixed().matrix - self.target.matrix)))
            if err > MIX_TOL:
                raise InvalidStateError(f"ensemble does not mix to its target state (max error {err:.3e})")

    @property
    def dims(self) -> tuple[int, ...]:
        return self.states[0].dims

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(zip(self.weights, self.states))

    def mixed(self) -> DensityMatrix:
        amps = np.stack([s.amplitudes for s in self.states])
        rho = (amps.T * self.weights) @ amps.conj()
        return DensityMatrix._trusted(self.dims, rho)


def density_of(psi: PureState) -> DensityMatrix:
    v = psi.amplitudes
    return DensityMatrix._trusted(psi.dims, np.outer(v, v.conj()))


def basis_state(dims: Sequence[int], index: Sequence[int]) -> PureState:
    v = np.zeros(prod(dims), dtype=complex)
    v[np.ravel_multi_index(tuple(index), tuple(dims))] = 1.0
    return PureState(dims, v)


# -- named states -------------------------------------------------------------


class StateFamily(str, enum.Enum):
    GHZ = "GHZ"
    W = "W"
    GHZ_W_SUPERPOSITION = "GHZ_W_SUPERPOSITION"
    GHZ_W_MIXTURE = "GHZ_W_MIXTURE"
    PSI_J = "PSI_J"
    OU_ANTISYMMETRIC = "OU_ANTISYMMETRIC"


def _check_n(n) -> int:
    if int(n) != n or n < 2:
        raise InvalidStateError(f"invalid state parameter: n must be an integer >= 2, got {n}")
    return int(n)


def _check_prob(p, name="p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise InvalidStateError(f"invalid state parameter: {name} must lie in [0, 1], got {p}")
    return p


def ghz(n: int = 3) -> PureState:
    n = _check_n(n)
    v = np.zeros(2**n, dtype=complex)
    v[0] = v[-1] = 1 / np.sqrt(2)
    return PureState((2,) * n, v)


def w_state(n: int = 3) -> PureState:
    """``(|10..0> + |01..0> + ... + |00..1>) / sqrt(n)``."""
    n = _check_n(n)
    v = np.zeros(2**n, dtype=complex)
    v[[1 << k for k in range(n)]] = 1 / np.sqrt(n)
    return PureState((2,) * n, v)


def ghz_w_superposition(p: float) -> PureState:
    """``sqrt(p)|GHZ3> - sqrt(1-p)|W3>`` (note the minus sign)."""
    p = _check_prob(p)
    return PureState((2, 2, 2), np.sqrt(p) * ghz(3).amplitudes - np.sqrt(1 - p) * w_state(3).amplitudes)


def psi_j(p0: float, j: int) -> PureState:
    """``sqrt(p0)|GHZ3> - exp(2 pi i j/3) sqrt(1-p0)|W3>`` for ``j`` in 0, 1, 2."""
    p0 = _check_prob(p0, "p0")
    if j not in (0, 1, 2):
        raise InvalidStateError(f"invalid state parameter: j must be 0, 1 or 2, got {j}")
    phase = np.exp(2j * np.pi * j / 3)
    return PureState(
        (2, 2, 2), np.sqrt(p0) * ghz(3).amplitudes - phase * np.sqrt(1 - p0) * w_state(3).amplitudes
    )


def ghz_w_mixture(p: float) -> DensityMatrix:
    p = _check_prob(p)
    g, w = ghz(3).amplitudes, w_state(3).amplitudes
    rho = p * np.outer(g, g.conj()) + (1 - p) * np.outer(w, w.conj())
    return DensityMatrix((2, 2, 2), rho)


def ou_antisymmetric() -> PureState:
    """Totally antisymmetric three-qutrit state, labels 1..3 mapped to 0..2."""
    v = np.zeros(27, dtype=complex)
    for (a, b, c), sign in {
        (0, 1, 2): 1, (0, 2, 1): -1, (1, 2, 0): 1, (1, 0, 2): -1, (2, 0, 1): 1, (2, 1, 0): -1,
    }.items():
        v[9 * a + 3 * b + c] = sign / np.sqrt(6)
    return PureState((3, 3, 3), v)


def named_state(family: StateFamily | str, **params) -> State:
    """Build one of the named states.

    ``GHZ``/``W`` take ``n``; ``GHZ_W_SUPERPOSITION``/``GHZ_W_MIXTURE`` take
    ``p``; ``PSI_J`` takes ``p0`` (default 0.627) and ``j``.
    """
    try:
        family = StateFamily(family)
    except ValueError:
        raise InvalidStateError(f"unknown state family {family!r}") from None
    if family is StateFamily.GHZ:
        return ghz(params.get("n", 3))
    if family is StateFamily.W:
        return w_state(params.get("n", 3))
    if family is StateFamily.GHZ_W_SUPERPOSITION:
        return ghz_w_superposition(params["p"])
    if family is StateFamily.GHZ_W_MIXTURE:
        return ghz_w_mixture(params["p"])
    if family is StateFamily.PSI_J:
        return psi_j(params.get("p0", P0), params["j"])
    return ou_antisymmetric()


def ghz_w_mixture_ensemble(p: float, p0: float = P0) -> Ensemble:
    """Decomposition of the GHZ/W mixture for ``p <= p0``.

    Three phase-rotated superpositions at ``p0`` with weight ``F/3`` each,
    plus ``|W3>`` with weight ``1 - F``, where ``F = p / p0``.
    """
    p = _check_prob(p)
    if p > p0 + 1e-12:
        raise InvalidStateError(f"invalid state parameter: decomposition needs p <= {p0}, got {p}")
    f = min(p / p0, 1.0)
    members = [psi_j(p0, j) for j in range(3)] + [w_state(3)]
    return Ensemble(np.array([f / 3] * 3 + [1 - f]), tuple(members), target=ghz_w_mixture(p))


def ou_pair_ensemble() -> Ensemble:
    """Two-qutrit marginal of the Ou state as three antisymmetric pair states."""
    members = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        v = np.zeros(9, dtype=complex)
        v[3 * i + j], v[3 * j + i] = 1 / np.sqrt(2), -1 / np.sqrt(2)
        members.append(PureState((3, 3), v))
    target = density_of(ou_antisymmetric()).partial_trace([0, 1])
    return Ensemble(np.full(3, 1 / 3), tuple(members), target=target)


# -- state files --------------------------------------------------------------


def _pairs_to_complex(data, expected: int) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidStateError(f"data must be an array of [re, im] pairs: {exc}") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidStateError("data must be an array of [re, im] pairs")
    if arr.shape[0] != expected:
        raise InvalidStateError(f"data has {arr.shape[0]} entries, expected {expected}")
    return arr[:, 0] + 1j * arr[:, 1]


def state_from_dict(obj: dict) -> State:
    if not isinstance(obj, dict):
        raise InvalidStateError("state file must hold a JSON object")
    missing = {"kind", "dims", "data"} - obj.keys()
    if missing:
        raise InvalidStateError(f"state file missing fields: {sorted(missing)}")
    dims = obj["dims"]
    if not isinstance(dims, list) or not all(isinstance(d, int) and d > 0 for d in dims):
        raise InvalidStateError("dims must be an array of positive integers")
    d = prod(dims)
    if obj["kind"] == "pure":
        return PureState(dims, _pairs_to_complex(obj["data"], d))
    if obj["kind"] == "density":
        return DensityMatrix(dims, _pairs_to_complex(obj["data"], d * d).reshape(d, d))
    raise InvalidStateError(f"kind must be 'pure' or 'density', got {obj['kind']!r}")


def state_to_dict(state: State) -> dict:
    if isinstance(state, PureState):
        kind, flat = "pure", state.amplitudes
    else:
        kind, flat = "density", state.matrix.reshape(-1)
    return {
        "kind": kind,
        "dims": list(state.dims),
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }


def load_state(path) -> State:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidStateError(f"cannot read state file {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidStateError(f"state file is not valid JSON: {exc}") from exc
    return state_from_dict(obj)


def save_state(state: State, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(state), indent=1) + "\n")
