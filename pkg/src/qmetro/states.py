"""Probe-state factory: polarized, GHZ, Dicke, singlet and squeezed states.

States carry their representation and a short label so downstream reports
can reference "ghz(8)" etc.  Pure states are stored as unit vectors,
mixed states as density matrices; ``QuantumState.density()`` promotes on
demand.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np
import scipy.linalg

from .config import DEFAULT_TOLS
from .linalg import hermiticity_defect, unitary_exp
from .spin import (FULL_DENSITY_MAX, CollectiveOperator, Representation,
                   collective_op, dicke_embedding, full_rep, symmetric_rep)


@dataclass(frozen=True)
class QuantumState:
    """A pure vector or density matrix in a fixed representation."""

    rep: Representation
    data: np.ndarray
    label: str = "state"

    def __post_init__(self):
        d = np.asarray(self.data, dtype=complex)
        object.__setattr__(self, "data", d)
        if d.ndim == 1:
            if d.shape != (self.rep.dim,):
                raise ValueError(f"vector length {d.shape} does not match {self.rep}")
            if abs(np.linalg.norm(d) - 1.0) > DEFAULT_TOLS.state_norm:
                raise ValueError(f"state vector not normalised: |psi|={np.linalg.norm(d):.2e}")
        elif d.ndim == 2:
            if d.shape != (self.rep.dim, self.rep.dim):
                raise ValueError(f"density shape {d.shape} does not match {self.rep}")
            if self.rep.kind == "full" and self.rep.n > FULL_DENSITY_MAX:
                raise ValueError(
                    f"full-representation density matrices limited to N <= {FULL_DENSITY_MAX}")
            if hermiticity_defect(d) > 1e-10:
                raise ValueError("density matrix is not Hermitian")
            if abs(np.trace(d).real - 1.0) > DEFAULT_TOLS.state_norm:
                raise ValueError(f"density matrix trace {np.trace(d).real!r} != 1")
            # PSD within the floor <=> rho + |floor| I admits a Cholesky factor
            try:
                np.linalg.cholesky(d + (-DEFAULT_TOLS.psd_floor) * np.eye(d.shape[0]))
            except np.linalg.LinAlgError:
                wmin = np.linalg.eigvalsh(d).min()
                raise ValueError(f"density matrix has negative eigenvalue {wmin:.2e}")
        else:
            raise ValueError("state payload must be a vector or a matrix")

    # -- basic queries ---------------------------------------------------

    @property
    def is_pure(self) -> bool:
        return self.data.ndim == 1

    @property
    def n(self) -> int:
        return self.rep.n

    def density(self) -> np.ndarray:
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return self.data

    def purity(self) -> float:
        if self.is_pure:
            return 1.0
        return float(np.real(np.vdot(self.data, self.data)))

    def expectation(self, op) -> float:
        A = op.matrix if isinstance(op, CollectiveOperator) else np.asarray(op)
        if self.is_pure:
            return float(np.real(np.vdot(self.data, A @ self.data)))
        return float(np.real(np.einsum("ij,ji->", A, self.data)))

    def variance(self, op) -> float:
        A = op.matrix if isinstance(op, CollectiveOperator) else np.asarray(op)
        if self.is_pure:
            Av = A @ self.data
            m = np.real(np.vdot(self.data, Av))
            return float(np.real(np.vdot(Av, Av)) - m ** 2)
        X = A @ self.data
        m = float(np.real(np.trace(X)))
        return float(np.real(np.einsum("ij,ji->", A, X))) - m ** 2

    def fidelity_with(self, other: "QuantumState") -> float:
        """Overlap fidelity; for two pure states |<a|b>|^2."""
        if self.is_pure and other.is_pure:
            return float(abs(np.vdot(self.data, other.data)) ** 2)
        if self.is_pure:
            return float(np.real(np.vdot(self.data, other.density() @ self.data)))
        if other.is_pure:
            return other.fidelity_with(self)
        from .fisher import bures_fidelity
        return bures_fidelity(self, other)


def _check_same_rep(state: QuantumState, op: CollectiveOperator):
    if state.rep != op.rep:
        raise ValueError(f"representation mismatch: state {state.rep} vs operator {op.rep}")


def rotate(state: QuantumState, generator: CollectiveOperator, theta: float) -> QuantumState:
    """Unitary evolution exp(-i theta A) applied to the state."""
    _check_same_rep(state, generator)
    U = unitary_exp(generator.matrix, theta, sign=-1)
    if state.is_pure:
        return QuantumState(state.rep, U @ state.data, label=state.label)
    return QuantumState(state.rep, U @ state.data @ U.conj().T, label=state.label)


def to_full(state: QuantumState) -> QuantumState:
    """Embed a symmetric-sector state into the full 2^N space."""
    if state.rep.kind == "full":
        return state
    B = dicke_embedding(state.n)
    rep = full_rep(state.n)
    if state.is_pure:
        return QuantumState(rep, B @ state.data, label=state.label)
    return QuantumState(rep, B @ state.data @ B.conj().T, label=state.label)


# ----------------------------------------------------------------------
# state families
# ----------------------------------------------------------------------

_SINGLE = {
    "x": np.array([1, 1], dtype=complex) / np.sqrt(2),
    "y": np.array([1, 1j], dtype=complex) / np.sqrt(2),
    "z": np.array([1, 0], dtype=complex),
}


def polarized(n: int, axis: str = "z", rep: Representation | None = None) -> QuantumState:
    """Product state of all spins pointing along +axis; <J_axis> = N/2."""
    rep = rep or symmetric_rep(n)
    if rep.n != n:
        raise ValueError("rep particle number does not match n")
    if rep.kind == "full":
        v = _SINGLE[axis]
        out = v
        for _ in range(n - 1):
            out = np.kron(out, v)
        return QuantumState(rep, out, label=f"polarized_{axis}({n})")
    # coherent state on the j = N/2 sphere
    if axis == "z":
        v = np.zeros(n + 1, dtype=complex)
        v[-1] = 1.0
    else:
        k = np.arange(n + 1)          # number of flipped spins = N - index
        amp = np.sqrt([comb(n, int(n - i)) for i in k]) / 2 ** (n / 2.0)
        phase = np.ones(n + 1, dtype=complex) if axis == "x" else (1j) ** (n - k)
        v = amp * phase
    return QuantumState(rep, v, label=f"polarized_{axis}({n})")


def ghz(n: int, rep: Representation | None = None, axis: str = "x") -> QuantumState:
    """Equal superposition of the two fully polarized states along +-axis.

    With ``axis="z"`` this is the textbook (|00...0> + |11...1>)/sqrt(2);
    the default ``axis="x"`` is the same state conjugated to the x basis,
    which is the convention under which its Fisher information reads
    (N^2, N, N) for generators (J_x, J_y, J_z).
    """
    if n < 2:
        raise ValueError("GHZ needs at least two particles")
    rep = rep or symmetric_rep(n)
    up = polarized(n, axis, rep).data
    down = _polarized_minus(n, axis, rep)
    v = (up + down) / np.linalg.norm(up + down)
    return QuantumState(rep, v, label=f"ghz_{axis}({n})")


def _polarized_minus(n: int, axis: str, rep: Representation) -> np.ndarray:
    minus = {
        "x": np.array([1, -1], dtype=complex) / np.sqrt(2),
        "y": np.array([1, -1j], dtype=complex) / np.sqrt(2),
        "z": np.array([0, 1], dtype=complex),
    }[axis]
    if rep.kind == "full":
        out = minus
        for _ in range(n - 1):
            out = np.kron(out, minus)
        return out
    if axis == "z":
        v = np.zeros(n + 1, dtype=complex)
        v[0] = 1.0
        return v
    k = np.arange(n + 1)
    amp = np.sqrt([comb(n, int(n - i)) for i in k]) / 2 ** (n / 2.0)
    sign = (-1.0) ** (n - k) if axis == "x" else (-1j) ** (n - k)
    return amp * sign


def dicke(n: int, m: int, rep: Representation | None = None) -> QuantumState:
    """Symmetric Dicke state with m spins flipped; J_z eigenvalue N/2 - m."""
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= N, got m={m}, N={n}")
    rep = rep or symmetric_rep(n)
    if rep.kind == "symmetric":
        v = np.zeros(n + 1, dtype=complex)
        v[n - m] = 1.0
        return QuantumState(rep, v, label=f"dicke({n},{m})")
    dim = 2 ** n
    bits = ((np.arange(dim)[:, None] >> np.arange(n)[None, :]) & 1).sum(axis=1)
    v = np.zeros(dim, dtype=complex)
    v[bits == m] = 1.0 / np.sqrt(comb(n, m))
    return QuantumState(rep, v, label=f"dicke({n},{m})")


_PAIR_SINGLET = np.zeros(4, dtype=complex)
_PAIR_SINGLET[1] = 1 / np.sqrt(2)   # |01>
_PAIR_SINGLET[2] = -1 / np.sqrt(2)  # |10>


def _perfect_matchings(items: tuple) -> list:
    if not items:
        return [[]]
    first, rest = items[0], items[1:]
    out = []
    for i, partner in enumerate(rest):
        sub = rest[:i] + rest[i + 1:]
        for tail in _perfect_matchings(sub):
            out.append([(first, partner)] + tail)
    return out


@lru_cache(maxsize=None)
def _singlet_density(n: int) -> np.ndarray:
    dim = 2 ** n
    rho = np.zeros((dim, dim), dtype=complex)
    matchings = _perfect_matchings(tuple(range(n)))
    for matching in matchings:
        v = np.zeros(dim, dtype=complex)
        v[0] = 1.0
        for (a, b) in matching:
            v = _apply_pair_state(v, a, b, n)
        rho += np.outer(v, v.conj())
    rho /= len(matchings)
    rho.flags.writeable = False
    return rho


def _apply_pair_state(v: np.ndarray, a: int, b: int, n: int) -> np.ndarray:
    """Replace the (a,b) qubit factor of a product basis vector by |Psi^->."""
    t = v.reshape((2,) * n)
    out = np.zeros_like(t)
    # v is built as |0...0> progressively turned into pair singlets on
    # disjoint supports, so slots a and b still hold |0>
    idx0 = [slice(None)] * n
    idx0[a], idx0[b] = 0, 0
    base = t[tuple(idx0)]
    i01 = list(idx0)
    i01[a], i01[b] = 0, 1
    i10 = list(idx0)
    i10[a], i10[b] = 1, 0
    out[tuple(i01)] = base / np.sqrt(2)
    out[tuple(i10)] = -base / np.sqrt(2)
    return out.reshape(-1)


def singlet_pi(n: int) -> QuantumState:
    """The permutationally invariant zero-total-spin mixed state (full rep).

    Uniform mixture of all pairings of the N spins into two-particle
    singlets; only distinct perfect matchings are enumerated, since
    permutations inside a matching leave the projector unchanged.
    """
    if n % 2 != 0:
        raise ValueError("the pair-singlet construction needs an even particle number")
    if n > 8:
        raise ValueError("singlet construction limited to N <= 8")
    return QuantumState(full_rep(n), _singlet_density(n), label=f"singlet({n})")


@dataclass(frozen=True)
class SqueezingSpec:
    """Ground-state squeezing inputs: particle number and field weight."""

    n: int
    lam: float  # Lagrange-multiplier-like weight of the polarizing term

    def __post_init__(self):
        if self.n % 2 != 0 or self.n < 2:
            raise ValueError("squeezed ground states are defined for even N >= 2")
        if self.lam < 0:
            raise ValueError("the polarizing weight must be nonnegative")


@lru_cache(maxsize=None)
def _squeezing_hamiltonian_parts(n: int):
    Jx = collective_op("x", symmetric_rep(n)).matrix.real
    Jx2 = Jx @ Jx
    Jz_diag = np.arange(n + 1) - n / 2.0
    Jx2.flags.writeable = False
    Jz_diag.flags.writeable = False
    return Jx2, Jz_diag


def squeezed_ground_state(spec: SqueezingSpec) -> QuantumState:
    """Ground state of J_x^2 - lam * J_z in the symmetric sector.

    These states minimise Var(J_x) at fixed <J_z> and trace out the optimal
    precision frontier of Ramsey interferometry with collective
    measurements.  Ties in a (numerically) degenerate ground space are
    broken by the lowest eigenvalue index.
    """
    Jx2, Jz_diag = _squeezing_hamiltonian_parts(spec.n)
    H = Jx2 - spec.lam * np.diag(Jz_diag)
    vals, vecs = scipy.linalg.eigh(H, subset_by_index=[0, min(1, spec.n)])
    scale = max(abs(vals).max(), 1.0)
    if len(vals) > 1 and vals[1] - vals[0] < 1e-12 * scale:
        warnings.warn(f"nearly degenerate ground space (gap {vals[1]-vals[0]:.2e}); "
                      "returning the lowest-index vector")
    v = vecs[:, 0].astype(complex)
    # fix the overall sign so results are deterministic across LAPACK builds
    k = int(np.argmax(np.abs(v)))
    v *= np.exp(-1j * np.angle(v[k]))
    return QuantumState(symmetric_rep(spec.n), v,
                        label=f"squeezed({spec.n},lam={spec.lam:g})")


def mix_white_noise(state: QuantumState, p: float) -> QuantumState:
    """p * |psi><psi| + (1-p) * identity/2^N (full representation only)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {p}")
    if state.rep.kind != "full":
        raise ValueError("white noise admixture needs the full representation "
                         "(the identity term lives in the whole 2^N space)")
    if state.rep.n > FULL_DENSITY_MAX:
        raise ValueError(f"density matrices limited to N <= {FULL_DENSITY_MAX}")
    dim = state.rep.dim
    rho = p * state.density() + (1 - p) * np.eye(dim) / dim
    return QuantumState(state.rep, rho, label=f"{state.label}+noise({p:g})")


def maximally_mixed(rep: Representation) -> QuantumState:
    if rep.kind == "full" and rep.n > FULL_DENSITY_MAX:
        raise ValueError(f"density matrices limited to N <= {FULL_DENSITY_MAX}")
    dim = rep.dim
    return QuantumState(rep, np.eye(dim, dtype=complex) / dim, label="maximally_mixed")
