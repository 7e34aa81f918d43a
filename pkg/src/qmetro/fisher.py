"""Quantum and classical Fisher information machinery.

The closed-form quantum Fisher information

    F_Q[rho, A] = 2 sum_{k,l} (l_k - l_l)^2 / (l_k + l_l) |<k|A|l>|^2

is evaluated in the eigenbasis of rho; pairs whose eigenvalue sum falls
below a floor (both eigenvalues numerically zero) are dropped, which
restricts the sum to the support and keeps the symmetric logarithmic
derivative finite.  Alongside it live the alternative second-moment form,
the SLD, classical Fisher information of a POVM, the multi-parameter
Fisher matrix, Bures fidelity, evolution-speed and Zeno-time quantities,
the Wigner-Yanase skew information and numerical roof optimizers for the
variance.

Functions accept either package states/operators or bare numpy arrays, so
the property batteries can run on arbitrary-dimension random instances.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .config import DEFAULT_TOLS
from .linalg import SpectralDecomposition, eigh_hermitian, psd_sqrt, require_hermitian, unitary_exp
from .spin import CollectiveOperator
from .states import QuantumState

QFI_DENSITY_DIM_MAX = 4096


# ----------------------------------------------------------------------
# input adapters
# ----------------------------------------------------------------------

def _op_matrix(op) -> np.ndarray:
    if isinstance(op, CollectiveOperator):
        return op.matrix
    return require_hermitian(np.asarray(op, dtype=complex), name="generator")


def _state_payload(state):
    """Return ("vector"|"density", array)."""
    if isinstance(state, QuantumState):
        return ("vector" if state.is_pure else "density"), state.data
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        return "vector", arr / np.linalg.norm(arr)
    if arr.ndim == 2:
        return "density", arr
    raise ValueError("state must be a vector or a density matrix")


def _check_reps(state, op):
    if isinstance(state, QuantumState) and isinstance(op, CollectiveOperator):
        if state.rep != op.rep:
            raise ValueError(
                f"representation mismatch: state {state.rep} vs operator {op.rep}")


def _mean_and_var(kind, data, A):
    if kind == "vector":
        Av = A @ data
        m = float(np.real(np.vdot(data, Av)))
        second = float(np.real(np.vdot(Av, Av)))
    else:
        m = float(np.real(np.trace(A @ data)))
        second = float(np.real(np.trace(A @ A @ data)))
    return m, second - m * m


# ----------------------------------------------------------------------
# quantum Fisher information
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class QfiResult:
    """QFI value plus the count of eigenvalue pairs dropped by the support rule."""

    value: float
    skipped_pairs: int

    def __float__(self):
        return self.value


def _eigensystem(kind, data) -> SpectralDecomposition:
    if kind == "vector":
        raise AssertionError("vector states take the rank-1 shortcut")
    if data.shape[0] > QFI_DENSITY_DIM_MAX:
        raise ValueError(f"density dimension {data.shape[0]} exceeds {QFI_DENSITY_DIM_MAX}")
    return eigh_hermitian(data)


def _pair_weights(lam: np.ndarray, floor: float):
    S = lam[:, None] + lam[None, :]
    D = lam[:, None] - lam[None, :]
    keep = S >= floor
    W = np.zeros_like(S)
    W[keep] = D[keep] ** 2 / S[keep]
    return W, keep


def qfi(state, op, tols=DEFAULT_TOLS) -> QfiResult:
    """Quantum Fisher information of the state for the phase generator op."""
    _check_reps(state, op)
    A = _op_matrix(op)
    kind, data = _state_payload(state)
    if kind == "vector":
        # rank-1 spectrum: the dense sum collapses to 4 Var(A); the dropped
        # pairs are exactly those inside the (dim-1)-dimensional kernel
        _, var = _mean_and_var(kind, data, A)
        dim = data.shape[0]
        return QfiResult(4.0 * var, (dim - 1) ** 2)
    dec = _eigensystem(kind, data)
    At = dec.eigenvectors.conj().T @ A @ dec.eigenvectors
    W, keep = _pair_weights(dec.eigenvalues, tols.qfi_pair_floor)
    value = 2.0 * float(np.sum(W * np.abs(At) ** 2))
    return QfiResult(value, int((~keep).sum()))


def qfi_pure(state, op) -> float:
    """4 Var(A) -- valid for pure states only."""
    _check_reps(state, op)
    A = _op_matrix(op)
    kind, data = _state_payload(state)
    if kind != "vector":
        purity = float(np.real(np.vdot(data, data)))
        if abs(purity - 1.0) > 1e-9:
            raise ValueError(f"qfi_pure needs a pure state; purity={purity:.6f}")
        dec = _eigensystem(kind, data)
        data = dec.eigenvectors[:, -1]
        kind = "vector"
    _, var = _mean_and_var(kind, data, A)
    return 4.0 * var


def qfi_alternative(state, op, tols=DEFAULT_TOLS) -> float:
    """Second-moment form 4<A^2> - 8 sum l_k l_l / (l_k + l_l) |<k|A|l>|^2."""
    _check_reps(state, op)
    A = _op_matrix(op)
    kind, data = _state_payload(state)
    if kind == "vector":
        # rank-1 spectrum: the correction sum keeps only the (psi,psi) term
        m, var = _mean_and_var(kind, data, A)
        return 4.0 * (var + m * m) - 4.0 * m * m
    dec = _eigensystem(kind, data)
    lam = dec.eigenvalues
    At = dec.eigenvectors.conj().T @ A @ dec.eigenvectors
    S = lam[:, None] + lam[None, :]
    P = lam[:, None] * lam[None, :]
    keep = S >= tols.qfi_pair_floor
    C = np.zeros_like(S)
    C[keep] = P[keep] / S[keep]
    second = float(np.real(np.trace(A @ A @ data)))
    return 4.0 * second - 8.0 * float(np.sum(C * np.abs(At) ** 2))


def sld(state, op, tols=DEFAULT_TOLS) -> np.ndarray:
    """Symmetric logarithmic derivative for unitary dynamics generated by op.

    Satisfies (L rho + rho L)/2 = i(rho A - A rho) and Tr(rho L^2) = F_Q.
    Off the support of rho the operator is completed with zeros.
    """
    _check_reps(state, op)
    A = _op_matrix(op)
    kind, data = _state_payload(state)
    if kind == "vector":
        proj = np.outer(data, data.conj())
        return 2j * (proj @ A - A @ proj)
    dec = _eigensystem(kind, data)
    lam = dec.eigenvalues
    At = dec.eigenvectors.conj().T @ A @ dec.eigenvectors
    S = lam[:, None] + lam[None, :]
    D = lam[:, None] - lam[None, :]
    keep = S >= tols.qfi_pair_floor
    w = np.zeros_like(S)
    w[keep] = D[keep] / S[keep]
    Lt = 2j * w * At
    V = dec.eigenvectors
    return V @ Lt @ V.conj().T


def wigner_yanase(state, op) -> float:
    """Skew information Tr(A^2 rho) - Tr(A sqrt(rho) A sqrt(rho))."""
    _check_reps(state, op)
    A = _op_matrix(op)
    kind, data = _state_payload(state)
    if kind == "vector":
        _, var = _mean_and_var(kind, data, A)
        return var
    dec = _eigensystem(kind, data)
    root = dec.apply_function(lambda w: np.sqrt(np.clip(w, 0.0, None)))
    second = float(np.real(np.trace(A @ A @ data)))
    cross = float(np.real(np.trace(A @ root @ A @ root)))
    return second - cross


def white_noise_qfi(pure_state, op, p: float) -> float:
    """Closed-form QFI of p|psi><psi| + (1-p) I/D.

    Only the support<->kernel eigenvalue pairs contribute, giving
    F = 4 p^2 Var_psi(A) / (p + 2(1-p)/D).
    """
    A = _op_matrix(op)
    kind, data = _state_payload(pure_state)
    if kind != "vector":
        raise ValueError("white_noise_qfi takes the pure input state")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    dim = data.shape[0]
    _, var = _mean_and_var(kind, data, A)
    if p == 0.0:
        return 0.0
    return 4.0 * p * p * var / (p + 2.0 * (1.0 - p) / dim)


def zeno_time(state, op) -> float:
    """Shortest useful interval between projective resets: 2 / sqrt(F_Q)."""
    F = qfi(state, op).value
    if F <= 1e-12:
        return float("inf")
    return 2.0 / np.sqrt(F)


# ----------------------------------------------------------------------
# fidelity and evolution speed
# ----------------------------------------------------------------------

def bures_fidelity(state1, state2) -> float:
    """Tr(sqrt(sqrt(r1) r2 sqrt(r1)))^2, with pure-state shortcuts."""
    k1, d1 = _state_payload(state1)
    k2, d2 = _state_payload(state2)
    dim1 = d1.shape[0]
    dim2 = d2.shape[0]
    if dim1 != dim2:
        raise ValueError(f"dimension mismatch {dim1} vs {dim2}")
    if k1 == "vector" and k2 == "vector":
        return float(abs(np.vdot(d1, d2)) ** 2)
    if k1 == "vector":
        return float(np.real(np.vdot(d1, d2 @ d1)))
    if k2 == "vector":
        return float(np.real(np.vdot(d2, d1 @ d2)))
    R = psd_sqrt(d1)
    M = R @ d2 @ R
    w = np.linalg.eigvalsh((M + M.conj().T) / 2.0)
    return float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)


@dataclass(frozen=True)
class SpeedBoundCheck:
    fidelity: float
    bound: float
    holds: bool


def mandelstam_tamm_check(state, op, theta: float, tol: float = 1e-9) -> SpeedBoundCheck:
    """Check F_B(rho, rho_theta) >= cos^2(sqrt(F_Q/4) theta).

    Valid while sqrt(F_Q)|theta| <= pi; outside that window the bound is
    meaningless and the call is rejected.
    """
    F = qfi(state, op).value
    if np.sqrt(max(F, 0.0)) * abs(theta) > np.pi + 1e-12:
        raise ValueError(
            f"speed bound valid only for sqrt(F_Q)|theta| <= pi "
            f"(have {np.sqrt(F) * abs(theta):.4f})")
    A = _op_matrix(op)
    kind, data = _state_payload(state)
    U = unitary_exp(A, theta, sign=-1)
    if kind == "vector":
        evolved = U @ data
    else:
        evolved = U @ data @ U.conj().T
    fid = bures_fidelity(data, evolved)
    bound = float(np.cos(np.sqrt(max(F, 0.0)) / 2.0 * theta) ** 2)
    return SpeedBoundCheck(fid, bound, fid >= bound - tol)


# ----------------------------------------------------------------------
# classical Fisher information
# ----------------------------------------------------------------------

class Povm:
    """A positive operator valued measure: PSD elements summing to identity."""

    def __init__(self, elements):
        self.elements = [np.asarray(E, dtype=complex) for E in elements]
        dim = self.elements[0].shape[0]
        total = np.zeros((dim, dim), dtype=complex)
        for E in self.elements:
            require_hermitian(E, name="POVM element")
            if np.linalg.eigvalsh(E).min() < -1e-9:
                raise ValueError("POVM element is not PSD")
            total += E
        if np.abs(total - np.eye(dim)).max() > 1e-9:
            raise ValueError("POVM elements do not sum to the identity")

    @classmethod
    def projective(cls, basis: np.ndarray) -> "Povm":
        """Rank-1 projectors onto the columns of a unitary basis matrix."""
        cols = [basis[:, k] for k in range(basis.shape[1])]
        return cls([np.outer(c, c.conj()) for c in cols])

    @classmethod
    def from_observable_eigenbasis(cls, M) -> "Povm":
        dec = eigh_hermitian(_op_matrix(M))
        return cls.projective(dec.eigenvectors)

    def probabilities(self, state) -> np.ndarray:
        kind, data = _state_payload(state)
        if kind == "vector":
            p = [np.real(np.vdot(data, E @ data)) for E in self.elements]
        else:
            p = [np.real(np.trace(E @ data)) for E in self.elements]
        return np.array(p)

    def __len__(self):
        return len(self.elements)


@dataclass
class CfiResult:
    value: float
    boundary_outcomes: list = field(default_factory=list)

    def __float__(self):
        return self.value


def classical_fisher(family, povm: Povm, theta0: float, dtheta: float = 1e-5,
                     tols=DEFAULT_TOLS) -> CfiResult:
    """Fisher information sum (dp/dtheta)^2 / p of a parametrised state family.

    ``family`` maps theta to a state.  Derivatives are central differences
    with step ``dtheta``; a Richardson pass refines outcomes whose
    probability is below 1e-8, and outcomes with vanishing probability are
    handled by a one-sided limit (the contribution of a quadratically
    vanishing outcome is finite and survives the limit).
    """
    if not isinstance(povm, Povm):
        povm = Povm(povm)
    h = dtheta
    p0 = povm.probabilities(family(theta0))
    pp = povm.probabilities(family(theta0 + h))
    pm = povm.probabilities(family(theta0 - h))
    dp = (pp - pm) / (2 * h)

    needs_richardson = np.any((p0 >= tols.prob_floor) & (p0 < 1e-8))
    if needs_richardson:
        pph = povm.probabilities(family(theta0 + h / 2))
        pmh = povm.probabilities(family(theta0 - h / 2))
        dp_half = (pph - pmh) / h
        dp = (4.0 * dp_half - dp) / 3.0

    value = 0.0
    boundary = []
    lazy = {}

    def probs(theta):
        if theta not in lazy:
            lazy[theta] = povm.probabilities(family(theta))
        return lazy[theta]

    for x in range(len(povm)):
        if p0[x] >= tols.prob_floor:
            value += dp[x] ** 2 / p0[x]
            continue
        # zero-probability outcome: evaluate the term one step off theta0
        if abs(dp[x]) > 1e-6:
            boundary.append(x)
            warnings.warn(
                f"POVM outcome {x} has vanishing probability but derivative "
                f"{dp[x]:.3e}; contribution estimated by a one-sided limit")
        p_side = probs(theta0 + h)[x]
        if p_side < tols.prob_floor:
            continue
        dp_side = (probs(theta0 + 2 * h)[x] - p0[x]) / (2 * h)
        value += dp_side ** 2 / p_side
    return CfiResult(float(value), boundary)


# ----------------------------------------------------------------------
# multi-parameter estimation
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FisherMatrix:
    generators: tuple
    matrix: np.ndarray


def fisher_matrix(state, generators, tols=DEFAULT_TOLS) -> FisherMatrix:
    """Fisher matrix F_mn for a list of commuting-or-not phase generators."""
    if len(generators) == 0:
        raise ValueError("need at least one generator")
    mats = [_op_matrix(g) for g in generators]
    kind, data = _state_payload(state)
    if kind == "vector":
        data = np.outer(data, data.conj())
    dec = _eigensystem("density", data)
    W, _ = _pair_weights(dec.eigenvalues, tols.qfi_pair_floor)
    V = dec.eigenvectors
    tilde = [V.conj().T @ A @ V for A in mats]
    k = len(mats)
    F = np.zeros((k, k))
    for m in range(k):
        for n in range(m, k):
            val = 2.0 * float(np.real(np.sum(W * tilde[m] * tilde[n].conj())))
            F[m, n] = F[n, m] = val
    return FisherMatrix(tuple(generators), F)


@dataclass(frozen=True)
class CovarianceBound:
    matrix: np.ndarray
    pseudo_inverse: bool


def crb_matrix(F: FisherMatrix | np.ndarray, rcond: float = 1e-10) -> CovarianceBound:
    """Inverse Fisher matrix: the covariance lower bound of joint estimation."""
    M = F.matrix if isinstance(F, FisherMatrix) else np.asarray(F)
    w = np.linalg.eigvalsh(M)
    if w.min() <= rcond * max(w.max(), 1.0):
        return CovarianceBound(np.linalg.pinv(M, rcond=rcond), True)
    return CovarianceBound(np.linalg.inv(M), False)


# ----------------------------------------------------------------------
# roof optimizers for the variance
# ----------------------------------------------------------------------

@dataclass
class RoofResult:
    """Best decomposition found: value = sum_k p_k Var(A)_{psi_k}.

    The optimizer is local with seeded multi-start; the value is an upper
    bound on the convex-roof infimum (resp. lower bound on the concave-roof
    supremum), never a certified optimum.
    """

    value: float
    weights: np.ndarray
    vectors: np.ndarray  # columns are the decomposition states


def _roof_optimize(state, op, cardinality, maximize_g, restarts, seed, tols):
    A = _op_matrix(op)
    kind, data = _state_payload(state)
    if kind == "vector":
        data = np.outer(data, data.conj())
    dim = data.shape[0]
    if dim > 8:
        raise ValueError("roof oracles are limited to dimension <= 8")
    dec = _eigensystem("density", data)
    mask = dec.eigenvalues > 1e-12
    lam = dec.eigenvalues[mask]
    Vs = dec.eigenvectors[:, mask]
    r = lam.size
    if r > 4:
        raise ValueError(f"roof oracles are limited to rank <= 4, state has rank {r}")
    K = cardinality if cardinality is not None else max(r * r, r)
    if K < r:
        raise ValueError(f"cardinality {K} below state rank {r}")
    sqrt_lam = np.sqrt(lam)
    B = (sqrt_lam[:, None] * (Vs.conj().T @ A @ Vs)) * sqrt_lam[None, :]
    t2 = float(np.real(np.trace(A @ A @ data)))

    def ensemble(x):
        X = x[: K * r].reshape(K, r) + 1j * x[K * r:].reshape(K, r)
        # polar retraction onto the isometry manifold V^dag V = 1
        w, U = np.linalg.eigh(X.conj().T @ X)
        inv_root = (U * (1.0 / np.sqrt(np.maximum(w, 1e-30)))) @ U.conj().T
        return X @ inv_root

    def g_of(V):
        m = np.einsum("ki,ij,kj->k", V.conj(), B, V)
        p = np.einsum("ki,i,ki->k", V.conj(), lam + 0j, V).real
        ok = p > 1e-14
        return float(np.sum(np.abs(m[ok]) ** 2 / p[ok])), p, V

    sgn = -1.0 if maximize_g else 1.0

    def cost(x):
        g, _, _ = g_of(ensemble(x))
        return sgn * g

    rng = np.random.default_rng(seed)
    best = None
    for _ in range(restarts):
        x0 = rng.standard_normal(2 * K * r)
        res = scipy.optimize.minimize(cost, x0, method="L-BFGS-B",
                                      options={"maxiter": 400, "ftol": 1e-14, "gtol": 1e-12})
        if best is None or res.fun < best.fun:
            best = res
    g_best, p, V = g_of(ensemble(best.x))
    avg_var = t2 - g_best
    # materialise the decomposition: psi_k ~ sum_i V_ki sqrt(lam_i) |i>
    raw = (V * sqrt_lam[None, :]) @ Vs.T  # K x dim, rows are unnormalised states
    weights = np.einsum("kd,kd->k", raw.conj(), raw).real
    keep = weights > 1e-14
    vectors = (raw[keep] / np.sqrt(weights[keep])[:, None]).T
    return RoofResult(float(avg_var), weights[keep], vectors)


def convex_roof_oracle(state, op, cardinality=None, restarts: int = 32,
                       seed: int = 7, tols=DEFAULT_TOLS) -> RoofResult:
    """Numerically minimise the average pure-state variance over decompositions.

    The minimum equals F_Q/4; the returned value is the best local optimum
    found and therefore an upper bound on it.
    """
    return _roof_optimize(state, op, cardinality, True, restarts, seed, tols)


def concave_roof_oracle(state, op, cardinality=None, restarts: int = 32,
                        seed: int = 7, tols=DEFAULT_TOLS) -> RoofResult:
    """Numerically maximise the average pure-state variance over decompositions.

    The maximum equals Var(A) on the mixed state; the returned value is a
    lower bound on it.
    """
    return _roof_optimize(state, op, cardinality, False, restarts, seed, tols)


@dataclass(frozen=True)
class RoofSandwich:
    average_variance: float
    lower: float   # F_Q / 4
    upper: float   # Var on the mixed state
    holds: bool


def roof_sandwich_check(state, op, weights, vectors, tol: float = 1e-8) -> RoofSandwich:
    """Verify F_Q/4 <= sum p_k Var_k <= Var for an explicit decomposition."""
    A = _op_matrix(op)
    kind, data = _state_payload(state)
    rho = np.outer(data, data.conj()) if kind == "vector" else data
    weights = np.asarray(weights, dtype=float)
    vectors = np.asarray(vectors, dtype=complex)
    rebuilt = (vectors * weights[None, :]) @ vectors.conj().T
    if np.abs(rebuilt - rho).max() > 1e-9:
        raise ValueError("decomposition does not reproduce the state "
                         f"(max deviation {np.abs(rebuilt - rho).max():.2e})")
    avg = 0.0
    for k in range(weights.size):
        _, var = _mean_and_var("vector", vectors[:, k], A)
        avg += weights[k] * var
    lower = qfi(rho, A).value / 4.0
    _, upper = _mean_and_var("density", rho, A)
    holds = (lower - tol <= avg) and (avg <= upper + tol)
    return RoofSandwich(float(avg), float(lower), float(upper), bool(holds))
