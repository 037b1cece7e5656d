"""Exact-diagonalization reference for small periodic chains.

Independent of the free-fermion pipeline: the spin Hamiltonian of the model
is assembled from Pauli strings, diagonalized, and two-site reduced density
matrices are read off the ground vector by partial trace.

Basis convention: site 0 is the most significant bit, bit value 0 is
sigma^z = +1.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import CapacityError, ConfigurationError, NumericalError
from .corr import GSeries, Method
from .model import ModelParams, dispersion
from .rdm import Correlators, TwoSiteState

__all__ = [
    "MAX_CHAIN_LENGTH",
    "DENSE_LIMIT",
    "DenseGroundState",
    "dense_hamiltonian",
    "ground_state",
    "solve",
    "two_site_rdm",
    "oracle_correlators",
    "oracle_state",
    "parity_operator",
    "ground_parity",
    "sector_matched_g",
]

MAX_CHAIN_LENGTH = 14
DENSE_LIMIT = 12  # dense eigh up to 2^12; sparse Lanczos above
DEGENERACY_TOL = 1e-8

_I = sp.identity(2, format="csr", dtype=float)
_X = sp.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
_Y = sp.csr_matrix(np.array([[0.0, -1j], [1j, 0.0]]))
_Z = sp.csr_matrix(np.array([[1.0, 0.0], [0.0, -1.0]]))


def _string(L, ops):
    """Sparse kron of single-site operators; ``ops`` maps site -> 2x2 matrix."""
    return reduce(lambda a, b: sp.kron(a, b, format="csr"), [ops.get(k, _I) for k in range(L)])


def _chain_length(params: ModelParams) -> int:
    L = params.chain_length
    if L is None:
        raise ConfigurationError("the oracle needs a finite chain_length")
    if L > MAX_CHAIN_LENGTH:
        raise CapacityError(f"chain_length {L} exceeds the oracle limit {MAX_CHAIN_LENGTH}")
    return L


def dense_hamiltonian(params: ModelParams, sparse: bool = False):
    """2^L x 2^L real symmetric matrix of the periodic chain.

    H = -sum_j [ (1+g)/2 X_j X_{j+1} + (1-g)/2 Y_j Y_{j+1} + lam Z_j
                 + alpha Z_j ((1+d)/2 X_{j-1} X_{j+1} + (1-d)/2 Y_{j-1} Y_{j+1}) ]
    with indices mod L. Returns a CSR matrix when ``sparse`` is true.
    """
    L = _chain_length(params)
    g, lam, a, d = params.gamma, params.lam, params.alpha, params.delta
    dim = 2 ** L
    H = sp.csr_matrix((dim, dim), dtype=complex)
    for j in range(L):
        jp, jm = (j + 1) % L, (j - 1) % L
        H = H - (1 + g) / 2 * _string(L, {j: _X, jp: _X})
        H = H - (1 - g) / 2 * _string(L, {j: _Y, jp: _Y})
        H = H - lam * _string(L, {j: _Z})
        if a != 0.0:
            H = H - a * (1 + d) / 2 * _string(L, {jm: _X, j: _Z, jp: _X})
            H = H - a * (1 - d) / 2 * _string(L, {jm: _Y, j: _Z, jp: _Y})
    if H.nnz and abs(H.imag).max() > 1e-12:
        raise NumericalError("Hamiltonian acquired an imaginary part")
    H = H.real.tocsr()
    H.eliminate_zeros()
    return H if sparse else H.toarray()


def parity_operator(L: int) -> np.ndarray:
    """Diagonal of prod_j Z_j (the spin-flip symmetry of the model)."""
    bits = (np.arange(2 ** L)[:, None] >> np.arange(L)[None, :]) & 1
    return np.where(bits.sum(axis=1) % 2 == 0, 1.0, -1.0)


@dataclass(frozen=True)
class DenseGroundState:
    energy: float
    amplitudes: np.ndarray
    degeneracy: int
    chain_length: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes)
        if amps.shape != (2 ** self.chain_length,):
            raise ConfigurationError("amplitude vector must have length 2^L")
        if abs(np.linalg.norm(amps) - 1.0) > 1e-10:
            raise NumericalError("ground vector is not normalized")


def ground_state(H, chain_length: int | None = None, n_eigs: int = 6) -> DenseGroundState:
    """Lowest eigenpair of H; within a degenerate level, the most spin-flip-even vector.

    Dense ``eigh`` is used up to 2^12, sparse Lanczos (``eigsh``) above.
    """
    dim = H.shape[0]
    if H.shape != (dim, dim):
        raise ConfigurationError("H must be square")
    L = chain_length if chain_length is not None else int(round(np.log2(dim)))
    if 2 ** L != dim:
        L = None
    if dim <= 2 ** DENSE_LIMIT:
        dense = H.toarray() if sp.issparse(H) else np.asarray(H)
        if not np.allclose(dense, dense.T.conj(), atol=1e-12):
            raise ConfigurationError("H must be symmetric")
        evals, evecs = scipy.linalg.eigh(dense)
    else:
        try:
            evals, evecs = spla.eigsh(sp.csr_matrix(H), k=min(n_eigs, dim - 2), which="SA", tol=1e-12)
        except spla.ArpackNoConvergence as exc:
            raise NumericalError("Lanczos did not converge") from exc
        order = np.argsort(evals)
        evals, evecs = evals[order], evecs[:, order]

    e0 = evals[0]
    degenerate = np.abs(evals - e0) <= DEGENERACY_TOL * max(1.0, abs(e0))
    d = int(degenerate.sum())
    block = evecs[:, degenerate]
    if d > 1 and L is not None:
        plus = (1.0 + parity_operator(L)) / 2.0
        overlap = block.conj().T @ (plus[:, None] * block)
        w, c = np.linalg.eigh(overlap)
        vec = block @ c[:, -1]
    else:
        vec = block[:, 0]
    vec = vec / np.linalg.norm(vec)
    # fix the global phase so the largest component is real and positive
    k = int(np.argmax(np.abs(vec)))
    vec = vec * (abs(vec[k]) / vec[k])

    Hv = H @ vec
    residual = np.linalg.norm(Hv - e0 * vec)
    if residual > 1e-8 * max(1.0, abs(e0)):
        raise NumericalError(f"eigen-residual {residual:.2e} too large", estimate=float(e0))
    return DenseGroundState(energy=float(e0), amplitudes=vec.astype(complex), degeneracy=d,
                            chain_length=L if L is not None else 0)


def solve(params: ModelParams) -> DenseGroundState:
    """Hamiltonian plus ground state in one call."""
    L = _chain_length(params)
    H = dense_hamiltonian(params, sparse=L > DENSE_LIMIT)
    return ground_state(H, L)


def two_site_rdm(state: DenseGroundState, i: int, j: int) -> np.ndarray:
    """4x4 reduced density matrix of sites (i, j), basis |s_i s_j>."""
    L = state.chain_length
    if not (0 <= i < L and 0 <= j < L):
        raise ConfigurationError(f"sites must lie in [0, {L})")
    if i == j:
        raise ConfigurationError("sites must be distinct")
    psi = np.moveaxis(state.amplitudes.reshape((2,) * L), (i, j), (0, 1)).reshape(4, -1)
    rho = psi @ psi.conj().T
    return 0.5 * (rho + rho.conj().T)


def oracle_state(state: DenseGroundState, r: int, i: int = 0) -> TwoSiteState:
    """X-state elements of the (i, i+r) RDM, in the free-fermion magnetization convention.

    The fermionic pipeline has <Z> = G_0 = -<sigma^z>; the RDM is spin-flipped
    (u+ <-> u-) accordingly so the two are directly comparable.
    """
    rho = two_site_rdm(state, i, (i + r) % state.chain_length)
    return TwoSiteState.from_matrix(rho, distance=r).flipped()


def oracle_correlators(state: DenseGroundState, r: int, i: int = 0) -> Correlators:
    s = oracle_state(state, r, i)
    return Correlators(mag_z=s.mag_z, xx=s.xx, yy=s.yy, zz=s.zz, distance=r)


def ground_parity(state: DenseGroundState) -> int:
    """Eigenvalue (+1 or -1) of prod_j Z_j on the ground vector."""
    par = parity_operator(state.chain_length)
    value = float(np.vdot(state.amplitudes, par * state.amplitudes).real)
    if abs(abs(value) - 1.0) > 1e-8:
        raise NumericalError(f"ground vector is not a parity eigenstate (<P>={value:.3e})")
    return 1 if value > 0 else -1


def sector_matched_g(params: ModelParams, state: DenseGroundState, r_max: int) -> GSeries:
    """Finite-chain G_r on the momentum grid of the ground state's fermion sector.

    On a periodic spin ring the Jordan-Wigner fermions are antiperiodic,
    phi_k = 2 pi (k + 1/2) / L, in the parity-even sector and periodic,
    phi_k = 2 pi k / L (the grid of the finite-sum backend), in the odd one.
    Used to show that the oracle/finite-sum discrepancy is purely this
    boundary term.
    """
    L = state.chain_length
    if r_max >= L:
        raise ConfigurationError(f"r_max={r_max} must be < L={L}")
    shift = 0.5 if ground_parity(state) > 0 else 0.0
    phis = 2 * np.pi * (np.arange(L) + shift) / L
    z, y, e = dispersion(params, phis)
    rs = np.arange(-r_max, r_max + 1)[:, None]
    values = -np.mean((np.cos(phis * rs) * z + np.sin(phis * rs) * y) / e, axis=1)
    return GSeries(r_max, values, Method.FINITE, params.with_(chain_length=L))
