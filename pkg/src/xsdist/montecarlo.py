"""Monte-Carlo simulator of the random-matrix scattering model.

The resonant part is an N x N Gaussian random matrix H with density
proportional to exp(-beta N tr(H^2) / 4 v^2), i.e. semicircle support
[-2v, 2v]; channels couple through a fixed orthogonal frame W with
W_c^T W_d = gamma_c delta_cd / pi.  The scattering matrix is

    S(E) = 1 - 2 pi i W^dag G(E) W,   G(E)^-1 = E - H + i pi W W^dag.

Samples are reproducible and order-independent: sample i draws from a
counter-based Philox stream keyed by (seed, i), so thread scheduling cannot
change the output.  The coupling frame is drawn once per run from its own
reserved stream.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .params import ScatteringConfig

_FRAME_KEY = 2 ** 64 - 1
_BOOT_KEY = 2 ** 64 - 2


def _stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.array([seed, index], dtype=np.uint64)))


def sample_hamiltonian(N: int, beta: int, v: float, rng: np.random.Generator) -> np.ndarray:
    """One draw of H with density ~ exp(-beta N tr(H^2) / 4 v^2).

    Implied second moments: beta=1 (real symmetric) Var H_ii = 2v^2/N and
    Var H_ij = v^2/N off the diagonal; beta=2 (Hermitian) Var H_ii = v^2/N
    and Var Re H_ij = Var Im H_ij = v^2/2N.  Both give semicircle radius 2v.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    scale = v / np.sqrt(N)
    if beta == 1:
        x = rng.standard_normal((N, N))
        return (x + x.T) * (scale / np.sqrt(2.0))
    if beta == 2:
        x = rng.standard_normal((N, N))
        y = rng.standard_normal((N, N))
        a = x + 1j * y
        return (a + a.conj().T) * (scale / 2.0)
    raise ValueError(f"beta must be 1 or 2, got {beta}")


def coupling_vectors(N: int, M: int, gammas, rng: np.random.Generator) -> np.ndarray:
    """Fixed real coupling frame, shape (N, M), with W_c^T W_d = gamma_c delta_cd / pi."""
    gammas = np.asarray(gammas, dtype=float)
    if M > N:
        raise ValueError(f"need M <= N, got M={M}, N={N}")
    if len(gammas) != M:
        raise ValueError("one gamma per channel required")
    q, r = np.linalg.qr(rng.standard_normal((N, M)))
    q = q * np.sign(np.where(np.diag(r) == 0.0, 1.0, np.diag(r)))  # fix QR sign freedom
    return q * np.sqrt(gammas / np.pi)


def smatrix(H: np.ndarray, W: np.ndarray, E: float) -> np.ndarray:
    """M x M scattering matrix by direct solve of G^-1 against the coupling block."""
    N, M = W.shape
    ginv = E * np.eye(N, dtype=complex) - H + 1j * np.pi * (W @ W.conj().T)
    X = np.linalg.solve(ginv, W.astype(complex))
    return np.eye(M, dtype=complex) - 2j * np.pi * (W.conj().T @ X)


def _smatrix_lowrank(H: np.ndarray, W: np.ndarray, E: float) -> np.ndarray:
    """Same S through the rank-M update formula; one solve of (E - H) only.

    With A = E - H and B = W^dag A^-1 W,
        W^dag G W = B - B ((i pi)^-1 + B)^-1 B.
    Roughly twice as fast as the direct complex solve for real H.
    """
    N, M = W.shape
    A = E * np.eye(N, dtype=H.dtype) - H
    assume = "sym" if np.isrealobj(H) else "her"
    X = scipy.linalg.solve(A, W.astype(H.dtype), assume_a=assume)
    B = W.conj().T @ X
    Z = B - B @ np.linalg.solve(np.eye(M) / (1j * np.pi) + B, B)
    return np.eye(M, dtype=complex) - 2j * np.pi * Z


@dataclass
class EnsembleRun:
    """Sampled S-matrix elements with full seed provenance.

    s_ab, s_ba have shape (n_samples, nE); s_diag (n_samples, nE, M).
    full_S holds every `keep_full_every`-th full matrix for auditing.
    """

    config: ScatteringConfig
    N: int
    n_samples: int
    seed: int
    E_points: tuple
    s_ab: np.ndarray
    s_ba: np.ndarray
    s_diag: np.ndarray
    diagnostics: dict = field(default_factory=dict)
    full_S: np.ndarray | None = None
    full_indices: np.ndarray | None = None

    def sigma_ab(self, e_index: int = 0) -> np.ndarray:
        """Off-diagonal cross sections |S_ab|^2."""
        return np.abs(self.s_ab[:, e_index]) ** 2


def run_ensemble(config: ScatteringConfig, N: int, n_samples: int, seed: int,
                 E_points=None, threads: int = 1, keep_full_every: int = 0,
                 use_lowrank: bool = True) -> EnsembleRun:
    """Draw n_samples independent (H, S) realizations at a fixed coupling frame.

    Deterministic for fixed (config, N, n_samples, seed) regardless of
    `threads`; each sample owns the Philox stream keyed (seed, index).
    """
    if N < config.M:
        raise ValueError("Hamiltonian dimension must be at least M")
    gammas = config.gammas()
    W = coupling_vectors(N, config.M, gammas, _stream(seed, _FRAME_KEY))
    if E_points is None:
        E_points = (config.E,)
    E_points = tuple(float(e) for e in E_points)
    nE = len(E_points)
    M = config.M
    ia, ib = config.a - 1, config.b - 1

    s_ab = np.empty((n_samples, nE), dtype=complex)
    s_ba = np.empty((n_samples, nE), dtype=complex)
    s_diag = np.empty((n_samples, nE, M), dtype=complex)
    keep_idx = (np.arange(0, n_samples, keep_full_every)
                if keep_full_every else np.empty(0, dtype=int))
    full_S = np.empty((len(keep_idx), nE, M, M), dtype=complex) if keep_full_every else None
    keep_pos = {int(s): j for j, s in enumerate(keep_idx)}

    unit_res = np.zeros(n_samples)
    sym_res = np.zeros(n_samples)
    retries = np.zeros(n_samples, dtype=int)
    eyeM = np.eye(M)
    # the rank-M update only pays off for the real solve
    smat = _smatrix_lowrank if (use_lowrank and config.beta == 1) else smatrix

    def work(i):
        rng = _stream(seed, i)
        for attempt in range(4):
            H = sample_hamiltonian(N, config.beta, config.v, rng)
            try:
                for k, E in enumerate(E_points):
                    S = smat(H, W, E)
                    s_ab[i, k] = S[ia, ib]
                    s_ba[i, k] = S[ib, ia]
                    s_diag[i, k] = np.diag(S)
                    unit_res[i] = max(unit_res[i],
                                      np.abs(S @ S.conj().T - eyeM).max())
                    sym_res[i] = max(sym_res[i], np.abs(S - S.T).max())
                    if full_S is not None and i in keep_pos:
                        full_S[keep_pos[i], k] = S
                return
            except np.linalg.LinAlgError:
                retries[i] += 1
        raise np.linalg.LinAlgError(f"sample {i}: repeated singular solves")

    if threads <= 1:
        for i in range(n_samples):
            work(i)
    else:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, range(n_samples), chunksize=256))

    diag = {
        "max_unitarity_residual": float(unit_res.max()) if n_samples else 0.0,
        "max_symmetry_residual": float(sym_res.max()) if n_samples else 0.0,
        "n_retries": int(retries.sum()),
    }
    return EnsembleRun(config=config, N=N, n_samples=n_samples, seed=seed,
                       E_points=E_points, s_ab=s_ab, s_ba=s_ba, s_diag=s_diag,
                       diagnostics=diag, full_S=full_S,
                       full_indices=keep_idx if keep_full_every else None)


def empirical_charfunc(samples: np.ndarray, k1, k2):
    """Characteristic-function estimate mean exp(-i k1 Re s - i k2 Im s).

    k1, k2 are broadcast-compatible arrays; returns (values, standard errors)
    of the same shape.  The standard error combines the real and imaginary
    scatter, SE = sqrt((Var cos + Var sin) / n).
    """
    s = np.asarray(samples).ravel()
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    k1b, k2b = np.broadcast_arrays(k1, k2)
    shape = k1b.shape
    kk1, kk2 = k1b.ravel(), k2b.ravel()
    n = len(s)
    acc = np.zeros(len(kk1), dtype=complex)
    acc2 = np.zeros(len(kk1))
    chunk = max(1, 10_000_000 // max(len(kk1), 1))
    for start in range(0, n, chunk):
        z = np.exp(-1j * (np.outer(s[start:start + chunk].real, kk1)
                          + np.outer(s[start:start + chunk].imag, kk2)))
        acc += z.sum(axis=0)
        acc2 += (z.real ** 2 + z.imag ** 2).sum(axis=0)
    mean = acc / n
    var = np.maximum(acc2 / n - np.abs(mean) ** 2, 0.0) * n / max(n - 1, 1)
    se = np.sqrt(var / n)
    return mean.reshape(shape), se.reshape(shape)


def empirical_transmission(run: EnsembleRun, e_index: int = 0, n_boot: int = 200):
    """Per-channel T_c = 1 - |<S_cc>|^2 with bootstrap standard errors.

    Uses the ensemble-averaged element; the literal per-sample form
    1 - |S_cc|^2 would mix in the fluctuating part.
    """
    diag = run.s_diag[:, e_index, :]
    n = diag.shape[0]
    if n < 1000:
        raise ValueError("need at least 1e3 samples for a stable average")
    T = 1.0 - np.abs(diag.mean(axis=0)) ** 2
    rng = _stream(run.seed, _BOOT_KEY)
    boots = np.empty((n_boot, run.config.M))
    for b in range(n_boot):
        idx = rng.integers(0, n, size=n)
        boots[b] = 1.0 - np.abs(diag[idx].mean(axis=0)) ** 2
    return T, boots.std(axis=0, ddof=1)
