"""Characteristic function of (Re S_ab, Im S_ab) for the orthogonal class.

The exact expression is a fourfold integral over lambda0 in [-1,1],
lambda1, lambda2 in [1, inf) and an angle psi in [0, 2pi):

    R(k) = 1 + (1/8 pi) int d(lambda) d(psi)  Jac * F_O * (kappa_1 + ... + kappa_4)

where the kappa's are polynomials in per-channel quantities p, q, r combined
with Bessel factors J_n(omega), omega^2 = 4 X Y, and ratios m = Y/X, l = X/Y
(appendix bookkeeping).  Every product appearing in the sum has the shape
m^(n/2) J_n(omega) or l^(n/2) J_n(omega), which equals (2Y)^n c_n(omega^2)
resp. (2X)^n c_n(omega^2) with the entire kernel c_n(s) = J_n(sqrt s)/s^(n/2).
This implementation therefore never takes a square root of X, Y or omega^2:
the X Y <= 0 cases (counted in the diagnostics) are handled by the same
expressions through the I_n continuation built into c_n.

Numerics: lambda0 = cos(tau^2), lambda_j = cosh(u_j) with u ordered by
splitting the (u1, u2) square into its two triangles u1 <= u2 and u1 >= u2
(|lambda1 - lambda2| is smooth on each), and square-root grading of all
three variables to tame the (lambda_j - lambda0)^-2 corner at 1.  The psi
integral is a periodic trapezoid folded into the integrand; since psi only
enters through exp(2 i psi), the sum runs over n_psi/2 distinct phases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bessel
from .gue import truncation_u
from .params import ChannelKernel
from .quadrature import QuadratureSpec, adaptive_3d


@dataclass
class GoeDiagnostics:
    """Counters accumulated over all integrand evaluations of one call."""

    n_points: int = 0
    n_omega2_negative: int = 0
    n_omega2_above_one: int = 0

    def merge(self, other: "GoeDiagnostics"):
        self.n_points += other.n_points
        self.n_omega2_negative += other.n_omega2_negative
        self.n_omega2_above_one += other.n_omega2_above_one

    @property
    def omega2_outside_fraction(self) -> float:
        if self.n_points == 0:
            return 0.0
        return (self.n_omega2_negative + self.n_omega2_above_one) / self.n_points


def pqr_terms(k: complex, lambdas, kernel: ChannelKernel):
    """Literal per-channel appendix quantities at one quadrature point.

    Returns {channel: (p0, p1, p2, q_plus, q_minus, r_plus, r_minus)} for the
    observed channels a and b; r equals conj(q) identically because the only
    complex ingredient of q is the prefactor k/(8i) (E-ratio, g- and the
    lambda denominators are real).
    """
    l0, l1, l2 = lambdas
    kmod = abs(k)
    out = {}
    for name, gp, gm in (("a", kernel.gp_a, kernel.gm_a),
                         ("b", kernel.gp_b, kernel.gm_b)):
        den0, den1, den2 = 1.0 / (gp + l0), 1.0 / (gp + l1), 1.0 / (gp + l2)
        p0 = kmod / 8.0 * math.sqrt(abs(l0 * l0 - 1.0)) * den0
        p1 = kmod / 8.0 * math.sqrt(abs(l1 * l1 - 1.0)) * den1
        p2 = kmod / 8.0 * math.sqrt(abs(l2 * l2 - 1.0)) * den2
        pref = (k / 8j) * (kernel.e_ratio + 1j * gm)
        q_plus = pref * (den1 + den2 - 2.0 * den0)
        q_minus = pref * (den1 - den2)
        out[name] = (p0, p1, p2, q_plus, q_minus,
                     np.conj(q_plus), np.conj(q_minus))
    return out


class _ChannelTerms:
    """Vectorized p/q/r for one channel over a batch of quadrature points.

    p's have the point-batch shape; q's and r's are complex with the same
    shape.  Broadcasting against the psi phases happens in the kappa
    assembly.
    """

    __slots__ = ("p0", "p1", "p2", "pp", "pm", "qp", "qm", "rp", "rm")

    def __init__(self, k, kmod, gp, gm, e_ratio, s0, s1, s2, den0, den1, den2):
        c = kmod / 8.0
        self.p0 = c * s0 * den0
        self.p1 = c * s1 * den1
        self.p2 = c * s2 * den2
        self.pp = self.p1 + self.p2
        self.pm = self.p1 - self.p2
        pref = (k / 8j) * (e_ratio + 1j * gm)
        self.qp = pref * (den1 + den2 - 2.0 * den0)
        self.qm = pref * (den1 - den2)
        self.rp = np.conj(self.qp)
        self.rm = np.conj(self.qm)


def _bessel_factor_arrays(X, Y, kmod, mode, diag):
    """The nine products (m or l)^(n/2) J_n needed by the kappa assembly.

    mode "xy": Bessel argument omega = 2 sqrt(X Y), evaluated branch-free via
    the entire kernels c_n(4 X Y).  mode "xy_over_k": argument 2 sqrt(X Y)/|k|
    (the scaling that keeps omega^2 within [0, 1]); the ratio factors keep
    their literal m^(n/2) form.
    """
    omega2 = 4.0 * X * Y
    if diag is not None:
        diag.n_points += omega2.size
        diag.n_omega2_negative += int(np.count_nonzero(omega2 < 0.0))
        diag.n_omega2_above_one += int(np.count_nonzero(omega2 > 1.0))
    shp = omega2.shape
    if mode == "xy":
        cs = bessel.cn_reduced(4, omega2.ravel())
        c0, c1_, c2_, c3_, c4_ = (c.reshape(shp) for c in cs)
        X2 = X * X
        Y2 = Y * Y
        return (c0,
                2.0 * Y * c1_, 2.0 * X * c1_,
                4.0 * Y2 * c2_, 4.0 * X2 * c2_,
                8.0 * Y2 * Y * c3_, 8.0 * X2 * X * c3_,
                16.0 * Y2 * Y2 * c4_, 16.0 * X2 * X2 * c4_)
    if mode == "xy_over_k":
        s = omega2 / (kmod * kmod)
        cs = bessel.cn_reduced(4, s.ravel())
        c0, c1_, c2_, c3_, c4_ = (c.reshape(shp) for c in cs)
        YX = 2.0 * Y / kmod
        XK = 2.0 * X / kmod
        return (c0,
                YX * c1_, XK * c1_,
                YX * YX * c2_, XK * XK * c2_,
                YX ** 3 * c3_, XK ** 3 * c3_,
                YX ** 4 * c4_, XK ** 4 * c4_)
    raise ValueError(f"unknown bessel mode {mode!r}")


def _kappa_sum_core(ca: _ChannelTerms, cb: _ChannelTerms, z, zb, diag=None,
                    kmod=None, mode="xy"):
    """kappa_1 + kappa_2 + kappa_3 + kappa_4 on the (points x phases) grid."""
    X = 2.0 * ca.pp[..., None] + 2.0 * np.real(ca.qm[..., None] * zb)
    Y = 2.0 * cb.pp[..., None] + 2.0 * np.real(cb.qm[..., None] * z)
    (f0, f1Y, f1X, f2Y, f2X, f3Y, f3X, f4Y, f4X) = \
        _bessel_factor_arrays(X, Y, kmod, mode, diag)

    def bc(q):  # broadcast point-shaped quantity against phases
        return q[..., None] if np.ndim(q) == X.ndim - 1 else q

    # kappa_1 and kappa_2
    k21_sym = -0.25 * (128.0 * ca.p0 * cb.p0 + 14.0 * ca.pp * cb.pp
                       + 32.0 * ca.pm * cb.pm)
    k21 = bc(k21_sym) + _kappa21_bracket_b(ca, cb, z, zb)
    k1 = -(9.0 / 8.0) * (bc(ca.pp) * f1Y + bc(cb.pp) * f1X)
    k22 = -0.25 * (bc(ca.pp * ca.pp - 4.0 * ca.qm * ca.rm) * f2Y
                   + bc(cb.pp * cb.pp - 4.0 * cb.qm * cb.rm) * f2X)

    # kappa_3
    am_d, al_d = _kappa31_coeffs_b(ca, cb, z, zb)
    am_s, al_s = _kappa31_coeffs_b(cb, ca, zb, z)
    k31 = (am_d + al_s) * f1Y + (al_d + am_s) * f1X
    k32 = (_kappa32_coeff_b(ca, z, zb) * f3Y
           + _kappa32_coeff_b(cb, zb, z) * f3X)

    # kappa_4 building blocks
    E1 = bc(ca.pp) + zb * bc(ca.qm)
    E2 = bc(cb.pp) + zb * bc(cb.rm)
    E3 = bc(ca.pp) + z * bc(ca.rm)
    E4 = bc(cb.pp) + z * bc(cb.qm)
    F1 = bc(ca.pm) + zb * bc(ca.qp)
    F2 = bc(cb.pm) + z * bc(cb.qp)
    F3 = bc(ca.pm) + z * bc(ca.rp)
    F4 = bc(cb.pm) + zb * bc(cb.rp)
    p0a = bc(ca.p0); p0b = bc(cb.p0)
    dq = E1 * E4 - 2.0 * F1 * F2
    dr = E3 * E2 - 2.0 * F3 * F4
    k41 = (32.0 * (2.0 * p0a * p0a * F2 * F4 + 2.0 * p0b * p0b * F1 * F3
                   + p0a * p0b * (E1 * E2 + E3 * E4))
           + 256.0 * p0a * p0a * p0b * p0b
           + E1 * E1 * E2 * E2 + E3 * E3 * E4 * E4
           + 4.0 * dq * dr)
    k42 = (-32.0 * p0a * p0b * E1 * E3 + 2.0 * dq * E3 * E3 + 2.0 * dr * E1 * E1) * f2Y \
        + (-32.0 * p0a * p0b * E4 * E2 + 2.0 * dq * E2 * E2 + 2.0 * dr * E4 * E4) * f2X
    k43 = E1 * E1 * E3 * E3 * f4Y + E4 * E4 * E2 * E2 * f4X

    return f0 * (k21 + k41) + k1 + k31 + k22 + k42 + k32 + k43


def _kappa21_bracket_b(ca, cb, z, zb):
    def one(c1, c2, zB, zbB):
        return (-3.0 * zB * (c1.pm[..., None] * c2.qp[..., None]
                             + c2.pm[..., None] * c1.rp[..., None])
                - zbB * zbB * (c1.qm * c2.rm)[..., None])
    return one(ca, cb, z, zb) + one(cb, ca, zb, z)


def _kappa31_coeffs_b(c1, c2, z, zb):
    b = lambda q: q[..., None]
    zq = z * b(c1.rp) + zb * b(c1.qp)
    zr2 = z * b(c2.qm) + zb * b(c2.rm)
    t3 = (b(16.0 * c1.p0 * (2.0 * c1.p0 * c2.pp - 3.0 * c2.p0 * c1.pp)
            + 6.0 * c1.pp * (c1.qp * c2.qp + c1.rp * c2.rp)
            + 2.0 * c2.pp * (4.0 * c1.qp * c1.rp - c1.qm * c1.rm)
            - 4.0 * c1.pm * (c1.pp * c2.pm - 2.0 * c1.pm * c2.pp)
            - 3.0 * c1.pp * (c1.qm * c2.qm + c1.rm * c2.rm + c1.pp * c2.pp))
          - (zb * zb / 2.0) * b(c1.qm) * (b(4.0 * c1.pp * c2.rm + 3.0 * c2.pp * c1.qm)
                                          + 2.0 * zb * b(c1.qm * c2.rm)
                                          - 8.0 * z * b(c1.rp * c2.rp))
          - (z * z / 2.0) * b(c1.rm) * (b(4.0 * c1.pp * c2.qm + 3.0 * c2.pp * c1.rm)
                                        + 2.0 * z * b(c2.qm * c1.rm)
                                        - 8.0 * zb * b(c1.qp * c2.qp)))
    a_m = (-2.0 * b(c1.pp * c1.pp + c1.qm * c1.rm) * zr2
           + 2.0 * b(c1.pp * c2.pm + 4.0 * c1.pm * c2.pp) * zq
           + t3)
    a_l = (-4.0 * b(8.0 * c1.p0 * c2.p0 + c1.pp * c2.pp + c1.pm * c2.pm) * zr2
           + 2.0 * b(c2.pp * c2.pm) * zq)
    return a_m, a_l


def _kappa32_coeff_b(c1, z, zb):
    b = lambda q: q[..., None]
    return b(c1.pp) * (b(c1.pp * c1.pp + 2.0 * c1.qm * c1.rm)
                       + 1.5 * (zb * zb * b(c1.qm * c1.qm) + z * z * b(c1.rm * c1.rm))
                       + b(2.0 * c1.pp * c1.pp + c1.qm * c1.rm)
                       * (zb * b(c1.qm) + z * b(c1.rm)))


def kappa_sum(k: complex, point, kernel: ChannelKernel, diag: GoeDiagnostics | None = None,
              bessel_mode: str = "xy") -> complex:
    """kappa_1 + ... + kappa_4 at a single (lambda0, lambda1, lambda2, psi) point."""
    l0, l1, l2, psi = point
    kmod = abs(k)
    s0 = math.sqrt(abs(l0 * l0 - 1.0))
    s1 = math.sqrt(abs(l1 * l1 - 1.0))
    s2 = math.sqrt(abs(l2 * l2 - 1.0))
    arr = lambda x: np.asarray([x], dtype=float)
    ca = _ChannelTerms(k, kmod, kernel.gp_a, kernel.gm_a, kernel.e_ratio,
                       arr(s0), arr(s1), arr(s2),
                       arr(1.0 / (kernel.gp_a + l0)), arr(1.0 / (kernel.gp_a + l1)),
                       arr(1.0 / (kernel.gp_a + l2)))
    cb = _ChannelTerms(k, kmod, kernel.gp_b, kernel.gm_b, kernel.e_ratio,
                       arr(s0), arr(s1), arr(s2),
                       arr(1.0 / (kernel.gp_b + l0)), arr(1.0 / (kernel.gp_b + l1)),
                       arr(1.0 / (kernel.gp_b + l2)))
    z = np.asarray([np.exp(2j * psi)])
    val = _kappa_sum_core(ca, cb, z[None, :], np.conj(z)[None, :], diag,
                          kmod=kmod, mode=bessel_mode)
    return complex(val[0, 0])


def _phase_grid(n_psi):
    # psi enters only through exp(2 i psi): n_psi trapezoid points on [0, 2pi)
    # collapse to n_psi/2 distinct phases on the unit circle.
    n_z = max(n_psi // 2, 2)
    ang = 2.0 * np.pi * np.arange(n_z) / n_z
    z = np.exp(1j * ang)
    return z[None, :], np.conj(z)[None, :]


class _GoeIntegrand:
    """Graded-triangle integrand of the 3D outer integral, psi-sum folded in.

    Points are (tau, t, w) with lambda0 = cos(tau^2) and, summing both
    (u1, u2) triangles, lambda_j = cosh of (t w)^2 and w^2.  Output is one
    column per requested k.
    """

    def __init__(self, ks, kernel, n_psi, diag, force_both_triangles=False,
                 bessel_mode="xy"):
        self.ks = [complex(k) for k in ks]
        self.kernel = kernel
        self.z, self.zb = _phase_grid(n_psi)
        self.symmetric = (self.z.shape[1] % 2 == 0) and not force_both_triangles
        self.bessel_mode = bessel_mode
        self.diag = diag

    def _channel(self, k, kmod, gp, gm, s0, s1, s2, l0, l1, l2):
        return _ChannelTerms(k, kmod, gp, gm, self.kernel.e_ratio, s0, s1, s2,
                             1.0 / (gp + l0), 1.0 / (gp + l1), 1.0 / (gp + l2))

    def _one_triangle(self, tau, t, w, swap):
        ker = self.kernel
        u_hi = w * w
        u_lo = (t * w) ** 2
        u1, u2 = (u_lo, u_hi) if not swap else (u_hi, u_lo)
        th0 = tau * tau
        l0 = np.cos(th0)
        s0 = np.sin(th0)
        l1, s1 = np.cosh(u1), np.sinh(u1)
        l2, s2 = np.cosh(u2), np.sinh(u2)
        jac_sub = 8.0 * tau * t * w ** 3
        # cancellation-free corner: cosh u - cos th = 2 sinh^2(u/2) + 2 sin^2(th/2)
        # and cosh u1 - cosh u2 = 2 sinh((u1+u2)/2) sinh((u1-u2)/2)
        sh_half = np.sin(0.5 * th0) ** 2
        d1 = 2.0 * (np.sinh(0.5 * u1) ** 2 + sh_half)
        d2 = 2.0 * (np.sinh(0.5 * u2) ** 2 + sh_half)
        d1 = np.maximum(d1, 1e-280)
        d2 = np.maximum(d2, 1e-280)
        dcosh = 2.0 * np.sinh(0.5 * (u1 + u2)) * np.abs(np.sinh(0.5 * (u1 - u2)))
        geom = s0 ** 3 * dcosh / (2.0 * d1 * d1 * d2 * d2)
        f_o = np.ones_like(l0)
        for g in ker.g_plus:
            f_o = f_o * (g + l0) / np.sqrt((g + l1) * (g + l2))
        base = jac_sub * geom * f_o
        cols = []
        for k in self.ks:
            kmod = abs(k)
            ca = self._channel(k, kmod, ker.gp_a, ker.gm_a, s0, s1, s2, l0, l1, l2)
            cb = self._channel(k, kmod, ker.gp_b, ker.gm_b, s0, s1, s2, l0, l1, l2)
            ks_grid = _kappa_sum_core(ca, cb, self.z, self.zb, self.diag,
                                      kmod=kmod, mode=self.bessel_mode)
            cols.append(base * ks_grid.mean(axis=-1))
        return np.stack(cols, axis=1)

    def __call__(self, pts):
        tau, t, w = pts[:, 0], pts[:, 1], pts[:, 2]
        if self.symmetric:
            # swapping lambda1 <-> lambda2 flips the signs of p-, q-, r- and is
            # undone by z -> -z; with a negation-closed phase grid the psi sum
            # of either triangle is identical, so integrate one and double it
            # (unit-tested against the explicit two-triangle evaluation).
            return 2.0 * self._one_triangle(tau, t, w, False)
        return self._one_triangle(tau, t, w, False) + self._one_triangle(tau, t, w, True)


def _probe_points(t_max, w_max):
    g = np.array([0.12, 0.37, 0.61, 0.83])
    pts = np.stack(np.meshgrid(g * t_max, g, g * w_max, indexing="ij"), axis=-1)
    return pts.reshape(-1, 3)


def _converged_n_psi(ks, kernel, n_psi, t_max, w_max, tol):
    """Double the psi-trapezoid until the probe correction is negligible."""
    pts = _probe_points(t_max, w_max)
    n = max(n_psi, 8)
    base = _GoeIntegrand(ks, kernel, n, GoeDiagnostics())(pts)
    while n < 1024:
        fine = _GoeIntegrand(ks, kernel, 2 * n, GoeDiagnostics())(pts)
        scale = np.abs(fine).max()
        if scale == 0.0 or np.abs(fine - base).max() <= tol * scale:
            return n
        base = fine
        n *= 2
    return n


def charfunc_goe_multi(k_points, kernel: ChannelKernel,
                       quad: QuadratureSpec = QuadratureSpec()):
    """R(k1, k2) for a batch of k points sharing one adaptive panel tree.

    Returns (values, error_estimates, diagnostics); refinement is driven by
    the worst component.  Zero k's are answered exactly.  The psi grid is
    doubled until a probe set of integrand values stops moving; the initial
    panel grid is scaled with max |k| so the Bessel oscillation is resolved
    before adaptive refinement starts.
    """
    if kernel.beta != 1:
        raise ValueError("orthogonal-class evaluator needs a beta=1 kernel")
    ks = [complex(k1, k2) for (k1, k2) in k_points]
    diag = GoeDiagnostics()
    vals = np.ones(len(ks), dtype=complex)
    errs = np.zeros(len(ks))
    live = [i for i, k in enumerate(ks) if k != 0]
    if not live:
        return vals, errs, diag
    ks_live = [ks[i] for i in live]
    u_max = truncation_u(kernel, quad.abs_tol, quad.u_max)
    w_max = math.sqrt(u_max)
    t_max = math.sqrt(math.pi)
    n_psi = _converged_n_psi(ks_live, kernel, quad.n_psi, t_max, w_max, 1e-7)
    integrand = _GoeIntegrand(ks_live, kernel, n_psi, diag)
    # omega grows like |k| * O(1); keep < ~1 oscillation per initial panel
    kmax = max(abs(k) for k in ks_live)
    n_tau = max(2, min(12, int(math.ceil(kmax / 4.0))))
    n_w = max(2, min(12, int(math.ceil(kmax / 4.0))))
    n_t = max(2, min(8, int(math.ceil(kmax / 8.0))))
    grid = [list(np.linspace(0.0, t_max, n_tau + 1)),
            list(np.linspace(0.0, 1.0, n_t + 1)),
            list(np.linspace(0.0, w_max, n_w + 1))]
    val, err = adaptive_3d(integrand,
                           ((0.0, t_max), (0.0, 1.0), (0.0, w_max)),
                           rel_tol=quad.rel_tol, abs_tol=quad.abs_tol * 4.0,
                           max_subdivisions=quad.max_subdivisions,
                           initial_grid=grid)
    val = np.atleast_1d(val)
    err = np.atleast_1d(err) if np.ndim(err) else np.asarray([err])
    for j, i in enumerate(live):
        vals[i] = 1.0 + 0.25 * val[j]
        errs[i] = 0.25 * err[j]
    return vals, errs, diag


def charfunc_goe_err(k1: float, k2: float, kernel: ChannelKernel,
                     quad: QuadratureSpec = QuadratureSpec()):
    """R(k1, k2) with error estimate and diagnostics."""
    vals, errs, diag = charfunc_goe_multi([(k1, k2)], kernel, quad)
    return complex(vals[0]), float(errs[0]), diag


def charfunc_goe(k1: float, k2: float, kernel: ChannelKernel,
                 quad: QuadratureSpec = QuadratureSpec()) -> complex:
    """R(k1, k2) for the orthogonal class (complex; imaginary part ~ 0)."""
    return charfunc_goe_err(k1, k2, kernel, quad)[0]
