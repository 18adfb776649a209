"""Characteristic function of (Re S_ab, Im S_ab) for the unitary class.

The exact result is a double integral over spectral variables lambda1 in
[1, inf) and lambda2 in [-1, 1],

    R(|k|) = 1 - int dl1 int dl2  |k|^2 / (4 (l1-l2)^2) * F_U(l1, l2)
             * (t_a^1 t_b^1 + t_a^2 t_b^2) * J0(|k| sqrt(t_a^1 t_b^1)),

with t_c^j = sqrt(|l_j^2-1|) / (g_c^+ + l_j) and the channel product
F_U = prod_c (g_c^+ + l2) / (g_c^+ + l1).  It depends on k1, k2 through
|k| only, so the distributions of the real and imaginary parts coincide.

Numerically we substitute l1 = cosh u, l2 = cos theta, which absorbs the
square-root edge factors into the Jacobian and maps the domain to a finite
box.  The integrand oscillates only through J0, whose argument is monotone
in u; initial panels are cut at the Bessel zeros for large |k|.
"""

from __future__ import annotations

import math

import numpy as np

from . import bessel
from .params import ChannelKernel
from .quadrature import QuadratureSpec, adaptive_2d


def channel_factor_unitary(lambda1, lambda2, kernel: ChannelKernel):
    """prod_c (g_c^+ + lambda2) / (g_c^+ + lambda1); strictly positive."""
    lambda1 = np.asarray(lambda1, dtype=float)
    lambda2 = np.asarray(lambda2, dtype=float)
    out = np.ones(np.broadcast(lambda1, lambda2).shape)
    for g in kernel.g_plus:
        out = out * (g + lambda2) / (g + lambda1)
    return out if out.ndim else float(out)


def truncation_u(kernel: ChannelKernel, abs_tol: float, cap: float) -> float:
    """Smallest u with prod_c (g_c^+ + 1)/(g_c^+ + cosh u) < abs_tol/100, capped.

    The channel product bounds the integrand tail, which therefore decays at
    least like cosh(u)^-M.
    """
    target = math.log(abs_tol) - math.log(100.0)

    def logtail(u):
        c = math.cosh(u)
        return sum(math.log((g + 1.0) / (g + c)) for g in kernel.g_plus)

    if logtail(cap) > target:
        return cap
    lo, hi = 0.0, cap
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if logtail(mid) > target:
            lo = mid
        else:
            hi = mid
    return hi


def _bessel_arg(u, kernel):
    """|k|-free part of the J0 argument: sqrt(t_a^1 t_b^1) at lambda1 = cosh u."""
    cu = np.cosh(u)
    su = np.sinh(u)
    return np.sqrt(su / (kernel.gp_a + cu) * (su / (kernel.gp_b + cu)))


def _u_breaks(k_mod, kernel, u_max):
    """u-values where the J0 argument crosses a Bessel zero."""
    top = k_mod * _bessel_arg(np.asarray(u_max), kernel)
    zeros = bessel.j0_zeros(max(int(top / 3.0) + 2, 4))
    breaks = []
    for z in zeros:
        if z >= top:
            break
        lo, hi = 0.0, u_max
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if k_mod * _bessel_arg(np.asarray(mid), kernel) < z:
                lo = mid
            else:
                hi = mid
        breaks.append(0.5 * (lo + hi))
    return breaks


def _integrand(pts, k_mod, kernel):
    u = pts[:, 0]
    th = pts[:, 1]
    cu = np.cosh(u)
    su = np.sinh(u)
    ct = np.cos(th)
    st = np.sin(th)
    ga, gb = kernel.gp_a, kernel.gp_b
    t1a = su / (ga + cu)
    t1b = su / (gb + cu)
    t2a = st / (ga + ct)
    t2b = st / (gb + ct)
    fu = np.ones_like(u)
    for g in kernel.g_plus:
        fu = fu * (g + ct) / (g + cu)
    denom = (cu - ct) ** 2
    t11 = t1a * t1b
    core = (0.25 * k_mod * k_mod) * fu * (t11 + t2a * t2b) \
        * bessel.j0(k_mod * np.sqrt(t11))
    num = su * st * core
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where(denom > 1e-280, num / np.maximum(denom, 1e-280), 0.0)
    return val


def charfunc_gue_err(k_mod: float, kernel: ChannelKernel,
                     quad: QuadratureSpec = QuadratureSpec()):
    """R(|k|) together with the quadrature error estimate."""
    if kernel.beta != 2:
        raise ValueError("unitary-class evaluator needs a beta=2 kernel")
    if k_mod < 0:
        raise ValueError("k_mod must be >= 0")
    if k_mod == 0.0:
        return 1.0, 0.0
    u_max = truncation_u(kernel, quad.abs_tol, quad.u_max)
    breaks = _u_breaks(k_mod, kernel, u_max)
    val, err = adaptive_2d(lambda p: _integrand(p, k_mod, kernel),
                           (0.0, u_max), (0.0, math.pi),
                           rel_tol=quad.rel_tol, abs_tol=quad.abs_tol,
                           max_subdivisions=quad.max_subdivisions,
                           x_breaks=breaks or None)
    return 1.0 - float(val), float(err)


def charfunc_gue(k_mod: float, kernel: ChannelKernel,
                 quad: QuadratureSpec = QuadratureSpec()) -> float:
    """R(|k|) for the unitary class."""
    return charfunc_gue_err(k_mod, kernel, quad)[0]


def charfunc_gue_bivariate(k1: float, k2: float, kernel: ChannelKernel,
                           quad: QuadratureSpec = QuadratureSpec()) -> complex:
    """R(k1, k2) = R(|k|) as a complex value; uniform interface across classes."""
    return complex(charfunc_gue(math.hypot(k1, k2), kernel, quad))
