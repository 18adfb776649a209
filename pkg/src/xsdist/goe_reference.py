"""Deliberately literal transcription of the orthogonal-class kappa algebra.

This module exists only as a cross-check for xsdist.goe: every quantity is
written exactly as the defining formulas read, one symbol at a time, with no
common-subexpression reuse, no vectorization and no branch-free rewrites.
r_c^+- are computed from their own prefactor (i k* / 8), not as conjugates;
m^(1/2), l^(1/2) and omega = 2 sqrt(X Y) take principal square roots; the
Bessel factors come from scipy (J_n of complex argument covers omega^2 < 0).
Do not "improve" this file; its value is that it is independent of the
optimized path.
"""

from __future__ import annotations

import cmath

import numpy as np
import scipy.special

from .params import ChannelKernel


def _jn(n, omega):
    return complex(scipy.special.jv(n, omega))


def pqr_reference(k, l0, l1, l2, kernel: ChannelKernel, channel):
    """(p0, p1, p2, q+, q-, r+, r-) for one channel, literal formulas."""
    if channel == "a":
        gp, gm = kernel.gp_a, kernel.gm_a
    else:
        gp, gm = kernel.gp_b, kernel.gm_b
    e = kernel.e_ratio
    kmod = abs(k)
    p0 = kmod / 8.0 * cmath.sqrt(abs(l0 * l0 - 1.0)).real / (gp + l0)
    p1 = kmod / 8.0 * cmath.sqrt(abs(l1 * l1 - 1.0)).real / (gp + l1)
    p2 = kmod / 8.0 * cmath.sqrt(abs(l2 * l2 - 1.0)).real / (gp + l2)
    q_plus = (k / 8j) * (e + 1j * gm) * (1.0 / (gp + l1) + 1.0 / (gp + l2)
                                         - 2.0 / (gp + l0))
    q_minus = (k / 8j) * (e + 1j * gm) * (1.0 / (gp + l1) - 1.0 / (gp + l2))
    r_plus = (1j * np.conj(k) / 8.0) * (e - 1j * gm) * (1.0 / (gp + l1)
                                                        + 1.0 / (gp + l2)
                                                        - 2.0 / (gp + l0))
    r_minus = (1j * np.conj(k) / 8.0) * (e - 1j * gm) * (1.0 / (gp + l1)
                                                         - 1.0 / (gp + l2))
    return p0, p1, p2, q_plus, q_minus, r_plus, r_minus


class _Side:
    """p/q/r bundle of one channel role inside the bracket."""

    def __init__(self, p0, p1, p2, qp, qm, rp, rm):
        self.p0 = p0
        self.pp = p1 + p2
        self.pm = p1 - p2
        self.qp = qp
        self.qm = qm
        self.rp = rp
        self.rm = rm


def _kappa11_E(A, B, l, m, psi):
    return -(9.0 / 8.0) * A.pp * cmath.sqrt(m)


def _kappa21_nonbracket(A, B):
    return -(1.0 / 4.0) * (128.0 * A.p0 * B.p0 + 14.0 * A.pp * B.pp
                           + 32.0 * A.pm * B.pm)


def _kappa21_E1(A, B, l, m, psi):
    return 3.0 * cmath.exp(2j * psi) * (A.pm * B.qp + B.pm * A.rp)


def _kappa21_E2(A, B, l, m, psi):
    return cmath.exp(-4j * psi) * A.qm * B.rm


def _kappa22_E(A, B, l, m, psi):
    return -(1.0 / 4.0) * (A.pp * A.pp - 4.0 * A.qm * A.rm) * m


def _kappa31_E(A, B, l, m, psi):
    e2 = cmath.exp(2j * psi)
    e2c = cmath.exp(-2j * psi)
    e4 = cmath.exp(4j * psi)
    e4c = cmath.exp(-4j * psi)
    term1 = -2.0 * ((A.pp * A.pp + A.qm * A.rm) * cmath.sqrt(m)
                    + 2.0 * (8.0 * A.p0 * B.p0 + A.pp * B.pp + A.pm * B.pm)
                    * cmath.sqrt(l)) * (e2 * B.qm + e2c * B.rm)
    term2 = 2.0 * ((A.pp * B.pm + 4.0 * A.pm * B.pp) * cmath.sqrt(m)
                   + B.pp * B.pm * cmath.sqrt(l)) * (e2c * A.qp + e2 * A.rp)
    inner = (16.0 * A.p0 * (2.0 * A.p0 * B.pp - 3.0 * B.p0 * A.pp)
             + 6.0 * A.pp * (A.qp * B.qp + A.rp * B.rp)
             + 2.0 * B.pp * (4.0 * A.qp * A.rp - A.qm * A.rm)
             - 4.0 * A.pm * (A.pp * B.pm - 2.0 * A.pm * B.pp)
             - 3.0 * A.pp * (A.qm * B.qm + A.rm * B.rm + A.pp * B.pp)
             - (e4c / 2.0) * A.qm * (4.0 * A.pp * B.rm + 3.0 * B.pp * A.qm
                                     + 2.0 * e2c * A.qm * B.rm
                                     - 8.0 * e2 * A.rp * B.rp)
             - (e4 / 2.0) * A.rm * (4.0 * A.pp * B.qm + 3.0 * B.pp * A.rm
                                    + 2.0 * e2 * B.qm * A.rm
                                    - 8.0 * e2c * A.qp * B.qp))
    return term1 + term2 + inner * cmath.sqrt(m)


def _kappa32_E(A, B, l, m, psi):
    e2 = cmath.exp(2j * psi)
    e2c = cmath.exp(-2j * psi)
    e4 = cmath.exp(4j * psi)
    e4c = cmath.exp(-4j * psi)
    return (A.pp * ((A.pp * A.pp + 2.0 * A.qm * A.rm)
                    + 1.5 * (e4c * A.qm * A.qm + e4 * A.rm * A.rm)
                    + (2.0 * A.pp * A.pp + A.qm * A.rm)
                    * (e2c * A.qm + e2 * A.rm))
            * m * cmath.sqrt(m))


def _kappa41(A, B, psi):
    e2 = cmath.exp(2j * psi)
    e2c = cmath.exp(-2j * psi)
    return (32.0 * (2.0 * A.p0 * A.p0 * (B.pm + e2 * B.qp) * (B.pm + e2c * B.rp)
                    + 2.0 * B.p0 * B.p0 * (A.pm + e2c * A.qp) * (A.pm + e2 * A.rp)
                    + A.p0 * B.p0 * ((A.pp + e2c * A.qm) * (B.pp + e2c * B.rm)
                                     + (A.pp + e2 * A.rm) * (B.pp + e2 * B.qm)))
            + 256.0 * A.p0 * A.p0 * B.p0 * B.p0
            + (A.pp + e2c * A.qm) ** 2 * (B.pp + e2c * B.rm) ** 2
            + (A.pp + e2 * A.rm) ** 2 * (B.pp + e2 * B.qm) ** 2
            + 4.0 * ((A.pp + e2c * A.qm) * (B.pp + e2 * B.qm)
                     - 2.0 * (A.pm + e2c * A.qp) * (B.pm + e2 * B.qp))
            * ((A.pp + e2 * A.rm) * (B.pp + e2c * B.rm)
               - 2.0 * (A.pm + e2 * A.rp) * (B.pm + e2c * B.rp)))


def _kappa42(A, B, l, m, psi):
    e2 = cmath.exp(2j * psi)
    e2c = cmath.exp(-2j * psi)
    return (-32.0 * A.p0 * B.p0 * ((A.pp + e2c * A.qm) * (A.pp + e2 * A.rm) * m
                                   + (B.pp + e2 * B.qm) * (B.pp + e2c * B.rm) * l)
            + 2.0 * ((A.pp + e2c * A.qm) * (B.pp + e2 * B.qm)
                     - 2.0 * (A.pm + e2c * A.qp) * (B.pm + e2 * B.qp))
            * ((A.pp + e2 * A.rm) ** 2 * m + (B.pp + e2c * B.rm) ** 2 * l)
            + 2.0 * ((A.pp + e2 * A.rm) * (B.pp + e2c * B.rm)
                     - 2.0 * (A.pm + e2 * A.rp) * (B.pm + e2c * B.rp))
            * ((A.pp + e2c * A.qm) ** 2 * m + (B.pp + e2 * B.qm) ** 2 * l))


def _kappa43_E(A, B, l, m, psi):
    e2 = cmath.exp(2j * psi)
    e2c = cmath.exp(-2j * psi)
    return (A.pp + e2c * A.qm) ** 2 * (A.pp + e2 * A.rm) ** 2 * m * m


def _bracket_plus(E, A, B, l, m, psi):
    return E(A, B, l, m, psi) + E(B, A, m, l, -psi)


def kappa_sum_reference(k, point, kernel: ChannelKernel):
    """kappa_1 + kappa_2 + kappa_3 + kappa_4, literal appendix transcription.

    Requires X != 0 and Y != 0 at the point (l and m must exist).
    """
    l0, l1, l2, psi = point
    A = _Side(*pqr_reference(k, l0, l1, l2, kernel, "a"))
    B = _Side(*pqr_reference(k, l0, l1, l2, kernel, "b"))
    X = 2.0 * A.pp + A.qm * cmath.exp(-2j * psi) + A.rm * cmath.exp(2j * psi)
    Y = 2.0 * B.pp + B.qm * cmath.exp(2j * psi) + B.rm * cmath.exp(-2j * psi)
    if X == 0 or Y == 0:
        raise ZeroDivisionError("degenerate point: X or Y vanished")
    l = X / Y
    m = Y / X
    omega = 2.0 * cmath.sqrt(X * Y)

    kappa1 = _bracket_plus(_kappa11_E, A, B, l, m, psi) * _jn(1, omega)
    kappa21 = (_kappa21_nonbracket(A, B)
               - _bracket_plus(_kappa21_E1, A, B, l, m, psi)
               - _bracket_plus(_kappa21_E2, A, B, l, m, psi))
    kappa22 = _bracket_plus(_kappa22_E, A, B, l, m, psi)
    kappa2 = kappa21 * _jn(0, omega) + kappa22 * _jn(2, omega)
    kappa31 = _bracket_plus(_kappa31_E, A, B, l, m, psi)
    kappa32 = _bracket_plus(_kappa32_E, A, B, l, m, psi)
    kappa3 = kappa31 * _jn(1, omega) + kappa32 * _jn(3, omega)
    kappa41 = _kappa41(A, B, psi)
    kappa42 = _kappa42(A, B, l, m, psi)
    kappa43 = _bracket_plus(_kappa43_E, A, B, l, m, psi)
    kappa4 = (kappa41 * _jn(0, omega) + kappa42 * _jn(2, omega)
              + kappa43 * _jn(4, omega))
    return kappa1 + kappa2 + kappa3 + kappa4


def xy_omega_reference(k, point, kernel: ChannelKernel):
    """(X, Y, omega^2) as literal complex numbers, for realness checks."""
    l0, l1, l2, psi = point
    A = _Side(*pqr_reference(k, l0, l1, l2, kernel, "a"))
    B = _Side(*pqr_reference(k, l0, l1, l2, kernel, "b"))
    X = 2.0 * A.pp + A.qm * cmath.exp(-2j * psi) + A.rm * cmath.exp(2j * psi)
    Y = 2.0 * B.pp + B.qm * cmath.exp(2j * psi) + B.rm * cmath.exp(-2j * psi)
    return X, Y, 4.0 * X * Y
