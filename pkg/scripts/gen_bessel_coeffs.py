"""Regenerate the frozen Chebyshev coefficients used by xsdist.bessel.

Small arguments: J0 and J1/x expanded in Chebyshev series of s = x^2 on
[0, 64].  Large arguments (x >= 8): the standard amplitude/phase split

    J0(x) = sqrt(2/(pi x)) (P0 cos(x - pi/4) - Q0 sin(x - pi/4))
    J1(x) = sqrt(2/(pi x)) (P1 cos(x - 3pi/4) - Q1 sin(x - 3pi/4))

with P and (x/8)*Q fitted as Chebyshev series in t = (8/x)^2 on [0, 1].
Coefficients are computed with 50-digit arithmetic and printed ready to
paste.  The fits are checked against mpmath on a dense grid before printing.
"""

import mpmath as mp

mp.mp.dps = 50

N_SMALL = 32
N_LARGE = 24


def cheb_fit(func, n):
    """Chebyshev coefficients of func on [-1, 1] via Gauss-Chebyshev nodes."""
    nodes = [mp.cos(mp.pi * (k + mp.mpf(1) / 2) / n) for k in range(n)]
    vals = [func(x) for x in nodes]
    coeffs = []
    for j in range(n):
        acc = mp.mpf(0)
        for k in range(n):
            acc += vals[k] * mp.cos(j * mp.pi * (k + mp.mpf(1) / 2) / n)
        coeffs.append(2 * acc / n)
    coeffs[0] /= 2
    return coeffs


def cheb_eval(coeffs, w):
    b0 = b1 = mp.mpf(0)
    for c in reversed(coeffs):
        b0, b1 = 2 * w * b0 - b1 + c, b0
    return b0 - w * b1


def pq_split(nu, x):
    chi = x - (2 * nu + 1) * mp.pi / 4
    amp = mp.sqrt(mp.pi * x / 2)
    J = mp.besselj(nu, x)
    Y = mp.bessely(nu, x)
    P = amp * (J * mp.cos(chi) + Y * mp.sin(chi))
    Q = amp * (Y * mp.cos(chi) - J * mp.sin(chi))
    return P, Q


def small_funcs():
    # w in [-1,1] maps to s = 32 (w+1) in [0, 64], x = sqrt(s)
    def j0_of_w(w):
        return mp.besselj(0, mp.sqrt(32 * (w + 1)))

    def j1x_of_w(w):  # J1(x)/x, even function of x
        s = 32 * (w + 1)
        x = mp.sqrt(s)
        if x == 0:
            return mp.mpf(1) / 2
        return mp.besselj(1, x) / x

    return j0_of_w, j1x_of_w


def large_funcs(nu):
    # w in [-1,1] maps to t = (w+1)/2 in [0,1], x = 8/sqrt(t)
    def p_of_w(w):
        t = (w + 1) / 2
        x = 8 / mp.sqrt(t)
        return pq_split(nu, x)[0]

    def q_of_w(w):
        t = (w + 1) / 2
        x = 8 / mp.sqrt(t)
        return pq_split(nu, x)[1] * x / 8

    return p_of_w, q_of_w


def check_small(name, coeffs, ref, scale):
    worst = mp.mpf(0)
    for i in range(1, 400):
        x = mp.mpf(8) * i / 400
        w = x * x / 32 - 1
        approx = cheb_eval(coeffs, w) * scale(x)
        worst = max(worst, abs(approx - ref(x)))
    print(f"# {name}: max abs err on (0,8] = {mp.nstr(worst, 3)}")


def check_large(nu, pc, qc):
    worst = mp.mpf(0)
    for i in range(400):
        x = 8 + mp.mpf(392) * i / 400
        t = (8 / x) ** 2
        w = 2 * t - 1
        P = cheb_eval(pc, w)
        Q = cheb_eval(qc, w) * 8 / x
        chi = x - (2 * nu + 1) * mp.pi / 4
        approx = mp.sqrt(2 / (mp.pi * x)) * (P * mp.cos(chi) - Q * mp.sin(chi))
        worst = max(worst, abs(approx - mp.besselj(nu, x)))
    print(f"# J{nu} large-x: max abs err on [8,400] = {mp.nstr(worst, 3)}")


def emit(name, coeffs):
    print(f"{name} = (")
    for c in coeffs:
        print(f"    {mp.nstr(c, 22)},")
    print(")")


def main():
    j0w, j1xw = small_funcs()
    c_j0 = cheb_fit(j0w, N_SMALL)
    c_j1x = cheb_fit(j1xw, N_SMALL)
    check_small("J0 small", c_j0, lambda x: mp.besselj(0, x), lambda x: 1)
    check_small("J1 small", c_j1x, lambda x: mp.besselj(1, x), lambda x: x)

    p0w, q0w = large_funcs(0)
    c_p0 = cheb_fit(p0w, N_LARGE)
    c_q0 = cheb_fit(q0w, N_LARGE)
    check_large(0, c_p0, c_q0)

    p1w, q1w = large_funcs(1)
    c_p1 = cheb_fit(p1w, N_LARGE)
    c_q1 = cheb_fit(q1w, N_LARGE)
    check_large(1, c_p1, c_q1)

    emit("_J0_SMALL", c_j0)
    emit("_J1X_SMALL", c_j1x)
    emit("_P0_LARGE", c_p0)
    emit("_Q0_LARGE", c_q0)
    emit("_P1_LARGE", c_p1)
    emit("_Q1_LARGE", c_q1)


if __name__ == "__main__":
    main()
