"""In-repo Bessel functions J0..J4 and I0..I4, plus the reduced kernels
J_n(sqrt(s)) / s^(n/2) that the orthogonal-class integrand consumes.

J0 and J1 use frozen Chebyshev tables (regenerate with
scripts/gen_bessel_coeffs.py): an expansion in x^2 on [0, 8] and the
amplitude/phase split sqrt(2/pi x) (P cos chi - Q sin chi) beyond.  Higher
orders come from three-term recurrence: upward from (J0, J1) where stable
(x >= 5), otherwise downward with Miller normalization
J0 + 2 J2 + 2 J4 + ... = 1.  Modified functions I0..I4 always use downward
recurrence, normalized by I0 + 2 I1 + 2 I2 + ... = e^x.

Everything is vectorized over numpy arrays.
"""

from __future__ import annotations

import numpy as np

_J0_SMALL = (
    0.1577279714748901195638,
    -0.008723442352852221290793,
    0.2651786132033368098671,
    -0.3700949938726497790334,
    0.1580671023320972612777,
    -0.03489376941140888516317,
    0.004819180069467604496778,
    -0.0004606261662062750475036,
    0.00003246032882100508080626,
    -0.00000176194690776215074946,
    7.608163592418781866974e-8,
    -2.679253530557672898335e-9,
    7.84869631447946441653e-11,
    -1.943834686737016570621e-12,
    4.125320595634373932613e-14,
    -7.58850812544754633762e-16,
    1.221851587396141103442e-17,
    -1.736789607700236768294e-19,
    2.195793203319560353679e-21,
    -2.485566419364292266538e-23,
    2.534024606818972691103e-25,
    -2.339085627055744706712e-27,
    1.964288224013315450625e-29,
    -1.507194808185398998137e-31,
    1.060848054731064152018e-33,
)
_J1X_SMALL = (
    0.08104484632565811510459,
    -0.1489751450676521090634,
    0.1609992623572097025478,
    -0.08268049176681790659661,
    0.02221363965496603541029,
    -0.003646940600769275957752,
    0.0004050337728354821833071,
    -0.00003255554866857258516808,
    0.000001985877404991516741381,
    -9.521984756750436182115e-8,
    3.687133759097148238533e-9,
    -1.178026622695884839822e-10,
    3.16015458034800332149e-12,
    -7.221755239651773428461e-14,
    1.42321440035139423163e-15,
    -2.444197291619046389321e-17,
    3.691268299792933262153e-19,
    -4.941168267641824377211e-21,
    5.90383429930129528396e-23,
    -6.335601728135814322164e-25,
    6.140533111011509320211e-27,
    -5.402110883825944079709e-29,
    4.33339990179465091747e-31,
    -3.182677893265904872037e-33,
)
_P0_LARGE = (
    0.9994603493475186653713,
    -0.0005365220468132117424718,
    0.000003075184787519474621935,
    -5.170594537606097701043e-8,
    1.630646463515138309475e-9,
    -7.864091377237069999006e-11,
    5.168262387349192462193e-12,
    -4.30457886992539122226e-13,
    4.326595743154940561845e-14,
    -5.069034095935236017952e-15,
    6.748072215733872169166e-16,
    -1.001151372346774575164e-16,
    1.6305919233743123528e-17,
    -2.880866169480020922787e-18,
    5.468082783181325400202e-19,
    -1.106203649467732443983e-19,
)
_Q0_LARGE = (
    -0.01555585460533700909959,
    0.00006838519942611649599395,
    -7.414498411060647264542e-7,
    1.797245724796899178446e-8,
    -7.271915936866319979411e-10,
    4.220121904668738443818e-11,
    -3.206747420996634744608e-12,
    3.006145125351706311004e-13,
    -3.336328185322426992032e-14,
    4.255225040245460999251e-15,
    -6.099930131640046861087e-16,
    9.662128970303175726713e-17,
    -1.668606521437603409363e-17,
    3.108244048668230247756e-18,
    -6.191115787208355148701e-19,
    1.309144871314076670433e-19,
)
_P1_LARGE = (
    1.000903040860013699896,
    0.0008989898330859408555703,
    -0.000003987284300488908522835,
    6.177633960644298534916e-8,
    -1.871890749106306608663e-9,
    8.816898659582338898458e-11,
    -5.704863640395644701851e-12,
    4.699195515230542375109e-13,
    -4.684223783990489219185e-14,
    5.452674896044717106918e-15,
    -7.221180842274016337122e-16,
    1.066768911433537113264e-16,
    -1.731231321611524037895e-17,
    3.049299119763645839e-18,
    -5.772421654907215551758e-19,
    1.165057175348796489525e-19,
)
_Q1_LARGE = (
    0.04677778706953532524064,
    -0.0000962772354915707932425,
    9.138615257955454124447e-7,
    -2.095978138408342246055e-8,
    8.229193327650554128954e-10,
    -4.686363688176945230467e-11,
    3.515218794968608085065e-12,
    -3.264315674327899925804e-13,
    3.59677658291652918787e-14,
    -4.561252395077297066672e-15,
    6.50828295778338071065e-16,
    -1.026914753182315938442e-16,
    1.767635548776261406776e-17,
    -3.283451987292401850585e-18,
    6.524081149434688753823e-19,
    -1.376577148063772795779e-19,
)


def _cheb(coeffs, w):
    b0 = np.zeros_like(w)
    b1 = np.zeros_like(w)
    for c in reversed(coeffs):
        b0, b1 = 2.0 * w * b0 - b1 + c, b0
    return b0 - w * b1


def _j01(x):
    """(J0(x), J1(x)) for x >= 0, vectorized."""
    x = np.asarray(x, dtype=float)
    small = x < 8.0
    j0 = np.empty_like(x)
    j1 = np.empty_like(x)

    xs = np.where(small, x, 0.0)
    w = xs * xs / 32.0 - 1.0
    j0 = np.where(small, _cheb(_J0_SMALL, w), 0.0)
    j1 = np.where(small, xs * _cheb(_J1X_SMALL, w), 0.0)

    if np.any(~small):
        xl = np.where(small, 8.0, x)
        t = (8.0 / xl) ** 2
        wl = 2.0 * t - 1.0
        amp = np.sqrt(2.0 / (np.pi * xl))
        c = np.cos(xl)
        s = np.sin(xl)
        # cos(x - pi/4) = (c + s)/sqrt2, sin(x - pi/4) = (s - c)/sqrt2
        inv_sqrt2 = 1.0 / np.sqrt(2.0)
        p0 = _cheb(_P0_LARGE, wl)
        q0 = _cheb(_Q0_LARGE, wl) * 8.0 / xl
        v0 = amp * (p0 * (c + s) - q0 * (s - c)) * inv_sqrt2
        # cos(x - 3pi/4) = (s - c)/sqrt2, sin(x - 3pi/4) = -(c + s)/sqrt2
        p1 = _cheb(_P1_LARGE, wl)
        q1 = _cheb(_Q1_LARGE, wl) * 8.0 / xl
        v1 = amp * (p1 * (s - c) + q1 * (c + s)) * inv_sqrt2
        j0 = np.where(small, j0, v0)
        j1 = np.where(small, j1, v1)
    return j0, j1


def j0(x):
    """Bessel J0; accepts negative arguments (even function)."""
    x = np.abs(np.asarray(x, dtype=float))
    scalar = x.ndim == 0
    v = _j01(np.atleast_1d(x))[0]
    return v[0] if scalar else v


def j1(x):
    """Bessel J1 (odd function)."""
    xa = np.asarray(x, dtype=float)
    scalar = xa.ndim == 0
    v = _j01(np.atleast_1d(np.abs(xa)))[1] * np.sign(np.atleast_1d(xa))
    return v[0] if scalar else v


_MILLER_PAD = 18


def jn_upto(nmax, x):
    """J_0(x) .. J_nmax(x) for x >= 0, shape (nmax+1,) + x.shape.

    Upward recurrence from (J0, J1) for x >= 5, Miller's downward
    recurrence with the normalization J0 + 2*sum J_2k = 1 below.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros((nmax + 1,) + x.shape)
    up = x >= 5.0
    if np.any(up):
        xu = x[up]
        jj0, jj1 = _j01(xu)
        out[0][up] = jj0
        if nmax >= 1:
            out[1][up] = jj1
        prev, cur = jj0, jj1
        for n in range(1, nmax):
            prev, cur = cur, (2.0 * n / xu) * cur - prev
            out[n + 1][up] = cur
    down = ~up
    if np.any(down):
        xd = x[down]
        tiny = xd < 1e-30
        xd_safe = np.where(tiny, 1.0, xd)
        nstart = nmax + _MILLER_PAD + int(np.ceil(np.max(xd)))
        jp = np.zeros_like(xd_safe)
        jc = np.full_like(xd_safe, 1e-30)
        norm = np.zeros_like(xd_safe)
        vals = [None] * (nmax + 1)
        for n in range(nstart, 0, -1):
            jp, jc = jc, (2.0 * n / xd_safe) * jc - jp
            big = np.abs(jc) > 1e250
            if np.any(big):
                shrink = np.where(big, 1e-250, 1.0)
                jp, jc, norm = jp * shrink, jc * shrink, norm * shrink
                for v in vals:
                    if v is not None:
                        v *= shrink
            if n - 1 <= nmax:
                vals[n - 1] = jc.copy()
            if (n - 1) % 2 == 0:
                norm += jc if n == 1 else 2.0 * jc
        for n in range(nmax + 1):
            col = vals[n] / norm
            if np.any(tiny):
                col = np.where(tiny, 1.0 if n == 0 else 0.0, col)
            out[n][down] = col
    return out


def in_upto(nmax, x):
    """I_0(x) .. I_nmax(x) for x >= 0 via downward Miller recurrence.

    Normalized by I0 + 2 I1 + 2 I2 + ... = e^x; overflows only past
    x ~ 700, far outside this package's operating range.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    tiny = x < 1e-30
    xs = np.where(tiny, 1.0, x)
    nstart = nmax + 20 + int(np.ceil(9.0 * np.sqrt(np.max(xs))))
    ip = np.zeros_like(xs)
    ic = np.full_like(xs, 1e-30)
    norm = np.zeros_like(xs)
    vals = [None] * (nmax + 1)
    for n in range(nstart, 0, -1):
        ip, ic = ic, (2.0 * n / xs) * ic + ip
        big = np.abs(ic) > 1e250
        if np.any(big):
            shrink = np.where(big, 1e-250, 1.0)
            ip, ic, norm = ip * shrink, ic * shrink, norm * shrink
            for v in vals:
                if v is not None:
                    v *= shrink
        if n - 1 <= nmax:
            vals[n - 1] = ic.copy()
        norm += ic if n == 1 else 2.0 * ic
    scale = np.exp(xs) / norm
    out = np.zeros((nmax + 1,) + x.shape)
    for n in range(nmax + 1):
        col = vals[n] * scale
        if np.any(tiny):
            col = np.where(tiny, 1.0 if n == 0 else 0.0, col)
        out[n] = col
    return out


# Reduced kernels  c_n(s) = J_n(sqrt(s)) / s^(n/2),  entire in s.  For s < 0
# this equals I_n(sqrt(-s)) / (-s)^(n/2); the power series in s covers the
# midzone where either surface form loses digits.
_SERIES_CUT = 36.0
_SERIES_TERMS = 30

_FACT = [1.0]
for _i in range(1, 40):
    _FACT.append(_FACT[-1] * _i)


def _series_terms(smax):
    if smax <= 1.0:
        return 11
    if smax <= 4.0:
        return 14
    if smax <= 16.0:
        return 22
    return _SERIES_TERMS


def _cn_series(nmax, s):
    # c_n(s) = 2^-n sum_m (-s/4)^m / (m! (m+n)!)
    nterms = _series_terms(float(np.max(np.abs(s))) if s.size else 0.0)
    out = np.zeros((nmax + 1,) + s.shape)
    accs = [np.full_like(s, 2.0 ** -n / _FACT[n]) for n in range(nmax + 1)]
    power = np.ones_like(s)
    for m in range(1, nterms):
        power = power * (s / -4.0) / m
        for n in range(nmax + 1):
            accs[n] += (2.0 ** -n / _FACT[m + n]) * power
    for n in range(nmax + 1):
        out[n] = accs[n]
    return out


def cn_reduced(nmax, s):
    """c_n(s) = J_n(sqrt(s))/s^(n/2) for n = 0..nmax, real s of any sign."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if np.all(np.abs(s) <= _SERIES_CUT):
        return _cn_series(nmax, s)
    out = np.zeros((nmax + 1,) + s.shape)
    mid = np.abs(s) <= _SERIES_CUT
    if np.any(mid):
        out[:, mid] = _cn_series(nmax, s[mid])
    pos = (s > _SERIES_CUT)
    if np.any(pos):
        z = np.sqrt(s[pos])
        jn = jn_upto(nmax, z)
        powers = np.ones_like(z)
        for n in range(nmax + 1):
            out[n][pos] = jn[n] / powers
            powers = powers * z
    neg = (s < -_SERIES_CUT)
    if np.any(neg):
        w = np.sqrt(-s[neg])
        iv = in_upto(nmax, w)
        powers = np.ones_like(w)
        for n in range(nmax + 1):
            out[n][neg] = iv[n] / powers
            powers = powers * w
    return out


def j0_zeros(count):
    """First `count` positive zeros of J0, by McMahon expansion + Newton."""
    s = np.arange(1, count + 1, dtype=float)
    beta = (s - 0.25) * np.pi
    mu = beta - 1.0 / (8.0 * beta) + 124.0 / (3.0 * (8.0 * beta) ** 3)
    for _ in range(4):
        f0, f1 = _j01(mu)
        mu = mu + f0 / f1  # J0' = -J1
    return mu
