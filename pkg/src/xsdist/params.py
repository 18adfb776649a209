"""Physical parameters of the chaotic-scattering model.

A scattering system is specified by the symmetry class (beta = 1 orthogonal,
beta = 2 unitary), the number of open channels M, one coupling constant per
channel, the Gaussian variance scale v of the internal Hamiltonian and the
scattering energy E.  Channel couplings may be given either as a transmission
coefficient T in (0, 1] or as a partial width gamma > 0; internally everything
is reduced to the dimensionless pair (g+, g-) per channel,

    g+- = (v^2 +- gamma^2) / (gamma * sqrt(4 v^2 - E^2)),

which is all the analytic formulas consume.  The energy must lie strictly
inside the spectral support, |E| < 2v.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field


class ConfigError(ValueError):
    """Raised for physically invalid parameters or malformed config files."""


def g_plus_from_transmission(T: float) -> float:
    """Map a transmission coefficient T in (0, 1] to g+ = 2/T - 1."""
    if not 0.0 < T <= 1.0:
        raise ConfigError(f"transmission must satisfy 0 < T <= 1, got {T}")
    return 2.0 / T - 1.0


def transmission_from_g_plus(g_plus: float) -> float:
    """Inverse of :func:`g_plus_from_transmission`."""
    if g_plus < 1.0:
        raise ConfigError(f"g+ must be >= 1, got {g_plus}")
    return 2.0 / (g_plus + 1.0)


def g_pm_from_gamma(gamma: float, v: float = 1.0, E: float = 0.0) -> tuple[float, float]:
    """(g+, g-) for a channel with partial width gamma at energy E.

    Requires gamma > 0 and |E| < 2v so the square root stays real.
    """
    if gamma <= 0.0:
        raise ConfigError(f"partial width must be positive, got {gamma}")
    if v <= 0.0:
        raise ConfigError(f"variance scale must be positive, got {v}")
    if abs(E) >= 2.0 * v:
        raise ConfigError(f"energy must satisfy |E| < 2v, got E={E}, v={v}")
    root = math.sqrt(4.0 * v * v - E * E)
    return (v * v + gamma * gamma) / (gamma * root), (v * v - gamma * gamma) / (gamma * root)


def gamma_from_transmission(T: float, v: float = 1.0, E: float = 0.0) -> float:
    """Partial width gamma reproducing transmission T at energy E.

    The defining quadratic gamma^2 - g+ * sqrt(4v^2 - E^2) * gamma + v^2 = 0
    has two positive roots mapping to the same T; the smaller one is returned
    (sub-critical coupling convention).
    """
    g_plus = g_plus_from_transmission(T)
    if v <= 0.0:
        raise ConfigError(f"variance scale must be positive, got {v}")
    if abs(E) >= 2.0 * v:
        raise ConfigError(f"energy must satisfy |E| < 2v, got E={E}, v={v}")
    half = 0.5 * g_plus * math.sqrt(4.0 * v * v - E * E)
    # half >= v always: half^2 - v^2 = (g+^2 (4v^2-E^2) - 4v^2)/4 and g+ >= 1.
    disc = half * half - v * v
    if disc < 0.0:
        disc = 0.0
    return half - math.sqrt(disc)


@dataclass(frozen=True)
class Channel:
    """One channel coupling, given by transmission T or partial width gamma."""

    T: float | None = None
    gamma: float | None = None

    def __post_init__(self):
        if (self.T is None) == (self.gamma is None):
            raise ConfigError("channel needs exactly one of T or gamma")
        if self.T is not None and not 0.0 < self.T <= 1.0:
            raise ConfigError(f"channel transmission out of (0, 1]: {self.T}")
        if self.gamma is not None and self.gamma <= 0.0:
            raise ConfigError(f"channel partial width must be positive: {self.gamma}")


@dataclass(frozen=True)
class ScatteringConfig:
    """Immutable description of one scattering model.

    a and b are the 1-based indices of the observed off-diagonal element.
    """

    beta: int
    channels: tuple[Channel, ...]
    v: float = 1.0
    E: float = 0.0
    a: int = 1
    b: int = 2

    def __post_init__(self):
        if self.beta not in (1, 2):
            raise ConfigError(f"beta must be 1 or 2, got {self.beta}")
        if len(self.channels) < 2:
            raise ConfigError(f"need M >= 2 channels, got {len(self.channels)}")
        if self.v <= 0.0:
            raise ConfigError(f"variance scale must be positive, got {self.v}")
        if abs(self.E) >= 2.0 * self.v:
            raise ConfigError(f"energy must satisfy |E| < 2v, got E={self.E}, v={self.v}")
        M = len(self.channels)
        for name, idx in (("a", self.a), ("b", self.b)):
            if not 1 <= idx <= M:
                raise ConfigError(f"channel index {name}={idx} outside 1..{M}")
        if self.a == self.b:
            raise ConfigError("observed element must be off-diagonal (a != b)")

    @property
    def M(self) -> int:
        return len(self.channels)

    def gammas(self) -> list[float]:
        """Per-channel partial widths, resolving T-specified channels."""
        out = []
        for ch in self.channels:
            if ch.gamma is not None:
                out.append(ch.gamma)
            else:
                out.append(gamma_from_transmission(ch.T, self.v, self.E))
        return out

    def transmissions(self) -> list[float]:
        """Per-channel transmission coefficients."""
        out = []
        for ch in self.channels:
            if ch.T is not None:
                out.append(ch.T)
            else:
                g_plus, _ = g_pm_from_gamma(ch.gamma, self.v, self.E)
                out.append(transmission_from_g_plus(g_plus))
        return out

    def canonical_dict(self) -> dict:
        chans = []
        for ch in self.channels:
            if ch.T is not None:
                chans.append({"T": ch.T})
            else:
                chans.append({"gamma": ch.gamma})
        return {
            "beta": self.beta,
            "M": self.M,
            "channels": chans,
            "v": self.v,
            "E": self.E,
            "a": self.a,
            "b": self.b,
        }

    def digest(self) -> str:
        """Short stable hash identifying the configuration."""
        blob = json.dumps(self.canonical_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def uniform_config(beta: int, M: int, T: float, v: float = 1.0, E: float = 0.0,
                   a: int = 1, b: int = 2) -> ScatteringConfig:
    """Config with M identical channels of transmission T."""
    return ScatteringConfig(beta=beta, channels=tuple(Channel(T=T) for _ in range(M)),
                            v=v, E=E, a=a, b=b)


@dataclass(frozen=True)
class ChannelKernel:
    """Per-channel (g+, g-) pairs plus the derived energy ratio.

    Immutable; shared freely between concurrent evaluators.  e_ratio is
    E / sqrt(4 v^2 - E^2), which enters the orthogonal-class algebra.
    """

    beta: int
    g_plus: tuple[float, ...]
    g_minus: tuple[float, ...]
    v: float
    E: float
    a: int
    b: int
    e_ratio: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "e_ratio",
                           self.E / math.sqrt(4.0 * self.v ** 2 - self.E ** 2))
        for gp in self.g_plus:
            if gp < 1.0 - 1e-12:
                raise ConfigError(f"g+ must be >= 1, got {gp}")

    @property
    def M(self) -> int:
        return len(self.g_plus)

    @property
    def gp_a(self) -> float:
        return self.g_plus[self.a - 1]

    @property
    def gp_b(self) -> float:
        return self.g_plus[self.b - 1]

    @property
    def gm_a(self) -> float:
        return self.g_minus[self.a - 1]

    @property
    def gm_b(self) -> float:
        return self.g_minus[self.b - 1]

    @classmethod
    def from_config(cls, config: ScatteringConfig) -> "ChannelKernel":
        gp, gm = [], []
        for gamma in config.gammas():
            p, m = g_pm_from_gamma(gamma, config.v, config.E)
            gp.append(p)
            gm.append(m)
        return cls(beta=config.beta, g_plus=tuple(gp), g_minus=tuple(gm),
                   v=config.v, E=config.E, a=config.a, b=config.b)


def load_config(path) -> ScatteringConfig:
    """Parse a JSON config file.

    Expected keys: beta, M, channels (list of {"T": x} or {"gamma": x}),
    v, E, a, b.  v, E, a, b are optional with defaults 1.0, 0.0, 1, 2.
    Errors name the offending key.
    """
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")

    def need(key, types):
        if key not in raw:
            raise ConfigError(f"{path}: missing key '{key}'")
        val = raw[key]
        if not isinstance(val, types) or isinstance(val, bool):
            raise ConfigError(f"{path}: key '{key}' has wrong type")
        return val

    beta = need("beta", int)
    chan_list = need("channels", list)
    channels = []
    for i, entry in enumerate(chan_list):
        if not isinstance(entry, dict) or len(entry) != 1:
            raise ConfigError(f"{path}: key 'channels[{i}]' must be {{'T': x}} or {{'gamma': x}}")
        (kind, value), = entry.items()
        if kind not in ("T", "gamma"):
            raise ConfigError(f"{path}: key 'channels[{i}]' has unknown coupling '{kind}'")
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"{path}: key 'channels[{i}].{kind}' must be a number")
        channels.append(Channel(**{kind: float(value)}))
    if "M" in raw and raw["M"] != len(channels):
        raise ConfigError(f"{path}: key 'M' ({raw['M']}) disagrees with channels "
                          f"({len(channels)} entries)")

    def opt(key, default):
        if key not in raw:
            return default
        val = raw[key]
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise ConfigError(f"{path}: key '{key}' must be a number")
        return val

    known = {"beta", "M", "channels", "v", "E", "a", "b"}
    for key in raw:
        if key not in known:
            raise ConfigError(f"{path}: unknown key '{key}'")
    try:
        return ScatteringConfig(beta=beta, channels=tuple(channels),
                                v=float(opt("v", 1.0)), E=float(opt("E", 0.0)),
                                a=int(opt("a", 1)), b=int(opt("b", 2)))
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def save_config(config: ScatteringConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config.canonical_dict(), fh, indent=2)
        fh.write("\n")
