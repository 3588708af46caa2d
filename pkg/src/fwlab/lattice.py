"""Periodic 1-D grid, spectral momentum operator and field profiles.

Operators on the 4N-dimensional space use the spinor index outermost, so the
first 2N components are the upper spinor and the last 2N the lower one.
"""

from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import ConfigurationError

PROFILE_KINDS = ("constant", "cosine", "gaussian-periodic", "sawtooth-smooth")


@dataclass(frozen=True)
class Lattice1D:
    n_points: int
    length: float

    @property
    def spacing(self):
        return self.length / self.n_points

    @property
    def positions(self):
        return np.arange(self.n_points) * self.spacing

    @property
    def momenta(self):
        """Grid momenta ``2 pi k / L`` for ``k = -N/2 .. N/2 - 1``, ascending."""
        k = np.arange(-self.n_points // 2, self.n_points // 2)
        return 2 * np.pi * k / self.length

    def to_dict(self):
        return asdict(self)


def make_lattice(n_points, length):
    if int(n_points) != n_points or n_points < 8 or n_points % 2:
        raise ConfigurationError(f"n_points must be an even integer >= 8, got {n_points}")
    if not length > 0:
        raise ConfigurationError(f"length must be positive, got {length}")
    return Lattice1D(int(n_points), float(length))


def _dft(n):
    return np.fft.fft(np.eye(n), norm="ortho")


def momentum_function(lat, func):
    """``f(p)`` as an N x N matrix, diagonal in the discrete Fourier basis."""
    f = _dft(lat.n_points)
    p = 2 * np.pi * np.fft.fftfreq(lat.n_points, d=lat.spacing)
    return (f.conj().T * func(p)) @ f


def momentum_operator(lat):
    """Spectral ``p = -i d/dx``; plane waves ``exp(i k x)`` are exact eigenvectors."""
    return momentum_function(lat, lambda p: p)


@dataclass(frozen=True)
class FieldProfile:
    """Smooth L-periodic scalar profile.

    ``cosine``: ``offset + amplitude cos(2 pi mode x / L)``.
    ``gaussian-periodic``: Gaussian of ``width`` at ``center``, summed over images.
    ``sawtooth-smooth``: odd, band-limited approximation of ``x - center``
    (Lanczos-smoothed Fourier series with ``mode`` harmonics), scaled by
    ``amplitude``; ``center`` defaults to the middle of the box.
    """

    kind: str = "constant"
    amplitude: float = 0.0
    mode: int = 1
    width: float = 1.0
    center: float | None = None
    offset: float = 0.0

    def __post_init__(self):
        if self.kind not in PROFILE_KINDS:
            raise ConfigurationError(f"unknown profile kind {self.kind!r}")
        if self.kind == "gaussian-periodic" and not self.width > 0:
            raise ConfigurationError("gaussian width must be positive")
        if self.kind in ("cosine", "sawtooth-smooth") and (int(self.mode) != self.mode or self.mode < 1):
            raise ConfigurationError("mode must be a positive integer")

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)

    def _center(self, length):
        return 0.5 * length if self.center is None else self.center

    def evaluate(self, x, length, order=0):
        """Profile (``order=0``) or its analytic derivative of the given order at ``x``."""
        x = np.asarray(x, dtype=float)
        if self.kind == "constant":
            base = np.full_like(x, self.amplitude)
            return base + self.offset if order == 0 else np.zeros_like(x)
        if self.kind == "cosine":
            k = 2 * np.pi * self.mode / length
            phase = k * x + order * np.pi / 2
            val = self.amplitude * k**order * np.cos(phase)
        elif self.kind == "gaussian-periodic":
            val = np.zeros_like(x)
            w = self.width
            for image in range(-4, 5):
                u = x - self._center(length) - image * length
                g = np.exp(-0.5 * (u / w) ** 2)
                if order == 0:
                    val += g
                elif order == 1:
                    val += -u / w**2 * g
                elif order == 2:
                    val += (u**2 / w**4 - 1 / w**2) * g
                else:
                    raise ValueError("derivative order > 2 not supported")
            val = self.amplitude * val
        else:
            u = x - self._center(length)
            val = np.zeros_like(x)
            nh = int(self.mode)
            for n in range(1, nh + 1):
                k = 2 * np.pi * n / length
                lanczos = np.sinc(n / (nh + 1))
                coef = (-1) ** (n + 1) * 2 / k * lanczos
                val += coef * k**order * np.sin(k * u + order * np.pi / 2)
            val = self.amplitude * val
        return val + self.offset if order == 0 else val


def profile_values(lat, profile, order=0):
    return profile.evaluate(lat.positions, lat.length, order)


def position_multiplier(lat, profile, order=0):
    """Diagonal N x N multiplication operator by the profile (or its derivative)."""
    return np.diag(profile_values(lat, profile, order)).astype(complex)


def kron_spinor(d, m):
    """``d (4x4) tensor m (NxN)`` with the spinor index outermost."""
    d = np.asarray(d)
    m = np.asarray(m)
    if d.shape != (4, 4) or m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected 4x4 and square matrices, got {d.shape} and {m.shape}")
    return np.kron(d, m)
