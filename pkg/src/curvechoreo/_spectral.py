"""Trigonometric interpolation of periodic samples on a uniform grid."""

from __future__ import annotations

import numpy as np

_CHUNK = 2048


class TrigInterpolant:
    """Band-limited interpolant of ``n`` uniform samples over one period.

    Samples are taken at ``x_k = k * period / n``. The Nyquist mode of an even
    grid is split symmetrically, so the interpolant is real and its
    derivative does not pick up the unresolved mode.
    """

    def __init__(self, samples, period: float):
        samples = np.asarray(samples, dtype=float)
        n = samples.shape[0]
        coeffs = np.fft.rfft(samples, axis=0) / n
        if n % 2 == 0:
            coeffs[-1] *= 0.5
        self._set(coeffs, n, period)

    def _set(self, coeffs, n: int, period: float):
        self.period = float(period)
        self.n = n
        self.coeffs = coeffs
        self.k = np.arange(coeffs.shape[0])

    @classmethod
    def _from_coeffs(cls, coeffs, n: int, period: float) -> TrigInterpolant:
        obj = cls.__new__(cls)
        obj._set(coeffs, n, period)
        return obj

    @property
    def mean(self):
        return self.coeffs[0].real

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1)
        out = np.empty((flat.size,) + self.coeffs.shape[1:])
        omega = 2.0 * np.pi / self.period
        c = self.coeffs.reshape(self.coeffs.shape[0], -1)
        for start in range(0, flat.size, _CHUNK):
            xs = flat[start:start + _CHUNK]
            phase = np.exp(1j * omega * np.outer(xs, self.k))
            vals = c[0].real + 2.0 * (phase[:, 1:] @ c[1:]).real
            out[start:start + _CHUNK] = vals.reshape((xs.size,) + self.coeffs.shape[1:])
        return out.reshape(x.shape + self.coeffs.shape[1:])

    def derivative(self) -> TrigInterpolant:
        factor = 1j * 2.0 * np.pi * self.k / self.period
        factor = factor.reshape((-1,) + (1,) * (self.coeffs.ndim - 1))
        coeffs = self.coeffs * factor
        if self.n % 2 == 0:
            coeffs[-1] = 0.0
        return TrigInterpolant._from_coeffs(coeffs, self.n, self.period)

    def antiderivative(self) -> TrigInterpolant:
        """Periodic antiderivative of the zero-mean part, zero at ``x = 0``."""
        k = self.k.astype(float)
        k[0] = 1.0
        factor = 1.0 / (1j * 2.0 * np.pi * k / self.period)
        factor[0] = 0.0
        factor = factor.reshape((-1,) + (1,) * (self.coeffs.ndim - 1))
        coeffs = self.coeffs * factor
        if self.n % 2 == 0:
            coeffs[-1] = 0.0
        anti = TrigInterpolant._from_coeffs(coeffs, self.n, self.period)
        offset = anti(0.0)
        anti.coeffs[0] = anti.coeffs[0] - offset
        return anti

    def sampled(self) -> np.ndarray:
        """Values on the original grid."""
        return self(np.arange(self.n) * self.period / self.n)


def spectral_derivative(samples, period: float) -> np.ndarray:
    return TrigInterpolant(samples, period).derivative().sampled()
