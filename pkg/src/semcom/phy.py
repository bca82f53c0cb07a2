"""Technical layer: quantizer, bit packing, BPSK over Rayleigh + AWGN.

Real-equivalent baseband with per-symbol i.i.d. fading, perfect CSI, and
coherent detection, verified against the closed-form average BER.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cspace import SemanticPoint
from .errors import InvalidParameterError, MalformedPacketError

#: (lo, hi, circular) per dimension, in packet order (r, h, s, b).
DIMENSION_RANGES = (
    (1.0, 2.5, False),
    (0.0, 1.0, True),
    (0.0, 1.0, False),
    (0.0, 1.0, False),
)


@dataclass(frozen=True)
class QuantizerSpec:
    """Uniform mid-rise quantizer: n_b bits per dimension."""

    n_b: int
    ranges: tuple = DIMENSION_RANGES

    def __post_init__(self):
        if not 1 <= self.n_b <= 16:
            raise InvalidParameterError(f"n_b must be in [1, 16], got {self.n_b}")

    @property
    def levels(self) -> int:
        return 1 << self.n_b


@dataclass
class ChannelParams:
    """Average received SNR per symbol (dB) plus the noise/fading stream.

    snr_db = None means a noiseless, fade-free channel.
    """

    snr_db: float | None
    rng: np.random.Generator = field(default_factory=np.random.default_rng)

    def __post_init__(self):
        if self.snr_db is not None and not math.isfinite(self.snr_db):
            raise InvalidParameterError("snr_db must be finite (or None for noiseless)")


def quantize(p: SemanticPoint, spec: QuantizerSpec) -> np.ndarray:
    """Mid-rise cell indices for each dimension; hue wraps, the rest clamp."""
    indices = np.empty(4, dtype=np.int64)
    for i, (v, (lo, hi, circular)) in enumerate(zip(p.as_tuple(), spec.ranges)):
        width = (hi - lo) / spec.levels
        if circular:
            v = lo + (v - lo) % (hi - lo)
        idx = int((v - lo) / width)
        indices[i] = min(max(idx, 0), spec.levels - 1)
    return indices


def dequantize(indices: np.ndarray, spec: QuantizerSpec) -> SemanticPoint:
    """Cell-center reconstruction of quantized coordinates."""
    indices = np.asarray(indices)
    if indices.shape != (4,):
        raise MalformedPacketError(f"expected 4 indices, got shape {indices.shape}")
    if (indices < 0).any() or (indices >= spec.levels).any():
        raise MalformedPacketError(f"index out of range for n_b={spec.n_b}")
    vals = [lo + (int(idx) + 0.5) * (hi - lo) / spec.levels
            for idx, (lo, hi, _) in zip(indices, spec.ranges)]
    return SemanticPoint(*vals)


def pack(indices: np.ndarray, n_b: int) -> np.ndarray:
    """Bit packet: dimension order (r, h, s, b), each index MSB first."""
    indices = np.asarray(indices)
    if indices.shape != (4,):
        raise MalformedPacketError(f"expected 4 indices, got shape {indices.shape}")
    if (indices < 0).any() or (indices >= (1 << n_b)).any():
        raise MalformedPacketError(f"index out of range for n_b={n_b}")
    shifts = np.arange(n_b - 1, -1, -1)
    return ((indices[:, None] >> shifts[None, :]) & 1).astype(np.uint8).ravel()


def unpack(bits: np.ndarray, n_b: int) -> np.ndarray:
    """Inverse of pack; rejects packets of the wrong length."""
    bits = np.asarray(bits)
    if bits.shape != (4 * n_b,):
        raise MalformedPacketError(
            f"packet length {bits.size} != 4*n_b = {4 * n_b}")
    weights = 1 << np.arange(n_b - 1, -1, -1)
    return (bits.reshape(4, n_b).astype(np.int64) * weights).sum(axis=1)


def bpsk_modulate(bits: np.ndarray) -> np.ndarray:
    """Bit 0 -> +1, bit 1 -> -1, unit symbol energy."""
    return 1.0 - 2.0 * np.asarray(bits, dtype=float)


def bpsk_demodulate(received: np.ndarray, csi: np.ndarray) -> np.ndarray:
    """Coherent sign decision after fade compensation (perfect CSI)."""
    return (np.asarray(received) * np.asarray(csi) < 0).astype(np.uint8)


def rayleigh_awgn(symbols: np.ndarray, params: ChannelParams
                  ) -> tuple[np.ndarray, np.ndarray]:
    """y = a*x + n with unit-mean-square Rayleigh fades a and AWGN n.

    Noise variance is 1/(2*gamma) for average symbol SNR gamma, matching
    the textbook coherent-BPSK result analytic_ber verifies against.
    Returns (received samples, fade gains).
    """
    symbols = np.asarray(symbols, dtype=float)
    if params.snr_db is None:
        return symbols.copy(), np.ones_like(symbols)
    fades = params.rng.rayleigh(scale=math.sqrt(0.5), size=symbols.shape)
    snr = 10.0 ** (params.snr_db / 10.0)
    noise = params.rng.normal(0.0, math.sqrt(0.5 / snr), size=symbols.shape)
    return fades * symbols + noise, fades


def analytic_ber(snr_db: float) -> float:
    """Average BER of coherent BPSK on a Rayleigh channel: closed form."""
    snr = 10.0 ** (snr_db / 10.0)
    return 0.5 * (1.0 - math.sqrt(snr / (1.0 + snr)))


def transmit_packet(bits: np.ndarray, params: ChannelParams) -> np.ndarray:
    """Modulate, pass through the channel, demodulate; length preserved."""
    symbols = bpsk_modulate(bits)
    received, fades = rayleigh_awgn(symbols, params)
    return bpsk_demodulate(received, fades)
