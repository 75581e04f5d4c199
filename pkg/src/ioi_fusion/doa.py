"""Broadband MUSIC direction-of-arrival estimation for a planar microphone array.

Far-field plane-wave model. For microphone ``m`` at position ``p_m`` and a
source in unit direction ``u``, the arrival delay relative to the origin is
``tau_m = -(p_m . u) / c``, so mics closer to the source hear it earlier.
"""

from __future__ import annotations

import functools
import wave
from dataclasses import dataclass
from pathlib import Path
from typing import List

import numpy as np

from .core import DoaConfig, MicArrayGeometry, SoundSourceEstimate, direction_from_azimuth

# Floor on the noise-subspace projection; a noise-free source would otherwise give 1/0.
_PROJECTION_FLOOR = 1e-12


@dataclass(frozen=True)
class Pseudospectrum:
    grid: np.ndarray
    values: np.ndarray

    def argmax_azimuth(self) -> float:
        return float(self.grid[int(np.argmax(self.values))])

    def to_csv(self) -> str:
        return "".join(f"{az:.1f},{v:.6g}\n" for az, v in zip(self.grid, self.values))


def plane_wave_delays(array: MicArrayGeometry, azimuth: float | np.ndarray) -> np.ndarray:
    """Per-mic arrival delays in seconds; shape (..., M)."""
    az = np.radians(np.asarray(azimuth, dtype=float))
    u = np.stack([np.cos(az), np.sin(az)], axis=-1)
    return -(u @ array.as_array().T) / array.speed_of_sound


def steering_vector(array: MicArrayGeometry, azimuth: float, freq: float) -> np.ndarray:
    """Unit-norm complex response of the array to a plane wave from ``azimuth``."""
    if not freq > 0:
        raise ValueError("freq must be positive")
    tau = plane_wave_delays(array, azimuth)
    return np.exp(-2j * np.pi * freq * tau) / np.sqrt(array.n_mics)


@functools.lru_cache(maxsize=32)
def steering_matrix(array: MicArrayGeometry, config: DoaConfig) -> np.ndarray:
    """Steering vectors for every (band bin, grid azimuth); shape (F, G, M)."""
    freqs = config.bin_frequencies()
    tau = plane_wave_delays(array, config.grid())  # (G, M)
    a = np.exp(-2j * np.pi * freqs[:, None, None] * tau[None, :, :])
    a /= np.sqrt(array.n_mics)
    a.setflags(write=False)
    return a


def stft_snapshots(frames: np.ndarray, config: DoaConfig) -> np.ndarray:
    """Hann-windowed FFT snapshots restricted to the band; shape (F, K, M)."""
    x = np.asarray(frames, dtype=float)
    n = x.shape[0]
    if n < config.fft_size:
        raise ValueError(f"window of {n} samples is shorter than fft_size={config.fft_size}")
    n_snap = 1 + (n - config.fft_size) // config.hop
    starts = config.hop * np.arange(n_snap)
    idx = starts[:, None] + np.arange(config.fft_size)[None, :]
    # scaled so that white noise of variance s2 gives E[R_f] = s2 * I
    win = np.hanning(config.fft_size)
    win = win / np.sqrt(np.sum(win**2))
    segs = x[idx] * win[None, :, None]  # (K, N, M)
    spec = np.fft.rfft(segs, axis=1)[:, config.bin_indices(), :]  # (K, F, M)
    return spec.transpose(1, 0, 2)


def compute_covariance(frames: np.ndarray, config: DoaConfig, n_mics: int | None = None) -> np.ndarray:
    """Per-bin spatial covariance averaged over hop-shifted snapshots.

    ``frames`` is (samples, channels). Returns an (F, M, M) Hermitian PSD stack,
    one matrix per FFT bin inside ``config.band``.
    """
    frames = np.asarray(frames)
    if frames.ndim != 2:
        raise ValueError("frames must be a (samples, channels) array")
    if n_mics is not None and frames.shape[1] != n_mics:
        raise ValueError(f"expected {n_mics} channels, got {frames.shape[1]}")
    x = stft_snapshots(frames, config)
    k = x.shape[1]
    cov = np.matmul(x.transpose(0, 2, 1), x.conj()) / k
    # symmetrize away rounding so downstream eigh sees an exactly Hermitian matrix
    return 0.5 * (cov + cov.conj().transpose(0, 2, 1))


def music_spectra_per_bin(covariances: np.ndarray, array: MicArrayGeometry,
                          config: DoaConfig) -> np.ndarray:
    """Narrowband MUSIC spectra 1 / ||E_n^H a(theta, f)||^2; shape (F, G)."""
    covariances = np.asarray(covariances)
    if not np.all(np.isfinite(covariances)):
        raise FloatingPointError("covariance matrices contain non-finite values")
    a = steering_matrix(array, config)
    if covariances.shape[0] != a.shape[0]:
        raise ValueError("covariances do not match the configured band")
    # eigh returns ascending eigenvalues, so the noise subspace is the leading columns
    _, vecs = np.linalg.eigh(covariances)
    noise = vecs[:, :, : array.n_mics - config.n_sources]  # (F, M, M-n)
    proj = np.matmul(a, noise.conj())  # (F, G, M-n) = E_n^H a per bin and azimuth
    denom = np.maximum(np.sum(proj.real**2 + proj.imag**2, axis=2), _PROJECTION_FLOOR)
    return 1.0 / denom


def music_pseudospectrum(covariances: np.ndarray, array: MicArrayGeometry,
                         config: DoaConfig) -> Pseudospectrum:
    """Broadband MUSIC: arithmetic mean of the per-bin spectra over the band."""
    per_bin = music_spectra_per_bin(covariances, array, config)
    # fixed reduction order: bins accumulated in ascending frequency
    total = np.zeros(per_bin.shape[1])
    for row in per_bin:
        total += row
    return Pseudospectrum(config.grid(), total / per_bin.shape[0])


def detect_sources(spectrum: Pseudospectrum, config: DoaConfig, now: float) -> List[SoundSourceEstimate]:
    """Pick pseudospectrum peaks above ``peak_threshold`` times the median.

    A peak is a grid point strictly greater than its circular neighbours; on a
    plateau of equal values the lowest-azimuth point of the plateau is used.
    ``power`` is reported as the peak-to-median ratio.
    """
    v = np.asarray(spectrum.values, dtype=float)
    n = len(v)
    median = float(np.median(v))
    if median <= 0:
        return []
    peaks = []
    for i in range(n):
        if v[i] <= v[i - 1]:
            continue
        # walk across a plateau to find the first strictly lower neighbour
        j = 1
        while j < n and v[(i + j) % n] == v[i]:
            j += 1
        if j < n and v[(i + j) % n] < v[i]:
            peaks.append(i)
    hits = [i for i in peaks if v[i] / median >= config.peak_threshold]
    hits.sort(key=lambda i: (-v[i], spectrum.grid[i]))
    return [
        SoundSourceEstimate(direction_from_azimuth(float(spectrum.grid[i])), float(v[i] / median), now)
        for i in hits[: config.n_sources]
    ]


def localize(frames: np.ndarray, array: MicArrayGeometry, config: DoaConfig,
             now: float) -> List[SoundSourceEstimate]:
    cov = compute_covariance(frames, config, array.n_mics)
    return detect_sources(music_pseudospectrum(cov, array, config), config, now)


def read_wav(path: str | Path) -> tuple[np.ndarray, int]:
    """Read 16-bit PCM WAVE into a float (samples, channels) array in [-1, 1)."""
    with wave.open(str(path), "rb") as wf:
        if wf.getsampwidth() != 2:
            raise ValueError("only 16-bit PCM is supported")
        n_ch, rate, n = wf.getnchannels(), wf.getframerate(), wf.getnframes()
        raw = wf.readframes(n)
    data = np.frombuffer(raw, dtype="<i2").reshape(-1, n_ch)
    return data.astype(float) / 32768.0, rate


def write_wav(path: str | Path, samples: np.ndarray, sample_rate: int) -> None:
    x = np.asarray(samples, dtype=float)
    peak = np.max(np.abs(x)) if x.size else 0.0
    if peak > 0:
        x = x / peak * 0.9
    pcm = np.round(x * 32767).astype("<i2")
    with wave.open(str(path), "wb") as wf:
        wf.setnchannels(x.shape[1])
        wf.setsampwidth(2)
        wf.setframerate(sample_rate)
        wf.writeframes(pcm.tobytes())
