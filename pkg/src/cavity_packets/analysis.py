"""Trajectory diagnostics: Fourier spectrum of <a'a>, segmentation of P_n
into packets, Poisson fits and packet tracking over time.

The packet definition (valley below 10% of both adjacent maxima on a
3-point-smoothed distribution, segments below norm 0.02 discarded) is an
artifact convention; thresholds are keyword-overridable everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import NonuniformGrid
from .observables import PhotonDistribution

__all__ = [
    "Spectrum",
    "Packet",
    "PacketSet",
    "PacketTrack",
    "spectrum",
    "detect_packets",
    "poisson_fit",
    "poisson_residual",
    "track_packets",
]

VALLEY_FRAC = 0.1
MIN_PACKET_NORM = 0.02
PAD_FACTOR = 4
MAX_TRACK_JUMP = 15.0
SUPPORT_FLOOR = 1e-12  # probability below this is roundoff dust, not support


@dataclass
class Spectrum:
    """Magnitude spectrum of a uniformly sampled series, Hann windowed and
    zero padded; peaks = local maxima above 5% of the global maximum."""

    freqs: np.ndarray       # angular frequencies, units of g
    magnitudes: np.ndarray
    peaks: list[tuple[float, float]]  # (freq, height), sorted by height desc

    @property
    def peak_freqs(self) -> np.ndarray:
        return np.array([f for f, _ in self.peaks])


def spectrum(times: np.ndarray, values: np.ndarray) -> Spectrum:
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.shape[0] < 256:
        raise ValueError("spectrum needs at least 256 samples")
    dts = np.diff(times)
    dt = dts[0]
    if dt <= 0 or np.max(np.abs(dts - dt)) > 1e-9 * max(dt, 1.0):
        raise NonuniformGrid("time grid is not uniform")

    n = values.shape[0]
    x = (values - values.mean()) * np.hanning(n)
    mags = np.abs(np.fft.rfft(x, n=PAD_FACTOR * n))
    freqs = 2.0 * np.pi * np.fft.rfftfreq(PAD_FACTOR * n, d=dt)

    peaks: list[tuple[float, float]] = []
    if mags.size >= 3:
        floor = 0.05 * mags.max()
        higher_left = mags[1:-1] > mags[:-2]
        higher_right = mags[1:-1] >= mags[2:]
        idx = np.nonzero(higher_left & higher_right & (mags[1:-1] >= floor))[0] + 1
        peaks = [(float(freqs[i]), float(mags[i])) for i in idx]
        peaks.sort(key=lambda p: -p[1])
    return Spectrum(freqs=freqs, magnitudes=mags, peaks=peaks)


@dataclass
class Packet:
    """One contiguous structure in P_n."""

    n_lo: int
    n_hi: int
    norm: float
    mean: float
    peak_n: int


@dataclass
class PacketSet:
    packets: list[Packet]
    discarded_mass: float
    time: float | None = None

    def __len__(self) -> int:
        return len(self.packets)

    def __iter__(self):
        return iter(self.packets)

    def dominant(self) -> Packet:
        return max(self.packets, key=lambda p: p.norm)


def _segment_stats(p: np.ndarray, lo: int, hi: int) -> Packet | None:
    seg = p[lo:hi + 1]
    norm = float(seg.sum())
    if norm <= 0.0:
        return None
    ns = np.arange(lo, hi + 1)
    mean = float((ns * seg).sum() / norm)
    peak = int(lo + np.argmax(seg))
    # trim tails below the dust floor so supports describe where
    # probability actually sits
    nz = np.nonzero(seg > SUPPORT_FLOOR)[0]
    if nz.size == 0:
        nz = np.nonzero(seg > 0)[0]
    return Packet(n_lo=int(lo + nz[0]), n_hi=int(lo + nz[-1]),
                  norm=norm, mean=mean, peak_n=peak)


def detect_packets(dist: PhotonDistribution | np.ndarray,
                   valley_frac: float = VALLEY_FRAC,
                   min_norm: float = MIN_PACKET_NORM) -> PacketSet:
    """Segment P_n at interior valleys and report norm/mean/peak per packet.

    Smoothing (3-point moving average) is used only to place the cuts; the
    reported statistics come from the raw distribution.
    """
    if isinstance(dist, PhotonDistribution):
        p = dist.probs
        time = dist.time
    else:
        p = np.asarray(dist, dtype=float)
        time = None

    s = np.convolve(p, np.full(3, 1.0 / 3.0), mode="same")

    # local maxima of the smoothed curve (plateau-safe: strictly above one
    # neighbor, at least equal to the other)
    maxima = [
        i for i in range(len(s))
        if (i == 0 or s[i] >= s[i - 1]) and (i == len(s) - 1 or s[i] > s[i + 1])
        and s[i] > 0
    ]
    cuts: list[int] = []
    for a, b in zip(maxima[:-1], maxima[1:]):
        v = a + int(np.argmin(s[a:b + 1]))
        if s[v] < valley_frac * s[a] and s[v] < valley_frac * s[b]:
            cuts.append(v)

    bounds = [0] + [c + 1 for c in cuts] + [len(p)]
    packets: list[Packet] = []
    discarded = 0.0
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        pk = _segment_stats(p, lo, hi - 1)
        if pk is None:
            continue
        if pk.norm < min_norm:
            discarded += pk.norm
        else:
            packets.append(pk)
    return PacketSet(packets=packets, discarded_mass=discarded, time=time)


def poisson_fit(packet: Packet) -> tuple[np.ndarray, np.ndarray]:
    """Moment-matched fit w * Pois(mean) over the packet support.

    Returns (photon numbers, fitted probabilities).
    """
    if packet.norm <= 0:
        raise ValueError("packet norm must be positive")
    ns = np.arange(packet.n_lo, packet.n_hi + 1)
    return ns, packet.norm * stats.poisson.pmf(ns, packet.mean)


def poisson_residual(packet: Packet, probs: np.ndarray) -> float:
    """Relative L1 mismatch ||P - fit||_1 / w over the packet support."""
    ns, fit = poisson_fit(packet)
    return float(np.abs(probs[ns] - fit).sum() / packet.norm)


@dataclass
class PacketTrack:
    """Mean-position history of one packet across snapshots."""

    times: list[float] = field(default_factory=list)
    means: list[float] = field(default_factory=list)
    norms: list[float] = field(default_factory=list)

    @property
    def amplitude(self) -> float:
        m = np.asarray(self.means)
        return float((m.max() - m.min()) / 2.0)

    def dominant_frequency(self) -> float | None:
        """Strongest spectral peak of the mean-position series, when the
        track is long enough for spectrum(); None otherwise."""
        if len(self.times) < 256:
            return None
        try:
            sp = spectrum(np.asarray(self.times), np.asarray(self.means))
        except NonuniformGrid:
            return None
        return sp.peaks[0][0] if sp.peaks else None


def track_packets(times: np.ndarray, pn: np.ndarray,
                  valley_frac: float = VALLEY_FRAC,
                  min_norm: float = MIN_PACKET_NORM,
                  max_jump: float = MAX_TRACK_JUMP) -> tuple[list[PacketSet], list[PacketTrack]]:
    """Detect packets per snapshot and associate them greedily by nearest
    mean (break when the jump exceeds max_jump photons)."""
    sets: list[PacketSet] = []
    tracks: list[PacketTrack] = []
    active: list[PacketTrack] = []

    for t, p in zip(times, pn):
        ps = detect_packets(p, valley_frac=valley_frac, min_norm=min_norm)
        ps.time = float(t)
        sets.append(ps)

        pairs = [
            (abs(pk.mean - tr.means[-1]), i_pk, i_tr)
            for i_tr, tr in enumerate(active)
            for i_pk, pk in enumerate(ps.packets)
        ]
        pairs.sort()
        used_pk: set[int] = set()
        used_tr: set[int] = set()
        next_active: list[PacketTrack] = []
        for d, i_pk, i_tr in pairs:
            if d > max_jump:
                break
            if i_pk in used_pk or i_tr in used_tr:
                continue
            used_pk.add(i_pk)
            used_tr.add(i_tr)
            tr = active[i_tr]
            pk = ps.packets[i_pk]
            tr.times.append(float(t))
            tr.means.append(pk.mean)
            tr.norms.append(pk.norm)
            next_active.append(tr)
        for i_pk, pk in enumerate(ps.packets):
            if i_pk not in used_pk:
                tr = PacketTrack(times=[float(t)], means=[pk.mean], norms=[pk.norm])
                tracks.append(tr)
                next_active.append(tr)
        active = next_active
    return sets, tracks
