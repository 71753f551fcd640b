"""Distance, speed and tail-beat measurements from tracked video points.

A segment of the fish with known length is visible in every frame. Its pixel
length gives the local image scale, which changes as the fish moves away from
or toward the camera.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from finsim.errors import InsufficientOscillationError, InvalidInputError
from finsim.hydro import efficiency_class, strouhal

TRACK_HEADER = ["t", "marker_x_px", "marker_y_px", "ref_len_px"]


@dataclass(frozen=True)
class TrackSample:
    t: float
    marker_px: tuple[float, float]
    ref_len_px: float


@dataclass(frozen=True)
class TrackSeries:
    fps: float
    samples: tuple[TrackSample, ...]
    ref_len_m: float
    camera_angle_deg: float = float("nan")  # recorded only, no tilt correction

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        if not (math.isfinite(self.fps) and self.fps > 0):
            raise InvalidInputError("fps must be > 0", field="fps")
        if not (math.isfinite(self.ref_len_m) and self.ref_len_m > 0):
            raise InvalidInputError("ref_len_m must be > 0", field="ref_len_m")
        if not self.samples:
            raise InvalidInputError("track has no samples")
        prev = -math.inf
        for i, s in enumerate(self.samples):
            if not all(math.isfinite(v) for v in (s.t, *s.marker_px, s.ref_len_px)):
                raise InvalidInputError(f"sample {i} has a non-finite value", field=f"samples[{i}]")
            if s.t <= prev:
                raise InvalidInputError("timestamps must be strictly increasing", field=f"samples[{i}].t")
            if s.ref_len_px <= 0:
                raise InvalidInputError("ref_len_px must be > 0", field=f"samples[{i}].ref_len_px")
            prev = s.t

    @property
    def t(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    @property
    def marker(self) -> np.ndarray:
        return np.array([s.marker_px for s in self.samples], dtype=float)

    @property
    def ref_len_px(self) -> np.ndarray:
        return np.array([s.ref_len_px for s in self.samples])


def read_track_csv(path, fps: float, ref_len_m: float, camera_angle_deg: float = float("nan")) -> TrackSeries:
    """Load a track file with header ``t,marker_x_px,marker_y_px,ref_len_px``."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise InvalidInputError(f"{path}: empty track file")
        if [h.strip() for h in header] != TRACK_HEADER:
            raise InvalidInputError(f"{path}: expected header {','.join(TRACK_HEADER)}")
        samples = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                raise InvalidInputError(f"{path}:{lineno}: expected 4 columns")
            try:
                t, x, y, ref = (float(c) for c in row)
            except ValueError:
                raise InvalidInputError(f"{path}:{lineno}: non-numeric value") from None
            samples.append(TrackSample(t, (x, y), ref))
    if not samples:
        raise InvalidInputError(f"{path}: track file has no samples")
    return TrackSeries(fps=fps, samples=samples, ref_len_m=ref_len_m, camera_angle_deg=camera_angle_deg)


def px_scale(ref_len_m: float, ref_len_px: float) -> float:
    """Metres per pixel from a segment of known length."""
    for name, v in (("ref_len_m", ref_len_m), ("ref_len_px", ref_len_px)):
        if not (math.isfinite(v) and v > 0):
            raise InvalidInputError(f"{name} must be > 0", field=name)
    return ref_len_m / ref_len_px


def traveled_distance(disp_px: float, ref_len_m: float, start_ref_px: float, end_ref_px: float) -> float:
    """Pixel displacement converted with the mean of the start and end scales."""
    if not (math.isfinite(disp_px) and disp_px >= 0):
        raise InvalidInputError("disp_px must be >= 0", field="disp_px")
    return disp_px * 0.5 * (px_scale(ref_len_m, start_ref_px) + px_scale(ref_len_m, end_ref_px))


def mean_speed(distance: float, t_start: float, t_end: float) -> float:
    if not (math.isfinite(distance) and distance >= 0):
        raise InvalidInputError("distance must be >= 0", field="distance")
    if not (math.isfinite(t_start) and math.isfinite(t_end) and t_end > t_start):
        raise InvalidInputError("t_end must be later than t_start")
    return distance / (t_end - t_start)


def mean_crossings(series, fps: float) -> np.ndarray:
    """Times (s, from the first sample) where the series crosses its mean.

    Crossing instants are linearly interpolated between samples.
    """
    if not (math.isfinite(fps) and fps > 0):
        raise InvalidInputError("fps must be > 0", field="fps")
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or not np.all(np.isfinite(x)):
        raise InvalidInputError("series must be a finite 1-D sequence")
    x = x - x.mean()
    # samples sitting exactly on the mean are attributed to the positive side
    sign = x >= 0
    idx = np.flatnonzero(sign[1:] != sign[:-1])
    frac = x[idx] / (x[idx] - x[idx + 1])
    return (idx + frac) / fps


def tailbeat_frequency(lateral, fps: float) -> float:
    """Tail-beat frequency from mean crossings (two per beat)."""
    times = mean_crossings(lateral, fps)
    if len(times) < 4:
        raise InsufficientOscillationError(
            f"found {len(times)} mean crossings, need at least 4 to estimate a frequency"
        )
    return (len(times) - 1) / (2.0 * (times[-1] - times[0]))


def sweep_amplitude(lateral) -> float:
    """Peak-to-peak lateral excursion (same unit as the input)."""
    x = np.asarray(lateral, dtype=float)
    if x.size == 0:
        raise InvalidInputError("lateral series is empty")
    return float(x.max() - x.min())


@dataclass(frozen=True)
class TrackReport:
    distance_m: float
    duration_s: float
    speed: float
    frequency: float
    sweep_m: float
    strouhal: float
    efficiency: str


def lateral_metres(track: TrackSeries) -> np.ndarray:
    """Marker offset from the straight start-to-end line, in metres.

    Each sample is scaled with its own calibration segment.
    """
    p = track.marker
    axis = p[-1] - p[0]
    norm = math.hypot(*axis)
    if norm == 0.0:
        raise InvalidInputError("marker does not move between first and last sample")
    normal = np.array([-axis[1], axis[0]]) / norm
    return ((p - p[0]) @ normal) * track.ref_len_m / track.ref_len_px


def analyze_track(track: TrackSeries) -> TrackReport:
    """Speed, tail-beat frequency, sweep and Strouhal number of one interval."""
    if len(track.samples) < 2:
        raise InvalidInputError("track needs at least two samples")
    p = track.marker
    disp = float(math.hypot(*(p[-1] - p[0])))
    ref = track.ref_len_px
    distance = traveled_distance(disp, track.ref_len_m, ref[0], ref[-1])
    t = track.t
    speed = mean_speed(distance, t[0], t[-1])
    lateral = lateral_metres(track)
    freq = tailbeat_frequency(lateral, track.fps)
    sweep = sweep_amplitude(lateral)
    st = strouhal(freq, sweep, speed)
    return TrackReport(
        distance_m=distance,
        duration_s=float(t[-1] - t[0]),
        speed=speed,
        frequency=freq,
        sweep_m=sweep,
        strouhal=st,
        efficiency=efficiency_class(st),
    )
