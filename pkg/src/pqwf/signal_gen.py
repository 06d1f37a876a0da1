"""Synthetic power-quality disturbance waveforms.

Eleven disturbance classes are produced from closed-form parametric models
(sine carrier, step-windowed envelopes, harmonic overlay, damped ringing,
per-cycle pulses).  Every record is a pure function of its parameters, and
datasets are a pure function of a :class:`DatasetSpec`.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field

import numpy as np


class ParameterError(ValueError):
    """Raised for signal parameters that are invalid for a disturbance class."""


class DisturbanceClass(enum.IntEnum):
    SWELL_WITH_HARMONICS = 1
    SWELL = 2
    SPIKE = 3
    SAG_WITH_HARMONICS = 4
    SAG = 5
    OSCILLATORY_TRANSIENT = 6
    NOTCH = 7
    INTERRUPTION_WITH_HARMONICS = 8
    INTERRUPTION = 9
    FLICKER_WITH_HARMONICS = 10
    FLICKER = 11

    @property
    def code(self) -> int:
        return int(self.value)

    @property
    def short(self) -> str:
        return f"C{self.value}"

    @property
    def display_name(self) -> str:
        return "".join(part.capitalize() for part in self.name.split("_"))

    @property
    def has_harmonics(self) -> bool:
        return self in _HARMONIC_CLASSES

    @classmethod
    def from_code(cls, code: int) -> "DisturbanceClass":
        try:
            return cls(int(code))
        except ValueError:
            raise ParameterError(f"unknown class code {code!r}") from None


_HARMONIC_CLASSES = frozenset(
    {
        DisturbanceClass.SWELL_WITH_HARMONICS,
        DisturbanceClass.SAG_WITH_HARMONICS,
        DisturbanceClass.INTERRUPTION_WITH_HARMONICS,
        DisturbanceClass.FLICKER_WITH_HARMONICS,
    }
)

ALL_CLASSES: tuple[DisturbanceClass, ...] = tuple(DisturbanceClass)

HARMONIC_ORDERS = (3, 5, 7)


@dataclass(frozen=True)
class SignalParams:
    """Generation parameters of one waveform.

    ``depth`` is the class's event magnitude: sag depth, swell rise,
    interruption depth, flicker modulation index, transient ringing gain,
    or spike/notch pulse height (pu).
    """

    fundamental_hz: float = 50.0
    sampling_hz: float = 3200.0
    duration_s: float = 0.2
    amplitude_pu: float = 1.0
    event_start_s: float = 0.06
    event_end_s: float = 0.12
    depth: float = 0.0
    harmonic_amplitudes: tuple[float, float, float] = (0.0, 0.0, 0.0)
    transient_freq_hz: float = 0.0
    transient_decay_s: float = 0.0
    flicker_hz: float = 0.0
    pulse_width_cycles: float = 0.0
    pulse_phase_cycles: float = 0.0
    rng_seed: int = 0
    snr_db: float | None = None

    @property
    def n_samples(self) -> int:
        return int(round(self.duration_s * self.sampling_hz))

    @property
    def samples_per_cycle(self) -> int:
        return int(round(self.sampling_hz / self.fundamental_hz))

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["harmonic_amplitudes"] = list(self.harmonic_amplitudes)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SignalParams":
        d = dict(d)
        if "harmonic_amplitudes" in d:
            d["harmonic_amplitudes"] = tuple(float(a) for a in d["harmonic_amplitudes"])
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ParameterError(f"unknown signal parameters: {sorted(unknown)}")
        return cls(**d)


@dataclass(frozen=True)
class SignalRecord:
    samples: np.ndarray
    label: DisturbanceClass
    params: SignalParams
    id: int = 0
    seed: int = 0


# Upper limits accepted by validation.  Every magnitude may also be 0, which
# reduces the class to its undisturbed carrier.
_DEPTH_LIMITS = {
    DisturbanceClass.SAG: 0.9,
    DisturbanceClass.SAG_WITH_HARMONICS: 0.9,
    DisturbanceClass.SWELL: 0.8,
    DisturbanceClass.SWELL_WITH_HARMONICS: 0.8,
    DisturbanceClass.INTERRUPTION: 1.0,
    DisturbanceClass.INTERRUPTION_WITH_HARMONICS: 1.0,
    DisturbanceClass.FLICKER: 0.2,
    DisturbanceClass.FLICKER_WITH_HARMONICS: 0.2,
    DisturbanceClass.OSCILLATORY_TRANSIENT: 0.9,
    DisturbanceClass.SPIKE: 0.4,
    DisturbanceClass.NOTCH: 0.4,
}
_HARMONIC_LIMITS = (0.15, 0.10, 0.05)
_MAX_PULSE_WIDTH = 0.05
_MAX_FLICKER_HZ = 20.0


def validate_params(cls: DisturbanceClass, p: SignalParams) -> None:
    """Raise :class:`ParameterError` unless ``p`` is legal for ``cls``."""
    cls = DisturbanceClass(cls)
    for name in ("fundamental_hz", "sampling_hz", "duration_s", "amplitude_pu"):
        value = getattr(p, name)
        if not (math.isfinite(value) and value > 0):
            raise ParameterError(f"{name} must be positive and finite, got {value!r}")
    ratio = p.sampling_hz / p.fundamental_hz
    if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
        raise ParameterError(
            f"sampling_hz/fundamental_hz must be a positive integer, got {ratio!r}"
        )
    if not (0 < p.event_start_s < p.event_end_s <= p.duration_s):
        raise ParameterError(
            "need 0 < event_start_s < event_end_s <= duration_s, got "
            f"{p.event_start_s!r}, {p.event_end_s!r}, {p.duration_s!r}"
        )
    limit = _DEPTH_LIMITS[cls]
    if not (0.0 <= p.depth <= limit):
        raise ParameterError(f"{cls.display_name}: depth {p.depth!r} outside [0, {limit}]")
    if len(p.harmonic_amplitudes) != 3:
        raise ParameterError("harmonic_amplitudes needs exactly 3 entries (3rd, 5th, 7th)")
    if cls.has_harmonics:
        for order, a, hi in zip(HARMONIC_ORDERS, p.harmonic_amplitudes, _HARMONIC_LIMITS):
            if not (0.0 <= a <= hi):
                raise ParameterError(f"harmonic {order} amplitude {a!r} outside [0, {hi}]")
    elif any(a != 0.0 for a in p.harmonic_amplitudes):
        raise ParameterError(f"{cls.display_name} carries no harmonics")

    if cls in (DisturbanceClass.FLICKER, DisturbanceClass.FLICKER_WITH_HARMONICS):
        if not (0.0 <= p.flicker_hz <= _MAX_FLICKER_HZ):
            raise ParameterError(f"flicker_hz {p.flicker_hz!r} outside [0, {_MAX_FLICKER_HZ}]")
    elif cls is DisturbanceClass.OSCILLATORY_TRANSIENT and p.depth > 0:
        if not (0 < p.transient_freq_hz < p.sampling_hz / 2):
            raise ParameterError("transient_freq_hz must lie in (0, Nyquist)")
        if not p.transient_decay_s > 0:
            raise ParameterError("transient_decay_s must be positive")
    elif cls in (DisturbanceClass.SPIKE, DisturbanceClass.NOTCH):
        if not (0.0 <= p.pulse_width_cycles <= _MAX_PULSE_WIDTH):
            raise ParameterError(
                f"pulse_width_cycles {p.pulse_width_cycles!r} outside [0, {_MAX_PULSE_WIDTH}]"
            )
        if not (0.0 <= p.pulse_phase_cycles < 1.0):
            raise ParameterError("pulse_phase_cycles must lie in [0, 1)")
    if p.snr_db is not None and not math.isfinite(p.snr_db):
        raise ParameterError("snr_db must be finite when set")


def _window(t: np.ndarray, start: float, end: float) -> np.ndarray:
    # u(t - t1) - u(t - t2) with u(0) = 1
    return ((t >= start) & (t < end)).astype(float)


def _waveform(cls: DisturbanceClass, p: SignalParams, t: np.ndarray) -> np.ndarray:
    omega = 2.0 * np.pi * p.fundamental_hz
    carrier = np.sin(omega * t)
    if cls.has_harmonics:
        for order, a in zip(HARMONIC_ORDERS, p.harmonic_amplitudes):
            carrier = carrier + a * np.sin(order * omega * t)
    amp = p.amplitude_pu
    window = _window(t, p.event_start_s, p.event_end_s)

    if cls in (
        DisturbanceClass.SAG,
        DisturbanceClass.SAG_WITH_HARMONICS,
        DisturbanceClass.INTERRUPTION,
        DisturbanceClass.INTERRUPTION_WITH_HARMONICS,
    ):
        return amp * (1.0 - p.depth * window) * carrier
    if cls in (DisturbanceClass.SWELL, DisturbanceClass.SWELL_WITH_HARMONICS):
        return amp * (1.0 + p.depth * window) * carrier
    if cls in (DisturbanceClass.FLICKER, DisturbanceClass.FLICKER_WITH_HARMONICS):
        return amp * (1.0 + p.depth * np.sin(2.0 * np.pi * p.flicker_hz * t)) * carrier
    if cls is DisturbanceClass.OSCILLATORY_TRANSIENT:
        if p.depth == 0.0:
            return amp * carrier
        lag = t - p.event_start_s
        ring = np.exp(-np.maximum(lag, 0.0) / p.transient_decay_s) * np.sin(
            2.0 * np.pi * p.transient_freq_hz * lag
        )
        return amp * carrier + amp * p.depth * ring * window
    # spike / notch: one rectangular pulse per cycle at a fixed phase
    pos = t * p.fundamental_hz
    pos = pos - np.floor(pos)
    eps = 1e-9
    in_pulse = (pos >= p.pulse_phase_cycles - eps) & (
        pos < p.pulse_phase_cycles + p.pulse_width_cycles - eps
    )
    sign = 1.0 if cls is DisturbanceClass.SPIKE else -1.0
    pulse = sign * p.depth * np.sign(carrier) * (in_pulse * window)
    return amp * carrier + pulse


def sample_waveform(cls: DisturbanceClass, params: SignalParams, t: float) -> float:
    """Model voltage (pu) of class ``cls`` at time ``t`` seconds."""
    cls = DisturbanceClass(cls)
    validate_params(cls, params)
    if not (0.0 <= t <= params.duration_s):
        raise ParameterError(f"t={t!r} outside [0, {params.duration_s}]")
    return float(_waveform(cls, params, np.array([float(t)]))[0])


def generate_signal(cls: DisturbanceClass, params: SignalParams) -> SignalRecord:
    """Sample the model on the grid ``t_n = n / sampling_hz``."""
    cls = DisturbanceClass(cls)
    validate_params(cls, params)
    n = params.n_samples
    t = np.arange(n) / params.sampling_hz
    samples = _waveform(cls, params, t)
    if params.snr_db is not None:
        power = float(np.mean(samples**2))
        sigma = math.sqrt(power / 10.0 ** (params.snr_db / 10.0))
        noise_rng = np.random.default_rng(params.rng_seed)
        samples = samples + noise_rng.normal(0.0, sigma, size=n)
    if not np.all(np.isfinite(samples)):
        raise ParameterError("waveform contains non-finite samples")
    return SignalRecord(samples=samples, label=cls, params=params, seed=params.rng_seed)


@dataclass(frozen=True)
class ParameterRanges:
    """Uniform sampling ranges used when building a dataset."""

    amplitude_pu: tuple[float, float] = (1.0, 1.0)
    event_cycles: tuple[float, float] = (1.0, 6.0)
    margin_cycles: float = 1.0
    # event edges snap to multiples of this many cycles; 0 leaves them continuous
    event_grid_cycles: float = 1.0
    sag_depth: tuple[float, float] = (0.1, 0.9)
    swell_depth: tuple[float, float] = (0.1, 0.8)
    interruption_depth: tuple[float, float] = (0.9, 1.0)
    flicker_depth: tuple[float, float] = (0.1, 0.2)
    flicker_hz: tuple[float, float] = (5.0, 20.0)
    harmonic3: tuple[float, float] = (0.05, 0.15)
    harmonic5: tuple[float, float] = (0.05, 0.10)
    harmonic7: tuple[float, float] = (0.02, 0.05)
    transient_gain: tuple[float, float] = (0.5, 0.9)
    transient_decay_s: tuple[float, float] = (0.008, 0.040)
    transient_freq_hz: tuple[float, float] = (300.0, 900.0)
    pulse_height: tuple[float, float] = (0.1, 0.4)
    pulse_width_cycles: tuple[float, float] = (0.01, 0.05)
    # pulse onset within the cycle; the default pins it to the positive peak
    pulse_phase_cycles: tuple[float, float] = (0.25, 0.25)

    def to_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in dataclasses.asdict(self).items()}

    @classmethod
    def from_dict(cls, d: dict) -> "ParameterRanges":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ParameterError(f"unknown parameter ranges: {sorted(unknown)}")
        return cls(**{k: (tuple(v) if isinstance(v, list) else v) for k, v in d.items()})


@dataclass(frozen=True)
class DatasetSpec:
    signals_per_class: int = 700
    classes: tuple[DisturbanceClass, ...] = ALL_CLASSES
    master_seed: int = 1159
    fundamental_hz: float = 50.0
    sampling_hz: float = 3200.0
    duration_cycles: int = 10
    snr_db: float | None = None
    ranges: ParameterRanges = field(default_factory=ParameterRanges)

    @property
    def duration_s(self) -> float:
        return self.duration_cycles / self.fundamental_hz


def signal_stream(master_seed: int, cls: DisturbanceClass, index: int) -> np.random.Generator:
    """Independent PCG64 stream for one signal, keyed by (seed, class, index)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([master_seed, int(cls), index])))


def draw_params(spec: DatasetSpec, cls: DisturbanceClass, index: int) -> SignalParams:
    """Draw one signal's parameters from its keyed stream.

    Every class consumes the same fixed sequence of uniforms, so the stream
    layout does not depend on which fields a class uses.
    """
    cls = DisturbanceClass(cls)
    r = spec.ranges
    rng = signal_stream(spec.master_seed, cls, index)
    u = rng.random(12)
    noise_seed = int(rng.integers(0, 2**31 - 1))

    def pick(rng_pair: tuple[float, float], x: float) -> float:
        lo, hi = rng_pair
        return lo + (hi - lo) * x

    f0 = spec.fundamental_hz
    cycle = 1.0 / f0
    total = spec.duration_cycles
    span = pick(r.event_cycles, u[1])
    latest = total - r.margin_cycles - span
    if latest < r.margin_cycles:
        raise ParameterError(
            f"{total}-cycle record cannot hold a {span:.3f}-cycle event with "
            f"{r.margin_cycles}-cycle margins"
        )
    start = pick((r.margin_cycles, latest), u[2])
    if r.event_grid_cycles > 0:
        g = r.event_grid_cycles
        span = max(g, round(span / g) * g)
        latest = total - r.margin_cycles - span
        start = min(max(round(start / g) * g, r.margin_cycles), latest)
    params = dict(
        fundamental_hz=f0,
        sampling_hz=spec.sampling_hz,
        duration_s=spec.duration_s,
        amplitude_pu=pick(r.amplitude_pu, u[0]),
        event_start_s=start * cycle,
        event_end_s=(start + span) * cycle,
        rng_seed=noise_seed,
        snr_db=spec.snr_db,
    )
    if cls.has_harmonics:
        params["harmonic_amplitudes"] = (
            pick(r.harmonic3, u[4]),
            pick(r.harmonic5, u[5]),
            pick(r.harmonic7, u[6]),
        )

    if cls in (DisturbanceClass.SAG, DisturbanceClass.SAG_WITH_HARMONICS):
        params["depth"] = pick(r.sag_depth, u[3])
    elif cls in (DisturbanceClass.SWELL, DisturbanceClass.SWELL_WITH_HARMONICS):
        params["depth"] = pick(r.swell_depth, u[3])
    elif cls in (DisturbanceClass.INTERRUPTION, DisturbanceClass.INTERRUPTION_WITH_HARMONICS):
        params["depth"] = pick(r.interruption_depth, u[3])
    elif cls in (DisturbanceClass.FLICKER, DisturbanceClass.FLICKER_WITH_HARMONICS):
        params["depth"] = pick(r.flicker_depth, u[3])
        params["flicker_hz"] = pick(r.flicker_hz, u[7])
    elif cls is DisturbanceClass.OSCILLATORY_TRANSIENT:
        params["depth"] = pick(r.transient_gain, u[3])
        params["transient_decay_s"] = pick(r.transient_decay_s, u[8])
        params["transient_freq_hz"] = pick(r.transient_freq_hz, u[9])
    else:
        spc = spec.sampling_hz / f0
        params["depth"] = pick(r.pulse_height, u[3])
        params["pulse_width_cycles"] = pick(r.pulse_width_cycles, u[10])
        # snap the pulse onset to a sample instant so every pulse is sampled
        params["pulse_phase_cycles"] = round(pick(r.pulse_phase_cycles, u[11]) * spc) / spc
    return SignalParams(**params)


def generate_dataset(spec: DatasetSpec) -> list[SignalRecord]:
    """All records of ``spec`` in (class, index) order with sequential ids."""
    if not spec.classes:
        raise ParameterError("dataset needs at least one class")
    if spec.signals_per_class <= 0:
        raise ParameterError("signals_per_class must be positive")
    records = []
    next_id = 0
    for cls in spec.classes:
        for index in range(spec.signals_per_class):
            params = draw_params(spec, cls, index)
            rec = generate_signal(cls, params)
            records.append(dataclasses.replace(rec, id=next_id))
            next_id += 1
    return records
