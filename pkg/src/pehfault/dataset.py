"""Labeled vibration recordings: manifest parsing, recording file formats, the
end-to-end feature pipeline, and a synthetic surrogate corpus generator.

Manifest format: CSV with header row `path,label,bearing_type,load_w,fs_hz`;
paths are resolved relative to the manifest's directory.

Recording formats:
  * text: one decimal value per line (any extension other than the raw ones);
  * raw: little-endian 32-bit floats (`.f32` or `.raw`), optionally with a
    sidecar text header `<file>.hdr` declaring `fs_hz=` and `n_samples=`,
    which are validated when present.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError
from .frontend import FeatureVector, make_feature
from .harvester import PehDesign, simulate_voltage
from .signals import SignalUnit, TimeSeries, segment

__all__ = [
    "MachineState",
    "RecordingMeta",
    "Manifest",
    "LabeledFeature",
    "ClassSignalSpec",
    "SurrogateSpec",
    "DEFAULT_SURROGATE_SPEC",
    "load_manifest",
    "filter_manifest",
    "load_recording",
    "write_recording_f32",
    "build_feature_set",
    "load_surrogate_spec",
    "synth_surrogate_corpus",
]

MANIFEST_FIELDS = ("path", "label", "bearing_type", "load_w", "fs_hz")
VALID_LOADS_W = (0, 200, 400)
RAW_SUFFIXES = (".f32", ".raw")


class MachineState(str, enum.Enum):
    """Closed set of machine states: healthy plus six bearing fault types."""

    HEALTHY = "healthy"
    INNER_CRACK = "inner_crack"
    OUTER_CRACK = "outer_crack"
    BALL_CRACK = "ball_crack"
    INNER_OUTER = "inner_outer"
    INNER_BALL = "inner_ball"
    OUTER_BALL = "outer_ball"

    @classmethod
    def from_token(cls, token: str) -> "MachineState":
        try:
            return cls(token)
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise DataError(f"unknown label token {token!r} (valid: {valid})") from None


@dataclass(frozen=True)
class RecordingMeta:
    path: str
    label: MachineState
    bearing_type: str
    load_w: int
    fs: float

    def __post_init__(self) -> None:
        if self.fs <= 0:
            raise DataError(f"{self.path}: sampling rate must be positive, got {self.fs}")
        if self.load_w not in VALID_LOADS_W:
            raise DataError(f"{self.path}: load must be one of {VALID_LOADS_W} W, got {self.load_w}")


@dataclass(frozen=True)
class Manifest:
    entries: tuple[RecordingMeta, ...]
    root: Path

    def counts(self) -> dict[tuple[str, str, int], int]:
        """Recording count per (state, bearing_type, load_w)."""
        out: dict[tuple[str, str, int], int] = {}
        for meta in self.entries:
            key = (meta.label.value, meta.bearing_type, meta.load_w)
            out[key] = out.get(key, 0) + 1
        return out


@dataclass(frozen=True)
class LabeledFeature:
    feature: FeatureVector
    label: MachineState
    recording_id: str
    segment_index: int


def load_manifest(path: str | Path) -> Manifest:
    """Parse and validate a manifest CSV; duplicate paths are rejected."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"manifest not found: {path}")
    lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    if not lines:
        raise DataError(f"empty manifest: {path}")
    header = tuple(col.strip() for col in lines[0].split(","))
    if header != MANIFEST_FIELDS:
        raise DataError(f"{path}:1: manifest header must be {','.join(MANIFEST_FIELDS)}, got {lines[0]!r}")
    entries: list[RecordingMeta] = []
    seen: set[str] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != len(MANIFEST_FIELDS):
            raise DataError(f"{path}:{lineno}: expected {len(MANIFEST_FIELDS)} fields, got {len(fields)}")
        rec_path, label_token, bearing, load_token, fs_token = fields
        if rec_path in seen:
            raise DataError(f"{path}:{lineno}: duplicate recording path {rec_path!r}")
        seen.add(rec_path)
        try:
            label = MachineState.from_token(label_token)
            load_w = int(load_token)
            fs = float(fs_token)
        except DataError as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from None
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from None
        entries.append(RecordingMeta(rec_path, label, bearing, load_w, fs))
    root = path.resolve().parent
    for meta in entries:
        if not (root / meta.path).is_file():
            raise DataError(f"{path}: recording file not found: {root / meta.path}")
    return Manifest(tuple(entries), root)


def filter_manifest(
    manifest: Manifest,
    labels: tuple[MachineState, ...] | None = None,
    bearing_type: str | None = None,
    load_w: int | None = None,
) -> Manifest:
    """Restrict a manifest to the given states / bearing type / load."""
    entries = tuple(
        meta
        for meta in manifest.entries
        if (labels is None or meta.label in labels)
        and (bearing_type is None or meta.bearing_type == bearing_type)
        and (load_w is None or meta.load_w == load_w)
    )
    return Manifest(entries, manifest.root)


def _load_text_recording(full: Path) -> np.ndarray:
    values = []
    for lineno, line in enumerate(full.read_text().splitlines(), start=1):
        token = line.strip()
        if not token:
            continue
        try:
            value = float(token)
        except ValueError:
            raise DataError(f"{full}:{lineno}: unparseable sample {token!r}") from None
        if not np.isfinite(value):
            raise DataError(f"{full}:{lineno}: non-finite sample {token!r}")
        values.append(value)
    return np.asarray(values, dtype=np.float64)


def _read_sidecar(full: Path) -> dict[str, float]:
    sidecar = full.with_name(full.name + ".hdr")
    if not sidecar.is_file():
        return {}
    declared: dict[str, float] = {}
    for lineno, line in enumerate(sidecar.read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DataError(f"{sidecar}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        try:
            declared[key.strip()] = float(value)
        except ValueError:
            raise DataError(f"{sidecar}:{lineno}: unparseable value {value!r}") from None
    return declared


def _load_raw_recording(full: Path, fs: float) -> np.ndarray:
    blob = full.read_bytes()
    if len(blob) % 4 != 0:
        raise DataError(f"{full}: raw float32 file size {len(blob)} is not a multiple of 4")
    samples = np.frombuffer(blob, dtype="<f4").astype(np.float64)
    declared = _read_sidecar(full)
    if "n_samples" in declared and int(declared["n_samples"]) != len(samples):
        raise DataError(f"{full}: sidecar declares {int(declared['n_samples'])} samples, file holds {len(samples)}")
    if "fs_hz" in declared and abs(declared["fs_hz"] - fs) > 1e-6 * fs:
        raise DataError(f"{full}: sidecar declares fs={declared['fs_hz']:g} Hz, manifest says {fs:g} Hz")
    bad = np.flatnonzero(~np.isfinite(samples))
    if bad.size:
        raise DataError(f"{full}: non-finite sample at index {bad[0]}")
    return samples


def load_recording(meta: RecordingMeta, root: str | Path = ".") -> TimeSeries:
    """Read one recording as acceleration in g, with fs taken from the metadata."""
    full = Path(root) / meta.path
    if not full.is_file():
        raise DataError(f"recording file not found: {full}")
    if full.suffix in RAW_SUFFIXES:
        samples = _load_raw_recording(full, meta.fs)
    else:
        samples = _load_text_recording(full)
    if len(samples) == 0:
        raise DataError(f"{full}: recording holds no samples")
    return TimeSeries(samples, meta.fs, SignalUnit.ACCELERATION_G)


def write_recording_f32(samples: np.ndarray, fs: float, path: str | Path) -> None:
    """Write a raw little-endian float32 recording plus its sidecar header."""
    path = Path(path)
    data = np.asarray(samples, dtype="<f4")
    path.write_bytes(data.tobytes())
    path.with_name(path.name + ".hdr").write_text(f"fs_hz={fs:g}\nn_samples={len(data)}\n")


def build_feature_set(
    manifest: Manifest,
    design: PehDesign,
    segment_s: float,
    segments_per_recording: int,
    period_s: float,
    r_ohm: float,
) -> list[LabeledFeature]:
    """Run the full pipeline over every recording: segment, simulate the
    harvester voltage, and integrate per-interval energies.

    Output order is manifest order, then segment index. Each segment starts
    the harvester from zero state.
    """
    features: list[LabeledFeature] = []
    for meta in manifest.entries:
        try:
            ts = load_recording(meta, manifest.root)
            for index, piece in enumerate(segment(ts, segment_s, segments_per_recording)):
                voltage = simulate_voltage(design, piece)
                feature = make_feature(voltage, period_s, r_ohm, design.name)
                features.append(LabeledFeature(feature, meta.label, meta.path, index))
        except DataError as exc:
            raise DataError(f"{meta.path}: {exc}") from exc
        except ValueError as exc:
            raise DataError(f"{meta.path}: {exc}") from exc
    return features


@dataclass(frozen=True)
class ClassSignalSpec:
    """Tone mix (f_hz, amplitude) and white-noise level for one synthetic state."""

    tones: tuple[tuple[float, float], ...]
    noise_sigma: float = 0.0

    def __post_init__(self) -> None:
        if self.noise_sigma < 0:
            raise ConfigError(f"noise sigma must be non-negative, got {self.noise_sigma}")


@dataclass(frozen=True)
class SurrogateSpec:
    """Recipe for a synthetic labeled corpus."""

    classes: dict[MachineState, ClassSignalSpec]
    count_per_class: int = 7
    fs: float = 51200.0
    duration_s: float = 10.0
    amplitude_jitter: float = 0.10
    bearing_type: str = "6204"
    load_w: int = 0
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.classes:
            raise ConfigError("surrogate spec needs at least one class")
        if self.count_per_class < 1:
            raise ConfigError(f"count per class must be >= 1, got {self.count_per_class}")
        if self.fs <= 0 or self.duration_s <= 0:
            raise ConfigError("sampling rate and duration must be positive")
        if not 0 <= self.amplitude_jitter < 1:
            raise ConfigError(f"amplitude jitter must lie in [0, 1), got {self.amplitude_jitter}")
        for state, cspec in self.classes.items():
            for f_hz, _amp in cspec.tones:
                if not 0 < f_hz < self.fs / 2:
                    raise ConfigError(f"{state.value}: tone at {f_hz} Hz outside (0, fs/2)")


# Healthy: energy concentrated in two narrow bands, one inside the 0.50 mm
# design's pass-band. Faulty: comparable total energy spread over a wide range
# that straddles but mostly misses that pass-band.
DEFAULT_SURROGATE_SPEC = SurrogateSpec(
    classes={
        MachineState.HEALTHY: ClassSignalSpec(tones=((120.0, 0.8), (200.0, 1.0)), noise_sigma=0.05),
        MachineState.BALL_CRACK: ClassSignalSpec(
            tones=(
                (60.0, 0.6),
                (95.0, 0.6),
                (130.0, 0.6),
                (165.0, 0.6),
                (235.0, 0.6),
                (270.0, 0.6),
                (305.0, 0.6),
                (340.0, 0.6),
            ),
            noise_sigma=0.3,
        ),
    },
)


def load_surrogate_spec(path: str | Path) -> SurrogateSpec:
    """Read a surrogate recipe from a flat key-value file.

    Plain keys: count_per_class, fs_hz, duration_s, amplitude_jitter,
    bearing_type, load_w, seed. Per-class keys use a `<label>.` prefix:
    `<label>.tones=f:amp,f:amp,...` and `<label>.noise_sigma=`.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"surrogate spec not found: {path}")
    plain: dict[str, str] = {}
    tones: dict[MachineState, tuple[tuple[float, float], ...]] = {}
    sigmas: dict[MachineState, float] = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if "." in key:
            label_token, _, attr = key.partition(".")
            try:
                state = MachineState.from_token(label_token)
            except DataError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from None
            if attr == "tones":
                try:
                    tones[state] = tuple(
                        (float(pair.split(":")[0]), float(pair.split(":")[1]))
                        for pair in value.split(",")
                        if pair.strip()
                    )
                except (ValueError, IndexError):
                    raise ConfigError(f"{path}:{lineno}: tones must be f:amp,f:amp,..., got {value!r}") from None
            elif attr == "noise_sigma":
                try:
                    sigmas[state] = float(value)
                except ValueError:
                    raise ConfigError(f"{path}:{lineno}: unparseable noise sigma {value!r}") from None
            else:
                raise ConfigError(f"{path}:{lineno}: unknown per-class key {key!r}")
        elif key in ("count_per_class", "fs_hz", "duration_s", "amplitude_jitter", "bearing_type", "load_w", "seed"):
            plain[key] = value
        else:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
    if not tones:
        raise ConfigError(f"{path}: no per-class tone lists given")
    try:
        return SurrogateSpec(
            classes={state: ClassSignalSpec(tone_list, sigmas.get(state, 0.0)) for state, tone_list in tones.items()},
            count_per_class=int(plain.get("count_per_class", 7)),
            fs=float(plain.get("fs_hz", 51200.0)),
            duration_s=float(plain.get("duration_s", 10.0)),
            amplitude_jitter=float(plain.get("amplitude_jitter", 0.10)),
            bearing_type=plain.get("bearing_type", "6204"),
            load_w=int(plain.get("load_w", 0)),
            seed=int(plain.get("seed", 0)),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _synth_class_recording(cspec: ClassSignalSpec, fs: float, duration_s: float, jitter: float, rng) -> np.ndarray:
    n = int(round(duration_s * fs))
    t = np.arange(n) / fs
    samples = np.zeros(n)
    for f_hz, amplitude in cspec.tones:
        amp = amplitude * rng.uniform(1.0 - jitter, 1.0 + jitter)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        samples += amp * np.sin(2 * np.pi * f_hz * t + phase)
    if cspec.noise_sigma > 0:
        samples += cspec.noise_sigma * rng.standard_normal(n)
    return samples


def synth_surrogate_corpus(spec: SurrogateSpec, seed: int, out_dir: str | Path) -> Manifest:
    """Write a seeded synthetic corpus (recordings + manifest.csv) and load it back.

    Byte-identical output for identical spec and seed.
    """
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        probe = out_dir / ".write_probe"
        probe.write_bytes(b"")
        probe.unlink()
    except OSError as exc:
        raise DataError(f"unwritable directory {out_dir}: {exc}") from exc

    states = sorted(spec.classes, key=lambda s: s.value)
    # One seed per recording slot, shared across classes: identical class
    # recipes then synthesize identical recordings (common random numbers).
    slot_seeds = np.random.SeedSequence(seed).spawn(spec.count_per_class)
    rows = [",".join(MANIFEST_FIELDS)]
    for state in states:
        cspec = spec.classes[state]
        for index in range(spec.count_per_class):
            rng = np.random.default_rng(slot_seeds[index])
            samples = _synth_class_recording(cspec, spec.fs, spec.duration_s, spec.amplitude_jitter, rng)
            name = f"{state.value}_{index:02d}.f32"
            write_recording_f32(samples, spec.fs, out_dir / name)
            rows.append(f"{name},{state.value},{spec.bearing_type},{spec.load_w},{spec.fs:g}")
    manifest_path = out_dir / "manifest.csv"
    manifest_path.write_text("\n".join(rows) + "\n")
    return load_manifest(manifest_path)
