"""Sample and payload file formats.

IQ files are interleaved float32 little-endian (I0, Q0, I1, Q1, ...) with a
text sidecar next to them (same basename, .meta suffix) carrying key=value
metadata, at minimum the sample rate. Payload files pack 8 covert bits per
byte, most significant bit first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .phy.params import SAMPLE_RATE_HZ


@dataclass
class IqBuffer:
    samples: np.ndarray
    sample_rate_hz: float = SAMPLE_RATE_HZ
    description: str = ""


def _meta_path(path: Path) -> Path:
    return path.with_suffix(".meta")


def write_iq(path: str | Path, buf: IqBuffer) -> None:
    path = Path(path)
    samples = np.asarray(buf.samples, dtype=np.complex128)
    interleaved = np.empty(2 * len(samples), dtype="<f4")
    interleaved[0::2] = samples.real
    interleaved[1::2] = samples.imag
    interleaved.tofile(path)
    lines = [
        f"sample_rate_hz={int(buf.sample_rate_hz)}",
        f"n_samples={len(samples)}",
        "format=float32_interleaved_le",
    ]
    if buf.description:
        lines.append(f"description={buf.description}")
    _meta_path(path).write_text("\n".join(lines) + "\n")


def read_meta(path: str | Path) -> dict[str, str]:
    meta: dict[str, str] = {}
    meta_file = _meta_path(Path(path))
    if not meta_file.exists():
        return meta
    for line in meta_file.read_text().splitlines():
        line = line.strip()
        if line and "=" in line:
            key, value = line.split("=", 1)
            meta[key.strip()] = value.strip()
    return meta


def read_iq(path: str | Path) -> IqBuffer:
    path = Path(path)
    raw = np.fromfile(path, dtype="<f4")
    if len(raw) % 2:
        raise ValueError(f"{path} holds an odd number of float32 values; not interleaved IQ")
    samples = raw[0::2].astype(np.float64) + 1j * raw[1::2].astype(np.float64)
    meta = read_meta(path)
    return IqBuffer(
        samples=samples,
        sample_rate_hz=float(meta.get("sample_rate_hz", SAMPLE_RATE_HZ)),
        description=meta.get("description", ""),
    )


def write_bits(path: str | Path, bits: np.ndarray) -> None:
    bits = np.asarray(bits, dtype=np.uint8)
    if len(bits) % 8:
        raise ValueError("payload files hold whole bytes; pad the bit vector to 8")
    np.packbits(bits).tofile(Path(path))


def read_bits(path: str | Path) -> np.ndarray:
    return np.unpackbits(np.fromfile(Path(path), dtype=np.uint8))
