"""Experiment configuration and its JSON form."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from ..channel import ChannelSpec
from ..covert.spec import Camo, CfoFsk, CovertSpec, CpReplace, StfPsk
from ..phy.params import FCS_LEN_BYTES, MIN_PSDU_BYTES

COVERT_KINDS = {
    "stf-psk": StfPsk,
    "cfo-fsk": CfoFsk,
    "camo": Camo,
    "cp-replace": CpReplace,
}
_KIND_OF_TYPE = {cls: kind for kind, cls in COVERT_KINDS.items()}


def covert_to_dict(spec: CovertSpec | None) -> dict | None:
    if spec is None:
        return None
    return {"kind": _KIND_OF_TYPE[type(spec)], **asdict(spec)}


def covert_from_dict(data: dict | None) -> CovertSpec | None:
    if data is None:
        return None
    data = dict(data)
    kind = data.pop("kind")
    try:
        cls = COVERT_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown covert kind {kind!r}; pick one of {sorted(COVERT_KINDS)}") from None
    return cls(**data)


def covert_label(spec: CovertSpec | None) -> tuple[str, str]:
    """(kind, salient parameter) strings for result tables."""
    if spec is None:
        return "none", ""
    if isinstance(spec, StfPsk):
        return "stf-psk", str(spec.m_order)
    if isinstance(spec, CfoFsk):
        return "cfo-fsk", f"{spec.delta_hz:g}"
    if isinstance(spec, Camo):
        return "camo", spec.modulation
    return "cp-replace", f"{spec.fraction}/{spec.covert_fft}/{spec.cpcp_len}"


@dataclass
class ExperimentConfig:
    """One measurement point: waveform, impairments, covert channel, trials."""

    rate_mbps: int = 24
    psdu_bytes: int = 1000            # frame check sequence included
    channel: ChannelSpec = field(default_factory=ChannelSpec)
    covert: CovertSpec | None = None
    n_trials: int = 1000
    seed: int = 1
    pre_pad: int = 256                # noise-only samples before the frame
    post_pad: int = 128
    genie: bool = False               # perfect sync + known flat channel

    def __post_init__(self) -> None:
        if self.psdu_bytes < max(MIN_PSDU_BYTES, FCS_LEN_BYTES + 1):
            raise ValueError(f"psdu_bytes must be at least {MIN_PSDU_BYTES}")
        if self.genie and self.channel.model != "A":
            raise ValueError("genie reception assumes the flat model A channel")

    def to_dict(self) -> dict:
        return {
            "rate_mbps": self.rate_mbps,
            "psdu_bytes": self.psdu_bytes,
            "channel": asdict(self.channel),
            "covert": covert_to_dict(self.covert),
            "n_trials": self.n_trials,
            "seed": self.seed,
            "pre_pad": self.pre_pad,
            "post_pad": self.post_pad,
            "genie": self.genie,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        channel = data.pop("channel", None)
        covert = data.pop("covert", None)
        return cls(
            channel=ChannelSpec(**channel) if channel else ChannelSpec(),
            covert=covert_from_dict(covert),
            **data,
        )


def load_config(path: str | Path) -> ExperimentConfig:
    return ExperimentConfig.from_dict(json.loads(Path(path).read_text()))


def save_config(path: str | Path, config: ExperimentConfig) -> None:
    Path(path).write_text(json.dumps(config.to_dict(), indent=2) + "\n")
