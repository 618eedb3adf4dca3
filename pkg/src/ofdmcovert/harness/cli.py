"""Command line front end.

Subcommands:
  simulate  Monte Carlo trials of one configuration, summary to stdout
  sweep     grid of SNR (and optionally model) points, CSV output
  detect    run the layer-1 detector suite over an IQ file
  rates     print covert throughput reference numbers
  iqdump    synthesize one frame to an IQ file (plus .meta sidecar)

Configurations come from a JSON file (--config) and/or individual flags;
flags win over the file.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .. import detect as detectors
from ..channel import ChannelSpec, apply_channel
from ..covert import capacity_bits
from ..errors import FrameNotFoundError, SignalFieldError
from ..iqio import IqBuffer, read_iq, write_bits, write_iq
from ..phy import rx, tx
from ..phy.params import SAMPLE_RATE_HZ
from . import runner
from .config import COVERT_KINDS, ExperimentConfig, covert_from_dict, load_config

_COVERT_FLAG_FIELDS = {
    "order": ("m_order", int),
    "delta": ("delta_hz", float),
    "modulation": ("modulation", str),
    "fraction": ("fraction", str),
    "covert_fft": ("covert_fft", int),
    "cpcp": ("cpcp_len", int),
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON experiment config file")
    parser.add_argument("--mcs", type=int, help="host rate in Mbit/s (6..54)")
    parser.add_argument("--len", dest="psdu_bytes", type=int, help="PSDU length in bytes, FCS included")
    parser.add_argument("--model", help="channel model: A (AWGN only), B, D or E")
    parser.add_argument("--snr", type=float, help="signal-to-noise ratio in dB")
    parser.add_argument("--no-noise", action="store_true", help="disable AWGN entirely")
    parser.add_argument("--cfo", type=float, help="static carrier offset in Hz")
    parser.add_argument("--doppler", type=float, help="max Doppler in Hz (0 = block fading)")
    parser.add_argument("--trials", type=int, help="Monte Carlo trials")
    parser.add_argument("--seed", type=int, help="experiment seed")
    parser.add_argument("--genie", action="store_true", help="perfect sync and known channel")
    parser.add_argument("--covert", choices=sorted(COVERT_KINDS), help="covert channel kind")
    parser.add_argument("--order", type=int, help="stf-psk: number of phases")
    parser.add_argument("--delta", type=float, help="cfo-fsk: frequency shift in Hz")
    parser.add_argument("--modulation", help="covert constellation (bpsk/qpsk/16qam/64qam)")
    parser.add_argument("--fraction", choices=["full", "half"], help="cp-replace: CP share")
    parser.add_argument("--covert-fft", dest="covert_fft", type=int, help="cp-replace: mini FFT size")
    parser.add_argument("--cpcp", type=int, help="cp-replace: block guard length")


def _build_config(args: argparse.Namespace) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    data = config.to_dict()

    for flag, key in [("mcs", "rate_mbps"), ("psdu_bytes", "psdu_bytes"), ("trials", "n_trials"), ("seed", "seed")]:
        value = getattr(args, flag)
        if value is not None:
            data[key] = value
    if args.genie:
        data["genie"] = True
    for flag, key in [("model", "model"), ("snr", "snr_db"), ("cfo", "cfo_hz"), ("doppler", "max_doppler_hz")]:
        value = getattr(args, flag)
        if value is not None:
            data["channel"][key] = value
    if args.no_noise:
        data["channel"]["snr_db"] = None

    covert = data.get("covert")
    if args.covert:
        covert = {"kind": args.covert}
    if covert is not None:
        for flag, (key, _) in _COVERT_FLAG_FIELDS.items():
            value = getattr(args, flag)
            if value is not None:
                covert[key] = value
        # Drop fields the selected kind does not know about (e.g. a stale
        # --modulation next to --covert stf-psk).
        cls = COVERT_KINDS[covert["kind"]]
        valid = set(cls.__dataclass_fields__)
        covert = {k: v for k, v in covert.items() if k == "kind" or k in valid}
    data["covert"] = covert
    return ExperimentConfig.from_dict(data)


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = _build_config(args)
    summary = runner.run_point(config)
    for col in runner.CSV_COLUMNS:
        print(f"{col}={runner._format(getattr(summary, col))}")
    if args.out:
        runner.write_csv(args.out, [summary])
    return 0


def _parse_list(text: str, cast) -> list:
    return [None if t.lower() in ("inf", "none") else cast(t) for t in text.split(",") if t]


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _build_config(args)
    snrs = _parse_list(args.snr_list, float) if args.snr_list else [config.channel.snr_db]
    models = args.model_list.split(",") if args.model_list else None
    rows = runner.run_sweep(config, snrs, models)
    runner.write_csv(args.out, rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_rates(args: argparse.Namespace) -> int:
    from .rates import reference_rates

    for row in reference_rates():
        mbps = row.covert_rate_bps / 1e6
        print(f"{row.label:48s} host {row.host_rate_mbps:2d} Mbit/s  covert {mbps:g} Mbit/s")
    return 0


def _cmd_iqdump(args: argparse.Namespace) -> int:
    config = _build_config(args)
    rng = np.random.default_rng([config.seed, 0])
    frame = runner.make_frame(config, rng)
    covert_bits = None
    if config.covert is not None:
        covert_bits = rng.integers(0, 2, capacity_bits(config.covert, frame.n_data_symbols), dtype=np.uint8)
    build = tx.build_frame(frame, config.covert, covert_bits)
    samples = np.concatenate(
        [np.zeros(config.pre_pad, dtype=np.complex128), build.iq, np.zeros(config.post_pad, dtype=np.complex128)]
    )
    if args.channel:
        samples = apply_channel(samples, config.channel, rng)
    kind = config.covert.__class__.__name__ if config.covert else "none"
    write_iq(args.out, IqBuffer(samples, SAMPLE_RATE_HZ, description=f"covert={kind}"))
    print(f"wrote {len(samples)} samples to {args.out}")
    if args.bits_out and covert_bits is not None:
        padded = np.concatenate([covert_bits, np.zeros((-len(covert_bits)) % 8, dtype=np.uint8)])
        write_bits(args.bits_out, padded)
        print(f"wrote {len(covert_bits)} covert bits (zero-padded to bytes) to {args.bits_out}")
    return 0


def _cmd_detect(args: argparse.Namespace) -> int:
    buf = read_iq(args.infile)
    config = detectors.DetectorConfig()
    samples = buf.samples
    offset = 0
    n_frames = 0
    while True:
        try:
            diag = rx.receive(samples[offset:])
        except (FrameNotFoundError, SignalFieldError):
            break
        n_frames += 1
        stf = detectors.l1_stf_phase(diag.corrected, diag.frame_start, diag.channel_estimate, config)
        cfo = detectors.l1_cfo_pattern(diag.per_symbol_cfo_hz, config)
        conform = detectors.l1_subcarrier_conformance(diag.grid_fft, True, config)
        cp = detectors.l1_cp_similarity(diag.corrected, diag.frame_start, diag.n_data_symbols, config)
        mask = detectors.l1_spectral_mask(diag.corrected, config)
        report = {
            "frame": n_frames,
            "start": offset + diag.frame_start,
            "rate_mbps": diag.rate_mbps,
            "psdu_len": diag.psdu_len,
            "fcs_ok": diag.fcs_ok,
            "stf_rotation_rad": round(stf.rotation_rad, 6),
            "stf_flagged": stf.flagged,
            "cfo_score": round(cfo.score, 3),
            "cfo_flagged": cfo.flagged,
            "conformance_margin_db": round(conform.margin_db, 2),
            "conformance_flagged": conform.flagged,
            "cp_similarity": round(cp.mean_similarity, 4),
            "cp_flagged": cp.flagged,
            "mask_margin_db": round(mask.worst_margin_db, 2),
            "mask_compliant": mask.compliant,
        }
        print(json.dumps(report))
        offset += diag.frame_start + 320 + 80 * (1 + diag.n_data_symbols)
        if offset >= len(samples) - 480:
            break
    if n_frames == 0:
        print("no frames found", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="ofdmcovert", description="OFDM covert channel workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one Monte Carlo point")
    _add_common(p)
    p.add_argument("--out", help="optional CSV file for the summary row")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="run a (model x SNR) grid")
    _add_common(p)
    p.add_argument("--snr-list", help="comma-separated SNR values in dB")
    p.add_argument("--model-list", help="comma-separated channel models")
    p.add_argument("--out", required=True, help="CSV output file")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("rates", help="print covert throughput reference table")
    p.set_defaults(func=_cmd_rates)

    p = sub.add_parser("iqdump", help="write one synthesized frame as an IQ file")
    _add_common(p)
    p.add_argument("--out", required=True, help="IQ output file")
    p.add_argument("--bits-out", help="also write the embedded covert payload bits")
    p.add_argument("--channel", action="store_true", help="pass the frame through the channel model")
    p.set_defaults(func=_cmd_iqdump)

    p = sub.add_parser("detect", help="run layer-1 detectors over an IQ file")
    p.add_argument("infile", help="IQ file (float32 interleaved)")
    p.set_defaults(func=_cmd_detect)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
