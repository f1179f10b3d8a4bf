"""Command line front end. Every subcommand writes one CSV table.

Rates are reported in bits/s/Hz (the library computes nats). Sweeps accept
either a single value, a comma list, or an inclusive a:b:step range. All
randomness derives from --seed through per-trial substreams, so output is
bit-identical across runs and across --workers settings.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .channel import Rng, load_channel, switch_strongest
from .dithering import DitherPolicy, optimize_threshold
from .energy import PowerModel, efficiency_curve
from .ergodic import TrainingConfig, ergodic_bounds, imperfect_bounds
from .gmi import build_moments, capacity_antenna_selection, capacity_conventional, kappa_opt
from .linalg import NotPositiveDefinite
from .multiuser import mu_ergodic_bounds
from .outage import outage_gmi
from .parallel import map_trials
from .validate import BATTERY_COLUMNS, regression_battery

__all__ = ["main"]

_LN2 = float(np.log(2.0))

_POWER_KEYS = {
    "p_lna": "lna_mw",
    "p_mix": "mixer_mw",
    "p_fil": "filters_mw",
    "p_adc_pair": "adc_pair_mw",
    "p_syn": "synthesizer_mw",
}
_CONFIG_KEYS = set(_POWER_KEYS) | {"coherence_len", "err_samples", "dither_grid_db"}

_DEFAULT_DITHER_GRID_DB = "-10:15:2.5"
_DEFAULT_ERR_SAMPLES = 10000


class UsageError(Exception):
    """Bad flag or config value; mapped to exit code 2."""


def _bits(nats: float) -> float:
    return nats / _LN2


def parse_sweep(text: str) -> list[float]:
    """Parse "v", "v1,v2,...", or inclusive "a:b:step"."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ValueError
            a, b, step = parts
            if step <= 0 or b < a:
                raise ValueError
            return [float(v) for v in np.arange(a, b + step / 2.0, step)]
        if "," in text:
            return [float(p) for p in text.split(",")]
        return [float(text)]
    except ValueError:
        raise UsageError(
            f"cannot parse sweep {text!r}; expected value, comma list, or a:b:step"
        ) from None


def parse_int_sweep(text: str) -> list[int]:
    values = parse_sweep(text)
    out = []
    for v in values:
        if abs(v - round(v)) > 1e-9:
            raise UsageError(f"expected integers in sweep {text!r}")
        out.append(int(round(v)))
    return out


def parse_config(path: str) -> dict:
    """Read `key = value` lines; '#' starts a comment."""
    cfg: dict = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key = value")
                key, value = (part.strip() for part in line.split("=", 1))
                if key not in _CONFIG_KEYS:
                    raise UsageError(
                        f"{path}:{lineno}: unknown key {key!r}; "
                        f"allowed: {', '.join(sorted(_CONFIG_KEYS))}"
                    )
                if key in ("coherence_len", "err_samples"):
                    cfg[key] = int(value)
                elif key == "dither_grid_db":
                    cfg[key] = value
                else:
                    cfg[key] = float(value)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"bad value in config {path}: {exc}") from None
    return cfg


def _power_model(cfg: dict) -> PowerModel:
    kwargs = {field: cfg[key] for key, field in _POWER_KEYS.items() if key in cfg}
    return PowerModel(**kwargs)


def _es_from_db(snr_db: float) -> float:
    return float(10.0 ** (snr_db / 10.0))


def _emit(header, rows, path: str) -> None:
    def fmt(v):
        if isinstance(v, str):
            return v
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        return format(float(v), ".10g")

    lines = [",".join(header)] + [",".join(fmt(v) for v in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _check_k(k_values, n: int) -> None:
    for k in k_values:
        if not 0 <= k <= n:
            raise UsageError(f"k={k} outside [0, {n}]")


def _cmd_fixed(args, cfg):
    h = load_channel(args.channel)
    n = h.shape[0]
    _check_k([args.k], n)
    delta = switch_strongest(h, args.k)
    rows = []
    for snr_db in parse_sweep(args.snr_db):
        es = _es_from_db(snr_db)
        result = kappa_opt(build_moments(h, delta, es))
        rows.append(
            [
                snr_db,
                args.k,
                _bits(result.gmi_nats),
                _bits(capacity_conventional(h, es)),
                _bits(capacity_antenna_selection(h, args.k, es)),
            ]
        )
    return ["snr_db", "k", "gmi_bits", "conventional_bits", "selection_bits"], rows


def _cmd_outage(args, cfg):
    rng = Rng(args.seed)
    ks = parse_int_sweep(args.k)
    _check_k(ks, args.n)
    if not 0.0 < args.p_out < 1.0:
        raise UsageError("p-out must lie strictly between 0 and 1")
    rows = []
    for snr_db in parse_sweep(args.snr_db):
        es = _es_from_db(snr_db)
        for k in ks:
            point = outage_gmi(args.n, k, es, args.p_out, args.draws, rng, args.workers)
            rows.append([snr_db, k, "mixed", _bits(point.mixed_nats)])
            rows.append([snr_db, k, "conventional", _bits(point.conventional_nats)])
            rows.append([snr_db, k, "antenna_selection", _bits(point.selection_nats)])
    return ["snr_db", "k", "arch", "rate_bits"], rows


def _cmd_ergodic(args, cfg):
    rng = Rng(args.seed)
    ks = parse_int_sweep(args.k)
    _check_k(ks, args.n)
    rows = []
    for snr_db in parse_sweep(args.snr_db):
        es = _es_from_db(snr_db)
        for k in ks:
            b = ergodic_bounds(args.n, k, es, args.trials, rng, workers=args.workers)
            rows.append(
                [
                    snr_db,
                    k,
                    _bits(b.lower_nats),
                    _bits(b.upper_nats),
                    _bits(b.stderr_lower),
                    _bits(b.stderr_upper),
                ]
            )
    return ["snr_db", "k", "lower_bits", "upper_bits", "stderr_lower", "stderr_upper"], rows


def _cmd_imperfect(args, cfg):
    rng = Rng(args.seed)
    ks = parse_int_sweep(args.k)
    _check_k(ks, args.n)
    if any(k < 1 for k in ks):
        raise UsageError("imperfect CSI requires k >= 1 for training")
    sigma_t_sq = _es_from_db(args.mse_db)
    if sigma_t_sq > 1.0:
        raise UsageError("mse-db must be at most 0 dB")
    err_samples = args.err_samples or cfg.get("err_samples", _DEFAULT_ERR_SAMPLES)
    coherence = args.coherence_len or cfg.get("coherence_len", 196)
    training = TrainingConfig(coherence_len=coherence)

    rows = []
    for snr_db in parse_sweep(args.snr_db):
        es = _es_from_db(snr_db)
        for k in ks:
            b = imperfect_bounds(
                args.n, k, es, sigma_t_sq, err_samples, args.trials, rng,
                training=training, workers=args.workers,
            )
            prefactor = (training.coherence_len - -(-args.n // k)) / training.coherence_len

            def conv_trial(i: int, es=es):
                from .channel import complex_normal
                h = complex_normal(rng.substream(i).generator(), args.n)
                return float(np.log1p(es * np.sum(np.abs(h) ** 2)))

            conv = float(np.mean(map_trials(conv_trial, args.trials, args.workers)))
            rows.append(
                [
                    snr_db,
                    k,
                    args.mse_db,
                    _bits(b.lower_nats),
                    _bits(b.upper_nats),
                    _bits(b.stderr_lower),
                    _bits(b.stderr_upper),
                    _bits(conv),
                    _bits(prefactor * conv),
                ]
            )
    header = [
        "snr_db", "k", "mse_db", "lower_bits", "upper_bits",
        "stderr_lower", "stderr_upper", "conventional_bits", "conventional_trained_bits",
    ]
    return header, rows


def _cmd_dither(args, cfg):
    rng = Rng(args.seed)
    ks = parse_int_sweep(args.k)
    _check_k(ks, args.n)
    grid_db = parse_sweep(args.t_grid_db or cfg.get("dither_grid_db", _DEFAULT_DITHER_GRID_DB))
    grid = [_es_from_db(t) for t in grid_db]
    rows = []
    for snr_db in parse_sweep(args.snr_db):
        es = _es_from_db(snr_db)
        # threshold searched on the all-one-bit array, then reused at every k
        t_opt, _ = optimize_threshold(args.n, es, np.array(grid), args.trials, rng, args.workers)
        for k in ks:
            dith = ergodic_bounds(
                args.n, k, es, args.trials, rng,
                dither=DitherPolicy(t_opt), workers=args.workers,
            )
            plain = ergodic_bounds(args.n, k, es, args.trials, rng, workers=args.workers)
            rows.append(
                [
                    snr_db,
                    k,
                    10.0 * np.log10(t_opt),
                    _bits(dith.lower_nats),
                    _bits(dith.stderr_lower),
                    _bits(plain.lower_nats),
                    _bits(plain.stderr_lower),
                ]
            )
    header = [
        "snr_db", "k", "t_opt_db", "lower_bits", "stderr_lower",
        "plain_lower_bits", "plain_stderr_lower",
    ]
    return header, rows


def _cmd_multiuser(args, cfg):
    rng = Rng(args.seed)
    ks = parse_int_sweep(args.k)
    _check_k(ks, args.n)
    if args.m < 1:
        raise UsageError("m must be at least 1")
    schemes = ["norm", "random"] if args.scheme == "both" else [args.scheme]
    rows = []
    for snr_db in parse_sweep(args.snr_db):
        es_user = _es_from_db(snr_db) / args.m
        for k in ks:
            for scheme in schemes:
                b = mu_ergodic_bounds(
                    args.n, args.m, k, es_user, args.trials, rng,
                    scheme=scheme, workers=args.workers,
                )
                rows.append(
                    [
                        snr_db,
                        k,
                        scheme,
                        _bits(b.lower_nats),
                        _bits(b.upper_nats),
                        _bits(b.stderr_lower),
                        _bits(b.stderr_upper),
                        _bits(args.m * b.lower_nats),
                    ]
                )
    header = [
        "snr_db", "k", "scheme", "lower_bits", "upper_bits",
        "stderr_lower", "stderr_upper", "sum_lower_bits",
    ]
    return header, rows


def _cmd_energy(args, cfg):
    rng = Rng(args.seed)
    ks = parse_int_sweep(args.k)
    _check_k(ks, args.n)
    snrs = parse_sweep(args.snr_db)
    if len(snrs) != 1:
        raise UsageError("energy takes a single --snr-db value")
    points = efficiency_curve(
        args.n, ks, _es_from_db(snrs[0]), args.trials, rng,
        model=_power_model(cfg), m=args.m, workers=args.workers,
    )
    rows = [[p.k, p.arch, p.norm_rate, p.norm_energy] for p in points]
    return ["k", "arch", "norm_rate", "norm_energy"], rows


def _cmd_validate(args, cfg):
    rows = regression_battery(args.samples, Rng(args.seed), args.workers)
    table = [
        [r.instance, r.check, r.closed, r.estimate, r.stderr, r.z, r.status]
        for r in rows
    ]
    return list(BATTERY_COLUMNS), table


_COMMANDS = {
    "fixed": _cmd_fixed,
    "outage": _cmd_outage,
    "ergodic": _cmd_ergodic,
    "imperfect": _cmd_imperfect,
    "dither": _cmd_dither,
    "multiuser": _cmd_multiuser,
    "energy": _cmd_energy,
    "validate": _cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=1, help="master random seed")
    common.add_argument("--workers", type=int, default=1, help="trial-level worker threads")
    common.add_argument("--config", default=None, help="key = value config file")
    common.add_argument("--output", default="-", help="CSV destination, '-' for stdout")

    parser = argparse.ArgumentParser(
        prog="mixedadc",
        description="Achievable rates of a large-array uplink whose receiver "
        "converts k of n antennas at high resolution and the rest with one-bit ADCs.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser(
        "fixed", parents=[common],
        help="closed-form rates of a channel loaded from file, swept over SNR",
    )
    p.add_argument("--channel", required=True, help="text file, one 're im' line per antenna")
    p.add_argument("--k", type=int, required=True, help="high-resolution pair count")
    p.add_argument("--snr-db", default="0", help="SNR sweep in dB (value, list, or a:b:step)")

    p = sub.add_parser(
        "outage", parents=[common],
        help="outage rates of mixed, conventional, and selection receivers over fading",
    )
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--k", default="10", help="high-resolution count sweep")
    p.add_argument("--snr-db", default="0")
    p.add_argument("--p-out", type=float, default=0.05, help="outage probability")
    p.add_argument("--draws", type=int, default=1000, help="channel draws per point")

    p = sub.add_parser(
        "ergodic", parents=[common],
        help="ergodic rate sandwich (lower and upper bounds) under Rayleigh fading",
    )
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--k", default="20")
    p.add_argument("--snr-db", default="0")
    p.add_argument("--trials", type=int, default=1000)

    p = sub.add_parser(
        "imperfect", parents=[common],
        help="ergodic bounds with estimated CSI and training overhead, "
        "plus the perfect-CSI conventional baseline with and without that overhead",
    )
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--k", default="20")
    p.add_argument("--snr-db", default="0")
    p.add_argument("--mse-db", type=float, default=-10.0, help="estimation error variance in dB")
    p.add_argument("--err-samples", type=int, default=None,
                   help="error draws per moment average (default from config or 10000)")
    p.add_argument("--coherence-len", type=int, default=None,
                   help="coherence block length in symbols (default from config or 196)")
    p.add_argument("--trials", type=int, default=1000)

    p = sub.add_parser(
        "dither", parents=[common],
        help="optimized dither threshold on the all-one-bit array, then the "
        "dithered versus undithered ergodic rate at each k",
    )
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--k", default="0")
    p.add_argument("--snr-db", default="20")
    p.add_argument("--t-grid-db", default=None, help="threshold grid in dB (a:b:step)")
    p.add_argument("--trials", type=int, default=500)

    p = sub.add_parser(
        "multiuser", parents=[common],
        help="per-user ergodic bounds for several single-antenna users, "
        "norm-based or random converter assignment",
    )
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--m", type=int, default=10, help="user count")
    p.add_argument("--k", default="10")
    p.add_argument("--snr-db", default="0", help="total SNR in dB, split evenly over users")
    p.add_argument("--scheme", choices=["norm", "random", "both"], default="norm")
    p.add_argument("--trials", type=int, default=1000)

    p = sub.add_parser(
        "energy", parents=[common],
        help="normalized rate versus normalized power of mixed and selection "
        "receivers across k",
    )
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--k", default="0:100:10")
    p.add_argument("--snr-db", default="0")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--trials", type=int, default=500)

    p = sub.add_parser(
        "validate", parents=[common],
        help="closed forms versus Monte Carlo on the fixed regression battery",
    )
    p.add_argument("--samples", type=int, default=1000000)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = parse_config(args.config) if args.config else {}
        header, rows = _COMMANDS[args.cmd](args, cfg)
        _emit(header, rows, args.output)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (NotPositiveDefinite, ValueError, RuntimeError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.cmd == "validate" and any(row[-1] == "FAIL" for row in rows):
        print("validation failed: see FAIL rows", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
