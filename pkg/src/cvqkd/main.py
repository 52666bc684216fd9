"""
CV-QKD Reconciliation Simulator

Command-line entry point for BLER sweeps, SKR-versus-distance sweeps, EXIT
chart measurement and a one-segment multidimensional mapping demo.

Usage:
    python -m cvqkd.main bler --system D --codec ircc --snr 0.6,0.8,1.0 --out bler.csv
    python -m cvqkd.main skr --bler bler.json --l-max 60
    python -m cvqkd.main exit --snr-db 0.9 --out exit.csv
    python -m cvqkd.main map-demo --dim 8 --seed 3
"""

import argparse
import json
import logging
import os
import sys
import time
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from cvqkd.core.constants import EXIT_IO, EXIT_OK, EXIT_VALIDATION
from cvqkd.core.errors import ReconciliationError

# Configure logging
logging.basicConfig(
    level=os.getenv("LOG_LEVEL", "INFO"),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)

DEFAULT_L_MAX = 60.0
DEFAULT_L_STEP = 0.5

# Normalized segments of the two-dimensional walk-through
WORKED_X_UNIT = (0.8865, -0.4626)
WORKED_Y_UNIT = (0.9748, -0.229)
WORKED_BITS = (0, 0)


def _bler_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "system": args.system,
        "codec_q.kind": args.codec,
        "codec_q.block_length": args.block_length,
        "codec_q.decoder": args.decoder,
        "codec_q.pcm_path": args.pcm,
        "codec_c.kind": args.codec_c,
        "snr_grid_db": args.snr,
        "clc_snr_db": args.clc_snr,
        "clc_kind": args.clc_kind,
        "clc_protected": args.clc_protected,
        "dimension": args.dim,
        "quc_mode": args.quc_mode,
        "master_seed": args.seed,
        "threads": args.threads,
        "max_blocks": args.max_blocks,
        "min_block_errors": args.min_errors,
    }


def _cmd_bler(args: argparse.Namespace) -> None:
    from cvqkd.core.config import SweepConfig, load_config_file, merge_overrides
    from cvqkd.harness import emit, run_bler_sweep

    data = merge_overrides(
        load_config_file(args.config) if args.config else {}, _bler_overrides(args)
    )
    codec_c = data.get("codec_c")
    if isinstance(codec_c, dict) and "block_length" not in codec_c:
        # a classical codec named only by kind inherits the quantum block length
        codec_c["block_length"] = data.get("codec_q", {}).get("block_length", 1024)
    cfg = SweepConfig.model_validate(data)
    emit(run_bler_sweep(cfg), args.format, args.out)


def _cmd_skr(args: argparse.Namespace) -> None:
    from cvqkd.core.config import load_skr_parameters
    from cvqkd.harness import distance_grid, emit, load_json, run_skr_sweep

    params = load_skr_parameters(args.params)
    bler_table = load_json(args.bler) if args.bler else None
    table = run_skr_sweep(
        params,
        distance_grid(args.l_max, args.l_step),
        bler_table=bler_table,
        snr_db=args.snr_db,
        beta=args.beta,
        P_B=args.pb,
        R=args.rate,
    )
    emit(table, args.format, args.out)
    distance = table.metadata["max_secure_distance_km"]
    if distance is None:
        logger.warning("K_f stays positive (or never positive) over the distance grid")
    else:
        logger.info(f"Maximum secure distance: {distance:.2f} km")


def _cmd_exit(args: argparse.Namespace) -> None:
    from cvqkd import __version__
    from cvqkd.codes import IrccProfile, default_grid, exit_inner, exit_outer, tunnel_is_open
    from cvqkd.core.constants import EXIT_COLUMNS
    from cvqkd.core.models import SweepTable
    from cvqkd.harness import emit

    profile = IrccProfile.load(args.profile) if args.profile else IrccProfile.reference()
    grid = default_grid(args.step)
    inner = exit_inner(args.snr_db, grid, args.samples, args.seed)
    outer = exit_outer(profile, grid, args.samples, args.seed)
    rows = [{"curve": "inner", **p.to_dict()} for p in inner]
    rows += [{"curve": "outer", **p.to_dict()} for p in outer]
    is_open = tunnel_is_open(inner, outer)
    logger.info(f"EXIT tunnel at {args.snr_db} dB is {'open' if is_open else 'closed'}")
    metadata = {
        "snr_db": args.snr_db,
        "samples": args.samples,
        "master_seed": args.seed,
        "fractions": list(profile.fractions),
        "tunnel_open": is_open,
        "version": __version__,
    }
    emit(SweepTable(columns=EXIT_COLUMNS, rows=rows, metadata=metadata), args.format, args.out)


def map_demo(dimension: int, seed: Optional[int]) -> Dict[str, List]:
    """
    One segment through the mapping: y', u, alpha, M, u~ and sqrt(D) u~.

    Without a seed (D = 2 only) the two-dimensional walk-through segment is
    used; otherwise x and y = x + n are drawn from the seed.
    """
    import numpy as np

    from cvqkd.core.errors import ParameterError
    from cvqkd.core.rng import random_bits, stream_for
    from cvqkd.physical import (
        apply_mapping,
        compute_mapping,
        decoder_input,
        normalize,
        orthogonal_family,
        spherical_map,
    )

    family = orthogonal_family(dimension)
    if seed is None:
        if dimension != 2:
            raise ParameterError("the walk-through segment is two-dimensional; pass --seed")
        x_unit, y_unit = np.array(WORKED_X_UNIT), np.array(WORKED_Y_UNIT)
        bits = np.array(WORKED_BITS, dtype=np.uint8)
    else:
        rng = stream_for(seed)
        x = rng.standard_normal(dimension)
        y = x + 0.5 * rng.standard_normal(dimension)
        x_unit, y_unit = normalize(x).unit, normalize(y).unit
        bits = random_bits(rng, dimension)
    u = spherical_map(bits)
    m = compute_mapping(y_unit, u, family)
    return {
        "x_unit": x_unit.tolist(),
        "y_unit": y_unit.tolist(),
        "bits": bits.tolist(),
        "u": u.tolist(),
        "alpha": m.alpha.tolist(),
        "M": m.matrix.tolist(),
        "u_tilde": apply_mapping(m, x_unit).tolist(),
        "decoder_input": decoder_input(m, x_unit).tolist(),
    }


def _cmd_map_demo(args: argparse.Namespace) -> None:
    print(json.dumps(map_demo(args.dim, args.seed), indent=2))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvqkd", description="CV-QKD Multidimensional Reconciliation Simulator"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def add_output(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--out", default="-", help="Output path (default: stdout)")
        sub.add_argument("--format", choices=("csv", "json"), default="csv")

    bler = commands.add_parser("bler", help="BLER/BER Monte-Carlo sweep")
    bler.add_argument("--config", help="YAML or key = value config file")
    bler.add_argument("--system", choices=("A", "B", "C", "D"))
    bler.add_argument("--codec", choices=("ldpc", "cc", "ircc"))
    bler.add_argument("--codec-c", choices=("ldpc", "cc", "ircc"), help="Classical-channel codec")
    bler.add_argument("--block-length", type=int)
    bler.add_argument("--decoder", choices=("bp", "bf"))
    bler.add_argument("--pcm", help="alist parity-check matrix")
    bler.add_argument("--snr", help="Comma-separated QuC SNR grid in dB")
    bler.add_argument("--clc-snr", help="Classical-channel SNR in dB (or inf)")
    bler.add_argument("--clc-kind", choices=("error-free", "awgn", "rayleigh"))
    bler.add_argument(
        "--clc-unprotected",
        dest="clc_protected",
        action="store_const",
        const=False,
        default=None,
        help="Send side information as raw BPSK",
    )
    bler.add_argument("--dim", type=int, help="Mapping dimension D")
    bler.add_argument("--quc-mode", choices=("full-chain", "faded", "bi-awgn"))
    bler.add_argument("--seed", type=int, help="Master seed")
    bler.add_argument("--threads", type=int)
    bler.add_argument("--max-blocks", type=int)
    bler.add_argument("--min-errors", type=int)
    add_output(bler)
    bler.set_defaults(handler=_cmd_bler)

    skr = commands.add_parser("skr", help="Secret key rate versus distance")
    point = skr.add_mutually_exclusive_group(required=True)
    point.add_argument("--bler", help="JSON BLER table; its 0.1 crossing is the operating point")
    point.add_argument("--snr-db", type=float, help="Threshold SNR in dB")
    point.add_argument("--beta", type=float, help="Reconciliation efficiency")
    skr.add_argument("--rate", type=float, help="Code rate R")
    skr.add_argument("--pb", type=float, help="Block error rate P_B")
    skr.add_argument("--params", help="YAML or key = value SKR parameter file")
    skr.add_argument("--l-max", type=float, default=DEFAULT_L_MAX)
    skr.add_argument("--l-step", type=float, default=DEFAULT_L_STEP)
    add_output(skr)
    skr.set_defaults(handler=_cmd_skr)

    exit_cmd = commands.add_parser("exit", help="Measure inner and outer EXIT curves")
    exit_cmd.add_argument("--snr", "--snr-db", dest="snr_db", type=float, required=True)
    exit_cmd.add_argument("--profile", help="IRCC fractions file")
    exit_cmd.add_argument("--samples", type=int, default=100_000)
    exit_cmd.add_argument("--step", type=float, default=0.05)
    exit_cmd.add_argument("--seed", type=int, default=0)
    add_output(exit_cmd)
    exit_cmd.set_defaults(handler=_cmd_exit)

    demo = commands.add_parser("map-demo", help="Print one segment through the mapping")
    demo.add_argument("--dim", type=int, default=2)
    demo.add_argument("--seed", type=int, help="Omit (with --dim 2) for the walk-through segment")
    demo.set_defaults(handler=_cmd_map_demo)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand; returns the process exit code."""
    from cvqkd.telemetry import get_telemetry_service

    args = build_parser().parse_args(argv)
    telemetry = get_telemetry_service()
    started = time.perf_counter()
    code = EXIT_OK
    try:
        args.handler(args)
    except (ReconciliationError, ValidationError) as e:
        logger.error(f"{args.command}: {e}")
        code = EXIT_VALIDATION
    except OSError as e:
        logger.error(f"{args.command}: {e}")
        code = EXIT_IO
    telemetry.track_workflow_step(
        args.command,
        (time.perf_counter() - started) * 1000.0,
        success=code == EXIT_OK,
        properties={"exit_code": code},
    )
    return code


if __name__ == "__main__":
    sys.exit(main())
