"""
Monte-Carlo BLER/BER sweeps and SKR sweeps.

Trials run in fixed-size batches; the stop rule is checked after each batch,
so the set of trials behind every row depends only on the config and never on
the thread count. Trial t at grid point i draws from
``TrialStreams.from_seed(master_seed, i, t)``.
"""

import logging
import math
import time
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed
from scipy import stats

from cvqkd import __version__
from cvqkd.analytics.skr import (
    max_secure_distance,
    reconciliation_efficiency,
    skr_vs_distance,
    threshold_snr_for_beta,
)
from cvqkd.core.config import CodecSpec, SkrParameters, SweepConfig
from cvqkd.core.constants import (
    BLER_COLUMNS,
    DEFAULT_BLER_TARGET,
    db_to_linear,
    linear_to_db,
)
from cvqkd.core.errors import ParameterError, ThresholdNotBracketedError
from cvqkd.core.models import SweepTable, SystemKind
from cvqkd.core.rng import TrialStreams
from cvqkd.systems.pipelines import SessionConfig, run_trial
from cvqkd.telemetry import get_telemetry_service

logger = logging.getLogger(__name__)


def binomial_ci95(errors: int, trials: int, confidence: float = 0.95) -> float:
    """
    Half-width of the binomial confidence interval around errors / trials.

    Normal approximation in general; at 0 or ``trials`` errors, where it
    collapses to zero, the exact Clopper-Pearson bound on the open side.
    """
    if trials <= 0:
        return math.inf
    alpha = 1.0 - confidence
    if errors == 0:
        return float(stats.beta.ppf(1.0 - alpha / 2.0, 1, trials))
    if errors == trials:
        return float(1.0 - stats.beta.ppf(alpha / 2.0, trials, 1))
    p = errors / trials
    z = stats.norm.ppf(0.5 + confidence / 2.0)
    return float(z * math.sqrt(p * (1.0 - p) / trials))


def collect_block_errors(
    draw: Callable[[range], Sequence[Tuple[int, int]]],
    min_block_errors: int,
    max_blocks: int,
    batch_size: int,
) -> Tuple[int, int, int]:
    """
    Run ``draw`` over fixed-size batches of trial indices until the stop rule holds.

    ``draw`` returns one (block_error, bit_errors) pair per index.

    Returns:
        (blocks, block_errors, bit_errors)
    """
    blocks = block_errors = bit_errors = 0
    while blocks < max_blocks and block_errors < min_block_errors:
        batch = range(blocks, min(blocks + batch_size, max_blocks))
        outcomes = draw(batch)
        blocks += len(batch)
        block_errors += sum(block for block, _ in outcomes)
        bit_errors += sum(bits for _, bits in outcomes)
    return blocks, block_errors, bit_errors


def _one_trial(
    system: SystemKind, session: SessionConfig, master_seed: int, point: int, trial: int
) -> Tuple[int, int]:
    result = run_trial(system, session, TrialStreams.from_seed(master_seed, point, trial))
    return int(not result.agree), result.bit_errors


def _run_point(
    cfg: SweepConfig, point: int, snr_db: float, parallel: Parallel
) -> Tuple[dict, bool]:
    session = SessionConfig.from_sweep(cfg, snr_db)
    system = SystemKind(cfg.system)
    started = time.perf_counter()

    def draw(batch: range) -> List[Tuple[int, int]]:
        outcomes = parallel(
            delayed(_one_trial)(system, session, cfg.master_seed, point, trial)
            for trial in batch
        )
        logger.debug(f"{snr_db} dB: trials {batch.start}-{batch.stop - 1} done")
        return outcomes

    blocks, block_errors, bit_errors = collect_block_errors(
        draw, cfg.min_block_errors, cfg.max_blocks, cfg.batch_size
    )

    capped = block_errors < cfg.min_block_errors
    if capped:
        logger.warning(
            f"{snr_db} dB stopped at max_blocks={cfg.max_blocks} "
            f"with only {block_errors} block errors"
        )
    bler = block_errors / blocks
    row = {
        "snr_db": float(snr_db),
        "blocks_run": blocks,
        "block_errors": block_errors,
        "bler": bler,
        "bler_ci95": binomial_ci95(block_errors, blocks),
        "ber": bit_errors / (blocks * session.block_length),
        "seconds": time.perf_counter() - started,
    }
    return row, capped


def sweep_metadata(cfg: SweepConfig) -> dict:
    return {
        "config": cfg.model_dump(mode="json"),
        "master_seed": cfg.master_seed,
        "rate": cfg.rate,
        "stop_rule": cfg.stop_rule,
        "version": __version__,
    }


def run_bler_sweep(cfg: SweepConfig) -> SweepTable:
    """
    BLER/BER of one system over the quantum-channel SNR grid.

    Args:
        cfg: Validated sweep configuration

    Returns:
        SweepTable with BLER_COLUMNS, one row per grid point in grid order;
        metadata lists points that hit max_blocks under ``capped_snr_db``
    """
    telemetry = get_telemetry_service()
    span = telemetry.track_request(
        "bler_sweep",
        {"system": cfg.system, "codec": cfg.codec_q.kind, "points": len(cfg.snr_grid_db)},
    )
    logger.info(
        f"BLER sweep: System {cfg.system}, {cfg.codec_q.kind} N={cfg.block_length}, "
        f"{len(cfg.snr_grid_db)} points, {cfg.threads} thread(s)"
    )
    rows: List[dict] = []
    capped_points: List[float] = []
    try:
        with Parallel(n_jobs=cfg.threads, prefer="threads") as parallel:
            for point, snr_db in enumerate(cfg.snr_grid_db):
                row, capped = _run_point(cfg, point, snr_db, parallel)
                rows.append(row)
                if capped:
                    capped_points.append(float(snr_db))
                telemetry.track_sweep_point(row, {"system": cfg.system, "capped": capped})
                logger.info(
                    f"{snr_db} dB: BLER {row['bler']:.4g} "
                    f"({row['block_errors']}/{row['blocks_run']}), BER {row['ber']:.4g}"
                )
    except Exception as e:
        telemetry.track_exception(e, {"operation": "bler_sweep"})
        raise
    finally:
        if span is not None:
            span.end()

    metadata = sweep_metadata(cfg)
    metadata["capped_snr_db"] = capped_points
    return SweepTable(columns=BLER_COLUMNS, rows=rows, metadata=metadata)


def extract_threshold(table: SweepTable, target: float = DEFAULT_BLER_TARGET) -> float:
    """
    SNR (dB) where BLER crosses ``target``, by linear interpolation of
    log10(BLER) between the bracketing grid points.

    Raises:
        ThresholdNotBracketedError: No adjacent pair brackets the target
    """
    if not 0.0 < target < 1.0:
        raise ParameterError(f"target BLER must lie in (0, 1), got {target}")
    snr = table.column("snr_db").astype(float)
    bler = table.column("bler").astype(float)
    for i in range(len(bler)):
        if bler[i] == target:
            return float(snr[i])
        if i + 1 < len(bler) and bler[i] > target > bler[i + 1] and bler[i + 1] > 0:
            high, low = math.log10(bler[i]), math.log10(bler[i + 1])
            fraction = (high - math.log10(target)) / (high - low)
            return float(snr[i] + fraction * (snr[i + 1] - snr[i]))
    raise ThresholdNotBracketedError(
        f"BLER {target} is not bracketed by the sweep; extrapolation refused",
        target=target,
        bler_range=[float(bler.min()), float(bler.max())] if len(bler) else [],
    )


def _code_rate(
    params: SkrParameters, bler_table: Optional[SweepTable], R: Optional[float]
) -> float:
    """Explicit R, then an R set in the parameters, then the sweep's codec, then the default."""
    if R is not None:
        return R
    if bler_table is None or "R" in params.model_fields_set:
        return params.R
    if "rate" in bler_table.metadata:
        return float(bler_table.metadata["rate"])
    config = bler_table.metadata.get("config")
    if isinstance(config, dict) and "codec_q" in config:
        return CodecSpec.model_validate(config["codec_q"]).rate
    return params.R


def run_skr_sweep(
    params: SkrParameters,
    L_grid: Sequence[float],
    bler_table: Optional[SweepTable] = None,
    snr_db: Optional[float] = None,
    beta: Optional[float] = None,
    P_B: Optional[float] = None,
    R: Optional[float] = None,
    target: float = DEFAULT_BLER_TARGET,
) -> SweepTable:
    """
    SKR versus distance at a reconciliation operating point.

    The operating point comes from, in order of precedence: a BLER sweep (its
    ``target`` crossing, with P_B = target), an explicit ``snr_db``, or an
    explicit ``beta``. R defaults to the rate of the sweep's codec when a BLER
    table is given.

    Raises:
        ParameterError: No operating point given
        ThresholdNotBracketedError: The BLER sweep does not bracket ``target``
    """
    R = _code_rate(params, bler_table, R)
    if bler_table is not None:
        snr_db = extract_threshold(bler_table, target)
        P_B = target if P_B is None else P_B
    if snr_db is not None:
        snr = db_to_linear(snr_db)
        beta = reconciliation_efficiency(R, snr)
    elif beta is not None:
        snr = threshold_snr_for_beta(beta, R)
        snr_db = linear_to_db(snr)
    else:
        raise ParameterError("SKR sweep needs a BLER table, an SNR or a beta")
    P_B = params.P_B if P_B is None else P_B

    logger.info(f"SKR sweep at {snr_db:.3f} dB: beta={beta:.4f}, P_B={P_B}")
    table = skr_vs_distance(params, snr, beta, P_B, L_grid)
    table.metadata.update({"snr_db": snr_db, "R": R, "version": __version__})
    try:
        table.metadata["max_secure_distance_km"] = max_secure_distance(table)
    except ThresholdNotBracketedError:
        table.metadata["max_secure_distance_km"] = None
    get_telemetry_service().track_event(
        "skr_sweep",
        {
            "beta": beta,
            "P_B": P_B,
            "points": len(table),
            "max_secure_distance_km": table.metadata["max_secure_distance_km"],
        },
    )
    return table


def distance_grid(L_max: float, L_step: float) -> np.ndarray:
    """0, L_step, ..., L_max."""
    if not L_step > 0 or L_max < 0:
        raise ParameterError("distance grid needs L_step > 0 and L_max >= 0")
    return np.round(np.arange(0.0, L_max + 0.5 * L_step, L_step), 10)
