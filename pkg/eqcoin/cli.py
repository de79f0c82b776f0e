"""Command-line interface for eqcoin.

Usage:
    eqcoin walk --coin hadamard --initial 1,0,0,0 --steps 4 --format csv
    eqcoin ensemble-check --coin invariant --state 0,0.70710678,0.70710678,0
    eqcoin ensemble-sample --coin hybrid --seed 7 --count 5
    eqcoin nosignal --coin hadamard --state 1,0,0,0
    eqcoin locc --coin hadamard --state 0.70710678,0,0.70710678,0 --branch psi
    eqcoin sweep --coin invariant --resolution 20

Exit codes: 0 when the command ran and the checked relation holds, 1 when a
verification command finds it violated, 2 for usage errors and invalid
parameters, 3 when output cannot be written.
"""

import argparse
import json
import logging
import math
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, Callable, Optional

import pandas as pd
from pydantic import ValidationError

from eqcoin.coins import INV_SQRT2, Coin, balanced_coin, named_coin, unbalanced_coin
from eqcoin.config import cache_enabled, get_default_seed
from eqcoin.ensemble import apply_and_verify, sample_ensemble, satisfies_constraint
from eqcoin.exceptions import EqcoinConvergenceError, EqcoinError
from eqcoin.models import BalancedCoin, EnsembleState, InitialCoinState, RunConfig
from eqcoin.nonlocality import (
    ENTROPY_TOLERANCE,
    locc_test,
    signalling_test,
    sweep_table,
    uniqueness_sweep,
)
from eqcoin.walk import UP, coin_basis_distribution, run_state

__all__ = ["build_parser", "parse_args", "execute", "main"]

logger = logging.getLogger("eqcoin")

COMMANDS = ("walk", "ensemble-check", "ensemble-sample", "nosignal", "locc", "sweep")
BALANCED_ONLY = ("ensemble-check", "ensemble-sample", "nosignal", "locc", "sweep")
NEEDS_STATE = ("ensemble-check", "nosignal", "locc")

# Typed amplitudes within this distance of unit norm are rescaled instead of rejected.
RENORMALIZE_TOLERANCE = 1e-6
SIGNIFICANT_DIGITS = 12
FLOAT_FORMAT = f"%.{SIGNIFICANT_DIGITS}g"

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4


def _parse_number(token: str) -> float:
    try:
        value = float(token)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"malformed number {token!r}") from e
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"malformed number {token!r}")
    return value


def _number_list(count: int) -> Callable[[str], tuple[float, ...]]:
    """Argument type for ``count`` comma-separated real numbers."""

    def parse(text: str) -> tuple[float, ...]:
        tokens = text.split(",")
        if len(tokens) != count:
            raise argparse.ArgumentTypeError(
                f"expected {count} comma-separated numbers, got {text!r}"
            )
        return tuple(_parse_number(token.strip()) for token in tokens)

    return parse


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"malformed integer {text!r}") from e
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return value


def _positive_int(text: str) -> int:
    value = _non_negative_int(text)
    if value == 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _coin_spec(text: str) -> tuple[str, tuple[float, ...]]:
    """Split a coin spec into its kind and numbers.

    Accepts a registered name, ``balanced:re_a,im_a,re_g,im_g,theta`` or
    ``unbalanced:re_p,im_p,re_q,im_q``.
    """
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind == "balanced":
        return kind, _number_list(5)(rest)
    if kind == "unbalanced":
        return kind, _number_list(4)(rest)
    if rest:
        raise argparse.ArgumentTypeError(f"unknown coin kind {kind!r}")
    return kind, ()


def _renormalized(amplitudes: Sequence[complex], target: float, label: str) -> list[complex]:
    """Rescale typed amplitudes to the target norm when they are within rounding of it.

    Raises:
        ValueError: If the norm is off by RENORMALIZE_TOLERANCE or more.
    """
    norm = math.sqrt(sum(abs(z) ** 2 for z in amplitudes))
    if abs(norm - target) >= RENORMALIZE_TOLERANCE * max(target, 1.0):
        raise ValueError(f"{label} has norm {norm:.12g}, expected {target:.12g}")
    if norm != target:
        logger.warning(f"Renormalizing {label}: norm {norm:.12g} -> {target:.12g}")
    return [z * (target / norm) for z in amplitudes]


def _pair(values: tuple[float, ...], label: str) -> tuple[complex, complex]:
    first, second = _renormalized(
        [complex(values[0], values[1]), complex(values[2], values[3])], 1.0, label
    )
    return first, second


def _build_coin(spec: tuple[str, tuple[float, ...]]) -> Coin:
    kind, values = spec
    if kind == "balanced":
        (alpha,) = _renormalized([complex(values[0], values[1])], INV_SQRT2, "alpha")
        (gamma,) = _renormalized([complex(values[2], values[3])], INV_SQRT2, "gamma")
        return balanced_coin(alpha, gamma, values[4])
    if kind == "unbalanced":
        p, q = _pair(values, "unbalanced coin")
        return unbalanced_coin(p, q)
    return named_coin(kind)


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subcommand per operation."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--coin",
        type=_coin_spec,
        default=("hadamard", ()),
        help="hadamard|invariant|hybrid|balanced:re_a,im_a,re_g,im_g,theta|"
        "unbalanced:re_p,im_p,re_q,im_q (default: hadamard)",
    )
    common.add_argument(
        "--format",
        dest="output_format",
        choices=("json", "csv", "plot"),
        default="json",
        help="output format (plot is walk only)",
    )
    common.add_argument("--out", default=None, help="output path (default: standard output)")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    state_flag = argparse.ArgumentParser(add_help=False)
    state_flag.add_argument(
        "--state", type=_number_list(4), required=True, metavar="RE_A,IM_A,RE_B,IM_B"
    )

    parser = argparse.ArgumentParser(
        prog="eqcoin",
        description="Equal-superposition coins, their state ensembles and quantum walks.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    walk = subparsers.add_parser("walk", parents=[common], help="simulate a quantum walk")
    walk.add_argument(
        "--initial",
        type=_number_list(4),
        default=(1.0, 0.0, 0.0, 0.0),
        metavar="RE_UP,IM_UP,RE_DOWN,IM_DOWN",
    )
    walk.add_argument("--steps", type=_non_negative_int, default=0)
    walk.add_argument(
        "--basis",
        type=_number_list(4),
        default=None,
        metavar="RE_A,IM_A,RE_B,IM_B",
        help="also measure the coin in the {psi, psi_bar} basis of this state",
    )

    subparsers.add_parser(
        "ensemble-check", parents=[common, state_flag], help="test ensemble membership"
    )

    sample = subparsers.add_parser(
        "ensemble-sample", parents=[common], help="draw ensemble members"
    )
    sample.add_argument("--seed", type=int, default=None, help="default: EQCOIN_SEED or 0")
    sample.add_argument("--count", type=_positive_int, default=1)

    subparsers.add_parser(
        "nosignal", parents=[common, state_flag], help="qutrit-qubit no-signalling check"
    )

    locc = subparsers.add_parser(
        "locc", parents=[common, state_flag], help="LOCC entanglement check"
    )
    locc.add_argument(
        "--branch", choices=("psi", "psibar", "both"), default="both", help="default: both"
    )

    sweep = subparsers.add_parser(
        "sweep", parents=[common], help="grid sweep of both LOCC branches"
    )
    sweep.add_argument("--resolution", type=_positive_int, default=50)
    sweep.add_argument("--no-cache", action="store_true", help="ignore the on-disk cache")

    return parser


def _to_config(parser: argparse.ArgumentParser, args: argparse.Namespace) -> RunConfig:
    """Turn parsed arguments into a validated RunConfig; problems become usage errors."""
    try:
        coin = _build_coin(args.coin)
        if args.command in BALANCED_ONLY and not isinstance(coin, BalancedCoin):
            raise ValueError(f"{args.command} needs a balanced coin")
        if args.output_format == "plot" and args.command != "walk":
            raise ValueError("--format plot is only available for walk")

        fields: dict[str, Any] = {
            "command": args.command,
            "coin": coin,
            "output_format": args.output_format,
            "out": args.out,
        }
        if args.command == "walk":
            c_up, c_down = _pair(args.initial, "initial coin state")
            fields["initial"] = InitialCoinState(c_up=c_up, c_down=c_down)
            fields["steps"] = args.steps
            if args.basis is not None:
                fields["basis"] = EnsembleState.from_amplitudes(*_pair(args.basis, "basis"))
        if args.command in NEEDS_STATE:
            fields["state"] = EnsembleState.from_amplitudes(*_pair(args.state, "state"))
        if args.command == "ensemble-sample":
            fields["seed"] = get_default_seed(args.seed)
            fields["count"] = args.count
        if args.command == "locc" and args.branch != "both":
            fields["branch"] = args.branch
        if args.command == "sweep":
            fields["resolution"] = args.resolution
            fields["use_cache"] = cache_enabled(False if args.no_cache else None)
        return RunConfig(**fields)
    except (EqcoinError, ValidationError, ValueError) as e:
        parser.error(str(e))


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Parse a command line into a RunConfig.

    Args:
        argv: Arguments without the program name. Defaults to ``sys.argv[1:]``.

    Returns:
        Validated RunConfig.

    Raises:
        SystemExit: With code 2 on unknown flags, malformed numbers (the
            offending token is named on stderr) or invalid parameters.

    Example:
        config = parse_args(["walk", "--coin", "hadamard", "--steps", "4"])
        print(config.steps)  # 4
    """
    parser = build_parser()
    return _to_config(parser, parser.parse_args(argv))


def _round(value: Any) -> Any:
    """Round every float in a JSON payload to SIGNIFICANT_DIGITS significant digits."""
    if isinstance(value, float):
        return float(f"{value:.{SIGNIFICANT_DIGITS}g}")
    if isinstance(value, dict):
        return {key: _round(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round(item) for item in value]
    return value


def _flat_row(payload: dict[str, Any]) -> dict[str, Any]:
    """Scalar fields of a report, with float lists spread over indexed columns."""
    row: dict[str, Any] = {}
    for key, value in payload.items():
        if isinstance(value, list) and all(isinstance(v, (int, float)) for v in value):
            row.update({f"{key}_{i}": v for i, v in enumerate(value)})
        elif not isinstance(value, (dict, list)):
            row[key] = value
    return row


def _state_fields(state: EnsembleState) -> dict[str, float]:
    return state.model_dump()


def _run_walk(config: RunConfig) -> tuple[dict[str, Any], pd.DataFrame, int]:
    state = run_state(config.initial or UP, config.coin, config.steps)
    distribution = state.distribution()
    items = distribution.sorted_items()
    frame = pd.DataFrame(items, columns=["z", "probability"])
    payload: dict[str, Any] = {
        "command": "walk",
        "steps": config.steps,
        "probabilities": {str(z): p for z, p in items},
        "total": distribution.total(),
    }
    if config.basis is not None:
        joint = coin_basis_distribution(state, config.basis)
        frame["psi"] = [joint.psi[z] for z, _ in items]
        frame["psi_bar"] = [joint.psi_bar[z] for z, _ in items]
        payload["basis"] = _state_fields(config.basis)
        payload["psi"] = {str(z): joint.psi[z] for z, _ in items}
        payload["psi_bar"] = {str(z): joint.psi_bar[z] for z, _ in items}
    return payload, frame, EXIT_OK


def _run_ensemble_check(config: RunConfig) -> tuple[dict[str, Any], pd.DataFrame, int]:
    assert isinstance(config.coin, BalancedCoin) and config.state is not None
    check = satisfies_constraint(config.state, config.coin)
    transformation = apply_and_verify(config.coin, config.state)
    payload = {
        "command": "ensemble-check",
        "state": _state_fields(config.state),
        "constraint": check.model_dump(),
        "transformation": transformation.model_dump(),
    }
    row = {
        **_state_fields(config.state),
        **check.model_dump(),
        **transformation.model_dump(),
    }
    return payload, pd.DataFrame([row]), EXIT_OK if check.satisfied else EXIT_VIOLATED


def _run_ensemble_sample(config: RunConfig) -> tuple[dict[str, Any], pd.DataFrame, int]:
    assert isinstance(config.coin, BalancedCoin)
    samples = sample_ensemble(config.coin, config.seed, config.count)
    rows = []
    for state in samples:
        check = satisfies_constraint(state, config.coin)
        rows.append({**_state_fields(state), **check.model_dump()})
    payload = {
        "command": "ensemble-sample",
        "seed": config.seed,
        "count": config.count,
        "samples": rows,
    }
    verdict = all(row["satisfied"] for row in rows)
    return payload, pd.DataFrame(rows), EXIT_OK if verdict else EXIT_VIOLATED


def _run_nosignal(config: RunConfig) -> tuple[dict[str, Any], pd.DataFrame, int]:
    assert isinstance(config.coin, BalancedCoin) and config.state is not None
    report = signalling_test(config.coin, config.state.a, config.state.b)
    payload = {"command": "nosignal", "state": _state_fields(config.state), **report.model_dump()}
    row = {**_state_fields(config.state), **_flat_row(report.model_dump())}
    return payload, pd.DataFrame([row]), EXIT_OK if report.no_signalling else EXIT_VIOLATED


def _run_locc(config: RunConfig) -> tuple[dict[str, Any], pd.DataFrame, int]:
    assert isinstance(config.coin, BalancedCoin) and config.state is not None
    branches = [config.branch] if config.branch else ["psi", "psibar"]
    reports = [
        locc_test(config.coin, config.state.a, config.state.b, branch) for branch in branches
    ]
    payload = {
        "command": "locc",
        "state": _state_fields(config.state),
        "reports": [report.model_dump() for report in reports],
    }
    frame = pd.DataFrame([_flat_row(report.model_dump()) for report in reports])
    holds = all(report.entropy < ENTROPY_TOLERANCE for report in reports)
    return payload, frame, EXIT_OK if holds else EXIT_VIOLATED


def _run_sweep(config: RunConfig) -> tuple[dict[str, Any], pd.DataFrame, int]:
    assert isinstance(config.coin, BalancedCoin)
    table: Optional[pd.DataFrame] = None
    if config.output_format == "csv":
        table = sweep_table(config.coin, config.resolution)
    report = uniqueness_sweep(
        config.coin, config.resolution, use_cache=config.use_cache, table=table
    )
    payload = {"command": "sweep", **report.model_dump()}
    frame = table if table is not None else pd.DataFrame([_flat_row(report.model_dump())])
    return payload, frame, EXIT_OK if report.contract_holds else EXIT_VIOLATED


_HANDLERS: dict[str, Callable[[RunConfig], tuple[dict[str, Any], pd.DataFrame, int]]] = {
    "walk": _run_walk,
    "ensemble-check": _run_ensemble_check,
    "ensemble-sample": _run_ensemble_sample,
    "nosignal": _run_nosignal,
    "locc": _run_locc,
    "sweep": _run_sweep,
}


def _render(config: RunConfig, payload: dict[str, Any], frame: pd.DataFrame) -> str:
    if config.output_format == "json":
        return json.dumps(_round(payload), indent=2) + "\n"
    if config.output_format == "plot":
        return str(
            frame[["z", "probability"]].to_csv(
                sep=" ", header=False, index=False, float_format=FLOAT_FORMAT
            )
        )
    return str(frame.to_csv(index=False, float_format=FLOAT_FORMAT))


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(out).write_text(text, encoding="utf-8")


def execute(config: RunConfig) -> int:
    """Run one command and write its output.

    Returns:
        0 when the command succeeded (and, for verification commands, the
        checked relation holds), 1 when a verification fails, 2 when the
        library rejects a parameter, 3 when the output cannot be written, 4
        when a numerical routine fails on otherwise valid input.
    """
    logger.debug(f"Executing {config.command}")
    try:
        payload, frame, code = _HANDLERS[config.command](config)
    except EqcoinConvergenceError as e:
        logger.error(f"{config.command} numerical failure: {e}")
        return EXIT_NUMERIC
    except EqcoinError as e:
        logger.error(f"{config.command} failed: {e}")
        return EXIT_USAGE

    try:
        _write(_render(config, payload, frame), config.out)
    except OSError as e:
        logger.error(f"Could not write output to {config.out or 'stdout'}: {e}")
        return EXIT_IO
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Console entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return execute(_to_config(parser, args))


if __name__ == "__main__":
    sys.exit(main())
