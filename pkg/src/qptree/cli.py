"""Command-line interface.

Subcommands: tree (dump the probability tree for given directions), bell
(analytic inequality check), scan (CSV sweep over the coplanar family),
sample (seeded Monte Carlo estimates), classical (evaluate a hidden-variable
weights file).  Every command is deterministic: rerunning with the same
arguments and seed produces byte-identical primary output, so timing is
reported on stderr only.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
import time

from . import __version__, rng
from .bell import (
    BellScenario,
    HiddenVariableModel,
    ASSIGNMENT_LABELS,
    check_inequality,
    classical_bell,
    monte_carlo_bell,
    quantum_bell,
    violation_scan,
)
from .errors import DimensionMismatchError
from .spin import UnitVector, spin_operator
from .tree import (
    MeasurementClass,
    _round12,
    build_tree,
    pair_measurement_class,
    singlet_preparation,
    tree_document,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIMENSION = 3
EXIT_DATA = 4

CSV_HEADER = "theta_deg,p_ab,p_ac,p_cb,margin,verdict"


class ConfigError(Exception):
    """Invalid command configuration (maps to exit code 2)."""


class DataError(Exception):
    """Invalid input data beyond repair (maps to exit code 4)."""


def _parse_direction(spec: str, cartesian: bool) -> tuple[UnitVector, dict]:
    parts = spec.split(",")
    try:
        values = [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"invalid direction {spec!r}: {exc}") from exc
    if not all(math.isfinite(v) for v in values):
        raise ConfigError(f"invalid direction {spec!r}: components must be finite")
    if cartesian:
        if len(values) != 3:
            raise ConfigError(f"cartesian direction {spec!r} needs three components x,y,z")
        try:
            vec = UnitVector(*values)
        except ValueError as exc:
            raise ConfigError(f"invalid direction {spec!r}: {exc}") from exc
        echo = {"x": _round12(vec.x), "y": _round12(vec.y), "z": _round12(vec.z)}
    else:
        if len(values) != 2:
            raise ConfigError(f"direction {spec!r} needs two angles theta_deg,phi_deg")
        vec = UnitVector.from_angles(values[0], values[1])
        echo = {"theta_deg": round(values[0], 6), "phi_deg": round(values[1], 6)}
    return vec, echo


def _parse_directions(args, count_min: int, count_max: int) -> tuple[list[UnitVector], list[dict]]:
    specs = args.dir or []
    if not count_min <= len(specs) <= count_max:
        expected = str(count_min) if count_min == count_max else f"{count_min}-{count_max}"
        raise ConfigError(f"expected {expected} --dir arguments, got {len(specs)}")
    parsed = [_parse_direction(spec, args.cartesian) for spec in specs]
    return [v for v, _ in parsed], [e for _, e in parsed]


def _parse_grid(spec: str) -> list[float]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid {spec!r} must be start:stop:step in degrees")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"invalid grid {spec!r}: {exc}") from exc
    if step <= 0:
        raise ConfigError("grid step must be positive")
    if stop < start:
        raise ConfigError("grid stop must not precede start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    thetas = [start + k * step for k in range(count)]
    for theta in thetas:
        if not 0.0 < theta < 180.0:
            raise ConfigError(
                f"grid angle {theta:g} is out of range: angles must lie strictly "
                "between 0 and 180 degrees"
            )
    return thetas


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _json_doc(command: str, config: dict, payload: dict) -> str:
    document = {
        "tool": "qptree",
        "version": __version__,
        "rng": rng.ALGORITHM,
        "config": {"command": command, **config},
        **payload,
    }
    return json.dumps(document, indent=2) + "\n"


def cmd_tree(args) -> int:
    directions, echo = _parse_directions(args, 1, 3)
    prep = singlet_preparation()
    if args.single_particle:
        classes = [
            MeasurementClass.from_observables(f"M1_{name}", [spin_operator(vec)])
            for name, vec in zip("abc", directions)
        ]
    else:
        classes = [
            pair_measurement_class(f"M12_{name}", vec)
            for name, vec in zip("abc", directions)
        ]
    tree = build_tree(prep, classes)
    doc = tree_document(tree)
    config = {"directions": echo, "single_particle": args.single_particle}
    _emit(_json_doc("tree", config, doc), args.out)
    return EXIT_OK


def cmd_bell(args) -> int:
    directions, echo = _parse_directions(args, 3, 3)
    probs = quantum_bell(BellScenario(*directions))
    payload = {
        "results": {
            "p_ab": _round12(probs.p_ab),
            "p_ac": _round12(probs.p_ac),
            "p_cb": _round12(probs.p_cb),
            "margin": _round12(probs.margin),
            "verdict": check_inequality(probs),
        }
    }
    _emit(_json_doc("bell", {"directions": echo}, payload), args.out)
    return EXIT_OK


def cmd_scan(args) -> int:
    thetas = _parse_grid(args.grid)
    rows = violation_scan(thetas)
    buffer = io.StringIO()
    buffer.write(CSV_HEADER + "\n")
    for row in rows:
        buffer.write(
            f"{row.theta_deg:.6f},{row.p_ab:.12g},{row.p_ac:.12g},{row.p_cb:.12g},"
            f"{row.margin:.12g},{row.verdict}\n"
        )
    _emit(buffer.getvalue(), args.out)
    if args.fig:
        from .figures import save_scan_figure

        save_scan_figure(rows, args.fig)
        print(f"figure written to {args.fig}", file=sys.stderr)
    return EXIT_OK


def cmd_sample(args) -> int:
    directions, echo = _parse_directions(args, 3, 3)
    if args.n < 1:
        raise ConfigError("sample size n must be at least 1")
    started = time.perf_counter()
    scenario = BellScenario(*directions)
    estimate = monte_carlo_bell(scenario, args.n, args.seed)
    probs = estimate.probabilities
    margin_se = math.sqrt(estimate.se_ab**2 + estimate.se_ac**2 + estimate.se_cb**2)
    payload = {
        "results": {
            "p_ab": _round12(probs.p_ab),
            "p_ac": _round12(probs.p_ac),
            "p_cb": _round12(probs.p_cb),
            "se_ab": _round12(estimate.se_ab),
            "se_ac": _round12(estimate.se_ac),
            "se_cb": _round12(estimate.se_cb),
            "margin": _round12(probs.margin),
            "margin_se": _round12(margin_se),
            "verdict": check_inequality(probs),
            # a zero standard error means the binomial estimate is degenerate
            "se_caveat": any(
                se == 0.0 for se in (estimate.se_ab, estimate.se_ac, estimate.se_cb)
            ),
        }
    }
    config = {"directions": echo, "n": args.n, "seed": args.seed}
    _emit(_json_doc("sample", config, payload), args.out)
    if args.fig:
        from .figures import save_sample_figure

        save_sample_figure(estimate, quantum_bell(scenario), args.fig)
        print(f"figure written to {args.fig}", file=sys.stderr)
    print(f"completed in {time.perf_counter() - started:.3f} s", file=sys.stderr)
    return EXIT_OK


def _read_weights(path: str) -> dict[str, float]:
    try:
        with open(path, encoding="utf-8") as handle:
            lines = [line.strip() for line in handle]
    except OSError as exc:
        raise ConfigError(f"cannot read weights file {path!r}: {exc}") from exc
    weights: dict[str, float] = {}
    for line in lines:
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ConfigError(f"malformed weights line {line!r}: expected 'label value'")
        label, raw = fields
        if label not in ASSIGNMENT_LABELS:
            raise ConfigError(f"unknown assignment label {label!r}")
        if label in weights:
            raise ConfigError(f"duplicate assignment label {label!r}")
        try:
            value = float(raw)
        except ValueError as exc:
            raise ConfigError(f"invalid weight {raw!r} for label {label!r}") from exc
        if not math.isfinite(value) or value < 0.0:
            raise ConfigError(f"weight for {label!r} must be finite and nonnegative")
        weights[label] = value
    missing = [label for label in ASSIGNMENT_LABELS if label not in weights]
    if missing:
        raise ConfigError(f"weights file is missing labels {missing}")
    return weights


def cmd_classical(args) -> int:
    weights = _read_weights(args.weights)
    total = math.fsum(weights.values())
    drift = abs(total - 1.0)
    if drift > 1e-6:
        raise DataError(
            f"weights sum to {total!r}; drift {drift:.3g} exceeds the 1e-6 "
            "renormalization limit"
        )
    if drift > 1e-9:
        print(
            f"warning: weights sum to {total!r}; renormalizing (drift {drift:.3g})",
            file=sys.stderr,
        )
    weights = {label: value / total for label, value in weights.items()}
    probs = classical_bell(HiddenVariableModel(weights))
    payload = {
        "results": {
            "p_ab": _round12(probs.p_ab),
            "p_ac": _round12(probs.p_ac),
            "p_cb": _round12(probs.p_cb),
            "margin": _round12(probs.margin),
            "verdict": check_inequality(probs),
        }
    }
    _emit(_json_doc("classical", {"weights": args.weights}, payload), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qptree",
        description="Probability trees, channels, and Bell-inequality checks "
        "for the two-particle singlet experiment.",
    )
    parser.add_argument("--version", action="version", version=f"qptree {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, dirs=False, seeded=False):
        if dirs:
            p.add_argument(
                "--dir",
                action="append",
                metavar="THETA,PHI",
                help="measurement direction as polar angles in degrees "
                "(or x,y,z with --cartesian); repeatable",
            )
            p.add_argument(
                "--cartesian",
                action="store_true",
                help="read --dir as cartesian components, normalized at construction",
            )
        if seeded:
            p.add_argument("--n", type=int, default=10**6, help="sample count (default 1e6)")
            p.add_argument("--seed", type=int, default=0, help="rng seed (default 0)")
        p.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")

    p_tree = sub.add_parser("tree", help="dump the probability tree for 1-3 directions")
    add_common(p_tree, dirs=True)
    p_tree.add_argument(
        "--single-particle",
        action="store_true",
        help="request particle-one-only measurement classes; these act on a "
        "subsystem and are rejected with exit code 3",
    )
    p_tree.set_defaults(func=cmd_tree)

    p_bell = sub.add_parser("bell", help="analytic inequality probabilities for 3 directions")
    add_common(p_bell, dirs=True)
    p_bell.set_defaults(func=cmd_bell)

    p_scan = sub.add_parser("scan", help="CSV sweep of the coplanar bisecting family")
    p_scan.add_argument(
        "--grid", required=True, metavar="START:STOP:STEP", help="angle grid in degrees"
    )
    p_scan.add_argument("--fig", metavar="PATH", help="also render the sweep figure to PATH")
    add_common(p_scan)
    p_scan.set_defaults(func=cmd_scan)

    p_sample = sub.add_parser("sample", help="seeded Monte Carlo estimates for 3 directions")
    add_common(p_sample, dirs=True, seeded=True)
    p_sample.add_argument(
        "--fig", metavar="PATH", help="also render estimates vs. analytic values to PATH"
    )
    p_sample.set_defaults(func=cmd_sample)

    p_classical = sub.add_parser("classical", help="evaluate a hidden-variable weights file")
    p_classical.add_argument(
        "--weights",
        required=True,
        metavar="PATH",
        help="file of 8 lines 'label value' with labels "
        + ", ".join(ASSIGNMENT_LABELS),
    )
    add_common(p_classical)
    p_classical.set_defaults(func=cmd_classical)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DimensionMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
