"""
Command-line front end: lemma checks, codec round-trips, parameter sweeps,
sampling and enumeration.

Exit codes: 0 when every requested check passes, 1 when a check fails and
2 on input errors.

Date: 2026-10-18
"""

import argparse
import csv
import io
import itertools
import json
import sys

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, Final, Iterator, List, Optional, Sequence, Tuple

from Logger import Logger

from .core.block import BlockParams
from .core.corpus import canonical_dnfs
from .core.exceptions import InvalidParametersError, SwitchLabError
from .core.formats import is_php_text, load_blocks, parse_dnf, parse_php
from .core.formula import BlockStructure, Dnf, PhpInstance
from .core.independent import IndepParams
from .core.php import PhpParams
from .core.verify import (
    BlockSetting,
    IndependentSetting,
    InjectivityReport,
    Lemma,
    LemmaReport,
    LemmaSetting,
    LemmaVerifier,
    Mode,
    PhpSetting,
    Violation,
)
from .utils.utils import format_fraction, make_rng, parse_fraction


__all__: Final[List[str]] = [
    "EXIT_FAILED",
    "EXIT_INPUT",
    "EXIT_OK",
    "RunConfig",
    "cmd_check",
    "cmd_enumerate",
    "cmd_roundtrip",
    "cmd_sample",
    "cmd_sweep",
    "main",
    "run",
]


EXIT_OK: Final[int] = 0

EXIT_FAILED: Final[int] = 1

EXIT_INPUT: Final[int] = 2

DEFAULT_P: Final[Dict[Lemma, Fraction]] = {
    Lemma.INDEPENDENT: Fraction(1, 10),
    Lemma.BLOCK: Fraction(1, 16),
}

DEFAULT_Q: Final[Dict[Lemma, Fraction]] = {
    Lemma.BLOCK: Fraction(1, 16),
    Lemma.PIGEONHOLE: Fraction(1, 4),
}

SWEEP_COLUMNS: Final[Tuple[str, ...]] = (
    "lemma",
    "n",
    "r",
    "p",
    "q",
    "s",
    "exact_weight",
    "estimate",
    "half_width",
    "bound_loose",
    "bound_tight",
    "pass",
)

_logger: Final[Logger] = Logger.get_logger(name=__name__)


@dataclass(frozen=True)
class RunConfig:
    """
    The parsed command line.

    Attributes:
        command (str): The subcommand.
        lemma (Lemma): The lemma and with it the restriction family.
        dnf (Optional[Path]): The formula file; a "php <n>" header marks a pigeonhole formula.
        blocks (Optional[Path]): The blocks file; consecutive pairs when absent.
        n (Optional[int]): The universe size, or the number of holes for lemma 3.
        r (int): The width bound of generated corpora.
        terms (Optional[int]): The maximum number of terms of generated corpora.
        p (Optional[Tuple[Fraction, ...]]): The star probabilities, None for the default.
        q (Optional[Tuple[Fraction, ...]]): The block or hole probabilities, None for the default.
        s (Tuple[int, ...]): The height thresholds.
        mode (Mode): Exact enumeration or sampling.
        trials (int): The samples per Monte Carlo estimate.
        seed (int): The 64-bit seed.
        count (int): The number of outcomes the sample command draws.
        threads (int): The number of workers.
        unsafe_sizes (bool): True to lift the enumeration size guards.
        output (Optional[Path]): The file to write to instead of standard output.
    """

    command: str
    lemma: Lemma
    dnf: Optional[Path] = None
    blocks: Optional[Path] = None
    n: Optional[int] = None
    r: int = 2
    terms: Optional[int] = None
    p: Optional[Tuple[Fraction, ...]] = None
    q: Optional[Tuple[Fraction, ...]] = None
    s: Tuple[int, ...] = (2,)
    mode: Mode = Mode.EXACT
    trials: int = 10_000
    seed: int = 0
    count: int = 10
    threads: int = 4
    unsafe_sizes: bool = False
    output: Optional[Path] = None

    @property
    def ps(self) -> Tuple[Optional[Fraction], ...]:
        """
        Returns the p values to run, ascending, or (None,) when the lemma has no p.

        :return: The p values
        :rtype: Tuple[Optional[Fraction], ...]
        """

        if self.lemma not in DEFAULT_P:
            return (None,)

        return tuple(sorted(self.p if self.p is not None else (DEFAULT_P[self.lemma],)))

    @property
    def qs(self) -> Tuple[Optional[Fraction], ...]:
        """
        Returns the q values to run, ascending, or (None,) when the lemma has no q.

        :return: The q values
        :rtype: Tuple[Optional[Fraction], ...]
        """

        if self.lemma not in DEFAULT_Q:
            return (None,)

        return tuple(sorted(self.q if self.q is not None else (DEFAULT_Q[self.lemma],)))

    def grid(self) -> List[Tuple[Optional[Fraction], Optional[Fraction], int]]:
        """
        Returns every (p, q, s) point in lexicographic order.

        :return: The grid
        :rtype: List[Tuple[Optional[Fraction], Optional[Fraction], int]]
        """

        return list(itertools.product(self.ps, self.qs, sorted(self.s)))


def _rationals(text: str) -> Tuple[Fraction, ...]:
    try:
        return tuple(parse_fraction(part) for part in text.split(",") if part.strip())
    except InvalidParametersError as error:
        raise argparse.ArgumentTypeError(str(error)) from error


def _integers(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as error:
        raise argparse.ArgumentTypeError(f"{text!r} is not a list of integers") from error


def _seed(text: str) -> int:
    try:
        seed: int = int(text)
    except ValueError as error:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer seed") from error

    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError(f"seed {seed} is not a 64-bit unsigned integer")

    return seed


def _parser() -> argparse.ArgumentParser:
    common: argparse.ArgumentParser = argparse.ArgumentParser(add_help=False)

    common.add_argument("--lemma", type=int, choices=(1, 2, 3), required=True)
    common.add_argument("--dnf", type=Path, help="formula file")
    common.add_argument("--blocks", type=Path, help="blocks file (lemma 2)")
    common.add_argument("--n", type=int, help="universe size, or number of holes for lemma 3")
    common.add_argument("--r", type=int, default=2, help="width of generated corpora")
    common.add_argument("--terms", type=int, help="maximum number of terms of generated corpora")
    common.add_argument("--p", type=_rationals, help="star probabilities, comma-separated a/b")
    common.add_argument("--q", type=_rationals, help="block or hole probabilities, comma-separated a/b")
    common.add_argument("--s", type=_integers, default=(2,), help="height thresholds, comma-separated")
    common.add_argument("--mode", choices=[mode.value for mode in Mode], default=Mode.EXACT.value)
    common.add_argument("--trials", type=int, default=10_000)
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--count", type=int, default=10, help="outcomes drawn by sample")
    common.add_argument("--threads", type=int, default=4)
    common.add_argument("--unsafe-sizes", action="store_true", help="lift the enumeration size guards")
    common.add_argument("--output", type=Path, help="write to this file instead of standard output")

    parser: argparse.ArgumentParser = argparse.ArgumentParser(
        prog="switchlab",
        description="Exact and sampled checks of the switching lemmas.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("check", parents=[common], help="check a lemma bound on one formula")
    commands.add_parser("roundtrip", parents=[common], help="encode and decode every failing outcome")
    commands.add_parser("sweep", parents=[common], help="check a grid of parameters, CSV output")
    commands.add_parser("sample", parents=[common], help="draw outcomes from a distribution")
    commands.add_parser("enumerate", parents=[common], help="list every outcome with its weight")

    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        lemma=Lemma(args.lemma),
        dnf=args.dnf,
        blocks=args.blocks,
        n=args.n,
        r=args.r,
        terms=args.terms,
        p=args.p,
        q=args.q,
        s=tuple(args.s),
        mode=Mode(args.mode),
        trials=args.trials,
        seed=args.seed,
        count=args.count,
        threads=args.threads,
        unsafe_sizes=args.unsafe_sizes,
        output=args.output,
    )


def _emit(
    config: RunConfig,
    text: str,
) -> None:
    if config.output is not None:
        config.output.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _diagnose(message: str) -> None:
    _logger.warning(message=message)

    print(f"switchlab: {message}", file=sys.stderr)


def _load_formula(config: RunConfig) -> Tuple[Dnf, Optional[int]]:
    """
    Reads the --dnf file and returns the formula and, for a pigeonhole file, its hole count.
    """

    if config.dnf is None:
        raise InvalidParametersError(f"{config.command} needs --dnf")

    text: str = config.dnf.read_text(encoding="utf-8")

    if is_php_text(text) is not None:
        instance, formula = parse_php(text)

        return formula, instance.n

    return parse_dnf(text), None


def _pairs(n: int) -> BlockStructure:
    return BlockStructure(n=n, blocks=tuple(tuple(range(start, min(start + 2, n))) for start in range(0, n, 2)))


def _universe(config: RunConfig) -> int:
    if config.n is None:
        raise InvalidParametersError(f"{config.command} needs --n or --dnf")

    if config.lemma is Lemma.PIGEONHOLE:
        return PhpInstance(n=config.n).universe

    return config.n


def _setting(
    config: RunConfig,
    formula: Dnf,
    holes: Optional[int],
    p: Optional[Fraction],
    q: Optional[Fraction],
) -> LemmaSetting:
    """
    Builds the setting of the configured lemma for a formula.
    """

    if config.lemma is Lemma.INDEPENDENT:
        return IndependentSetting(formula, IndepParams(n=formula.n, p=p))

    if config.lemma is Lemma.BLOCK:
        blocks: BlockStructure = load_blocks(config.blocks) if config.blocks else _pairs(formula.n)

        return BlockSetting(formula, BlockParams(blocks=blocks, p=p, q=q))

    holes = holes if holes is not None else config.n

    if holes is None:
        raise InvalidParametersError("lemma 3 needs a php file or --n")

    return PhpSetting(formula, PhpParams(n=holes, q=q))


def _single(config: RunConfig) -> Tuple[Optional[Fraction], Optional[Fraction], int]:
    grid: List[Tuple[Optional[Fraction], Optional[Fraction], int]] = config.grid()

    if len(grid) != 1:
        raise InvalidParametersError(f"{config.command} takes one value each of p, q and s")

    return grid[0]


def _corpus(config: RunConfig) -> Iterator[Tuple[Dnf, Optional[int]]]:
    """
    Yields the canonical corpus for --n, --r and --terms.
    """

    universe: int = _universe(config)
    terms: int = config.terms if config.terms is not None else (1 if config.lemma is Lemma.PIGEONHOLE else 2)

    for formula in canonical_dnfs(universe, config.r, terms):
        yield formula, config.n if config.lemma is Lemma.PIGEONHOLE else None


def cmd_check(
    config: RunConfig,
    verifier: LemmaVerifier,
) -> int:
    """
    Checks one lemma bound on one formula and writes the JSON report.

    :param config: The configuration
    :type config: RunConfig
    :param verifier: The verifier
    :type verifier: LemmaVerifier

    :return: The exit code
    :rtype: int
    """

    # Load the formula and build the setting
    formula, holes = _load_formula(config)
    p, q, s = _single(config)
    setting: LemmaSetting = _setting(config, formula, holes, p, q)

    # Run the check
    report: LemmaReport = verifier.check(
        setting,
        s,
        mode=config.mode,
        trials=config.trials,
        seed=config.seed,
    )

    # Write the report
    _emit(config, json.dumps(report.as_dict(), indent=2) + "\n")

    for violation in report.violations:
        _diagnose(f"precondition violated: {violation}")

    if not report.passed:
        _diagnose(f"lemma {int(config.lemma)} check failed at s={s}")

        return EXIT_FAILED

    return EXIT_OK


def cmd_roundtrip(
    config: RunConfig,
    verifier: LemmaVerifier,
) -> int:
    """
    Encodes and decodes every failing outcome of one formula, or of the canonical corpus.

    :param config: The configuration
    :type config: RunConfig
    :param verifier: The verifier
    :type verifier: LemmaVerifier

    :return: The exit code
    :rtype: int
    """

    instances: List[Tuple[Dnf, Optional[int]]] = (
        [_load_formula(config)] if config.dnf is not None else list(_corpus(config))
    )

    checked: int = 0
    outcomes: int = 0
    violations: List[Tuple[Dnf, Violation]] = []

    for formula, holes in instances:
        for p, q, s in config.grid():
            report: InjectivityReport = verifier.sweep(_setting(config, formula, holes, p, q), s)

            checked += 1
            outcomes += report.failures.count
            violations.extend((formula, violation) for violation in report.violations)

    lines: List[str] = [
        f"lemma {int(config.lemma)}: {checked} checks over {len(instances)} formulas, "
        f"{outcomes} failing outcomes, {len(violations)} violations"
    ]

    if violations:
        formula, violation = violations[0]
        lines.append(f"first counterexample: {violation} in {formula}")

    _emit(config, "\n".join(lines) + "\n")

    if violations:
        _diagnose(lines[-1])

        return EXIT_FAILED

    return EXIT_OK


def cmd_sweep(
    config: RunConfig,
    verifier: LemmaVerifier,
) -> int:
    """
    Checks one formula over the (p, q, s) grid and writes one CSV row per point.

    :param config: The configuration
    :type config: RunConfig
    :param verifier: The verifier
    :type verifier: LemmaVerifier

    :return: The exit code
    :rtype: int
    """

    formula, holes = _load_formula(config)

    buffer: io.StringIO = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)

    failed: bool = False

    for p, q, s in config.grid():
        setting: LemmaSetting = _setting(config, formula, holes, p, q)
        report: LemmaReport = verifier.check(
            setting,
            s,
            mode=config.mode,
            trials=config.trials,
            seed=config.seed,
        )
        failed = failed or not report.passed

        writer.writerow(
            (
                int(config.lemma),
                report.params["n"],
                report.params["r"],
                format_fraction(p) if p is not None else "",
                format_fraction(q) if q is not None else "",
                s,
                format_fraction(report.exact_weight) if report.exact_weight is not None else "",
                repr(report.estimate.estimate) if report.estimate is not None else "",
                repr(report.estimate.half_width) if report.estimate is not None else "",
                report.bound_loose.to_string(),
                report.bound_tight.to_string(),
                "true" if report.passed else "false",
            )
        )

    _emit(config, buffer.getvalue())

    return EXIT_FAILED if failed else EXIT_OK


def _outcome_setting(config: RunConfig) -> LemmaSetting:
    """
    Builds the setting for sample and enumerate; without --dnf the formula is empty.
    """

    if config.dnf is not None:
        formula, holes = _load_formula(config)
    else:
        formula, holes = Dnf(n=_universe(config), r=0), config.n

    if len(config.ps) != 1 or len(config.qs) != 1:
        raise InvalidParametersError(f"{config.command} takes one value each of p and q")

    return _setting(config, formula, holes, config.ps[0], config.qs[0])


def _write_outcomes(
    config: RunConfig,
    setting: LemmaSetting,
    rows: Iterator[Tuple[object, Fraction]],
) -> None:
    marked: bool = config.dnf is not None

    if marked and len(config.s) != 1:
        raise InvalidParametersError(f"{config.command} takes one value of s")

    buffer: io.StringIO = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("outcome", "weight", "in_s") if marked else ("outcome", "weight"))

    for outcome, weight in rows:
        row: List[str] = [str(outcome), format_fraction(weight)]

        if marked:
            row.append("1" if setting.tree(outcome).depth_at_least(config.s[0]) else "0")

        writer.writerow(row)

    _emit(config, buffer.getvalue())


def cmd_sample(
    config: RunConfig,
    verifier: LemmaVerifier,
) -> int:
    """
    Draws --count outcomes with the seeded generator and writes them as CSV.

    With --dnf, a third column marks the outcomes whose tree has height --s or greater.

    :param config: The configuration
    :type config: RunConfig
    :param verifier: The verifier
    :type verifier: LemmaVerifier

    :return: The exit code
    :rtype: int
    """

    if config.count < 0:
        raise InvalidParametersError(f"cannot draw {config.count} outcomes")

    setting: LemmaSetting = _outcome_setting(config)
    rng = make_rng(config.seed)
    drawn: List[object] = [setting.sample(rng) for _ in range(config.count)]

    _write_outcomes(config, setting, ((outcome, setting.weight(outcome)) for outcome in drawn))

    return EXIT_OK


def cmd_enumerate(
    config: RunConfig,
    verifier: LemmaVerifier,
) -> int:
    """
    Writes every outcome with its exact weight as CSV.

    :param config: The configuration
    :type config: RunConfig
    :param verifier: The verifier
    :type verifier: LemmaVerifier

    :return: The exit code
    :rtype: int
    """

    setting: LemmaSetting = _outcome_setting(config)
    setting.check_size(config.unsafe_sizes)

    _write_outcomes(config, setting, (row for row in setting.outcomes() if row[1] > 0))

    return EXIT_OK


COMMANDS: Final[Dict[str, Callable[[RunConfig, LemmaVerifier], int]]] = {
    "check": cmd_check,
    "enumerate": cmd_enumerate,
    "roundtrip": cmd_roundtrip,
    "sample": cmd_sample,
    "sweep": cmd_sweep,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Runs the command line and returns the exit code.

    :param argv: The arguments without the program name. Defaults to sys.argv[1:].
    :type argv: Optional[Sequence[str]]

    :return: The exit code
    :rtype: int
    """

    # Parse the arguments; argparse exits with 2 on malformed input
    config: RunConfig = _config(_parser().parse_args(argv))

    # Create the verifier
    verifier: LemmaVerifier = LemmaVerifier(
        threads=config.threads,
        unsafe_sizes=config.unsafe_sizes,
    )

    try:
        # Run the command
        return COMMANDS[config.command](config, verifier)
    except (SwitchLabError, OSError) as error:
        _diagnose(f"error: {error}")

        return EXIT_INPUT
    finally:
        # Shutdown the verifier
        verifier.shutdown()


def main() -> None:
    """
    The main function.

    :return: None
    :rtype: None
    """

    sys.exit(run())


if __name__ == "__main__":
    main()
