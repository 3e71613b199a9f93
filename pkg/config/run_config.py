"""Run configuration for the SemiLab CLI.

A RunConfig is merged from four layers, highest precedence first:
command-line flags, a flat ``key = value`` config file, ``SEMILAB_*``
environment variables and the built-in defaults of :mod:`config.settings`.
Every layer is read as text and converted by the same parsers, so a value
means the same thing wherever it comes from.
"""
import os
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Mapping, Optional, Tuple

from config import settings
from core.errors import ConfigurationError, InvalidGrid, InvalidParameter, UnknownScenario
from core.scenarios import SCENARIOS
from core.semigroups import TimeGrid, parse_grid_bounds
from core.spaces import ToleranceConfig

ALL_SCENARIOS = "all"
EVALUATORS = ("closed-form", "matrix-exp", "diagonal-phase")
TOLERANCE_NAMES = ("eq_tol", "argmax_tol", "spectral_tol")

CONFIG_KEYS = (
    "scenario",
    "dim",
    "dims",
    "grid",
    "omega",
    "lambda",
    "mu",
    "seed",
    "trials",
    "tol",
    "out",
    "format",
    "evaluator",
    "index",
    "amplitude",
    "log_level",
)

DEFAULT_LAMBDAS = (2.0, 1.0)
DEFAULT_MUS = (0.0, 0.5)


@dataclass(frozen=True)
class RunConfig:
    """Validated parameters of one CLI run.

    Attributes:
        scenario: Registered scenario name or ``"all"``.
        dim: Truncation dimension N.
        dims: Dimension sweep of the spectrum scenario.
        grid_start: First grid time.
        grid_stop: Last grid time (included when on the lattice).
        grid_step: Grid spacing.
        seed: Sampling seed.
        trials: Random vectors for sampled isometry checks.
        tolerances: Shared tolerance bundle.
        output_dir: Report directory.
        formats: Enabled report formats.
        omega: Frequencies of diagonal phase semigroups.
        lambdas: Hilbert control frequencies.
        mus: Hilbert control damping rates.
        evaluator: Evaluator override, or None for the scenario default.
        index: Basis index of the trajectory scenario.
        amplitude: Amplitude of the l1 scenario.
        log_level: Logging level name.
    """

    scenario: str
    dim: int = settings.DEFAULT_DIM
    dims: Tuple[int, ...] = settings.DEFAULT_DIMS
    grid_start: float = 0.0
    grid_stop: float = 10.0
    grid_step: float = 0.1
    seed: int = settings.DEFAULT_SEED
    trials: int = settings.DEFAULT_TRIALS
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig.from_settings)
    output_dir: str = settings.OUTPUT_DIR
    formats: Tuple[str, ...] = settings.REPORT_FORMATS
    omega: Tuple[float, ...] = settings.DEFAULT_OMEGA
    lambdas: Tuple[float, ...] = DEFAULT_LAMBDAS
    mus: Tuple[float, ...] = DEFAULT_MUS
    evaluator: Optional[str] = None
    index: int = 1
    amplitude: float = 1.0
    log_level: str = settings.LOG_LEVEL

    def __post_init__(self) -> None:
        if self.scenario != ALL_SCENARIOS and self.scenario not in SCENARIOS:
            known = ", ".join(sorted(SCENARIOS) + [ALL_SCENARIOS])
            raise UnknownScenario(f"unknown scenario {self.scenario!r} (known: {known})")
        if self.dim < 2:
            raise ConfigurationError(f"dim must be >= 2, got {self.dim}")
        if not self.dims or min(self.dims) < 2:
            raise ConfigurationError(f"dims must be a nonempty list of integers >= 2, got {self.dims}")
        if not self.grid_step > 0:
            raise InvalidGrid(f"grid step must be positive, got {self.grid_step}")
        if not self.grid_stop > self.grid_start >= 0:
            raise InvalidGrid(f"need grid_stop > grid_start >= 0, got {self.grid_start}:{self.grid_stop}")
        if self.trials < 1:
            raise ConfigurationError(f"trials must be >= 1, got {self.trials}")
        if not self.formats or set(self.formats) - set(settings.REPORT_FORMATS):
            raise ConfigurationError(f"formats must be a nonempty subset of json,csv, got {self.formats}")
        if self.evaluator is not None and self.evaluator not in EVALUATORS:
            raise ConfigurationError(f"evaluator must be one of {', '.join(EVALUATORS)}, got {self.evaluator!r}")
        if self.index < 1:
            raise ConfigurationError(f"index is 1-based, got {self.index}")

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid.from_range(self.grid_start, self.grid_stop, self.grid_step)

    def for_scenario(self, scenario: str) -> "RunConfig":
        """Copy of this config targeting another scenario."""
        return replace(self, scenario=scenario)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario,
            "dim": self.dim,
            "dims": list(self.dims),
            "grid": {"start": self.grid_start, "stop": self.grid_stop, "step": self.grid_step},
            "seed": self.seed,
            "trials": self.trials,
            "tolerances": self.tolerances.to_dict(),
            "output_dir": self.output_dir,
            "formats": list(self.formats),
            "omega": list(self.omega),
            "lambdas": list(self.lambdas),
            "mus": list(self.mus),
            "evaluator": self.evaluator,
            "index": self.index,
            "amplitude": self.amplitude,
        }


def _normalize_key(key: str) -> str:
    return key.strip().replace("-", "_")


def load_config_file(path: str) -> Dict[str, str]:
    """Read a flat ``key = value`` file.

    Blank lines and lines starting with ``#`` are skipped.

    Raises:
        ConfigurationError: On unreadable files, malformed lines or unknown keys.
    """
    try:
        with open(path, encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as e:
        raise ConfigurationError(f"cannot read config file {path}: {e}") from e

    values: Dict[str, str] = {}
    for number, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigurationError(f"{path}:{number}: expected 'key = value', got {line!r}")
        key = _normalize_key(key)
        if key not in CONFIG_KEYS:
            raise ConfigurationError(f"{path}:{number}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def environment_values(environ: Optional[Mapping[str, str]] = None) -> Dict[str, str]:
    """Config values supplied through ``SEMILAB_*`` variables at call time."""
    environ = os.environ if environ is None else environ
    mapping = {
        "SEMILAB_OUTPUT_DIR": "out",
        "SEMILAB_DEFAULT_SEED": "seed",
        "SEMILAB_DEFAULT_TRIALS": "trials",
        "SEMILAB_LOG_LEVEL": "log_level",
    }
    values = {key: environ[var] for var, key in mapping.items() if environ.get(var)}
    tolerances = [
        f"{name}={environ[var]}"
        for name, var in (
            ("eq_tol", "SEMILAB_EQ_TOL"),
            ("argmax_tol", "SEMILAB_ARGMAX_TOL"),
            ("spectral_tol", "SEMILAB_SPECTRAL_TOL"),
        )
        if environ.get(var)
    ]
    if tolerances:
        values["tol"] = ",".join(tolerances)
    return values


def parse_tolerances(text: str, base: Optional[ToleranceConfig] = None) -> ToleranceConfig:
    """Parse ``--tol``: a single float sets eq_tol, else ``name=value`` pairs.

    Raises:
        ConfigurationError: On unknown names, bad numbers or nonpositive values.
    """
    base = base or ToleranceConfig.from_settings()
    text = text.strip()
    overrides: Dict[str, float] = {}
    try:
        if "=" not in text:
            overrides["eq_tol"] = float(text)
        else:
            for item in text.split(","):
                name, _, value = item.partition("=")
                name = _normalize_key(name)
                if name not in TOLERANCE_NAMES:
                    raise ConfigurationError(f"unknown tolerance {name!r}")
                overrides[name] = float(value)
        return replace(base, **overrides)
    except InvalidParameter as e:
        raise ConfigurationError(str(e)) from e
    except ValueError as e:
        raise ConfigurationError(f"cannot parse tolerances {text!r}: {e}") from e


def _floats(key: str, text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as e:
        raise ConfigurationError(f"{key} must be a comma-separated list of numbers, got {text!r}") from e


def _ints(key: str, text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError as e:
        raise ConfigurationError(f"{key} must be a comma-separated list of integers, got {text!r}") from e


def _int(key: str, text: str) -> int:
    values = _ints(key, text)
    if len(values) != 1:
        raise ConfigurationError(f"{key} must be a single integer, got {text!r}")
    return values[0]


def _float(key: str, text: str) -> float:
    values = _floats(key, text)
    if len(values) != 1:
        raise ConfigurationError(f"{key} must be a single number, got {text!r}")
    return values[0]


def build_run_config(
    flags: Mapping[str, Optional[str]],
    config_path: Optional[str] = None,
    environ: Optional[Mapping[str, str]] = None
) -> RunConfig:
    """Merge flags, config file and environment into a RunConfig.

    Args:
        flags: Flag values keyed like the config file; None means unset.
        config_path: Optional path of a ``key = value`` file.
        environ: Environment mapping (defaults to ``os.environ``).

    Raises:
        ConfigurationError: Or one of its subclasses, on any invalid value.
    """
    raw: Dict[str, str] = dict(environment_values(environ))
    if config_path:
        raw.update(load_config_file(config_path))
    raw.update({_normalize_key(k): str(v) for k, v in flags.items() if v is not None})

    if "scenario" not in raw:
        raise UnknownScenario("no scenario given on the command line or in the config file")

    kwargs: Dict[str, Any] = {"scenario": raw["scenario"]}
    if "dim" in raw:
        kwargs["dim"] = _int("dim", raw["dim"])
    if "dims" in raw:
        kwargs["dims"] = _ints("dims", raw["dims"])
    if "grid" in raw:
        kwargs["grid_start"], kwargs["grid_stop"], kwargs["grid_step"] = parse_grid_bounds(raw["grid"])
    if "seed" in raw:
        kwargs["seed"] = _int("seed", raw["seed"])
    if "trials" in raw:
        kwargs["trials"] = _int("trials", raw["trials"])
    if "tol" in raw:
        # Environment tolerances are the base that file or flag pairs refine.
        base = ToleranceConfig.from_settings()
        env_tol = environment_values(environ).get("tol")
        if env_tol and env_tol != raw["tol"]:
            base = parse_tolerances(env_tol, base)
        kwargs["tolerances"] = parse_tolerances(raw["tol"], base)
    if "out" in raw:
        kwargs["output_dir"] = raw["out"]
    if "format" in raw:
        kwargs["formats"] = tuple(f.strip() for f in raw["format"].split(",") if f.strip())
    if "omega" in raw:
        kwargs["omega"] = _floats("omega", raw["omega"])
    if "lambda" in raw:
        kwargs["lambdas"] = _floats("lambda", raw["lambda"])
    if "mu" in raw:
        kwargs["mus"] = _floats("mu", raw["mu"])
    if "evaluator" in raw:
        kwargs["evaluator"] = raw["evaluator"]
    if "index" in raw:
        kwargs["index"] = _int("index", raw["index"])
    if "amplitude" in raw:
        kwargs["amplitude"] = _float("amplitude", raw["amplitude"])
    if "log_level" in raw:
        kwargs["log_level"] = raw["log_level"].upper()
    return RunConfig(**kwargs)
