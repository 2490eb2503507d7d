"""
Experiment configuration and run manifests

ExperimentConfig is built from CLI flags or from a JSON document whose keys
mirror the long flag names. RunManifest records the config, the library
version, the wall time and the channel constants of a run.
"""
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional
import json
import logging
import math

from ..channels.channel import Channel, tensor_power
from ..channels.library import amplitude_damping, gamma_for_peff
from ..parsers.spec_parser import parse_channel_spec
from ..toymodel.simulation import SEED_LIMIT

logger = logging.getLogger(__name__)

KINDS = (
    "toy-purity",
    "qaoa-purity",
    "qaoa-grad",
    "twirl-fidelity",
    "haar-infidelity",
    "coeffs",
    "variance-check",
)
GRAPH_KINDS = ("qaoa-purity", "qaoa-grad", "twirl-fidelity", "haar-infidelity")

# JSON key / long flag name -> ExperimentConfig field
FLAG_FIELDS = {
    "kind": "kind",
    "n": "n_qubits",
    "channel": "channel",
    "graph": "graph",
    "layers": "layers",
    "samples": "samples",
    "seed": "seed",
    "output": "output",
    "workers": "workers",
    "p-max": "p_max",
    "peff": "peff",
    "ell": "ell",
    "g-samples": "g_samples",
}

CONSTANT_TOL = 1e-12


class ConfigError(Exception):
    """Raised when an experiment configuration or manifest is invalid"""
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment run"""

    kind: str
    n_qubits: int
    channel: Optional[str] = None
    graph: Optional[str] = None
    layers: int = 10
    samples: int = 128
    seed: int = 0
    output: str = "results"
    workers: int = 1
    p_max: float = 0.01
    peff: Optional[float] = None
    ell: int = 1
    g_samples: int = 20000

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"Unknown experiment kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.n_qubits < 1:
            raise ConfigError(f"n must be positive, got {self.n_qubits}")
        if self.layers < 0:
            raise ConfigError(f"layers must be non-negative, got {self.layers}")
        if self.samples < 1:
            raise ConfigError(f"samples must be positive, got {self.samples}")
        if not 0 <= self.seed < SEED_LIMIT:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.workers < 1:
            raise ConfigError(f"workers must be positive, got {self.workers}")
        if self.channel is None and self.peff is None:
            raise ConfigError(f"{self.kind} needs --channel or --peff")
        if self.kind in GRAPH_KINDS and self.graph is None:
            raise ConfigError(f"{self.kind} needs --graph")
        if self.peff is not None and not 0.0 <= self.peff <= 1.0:
            raise ConfigError(f"peff out of [0,1]: {self.peff!r}")
        if self.ell < 1:
            raise ConfigError(f"ell must be at least 1, got {self.ell}")

    @classmethod
    def from_mapping(cls, values: Dict[str, Any]) -> "ExperimentConfig":
        """
        Build from a mapping keyed by long flag names.

        Raises:
            ConfigError: On unknown keys, missing required keys or invalid values
        """
        unknown = sorted(set(values) - set(FLAG_FIELDS))
        if unknown:
            raise ConfigError(f"Unknown config key(s): {', '.join(unknown)}")
        kwargs = {FLAG_FIELDS[key]: value for key, value in values.items() if value is not None}
        for required in ("kind", "n_qubits"):
            if required not in kwargs:
                raise ConfigError(f"Missing config key {required!r}")
        try:
            return cls(**kwargs)
        except TypeError as e:
            raise ConfigError(f"Invalid config: {e}") from e

    @classmethod
    def from_json(cls, path: str | Path, overrides: Optional[Dict[str, Any]] = None) -> "ExperimentConfig":
        """
        Load a JSON config; non-None ``overrides`` (flag names) take precedence.

        Raises:
            ConfigError: If the file can't be read or parsed, or holds invalid values
        """
        path = Path(path)
        try:
            values = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"Cannot read config {path}: {e}")
            raise ConfigError(f"Cannot read config {path}: {e}") from e
        if not isinstance(values, dict):
            raise ConfigError(f"Config {path} must hold a JSON object")
        values.update({key: value for key, value in (overrides or {}).items() if value is not None})
        logger.info(f"Loaded config from {path}")
        return cls.from_mapping(values)

    def to_flags(self) -> Dict[str, Any]:
        """Config as a mapping keyed by long flag names"""
        fields = asdict(self)
        return {flag: fields[name] for flag, name in FLAG_FIELDS.items()}


def resolve_channel(config: ExperimentConfig) -> Channel:
    """
    Channel of a run: the parsed --channel spec, or amplitude damping on every
    qubit with the strength that gives --peff when --peff is set.
    """
    if config.peff is not None:
        if config.channel is not None:
            logger.warning(f"--peff {config.peff:g} overrides channel spec {config.channel!r}")
        gamma = gamma_for_peff(config.peff, config.n_qubits)
        return tensor_power(amplitude_damping(gamma), config.n_qubits)
    return parse_channel_spec(config.channel, config.n_qubits)


def derived_constants(channel: Channel) -> Dict[str, Optional[float]]:
    """
    Channel constants stored in the manifest.

    R_ln is None when lambda_min of PTM^dagger PTM is zero.
    """
    c = channel.coefficients
    low, high = channel.eigen_range
    r_ln = math.log(high) - math.log(low) if low > 0.0 else None
    return {
        "nu": c.nu,
        "eta": c.eta,
        "r": c.r,
        "p_eff": c.p_eff,
        "lambda_min": low,
        "lambda_max": high,
        "R_ln": r_ln,
    }


@dataclass
class RunManifest:
    """Record of one experiment run"""

    config: Dict[str, Any]
    version: str
    wall_time: float
    constants: Dict[str, Optional[float]]
    channel_label: str = ""
    extra: Dict[str, Any] = field(default_factory=dict)
    outputs: List[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json() + "\n")
        logger.debug(f"Saved: {path}")
        return path

    @classmethod
    def load(cls, path: str | Path) -> "RunManifest":
        """
        Read a manifest.

        Raises:
            FileNotFoundError: If the file doesn't exist
            ConfigError: If the content is not a manifest
        """
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Manifest not found: {path}")
        try:
            return cls(**json.loads(path.read_text()))
        except (json.JSONDecodeError, TypeError) as e:
            logger.error(f"Malformed manifest {path}: {e}")
            raise ConfigError(f"Malformed manifest {path}: {e}") from e

    def channel(self) -> Channel:
        """Rebuild the run's channel from the stored config"""
        return resolve_channel(ExperimentConfig.from_mapping(self.config))

    def verify(self, tol: float = CONSTANT_TOL) -> bool:
        """
        Recompute the channel constants and compare with the stored ones.

        Raises:
            ConfigError: If a constant differs by more than tol
        """
        fresh = derived_constants(self.channel())
        mismatched = []
        for name, stored in self.constants.items():
            value = fresh.get(name)
            if stored is None or value is None:
                if stored != value:
                    mismatched.append(name)
            elif abs(stored - value) > tol * max(1.0, abs(value)):
                mismatched.append(name)
        if mismatched:
            raise ConfigError(f"Manifest constants differ from recomputation: {', '.join(mismatched)}")
        logger.info("Manifest constants verified")
        return True
