"""
Experiment Pipeline - orchestrator for seeded experiment runs

Resolves the channel and graph of an ExperimentConfig, dispatches to the
experiment kind, writes the CSV table through OutputService and records a
RunManifest next to it.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple
import logging
import time

import numpy as np

from .. import __version__
from ..channels.channel import Channel, ChannelError
from ..liouville.linalg import DimensionError, NumericalError
from ..liouville.states import DensityMatrix
from ..parsers.spec_parser import SpecParseError, parse_graph_spec
from ..qaoa.circuit import QaoaError, QaoaInstance, UniversalQaoaSpec, maxcut_instance, universal_qaoa_instance
from ..qaoa.graphs import GraphError
from ..qaoa.statistics import derivative_statistics, haar_model_infidelity, purity_statistics, twirl_fidelity
from ..toymodel.predictors import approx_avg_purity, exact_avg_overlap, hoeffding_band
from ..toymodel.simulation import ToyModelConfig, ToyModelError, simulate
from ..toymodel.variance import variance_decay_fit, variance_mc_check
from .config import ConfigError, ExperimentConfig, RunManifest, derived_constants, resolve_channel
from .output_service import OutputError, OutputService

logger = logging.getLogger(__name__)

Table = Tuple[List[str], List[Sequence]]

DOMAIN_ERRORS = (
    ConfigError,
    SpecParseError,
    ChannelError,
    GraphError,
    QaoaError,
    ToyModelError,
    NumericalError,
    DimensionError,
    OutputError,
    FileNotFoundError,
)


class ExperimentError(Exception):
    """Raised when an experiment fails for a reason outside the domain errors"""
    pass


@dataclass
class RunResult:
    """Files written by a run and its manifest"""

    table: Path
    manifest_path: Path
    manifest: RunManifest


class ExperimentPipeline:
    """
    Runs one configured experiment.

    Kinds:
        toy-purity, qaoa-purity, qaoa-grad, twirl-fidelity, haar-infidelity,
        coeffs, variance-check
    """

    def __init__(self, config: ExperimentConfig, output_service: Optional[OutputService] = None):
        """
        Initialize the pipeline.

        Args:
            config: Experiment configuration
            output_service: Writer for results (default: one on config.output)
        """
        self.config = config
        self.output_service = output_service or OutputService(config.output)
        self._extra: Dict[str, object] = {}
        self._runners: Dict[str, Callable[[Channel], Table]] = {
            "toy-purity": self._toy_purity,
            "qaoa-purity": self._qaoa_purity,
            "qaoa-grad": self._qaoa_grad,
            "twirl-fidelity": self._twirl_fidelity,
            "haar-infidelity": self._haar_infidelity,
            "coeffs": self._coeffs,
            "variance-check": self._variance_check,
        }
        logger.info(f"ExperimentPipeline initialized for {config.kind}")

    def _rng(self) -> np.random.Generator:
        return np.random.default_rng(self.config.seed)

    def _instance(self, channel: Channel) -> QaoaInstance:
        cfg = self.config
        source = parse_graph_spec(cfg.graph)
        if isinstance(source, UniversalQaoaSpec):
            if cfg.kind != "twirl-fidelity":
                raise ConfigError("The universal circuit is only available for twirl-fidelity")
            if source.n_qubits != cfg.n_qubits:
                raise ConfigError(f"Universal circuit has {source.n_qubits} qubit(s), --n is {cfg.n_qubits}")
            return universal_qaoa_instance(source, channel, cfg.layers)
        if source.n_vertices != cfg.n_qubits:
            raise ConfigError(f"Graph has {source.n_vertices} vertices, --n is {cfg.n_qubits}")
        return maxcut_instance(source, channel, cfg.layers)

    def _toy_purity(self, channel: Channel) -> Table:
        cfg = self.config
        rho_in = DensityMatrix.zero_state(cfg.n_qubits)
        trace = simulate(
            ToyModelConfig(cfg.n_qubits, cfg.layers, channel, rho_in, cfg.samples, cfg.seed),
            workers=cfg.workers,
        )
        summary = trace.summary()
        ells = np.arange(cfg.layers + 1)
        exact = exact_avg_overlap(channel, rho_in, rho_in, ells)
        approx = approx_avg_purity(channel, rho_in, ells)
        try:
            band = hoeffding_band(channel, rho_in, cfg.layers, cfg.p_max)
            lower, upper = band.lower, band.upper
            inside = trace.fraction_inside(lower, upper)
            self._extra["hoeffding_min_fraction_inside"] = float(inside.min())
        except ToyModelError as e:
            logger.warning(f"Hoeffding band undefined, writing nan: {e}")
            lower = upper = np.full(ells.size, np.nan)

        header = ["layer", "mean_purity", "var_purity", "exact_pred", "approx_pred", "hoeffding_lo", "hoeffding_hi"]
        rows = [
            (int(ell), summary.mean[ell], summary.variance[ell], exact[ell], approx[ell], lower[ell], upper[ell])
            for ell in ells
        ]
        return header, rows

    def _qaoa_purity(self, channel: Channel) -> Table:
        cfg = self.config
        stats = purity_statistics(self._instance(channel), cfg.layers, cfg.samples, self._rng(), cfg.workers)
        rows = list(zip(stats.layers, stats.mean, stats.variance))
        return ["L", "mean_purity", "var_purity"], rows

    def _qaoa_grad(self, channel: Channel) -> Table:
        cfg = self.config
        stats = derivative_statistics(self._instance(channel), cfg.layers, cfg.samples, self._rng(), cfg.workers)
        header = ["L", "mean_abs_dgamma1", "var_dgamma1", "mean_abs_dalphaL", "var_dalphaL"]
        rows = list(zip(stats.layers, stats.mean_abs_dgamma1, stats.var_dgamma1,
                        stats.mean_abs_dalphaL, stats.var_dalphaL))
        return header, rows

    def _twirl_fidelity(self, channel: Channel) -> Table:
        cfg = self.config
        result = twirl_fidelity(
            self._instance(channel), range(cfg.layers + 1), self._rng(), cfg.samples, cfg.workers
        )
        self._extra["fidelity_stderr"] = [float(v) for v in result.stderr]
        return ["L", "fidelity"], list(zip(result.layers, result.fidelity))

    def _haar_infidelity(self, channel: Channel) -> Table:
        cfg = self.config
        stats = haar_model_infidelity(self._instance(channel), cfg.layers, cfg.samples, self._rng(), cfg.workers)
        return ["L", "mean_infidelity"], list(zip(stats.layers, stats.mean))

    def _coeffs(self, channel: Channel) -> Table:
        constants = derived_constants(channel)
        rows = [(name, np.nan if value is None else value) for name, value in constants.items()]
        return ["quantity", "value"], rows

    def _variance_check(self, channel: Channel) -> Table:
        cfg = self.config
        n = cfg.n_qubits
        generator = np.kron(np.diag([0.5, -0.5]), np.eye(2 ** (n - 1))).astype(complex)
        depths = list(range(cfg.ell, cfg.layers + 1))
        if not depths:
            raise ConfigError(f"variance-check needs layers >= ell, got layers={cfg.layers}, ell={cfg.ell}")
        rng = self._rng()
        if len(depths) >= 3:
            decay = variance_decay_fit(
                n, channel, generator, depths, cfg.ell, cfg.samples, rng,
                g_samples=cfg.g_samples, workers=cfg.workers,
            )
            checks = decay.checks
            self._extra["fit"] = {
                "slope": decay.fit.slope,
                "slope_ci": list(decay.fit.slope_ci),
                "r_squared": decay.fit.r_squared,
                "ln_r": decay.log_r,
                "slope_consistent": decay.slope_consistent,
            }
        else:
            logger.warning("Fewer than three depths, skipping the log-slope fit")
            checks = [
                variance_mc_check(n, channel, generator, depth, cfg.ell, cfg.samples, rng,
                                  g_samples=cfg.g_samples, workers=cfg.workers)
                for depth in depths
            ]
        header = ["L", "mc_variance", "mc_stderr", "predicted", "predicted_stderr"]
        rows = [(c.layers, c.mc_variance, c.mc_stderr, c.predicted, c.predicted_stderr) for c in checks]
        return header, rows

    def run(self) -> RunResult:
        """
        Run the experiment and write its CSV table and manifest.

        Returns:
            RunResult with the written paths

        Raises:
            ConfigError, SpecParseError, ChannelError, QaoaError: Invalid input
            GraphError: Infeasible graph
            NumericalError, ToyModelError: Numerical or model failure
            OutputError: Results cannot be written
            ExperimentError: Any other failure
        """
        cfg = self.config
        logger.info(f"Running {cfg.kind}: n={cfg.n_qubits}, L={cfg.layers}, samples={cfg.samples}, seed={cfg.seed}")
        start = time.perf_counter()
        try:
            channel = resolve_channel(cfg)
            header, rows = self._runners[cfg.kind](channel)
            table = self.output_service.write_csv(f"{cfg.kind}.csv", header, rows)
            manifest = RunManifest(
                config=cfg.to_flags(),
                version=__version__,
                wall_time=time.perf_counter() - start,
                constants=derived_constants(channel),
                channel_label=channel.label,
                extra=self._extra,
                outputs=[table.name],
            )
            manifest_path = self.output_service.write_manifest(manifest)
        except DOMAIN_ERRORS:
            raise
        except Exception as e:
            logger.error(f"Experiment {cfg.kind} failed: {e}")
            raise ExperimentError(f"Experiment {cfg.kind} failed: {e}") from e

        logger.info(f"Finished {cfg.kind} in {manifest.wall_time:.2f}s")
        return RunResult(table, manifest_path, manifest)
