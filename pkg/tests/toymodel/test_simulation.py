"""
Tests for the Monte-Carlo toy model

The slow tests reproduce the six-qubit purity curve and the Hoeffding
coverage claim; they take minutes and are skipped with -m "not slow".
"""
import pytest
import numpy as np

from src.channels.library import depolarizing
from src.liouville.states import DensityMatrix
from src.toymodel.predictors import exact_avg_overlap, hoeffding_band
from src.toymodel.simulation import PurityTrace, ToyModelConfig, ToyModelError, simulate, simulate_instance


@pytest.fixture
def config(ad2):
    """Two-qubit model with amplitude damping"""
    return ToyModelConfig(2, 6, ad2, DensityMatrix.zero_state(2), samples=400, seed=1)


class TestToyModelConfig:
    """Test configuration checks"""

    def test_negative_layers(self, ad2):
        """Test layers must be non-negative"""
        with pytest.raises(ToyModelError, match="layers"):
            ToyModelConfig(2, -1, ad2, DensityMatrix.zero_state(2))

    def test_samples(self, ad2):
        """Test samples must be positive"""
        with pytest.raises(ToyModelError, match="samples"):
            ToyModelConfig(2, 3, ad2, DensityMatrix.zero_state(2), samples=0)

    def test_seed_range(self, ad2):
        """Test seeds must fit into 64 unsigned bits"""
        with pytest.raises(ToyModelError, match="seed"):
            ToyModelConfig(2, 3, ad2, DensityMatrix.zero_state(2), seed=2 ** 64)

    def test_channel_size(self, ad2):
        """Test the channel must act on the model qubits"""
        with pytest.raises(ToyModelError, match="Channel acts on 2"):
            ToyModelConfig(3, 3, ad2, DensityMatrix.zero_state(3))

    def test_state_size(self, ad2):
        """Test the initial state must match the model size"""
        with pytest.raises(ToyModelError, match="Initial state"):
            ToyModelConfig(2, 3, ad2, DensityMatrix.zero_state(1))


class TestPurityTrace:
    """Test the purity container"""

    def test_shape_properties(self):
        """Test layers and samples from the array shape"""
        trace = PurityTrace(np.full((3, 5), 0.5), 2)
        assert trace.layers == 4
        assert trace.samples == 3

    def test_rejects_unphysical_values(self):
        """Test purities outside [1/d, 1] are refused"""
        with pytest.raises(ToyModelError, match="Purity outside"):
            PurityTrace(np.array([[1.0, 1.5]]), 1)
        with pytest.raises(ToyModelError):
            PurityTrace(np.array([[1.0, 0.1]]), 2)

    def test_fraction_inside(self):
        """Test per-layer coverage fractions"""
        trace = PurityTrace(np.array([[1.0, 0.6], [1.0, 0.9]]), 1)
        fraction = trace.fraction_inside(np.array([0.9, 0.5]), np.array([1.0, 0.8]))
        assert fraction.tolist() == [1.0, 0.5]


class TestSimulate:
    """Test Monte-Carlo runs"""

    def test_row_layout(self, config):
        """Test one row per sample with L + 1 purities starting at 1"""
        trace = simulate(config)
        assert trace.values.shape == (400, 7)
        assert np.allclose(trace.values[:, 0], 1.0)

    def test_mean_matches_exact_curve(self, config):
        """Test the sample mean against exact_avg_overlap"""
        summary = simulate(config).summary()
        exact = exact_avg_overlap(config.channel, config.initial_state, config.initial_state, np.arange(7))
        assert np.all(np.abs(summary.mean - exact) <= 4 * summary.stderr + 1e-12)

    def test_depolarizing_is_deterministic_in_purity(self):
        """Test global depolarizing noise gives the same purity for every instance"""
        cfg = ToyModelConfig(2, 4, depolarizing(0.1, 2), DensityMatrix.zero_state(2), samples=5, seed=3)
        values = simulate(cfg).values
        assert np.allclose(values, values[0])
        rho = cfg.initial_state
        assert np.allclose(values[0], exact_avg_overlap(cfg.channel, rho, rho, np.arange(5)))

    def test_seed_reproducibility(self, config):
        """Test the same seed gives identical purities"""
        assert np.array_equal(simulate(config).values, simulate(config).values)

    def test_independent_of_workers(self, ad2):
        """Test two worker processes reproduce the serial run"""
        cfg = ToyModelConfig(2, 3, ad2, DensityMatrix.zero_state(2), samples=6, seed=9)
        assert np.array_equal(simulate(cfg).values, simulate(cfg, workers=2).values)

    def test_different_seeds_differ(self, ad2):
        """Test the seed changes the samples"""
        first = simulate(ToyModelConfig(2, 3, ad2, DensityMatrix.zero_state(2), samples=4, seed=1))
        second = simulate(ToyModelConfig(2, 3, ad2, DensityMatrix.zero_state(2), samples=4, seed=2))
        assert not np.array_equal(first.values, second.values)

    def test_simulate_instance(self, config, rng):
        """Test one instance returns its final state"""
        row, state = simulate_instance(config, rng)
        assert row.shape == (7,)
        assert state.purity == pytest.approx(row[-1])
        state.validate()

    def test_zero_layers(self, ad2):
        """Test L = 0 only records the input purity"""
        cfg = ToyModelConfig(2, 0, ad2, DensityMatrix.plus_state(2), samples=2)
        values = simulate(cfg).values
        assert values.shape == (2, 1)
        assert np.allclose(values, 1.0)


@pytest.mark.slow
class TestSixQubitReproduction:
    """Test the six-qubit amplitude-damping curves"""

    def test_mean_curve(self, ad6):
        """Test 128 samples follow the exact curve for 120 layers"""
        rho = DensityMatrix.zero_state(6)
        cfg = ToyModelConfig(6, 120, ad6, rho, samples=128, seed=7)
        summary = simulate(cfg).summary()
        exact = exact_avg_overlap(ad6, rho, rho, np.arange(121))
        assert np.all(np.abs(summary.mean - exact) <= 4 * summary.stderr + 1e-12)

    def test_hoeffding_coverage(self, ad6):
        """Test at least 99% of 1000 instances stay inside the band"""
        rho = DensityMatrix.zero_state(6)
        trace = simulate(ToyModelConfig(6, 120, ad6, rho, samples=1000, seed=11))
        band = hoeffding_band(ad6, rho, 120, 0.01)
        assert trace.fraction_inside(band.lower, band.upper).min() >= 0.99
