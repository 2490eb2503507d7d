"""
Tests for QAOA purity, derivative, twirl-fidelity and infidelity statistics
"""
import pytest
import numpy as np

from src.channels.channel import tensor_power
from src.channels.library import amplitude_damping, depolarizing, identity_channel
from src.liouville.states import DensityMatrix
from src.liouville.stats import fit_log_linear
from src.qaoa.circuit import QaoaError, UniversalQaoaSpec, maxcut_instance, universal_qaoa_instance
from src.qaoa.graphs import complete_graph, random_regular_graph
from src.qaoa.statistics import (
    derivative_statistics,
    haar_model_infidelity,
    purity_statistics,
    twirl_fidelity,
)
from src.toymodel.predictors import exact_avg_overlap


def k4_instance(channel, layers=1):
    return maxcut_instance(complete_graph(4), channel, layers)


class TestPurityStatistics:
    """Test purity over random parameters"""

    def test_noiseless_circuits_stay_pure(self, rng):
        """Test unit purity with zero variance without noise"""
        result = purity_statistics(k4_instance(identity_channel(4)), 4, 6, rng)
        assert result.layers.tolist() == [0, 1, 2, 3, 4]
        assert np.allclose(result.mean, 1.0)
        assert np.allclose(result.variance, 0.0, atol=1e-20)
        assert result.samples == 6

    def test_depolarizing_purity_is_parameter_independent(self, rng):
        """Test Tr rho_L^2 = (1 - p)^2L (1 - 1/d) + 1/d for every parameter draw"""
        result = purity_statistics(k4_instance(depolarizing(0.1, 4)), 5, 8, rng)
        expected = 0.9 ** (2 * np.arange(6)) * (1 - 1 / 16) + 1 / 16
        assert np.allclose(result.mean, expected)
        assert np.allclose(result.variance, 0.0, atol=1e-20)

    def test_amplitude_damping_purity(self, rng):
        """Test purities start at one and stay physical"""
        result = purity_statistics(k4_instance(tensor_power(amplitude_damping(0.1), 4)), 6, 10, rng)
        assert result.mean[0] == pytest.approx(1.0)
        assert np.all(result.mean[1:] < 1.0)
        assert np.all(result.mean >= 1 / 16)
        assert np.all(result.stderr >= 0.0)

    def test_seeded(self):
        """Test equal generator seeds give equal statistics"""
        instance = k4_instance(tensor_power(amplitude_damping(0.1), 4))
        first = purity_statistics(instance, 3, 4, np.random.default_rng(5))
        second = purity_statistics(instance, 3, 4, np.random.default_rng(5))
        assert np.array_equal(first.mean, second.mean)

    def test_needs_two_samples(self, rng):
        """Test the variance needs at least two samples"""
        with pytest.raises(QaoaError, match="At least 2"):
            purity_statistics(k4_instance(identity_channel(4)), 3, 1, rng)


class TestDerivativeStatistics:
    """Test derivative statistics over random parameters"""

    def test_shapes(self, rng):
        """Test one row per depth L = 1..L_max"""
        result = derivative_statistics(k4_instance(tensor_power(amplitude_damping(0.05), 4)), 3, 5, rng)
        assert result.layers.tolist() == [1, 2, 3]
        for column in (result.mean_abs_dgamma1, result.var_dgamma1, result.mean_abs_dalphaL, result.var_dalphaL):
            assert column.shape == (3,)
            assert np.all(column >= 0.0)

    def test_full_damping_flattens_landscape(self, rng):
        """Test AD(1) after the last layer makes both derivatives vanish"""
        result = derivative_statistics(k4_instance(tensor_power(amplitude_damping(1.0), 4)), 2, 4, rng)
        assert np.allclose(result.mean_abs_dgamma1, 0.0, atol=1e-8)
        assert np.allclose(result.mean_abs_dalphaL, 0.0, atol=1e-8)

    def test_full_depolarizing_flattens_landscape(self, rng):
        """Test p = 1 depolarizing noise zeroes the first-angle statistics"""
        result = derivative_statistics(k4_instance(depolarizing(1.0, 4)), 3, 4, rng)
        assert np.allclose(result.mean_abs_dgamma1[1:], 0.0, atol=1e-8)
        assert np.allclose(result.var_dgamma1[1:], 0.0, atol=1e-8)

    def test_needs_a_layer(self, rng):
        """Test L_max >= 1"""
        with pytest.raises(QaoaError, match="L_max >= 1"):
            derivative_statistics(k4_instance(identity_channel(4)), 0, 4, rng)


class TestTwirlFidelity:
    """Test how well circuit families twirl the channel"""

    def test_depolarizing_is_already_twirled(self, rng):
        """Test global depolarizing noise gives F = 1 at every depth"""
        family = k4_instance(depolarizing(0.05, 4))
        result = twirl_fidelity(family, [0, 1, 2], rng, samples=16)
        assert result.layers.tolist() == [0, 1, 2]
        assert result.p_eff == pytest.approx(0.05)
        assert np.allclose(result.fidelity, 1.0, atol=1e-6)

    def test_amplitude_damping_without_circuit(self, rng):
        """Test L = 0 compares N(|+><+|) with the depolarized |+><+|"""
        channel = tensor_power(amplitude_damping(0.2), 4)
        result = twirl_fidelity(k4_instance(channel), [0], rng, samples=8)
        assert 0.0 < result.fidelity[0] < 1.0 - 1e-6
        # the identity family has no spread
        assert result.stderr[0] == pytest.approx(0.0, abs=1e-12)

    def test_sample_minimum(self, rng):
        """Test at least one sample per batch"""
        with pytest.raises(QaoaError, match="At least 8"):
            twirl_fidelity(k4_instance(identity_channel(4)), [1], rng, samples=4)


class TestHaarModelInfidelity:
    """Test the noisy circuit against its twirled-noise replacement"""

    def test_depolarizing_has_no_infidelity(self, rng):
        """Test depolarizing noise is its own twirl"""
        result = haar_model_infidelity(k4_instance(depolarizing(0.1, 4)), 3, 3, rng)
        assert result.layers.tolist() == [0, 1, 2, 3]
        assert np.allclose(result.mean, 0.0, atol=1e-8)

    def test_amplitude_damping(self, rng):
        """Test zero infidelity before the first layer and positive afterwards"""
        result = haar_model_infidelity(k4_instance(tensor_power(amplitude_damping(0.1), 4)), 3, 4, rng)
        assert result.mean[0] == 0.0
        assert np.all(result.mean[1:] > 0.0)
        assert result.samples == 4


def regular_instance(degree, gamma, layers, rng):
    channel = tensor_power(amplitude_damping(gamma), 6)
    return maxcut_instance(random_regular_graph(6, degree, rng), channel, layers)


@pytest.fixture(scope="module")
def six_vertex_purity():
    """Purity statistics over 128 draws and L <= 40, cached per (degree, gamma)"""
    cache = {}

    def run(degree, gamma):
        if (degree, gamma) not in cache:
            rng = np.random.default_rng(2024)
            instance = regular_instance(degree, gamma, 40, rng)
            cache[degree, gamma] = (instance.channel, purity_statistics(instance, 40, 128, rng))
        return cache[degree, gamma]

    return run


def toy_model_deviation(channel, result):
    rho = DensityMatrix.plus_state(6)
    exact = exact_avg_overlap(channel, rho, rho, result.layers)
    window = exact >= 10 / 64
    return np.abs(result.mean[window] - exact[window]), exact[window]


@pytest.mark.slow
class TestSixVertexPurity:
    """Test QAOA purity on 6-vertex regular graphs against the toy model"""

    @pytest.mark.parametrize("gamma", [0.004, 0.02])
    def test_close_to_toy_model(self, gamma, six_vertex_purity):
        """Test 10% agreement with the exact toy-model curve while purity >= 10/2^6"""
        deviation, exact = toy_model_deviation(*six_vertex_purity(3, gamma))
        assert np.all(deviation <= 0.1 * exact)

    def test_three_regular_closer_than_five_regular(self, six_vertex_purity):
        """Test the 3-regular circuit follows the toy model at least as well as the 5-regular one"""
        three, _ = toy_model_deviation(*six_vertex_purity(3, 0.02))
        five, _ = toy_model_deviation(*six_vertex_purity(5, 0.02))
        size = min(three.size, five.size)
        assert three[:size].sum() <= five[:size].sum()

    def test_variance_has_interior_maximum(self, six_vertex_purity):
        """Test the purity variance rises and then falls with depth"""
        _, result = six_vertex_purity(3, 0.02)
        peak = int(np.argmax(result.variance))
        assert 1 < peak < 40
        assert result.variance[-1] < result.variance[peak]


@pytest.mark.slow
class TestDerivativeDecay:
    """Test the mean derivative magnitude decays with depth"""

    @pytest.mark.parametrize("degree", [3, 5])
    def test_log_slope_is_negative(self, degree):
        """Test ln mean |dC| falls with L for both angles (64 draws, L <= 15)"""
        rng = np.random.default_rng(55)
        result = derivative_statistics(regular_instance(degree, 0.004, 1, rng), 15, 64, rng)
        for column in (result.mean_abs_dgamma1, result.mean_abs_dalphaL):
            assert fit_log_linear(result.layers, column).slope < 0


@pytest.fixture(scope="module")
def twirl_families():
    """Twirl fidelity of the 3-regular MaxCut family and the 5-qubit universal family"""
    depths = [0, 1, 2, 4, 8, 16]
    rng = np.random.default_rng(768)
    maxcut = regular_instance(3, 0.06, 1, rng)
    universal = universal_qaoa_instance(UniversalQaoaSpec(5), tensor_power(amplitude_damping(0.072), 5), 1)
    return {
        "maxcut": twirl_fidelity(maxcut, depths, rng, samples=768),
        "universal": twirl_fidelity(universal, depths, rng, samples=768),
    }


@pytest.mark.slow
class TestTwirlingFamilies:
    """Test twirl fidelity across circuit families"""

    @pytest.mark.parametrize("family", ["maxcut", "universal"])
    def test_fidelity_non_decreasing(self, family, twirl_families):
        """Test F does not drop between depths beyond two combined standard errors"""
        result = twirl_families[family]
        tolerance = 2 * np.hypot(result.stderr[:-1], result.stderr[1:])
        assert np.all(np.diff(result.fidelity) >= -tolerance)
        assert result.fidelity[-1] > result.fidelity[0]

    def test_universal_family_is_highest(self, twirl_families):
        """Test the universal circuit twirls best at the largest depth and approaches one"""
        universal = twirl_families["universal"].fidelity[-1]
        assert universal > twirl_families["maxcut"].fidelity[-1]
        assert universal > 0.995


@pytest.mark.slow
class TestInfidelityPeak:
    """Test the noisy versus twirled-noise infidelity on the 3-regular graph"""

    def test_interior_maximum_shrinks_with_noise(self):
        """Test an interior peak that is lower for weaker damping"""
        peaks = {}
        for gamma in (0.004, 0.002):
            rng = np.random.default_rng(64)
            result = haar_model_infidelity(regular_instance(3, gamma, 40, rng), 40, 64, rng)
            peak = int(np.argmax(result.mean))
            assert 1 < peak < 40
            peaks[gamma] = result.mean[peak]
        assert peaks[0.002] < peaks[0.004]
