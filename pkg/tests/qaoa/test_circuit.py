"""
Tests for noisy QAOA circuits
"""
import pytest
import numpy as np

from src.channels.channel import tensor_power
from src.channels.library import amplitude_damping, depolarizing, identity_channel
from src.liouville.states import overlap
from src.qaoa.circuit import (
    FIRST_GAMMA,
    LAST_ALPHA,
    ParameterId,
    PauliRotation,
    QaoaError,
    QaoaInstance,
    QaoaParams,
    UniversalQaoaSpec,
    cost,
    gradient_fd,
    line_diagonal,
    maxcut_instance,
    problem_diagonal,
    qaoa_state,
    shift_rule_check,
    statevector_state,
    universal_qaoa_instance,
)
from src.qaoa.graphs import Graph, complete_graph, erdos_renyi, random_regular_graph


@pytest.fixture
def triangle():
    return complete_graph(3)


@pytest.fixture
def noisy_k4():
    """K4 with amplitude damping 0.05 on every qubit, three layers"""
    return maxcut_instance(complete_graph(4), tensor_power(amplitude_damping(0.05), 4), 3)


class TestHamiltonians:
    """Test diagonal problem Hamiltonians"""

    def test_single_edge(self):
        """Test Z0 Z1 has diagonal (1, -1, -1, 1)"""
        assert problem_diagonal(Graph(2, ((0, 1),))).tolist() == [1, -1, -1, 1]

    def test_triangle(self, triangle):
        """Test the triangle gives 3 on uniform strings and -1 otherwise"""
        diagonal = problem_diagonal(triangle)
        assert diagonal[0] == 3 and diagonal[7] == 3
        assert sorted(diagonal[1:7].tolist()) == [-1] * 6

    def test_qubit_order(self):
        """Test qubit 0 is the most significant bit"""
        graph = Graph(3, ((0, 1),))
        # |100> has qubit 0 flipped
        assert problem_diagonal(graph)[4] == -1
        assert problem_diagonal(graph)[1] == 1

    def test_brute_force_edge_sums(self, rng):
        """Test the diagonal against +-1 edge sums over every bitstring"""
        graphs = [erdos_renyi(n, 0.6, rng) for n in range(2, 11)] + [random_regular_graph(10, 3, rng)]
        for graph in graphs:
            n = graph.n_vertices
            expected = []
            for state in range(2 ** n):
                bits = [(state >> (n - 1 - q)) & 1 for q in range(n)]
                expected.append(sum(1 if bits[u] == bits[v] else -1 for u, v in graph.edges))
            assert problem_diagonal(graph).tolist() == expected

    def test_line_diagonal(self):
        """Test the all-zero string of the three-qubit line"""
        spec = UniversalQaoaSpec(3)
        assert line_diagonal(spec)[0] == pytest.approx(0.45 + 0.54 + 0.45 + 0.22 + 0.52)
        assert line_diagonal(spec).sum() == pytest.approx(0.0, abs=1e-12)


class TestInstances:
    """Test instance validation"""

    def test_maxcut_instance(self, triangle):
        """Test qubit count and label from the graph"""
        instance = maxcut_instance(triangle, identity_channel(3), 2)
        assert instance.n_qubits == 3
        assert instance.label == "K3"
        assert instance.with_layers(5).layers == 5

    def test_channel_size(self, triangle):
        """Test the channel must act on all qubits"""
        with pytest.raises(QaoaError, match="Channel acts on 1"):
            maxcut_instance(triangle, identity_channel(1), 2)

    def test_diagonal_length(self):
        """Test diagonals must have power-of-two length"""
        with pytest.raises(QaoaError, match="power of two"):
            QaoaInstance(np.zeros(3), identity_channel(1), 1)

    def test_negative_layers(self, triangle):
        """Test L must be non-negative"""
        with pytest.raises(QaoaError, match="non-negative"):
            maxcut_instance(triangle, identity_channel(3), -1)

    def test_single_vertex(self):
        """Test MaxCut needs two vertices"""
        with pytest.raises(QaoaError, match="two vertices"):
            maxcut_instance(Graph(1, ()), identity_channel(1), 1)


class TestUniversalSpec:
    """Test the universality conditions"""

    def test_defaults_are_valid(self):
        """Test the default weights satisfy every condition"""
        instance = universal_qaoa_instance(UniversalQaoaSpec(5), identity_channel(5), 2)
        assert instance.n_qubits == 5
        assert instance.graph is None

    @pytest.mark.parametrize("n", [1, 4])
    def test_qubit_count(self, n):
        """Test an odd number of at least three qubits is needed"""
        with pytest.raises(QaoaError, match="odd number"):
            UniversalQaoaSpec(n)

    @pytest.mark.parametrize("kwargs", [
        {"omega_a": 0.5, "omega_b": -0.5},
        {"gamma_ab": 0.3, "gamma_ba": 0.3},
        {"gamma_ab": 1.04, "gamma_ba": 0.52},
        {"gamma_ab": 0.0},
        {"gamma_ba": 0.0},
    ], ids=["omega", "gamma-equal", "gamma-double", "gamma-ab-zero", "gamma-ba-zero"])
    def test_violations(self, kwargs):
        """Test each violated condition is reported"""
        with pytest.raises(QaoaError, match="Universality condition violated"):
            UniversalQaoaSpec(3, **kwargs)


class TestParams:
    """Test QAOA parameters"""

    def test_wrapped_into_period(self):
        """Test angles are stored modulo 2 pi"""
        params = QaoaParams([2 * np.pi + 0.5, -0.25], [0.0, 7.0])
        assert np.allclose(params.alphas, [0.5, 2 * np.pi - 0.25])
        assert np.allclose(params.gammas, [0.0, 7.0 - 2 * np.pi])
        assert params.layers == 2

    def test_length_mismatch(self):
        """Test alphas and gammas must have equal length"""
        with pytest.raises(QaoaError, match="alphas has 2"):
            QaoaParams([0.1, 0.2], [0.3])

    def test_random_range(self, rng):
        """Test random angles lie in [0, 2 pi)"""
        params = QaoaParams.random(50, rng)
        assert np.all((params.alphas >= 0) & (params.alphas < 2 * np.pi))
        assert np.all((params.gammas >= 0) & (params.gammas < 2 * np.pi))

    def test_shifted(self):
        """Test shifting the last mixer angle"""
        params = QaoaParams([0.1, 0.2], [0.3, 0.4]).shifted(LAST_ALPHA, 0.5)
        assert np.allclose(params.alphas, [0.1, 0.7])
        assert np.allclose(params.gammas, [0.3, 0.4])

    def test_parameter_ids(self):
        """Test kinds and index ranges"""
        assert FIRST_GAMMA.index(3) == 0
        assert LAST_ALPHA.index(3) == 2
        with pytest.raises(QaoaError, match="Unknown parameter kind"):
            ParameterId("beta", 0)
        with pytest.raises(QaoaError, match="does not exist"):
            ParameterId("gamma", 3).index(3)

    def test_read_only(self):
        """Test stored angles cannot be modified"""
        params = QaoaParams.zeros(2)
        with pytest.raises(ValueError):
            params.alphas[0] = 1.0


class TestEvolution:
    """Test state evolution and the cost"""

    def test_matches_statevector(self, rng):
        """Test the noiseless density-matrix path against amplitude-vector simulation"""
        for _ in range(50):
            n = int(rng.integers(3, 9))
            graph = erdos_renyi(n, 0.5, rng)
            layers = int(rng.integers(1, 6))
            instance = maxcut_instance(graph, identity_channel(n), layers)
            params = QaoaParams.random(layers, rng)
            rho = qaoa_state(instance, params)
            reference = statevector_state(instance, params)
            assert overlap(rho, reference) >= 1 - 1e-10
            assert np.allclose(rho.matrix, reference.matrix, atol=1e-10)

    def test_zero_layers(self, triangle):
        """Test |+><+| has zero MaxCut cost"""
        instance = maxcut_instance(triangle, identity_channel(3), 0)
        assert cost(instance, QaoaParams.zeros(0)) == pytest.approx(0.0, abs=1e-12)

    def test_period_pi(self, noisy_k4, rng):
        """Test integer-valued H_P and the X mixer give period pi in every angle"""
        params = QaoaParams.random(3, rng)
        shifted = QaoaParams(params.alphas + np.pi, params.gammas + np.pi)
        assert cost(noisy_k4, shifted) == pytest.approx(cost(noisy_k4, params), abs=1e-10)

    def test_depolarizing_scales_cost(self, triangle, rng):
        """Test global depolarizing noise multiplies the cost by (1 - p)^L"""
        params = QaoaParams.random(3, rng)
        noiseless = cost(maxcut_instance(triangle, identity_channel(3), 3), params)
        noisy = cost(maxcut_instance(triangle, depolarizing(0.1, 3), 3), params)
        assert noisy == pytest.approx(0.9 ** 3 * noiseless, abs=1e-12)

    def test_full_damping_resets(self, triangle, rng):
        """Test AD(1) after every layer leaves |000> with cost |E|"""
        instance = maxcut_instance(triangle, tensor_power(amplitude_damping(1.0), 3), 2)
        assert cost(instance, QaoaParams.random(2, rng)) == pytest.approx(3.0)

    def test_noise_reduces_purity(self, noisy_k4, rng):
        """Test the noisy output is a mixed state"""
        rho = qaoa_state(noisy_k4, QaoaParams.random(3, rng))
        rho.validate()
        assert 1 / 16 <= rho.purity < 1.0

    def test_parameter_count(self, noisy_k4):
        """Test parameters must match the depth"""
        with pytest.raises(QaoaError, match="Parameters have 2"):
            cost(noisy_k4, QaoaParams.zeros(2))


class TestGradient:
    """Test finite-difference derivatives"""

    def test_step_refinement(self, noisy_k4, rng):
        """Test halving the step changes the derivative by O(h^2)"""
        params = QaoaParams.random(3, rng)
        for which in (FIRST_GAMMA, LAST_ALPHA):
            coarse = gradient_fd(noisy_k4, params, which, step=2e-4)
            fine = gradient_fd(noisy_k4, params, which, step=1e-4)
            assert fine == pytest.approx(coarse, abs=1e-4)

    def test_flat_without_mixing(self, triangle):
        """Test dC/dgamma_1 vanishes when no mixer acts"""
        instance = maxcut_instance(triangle, identity_channel(3), 1)
        params = QaoaParams([0.0], [0.7])
        assert gradient_fd(instance, params, FIRST_GAMMA) == pytest.approx(0.0, abs=1e-9)

    def test_near_period_boundary(self, triangle):
        """Test a shift across 2 pi agrees with the cost difference"""
        instance = maxcut_instance(triangle, depolarizing(0.05, 3), 1)
        params = QaoaParams([0.4], [2 * np.pi - 1e-5])
        step = 1e-4
        expected = (
            cost(instance, params.shifted(FIRST_GAMMA, step)) - cost(instance, params.shifted(FIRST_GAMMA, -step))
        ) / (2 * step)
        assert gradient_fd(instance, params, FIRST_GAMMA, step=step) == pytest.approx(expected, abs=1e-8)

    def test_step_must_be_positive(self, noisy_k4):
        """Test h > 0"""
        with pytest.raises(QaoaError, match="step"):
            gradient_fd(noisy_k4, QaoaParams.zeros(3), step=0.0)


class TestShiftRule:
    """Test the parameter-shift derivative of an inserted rotation"""

    @pytest.mark.parametrize("layer,pauli", [(0, "Z"), (1, "X"), (2, "Y")])
    def test_matches_finite_difference(self, noisy_k4, rng, layer, pauli):
        """Test the shift rule against central differences and the trace-distance bounds"""
        params = QaoaParams.random(3, rng)
        rotation = PauliRotation(layer, qubit=1, pauli=pauli, theta=float(rng.uniform(0, 2 * np.pi)))
        check = shift_rule_check(noisy_k4, params, rotation)
        assert check.shift_rule == pytest.approx(check.finite_difference, abs=1e-6)
        assert check.bound_holds

    def test_noise_tightens_layer_bound(self, rng):
        """Test the output bound does not exceed the bound at the rotation layer"""
        instance = maxcut_instance(complete_graph(3), tensor_power(amplitude_damping(0.3), 3), 4)
        check = shift_rule_check(instance, QaoaParams.random(4, rng), PauliRotation(0, 0, "Y", 0.3))
        assert check.final_bound <= check.layer_bound + 1e-10

    def test_rotation_checks(self, noisy_k4):
        """Test rotation placement and Pauli labels"""
        params = QaoaParams.zeros(3)
        with pytest.raises(QaoaError, match="Rotation layer 3"):
            shift_rule_check(noisy_k4, params, PauliRotation(3, 0))
        with pytest.raises(QaoaError, match="Rotation qubit 4"):
            shift_rule_check(noisy_k4, params, PauliRotation(0, 4))
        with pytest.raises(QaoaError, match="Rotation Pauli"):
            PauliRotation(0, 0, "W")
