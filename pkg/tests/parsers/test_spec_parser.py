"""
Tests for channel and graph spec strings
"""
import pytest

from src.parsers.spec_parser import SpecParseError, SpecParser, parse_channel_spec, parse_graph_spec
from src.qaoa.circuit import QaoaError, UniversalQaoaSpec
from src.qaoa.graphs import Graph, GraphError, complete_graph, write_graph


class TestParseChannel:
    """Test channel spec parsing"""

    def test_amplitude_damping_power(self):
        """Test ad:<g>^<n> gives the n-fold product"""
        channel = parse_channel_spec("ad:0.004^6")
        assert channel.n_qubits == 6
        assert channel.coefficients.p_eff == pytest.approx(0.011949, abs=1e-5)

    def test_single_atom(self):
        """Test an atom without a power acts on one qubit"""
        assert parse_channel_spec("ad:0.5").n_qubits == 1
        assert parse_channel_spec("id").n_qubits == 1
        assert parse_channel_spec("pauli:0.1:0.05:0.2").n_qubits == 1

    def test_case_and_whitespace(self):
        """Test specs are case-insensitive and stripped"""
        assert parse_channel_spec("  AD:0.1^2 ").n_qubits == 2

    def test_global_depolarizing_on_register(self):
        """Test depol:<p> with a register size is the global channel"""
        channel = parse_channel_spec("depol:0.012", n_qubits=3)
        assert channel.n_qubits == 3
        assert channel.coefficients.p_eff == pytest.approx(0.012)

    def test_local_depolarizing_power(self):
        """Test depol:<p>^n is the product of single-qubit channels"""
        channel = parse_channel_spec("depol:0.1^2", n_qubits=2)
        assert channel.n_qubits == 2
        assert channel.coefficients.p_eff != pytest.approx(0.1)

    def test_register_mismatch(self):
        """Test the qubit count must match the register"""
        with pytest.raises(SpecParseError, match=r"use ad:0.1\^4"):
            parse_channel_spec("ad:0.1", n_qubits=4)

    @pytest.mark.parametrize("text,message", [
        ("", "Empty"),
        ("foo:0.1", "Unknown channel"),
        ("ad:x", "Invalid number"),
        ("ad:0.1:0.2", "takes 1 argument"),
        ("pauli:0.1:0.2", "takes 3 argument"),
        ("ad:0.1^0", "Tensor power must be positive"),
        ("ad:0.1^two", "Invalid number"),
        ("id:1", "takes 0 argument"),
    ])
    def test_malformed(self, text, message):
        """Test malformed specs raise SpecParseError"""
        with pytest.raises(SpecParseError, match=message):
            parse_channel_spec(text)

    def test_out_of_range_parameter(self):
        """Test channel errors are reported as spec errors"""
        with pytest.raises(SpecParseError, match="out of"):
            parse_channel_spec("ad:1.5^2")

    def test_parser_reuse(self):
        """Test one parser serves several specs"""
        parser = SpecParser(2)
        assert parser.parse_channel("ad:0.1^2").n_qubits == 2
        assert parser.parse_channel("id^2").n_qubits == 2


class TestParseGraph:
    """Test graph spec parsing"""

    def test_regular(self):
        """Test reg:n:d:seed is deterministic in the seed"""
        graph = parse_graph_spec("reg:6:3:42")
        assert isinstance(graph, Graph)
        assert graph.is_regular(3)
        assert parse_graph_spec("reg:6:3:42") == graph

    def test_erdos_renyi(self):
        """Test er:n:p:seed"""
        assert parse_graph_spec("er:5:1.0:1") == complete_graph(5)

    def test_file(self, tmp_path):
        """Test file:<path> reads a graph file"""
        path = write_graph(complete_graph(4), tmp_path / "k4.txt")
        assert parse_graph_spec(f"file:{path}") == complete_graph(4)

    def test_missing_file(self, tmp_path):
        """Test a missing graph file propagates FileNotFoundError"""
        with pytest.raises(FileNotFoundError):
            parse_graph_spec(f"file:{tmp_path / 'none.txt'}")

    def test_universal_defaults(self):
        """Test universal:<n> uses the default weights"""
        spec = parse_graph_spec("universal:5")
        assert spec == UniversalQaoaSpec(5)

    def test_universal_weights(self):
        """Test universal:<n>:wA:wB:gAB:gBA"""
        spec = parse_graph_spec("universal:3:0.4:0.5:0.2:0.6")
        assert (spec.omega_a, spec.omega_b, spec.gamma_ab, spec.gamma_ba) == (0.4, 0.5, 0.2, 0.6)

    def test_universality_violation(self):
        """Test weights violating a condition raise QaoaError"""
        with pytest.raises(QaoaError, match="Universality"):
            parse_graph_spec("universal:3:0.5:0.5:0.2:0.6")

    def test_impossible_graph(self):
        """Test a regular graph that cannot exist raises GraphError"""
        with pytest.raises(GraphError):
            parse_graph_spec("reg:5:3:1")

    @pytest.mark.parametrize("text,message", [
        ("reg:6:3", "takes 3 argument"),
        ("er:5:half:1", "Invalid number"),
        ("file:", "Missing path"),
        ("grid:3:3", "Unknown graph source"),
        ("universal:3:0.4", "1 or 5"),
        ("reg:6:3:-1", "64-bit unsigned"),
        ("er:4:0.5:-7", "64-bit unsigned"),
        ("reg:6:3:18446744073709551616", "64-bit unsigned"),
    ])
    def test_malformed(self, text, message):
        """Test malformed graph specs raise SpecParseError"""
        with pytest.raises(SpecParseError, match=message):
            parse_graph_spec(text)
