"""
Spec-string parser for channels and graphs

Channel grammar (case-insensitive):
    atom        := "ad:" gamma | "depol:" p | "id" | "pauli:" px ":" py ":" pz
    channel     := atom | atom "^" count
Graph grammar:
    "reg:" n ":" d ":" seed | "er:" n ":" p ":" seed | "file:" path
    | "universal:" n [":" wA ":" wB ":" gAB ":" gBA]
"""
from typing import Callable, Dict, List, Optional, Union
import logging

import numpy as np

from ..channels.channel import Channel, ChannelError, tensor_power
from ..channels.library import amplitude_damping, depolarizing, identity_channel, pauli_channel
from ..qaoa.circuit import UniversalQaoaSpec
from ..qaoa.graphs import Graph, erdos_renyi, random_regular_graph, read_graph
from ..toymodel.simulation import SEED_LIMIT

logger = logging.getLogger(__name__)

GraphSource = Union[Graph, UniversalQaoaSpec]


class SpecParseError(Exception):
    """Raised when a channel or graph spec string is malformed"""
    pass


def _number(token: str, text: str, kind: Callable = float):
    try:
        return kind(token)
    except ValueError as e:
        raise SpecParseError(f"Invalid number {token!r} in spec {text!r}") from e


def _seed(token: str, text: str) -> int:
    seed = _number(token, text, int)
    if not 0 <= seed < SEED_LIMIT:
        raise SpecParseError(f"Seed must be a 64-bit unsigned integer, got {seed} in spec {text!r}")
    return seed


def _arity(fields: List[str], expected: int, text: str) -> None:
    if len(fields) != expected:
        raise SpecParseError(
            f"{fields[0]!r} takes {expected - 1} argument(s), got {len(fields) - 1} in spec {text!r}"
        )


class SpecParser:
    """Parser for channel and graph spec strings"""

    def __init__(self, n_qubits: Optional[int] = None):
        """
        Initialize the parser.

        Args:
            n_qubits: Register size. When given, channel specs must act on
                exactly this many qubits and ``depol:<p>`` without a power
                is the global depolarizing channel on the register.
        """
        self.n_qubits = n_qubits
        self._atoms: Dict[str, Callable[[List[str], str], Channel]] = {
            "ad": self._amplitude_damping,
            "depol": self._depolarizing,
            "id": self._identity,
            "pauli": self._pauli,
        }

    def _amplitude_damping(self, fields: List[str], text: str) -> Channel:
        _arity(fields, 2, text)
        return amplitude_damping(_number(fields[1], text))

    def _depolarizing(self, fields: List[str], text: str) -> Channel:
        _arity(fields, 2, text)
        return depolarizing(_number(fields[1], text))

    def _identity(self, fields: List[str], text: str) -> Channel:
        _arity(fields, 1, text)
        return identity_channel(1)

    def _pauli(self, fields: List[str], text: str) -> Channel:
        _arity(fields, 4, text)
        return pauli_channel(*(_number(token, text) for token in fields[1:]))

    def parse_channel(self, text: str) -> Channel:
        """
        Parse a channel spec such as ``ad:0.004^6``.

        Returns:
            Channel

        Raises:
            SpecParseError: If the spec is malformed, a parameter is out of
                range or the qubit count does not match the register
        """
        spec = text.strip().lower()
        if not spec:
            raise SpecParseError("Empty channel spec")

        base, _, power = spec.partition("^")
        count = None
        if power:
            count = _number(power, text, int)
            if count < 1:
                raise SpecParseError(f"Tensor power must be positive, got {power!r} in spec {text!r}")

        fields = base.split(":")
        builder = self._atoms.get(fields[0])
        if builder is None:
            raise SpecParseError(f"Unknown channel {fields[0]!r} in spec {text!r}")

        try:
            if fields[0] == "depol" and count is None and self.n_qubits:
                _arity(fields, 2, text)
                channel = depolarizing(_number(fields[1], text), self.n_qubits)
            else:
                channel = builder(fields, text)
                if count is not None:
                    channel = tensor_power(channel, count)
        except ChannelError as e:
            logger.error(f"Invalid channel spec {text!r}: {e}")
            raise SpecParseError(f"{base}: {e}") from e

        if self.n_qubits is not None and channel.n_qubits != self.n_qubits:
            raise SpecParseError(
                f"Channel {text!r} acts on {channel.n_qubits} qubit(s), expected {self.n_qubits}"
                f" (use {base}^{self.n_qubits})"
            )
        logger.info(f"Parsed channel spec {text!r} -> {channel.label}")
        return channel

    def parse_graph(self, text: str) -> GraphSource:
        """
        Parse a graph spec such as ``reg:6:3:42``.

        Generated graphs are a pure function of the seed in the spec.

        Returns:
            Graph, or UniversalQaoaSpec for ``universal:`` specs

        Raises:
            SpecParseError: If the spec is malformed
            GraphError: If the requested graph does not exist
            FileNotFoundError: If a graph file doesn't exist
        """
        spec = text.strip()
        kind, _, rest = spec.partition(":")
        kind = kind.lower()
        if kind == "file":
            if not rest:
                raise SpecParseError(f"Missing path in spec {text!r}")
            return read_graph(rest)

        fields = [kind] + (rest.split(":") if rest else [])
        if kind == "reg":
            _arity(fields, 4, text)
            n, degree = (_number(token, text, int) for token in fields[1:3])
            seed = _seed(fields[3], text)
            return random_regular_graph(n, degree, np.random.default_rng(seed))
        if kind == "er":
            _arity(fields, 4, text)
            n = _number(fields[1], text, int)
            probability = _number(fields[2], text)
            seed = _seed(fields[3], text)
            return erdos_renyi(n, probability, np.random.default_rng(seed))
        if kind == "universal":
            if len(fields) not in (2, 6):
                raise SpecParseError(f"'universal' takes 1 or 5 argument(s) in spec {text!r}")
            n = _number(fields[1], text, int)
            weights = [_number(token, text) for token in fields[2:]]
            return UniversalQaoaSpec(n, *weights)
        raise SpecParseError(f"Unknown graph source {kind!r} in spec {text!r}")


def parse_channel_spec(text: str, n_qubits: Optional[int] = None) -> Channel:
    """Parse a channel spec string (see SpecParser.parse_channel)"""
    return SpecParser(n_qubits).parse_channel(text)


def parse_graph_spec(text: str) -> GraphSource:
    """Parse a graph spec string (see SpecParser.parse_graph)"""
    return SpecParser().parse_graph(text)
