"""
Main package initialization
"""
__version__ = "1.0.0"

from .channels.channel import Channel, ChannelError
from .liouville.linalg import DimensionError, NumericalError
from .liouville.states import DensityMatrix
from .parsers.spec_parser import SpecParseError, SpecParser, parse_channel_spec, parse_graph_spec
from .qaoa.circuit import QaoaError
from .qaoa.graphs import GraphError
from .services.config import ConfigError, ExperimentConfig, RunManifest
from .services.experiment_pipeline import ExperimentError, ExperimentPipeline
from .services.output_service import OutputError, OutputService
from .toymodel.simulation import ToyModelError

__all__ = [
    'Channel',
    'DensityMatrix',
    'ExperimentConfig',
    'ExperimentPipeline',
    'OutputService',
    'RunManifest',
    'SpecParser',
    'parse_channel_spec',
    'parse_graph_spec',
    'ChannelError',
    'ConfigError',
    'DimensionError',
    'ExperimentError',
    'GraphError',
    'NumericalError',
    'OutputError',
    'QaoaError',
    'SpecParseError',
    'ToyModelError',
]
