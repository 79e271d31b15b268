"""Provide the models for RetroBohm."""
from .config import (
    CONFIG_MODELS,
    BaseExperimentConfig,
    Tolerances,
    load_config,
    parse_config,
    resolved_config,
)
from .context_object import InvokeContext
from .writers import BaseWriter, ConsoleWriter, CsvWriter, JsonWriter
