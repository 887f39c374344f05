"""Utilities for dataset IO, random streams and figure output.

Public API:
>>> from backend.utils import DatasetLoader, SvgWriter, substream
"""

from .csv_loader import DatasetLoader, read_dataset, write_dataset
from .rng_streams import derive_seed, substream
from .svg_writer import SvgWriter

__all__ = [
    "DatasetLoader",
    "SvgWriter",
    "derive_seed",
    "read_dataset",
    "substream",
    "write_dataset",
]
