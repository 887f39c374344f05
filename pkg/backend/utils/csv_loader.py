"""backend.utils.csv_loader
+------------------------------------------------
Read and write point datasets as headerless CSV.

* One observation per line, comma-separated decimal floats.
* Lines starting with ``#`` (e.g. provenance headers) and blank lines
  are skipped.
* Ragged rows, non-numeric tokens and bytes that are not UTF-8 raise
  :class:`DatasetParseError` carrying the 1-based line number.
* Values are written with 17 significant digits, so reading a written
  file gives back the same floats.

Example
-------
>>> from backend.utils.csv_loader import DatasetLoader
>>> loader = DatasetLoader()
>>> data = loader.parse_text("1.0,2.0\\n3.0,4.0\\n")
>>> data.n, data.d
(2, 2)
>>> loader.load_summary["rows"]
2
"""

import csv
import io
import logging
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from backend.exceptions import DatasetParseError, EmptyInputError, NonFiniteValueError
from backend.models.dataset import Dataset

logger = logging.getLogger(__name__)

FLOAT_FORMAT: str = "%.17g"


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


class DatasetLoader:
    """Parse dataset files with line-accurate error reporting."""

    def __init__(self, delimiter: str = ",") -> None:
        self.__delimiter: str = delimiter
        self.__load_summary: dict[str, Any] = {}

    @property
    def load_summary(self) -> dict[str, Any]:
        """Read-only view of the most recent load summary."""
        return dict(self.__load_summary)

    def read_dataset(self, path: str | Path) -> Dataset:
        """Read a dataset file; the whole file must be UTF-8 text."""
        raw = Path(path).read_bytes()
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            line_number = raw[: exc.start].count(b"\n") + 1
            raise DatasetParseError(f"{str(path)!r} is not UTF-8 text", line_number) from exc
        data = self.parse_text(text)
        self.__load_summary["path"] = str(path)
        logger.info("Loaded dataset %s: n=%d, d=%d", path, data.n, data.d)
        return data

    def parse_text(self, text: str) -> Dataset:
        kept: list[str] = []
        line_numbers: list[int] = []
        for line_number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if line and not line.startswith("#"):
                kept.append(line)
                line_numbers.append(line_number)
        if not kept:
            raise EmptyInputError("dataset file contains no observations")

        width = kept[0].count(self.__delimiter) + 1
        for line, line_number in zip(kept, line_numbers):
            found = line.count(self.__delimiter) + 1
            if found != width:
                raise DatasetParseError(f"expected {width} values but found {found}", line_number)

        tokens = pd.read_csv(
            io.StringIO("\n".join(kept)),
            header=None,
            sep=self.__delimiter,
            dtype=str,
            keep_default_na=False,
            quoting=csv.QUOTE_NONE,
        )
        missing = tokens.isna().to_numpy()
        if missing.any():
            row = int(np.argwhere(missing)[0][0])
            raise DatasetParseError("missing value", line_numbers[row])
        try:
            values = tokens.to_numpy(dtype=float)
        except ValueError:
            self.__raise_first_bad_token(tokens, line_numbers)
            raise

        finite = np.isfinite(values)
        if not finite.all():
            row, col = np.argwhere(~finite)[0]
            token = str(tokens.iat[row, col]).strip()
            raise NonFiniteValueError(f"line {line_numbers[row]}: non-finite value {token!r}")

        self.__load_summary = {
            "rows": len(kept),
            "dimension": width,
            "skipped_lines": len(text.splitlines()) - len(kept),
        }
        return Dataset(values)

    def write_dataset(
        self, data: Dataset, path: str | Path, header: str | None = None
    ) -> None:
        """Write ``data`` with 17 significant digits, optionally after a ``#`` header."""
        with open(path, "w", encoding="utf-8", newline="") as handle:
            if header:
                handle.write(f"# {header}\n")
            pd.DataFrame(data.points).to_csv(
                handle,
                header=False,
                index=False,
                sep=self.__delimiter,
                float_format=FLOAT_FORMAT,
                lineterminator="\n",
            )

    @staticmethod
    def __raise_first_bad_token(tokens: pd.DataFrame, line_numbers: list[int]) -> None:
        parsed = tokens.map(_is_number).to_numpy()
        row, col = np.argwhere(~parsed)[0]
        token = str(tokens.iat[row, col]).strip()
        raise DatasetParseError(f"not a number: {token!r}", line_numbers[row])


def read_dataset(path: str | Path) -> Dataset:
    return DatasetLoader().read_dataset(path)


def write_dataset(data: Dataset, path: str | Path, header: str | None = None) -> None:
    DatasetLoader().write_dataset(data, path, header)
