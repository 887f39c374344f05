"""backend.utils.config_loader
+------------------------------------------------
Parse study configuration files into :class:`StudyConfig`.

Format: one ``key = value`` pair per line, ``#`` starts a comment.
``distribution``, ``d``, ``n`` and ``alpha`` take comma-separated lists;
``M`` and ``R`` are accepted as aliases of ``bootstrap`` and
``replications``.

Example
-------
>>> loader = StudyConfigLoader()
>>> config = loader.parse_text("distribution = D6\\nd = 2\\nn = 50\\nseed = 1\\nR = 1\\n")
>>> config.distributions, config.replications
(('D6',), 1)
"""

from pathlib import Path
from typing import Any, Callable

from backend.exceptions import ConfigError
from backend.models.symmetry_test import StudyConfig
from backend.models.tukey_median import DEFAULT_REFINEMENT_ROUNDS, DEFAULT_SHRINK

DEFAULT_BOOTSTRAP: int = 1000
DEFAULT_ALPHA: float = 0.05
DEFAULT_REPLICATIONS: int = 1000

ALIASES: dict[str, str] = {"M": "bootstrap", "R": "replications"}
REQUIRED_KEYS: tuple[str, ...] = ("distribution", "d", "n")


def _split(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def _int_list(value: str) -> tuple[int, ...]:
    return tuple(int(item) for item in _split(value))


def _float_list(value: str) -> tuple[float, ...]:
    return tuple(float(item) for item in _split(value))


# key -> (StudyConfig field, converter)
FIELDS: dict[str, tuple[str, Callable[[str], Any]]] = {
    "distribution": ("distributions", lambda v: tuple(_split(v))),
    "d": ("dims", _int_list),
    "n": ("sizes", _int_list),
    "bootstrap": ("bootstrap", int),
    "alpha": ("alphas", _float_list),
    "replications": ("replications", int),
    "seed": ("seed", int),
    "rounds": ("rounds", int),
    "shrink": ("shrink", float),
}


class StudyConfigLoader:
    """Read ``key = value`` study files."""

    def load(self, path: str | Path, seed: int | None = None) -> StudyConfig:
        """Parse ``path``; a non-None ``seed`` overrides the file's seed."""
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read study config {str(path)!r}: {exc}") from exc
        return self.parse_text(text, seed)

    def parse_text(self, text: str, seed: int | None = None) -> StudyConfig:
        values: dict[str, Any] = {
            "bootstrap": DEFAULT_BOOTSTRAP,
            "alphas": (DEFAULT_ALPHA,),
            "replications": DEFAULT_REPLICATIONS,
            "rounds": DEFAULT_REFINEMENT_ROUNDS,
            "shrink": DEFAULT_SHRINK,
        }
        seen: set[str] = set()
        for line_number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {line_number}: expected 'key = value', got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            key = ALIASES.get(key, key)
            if key not in FIELDS:
                raise ConfigError(
                    f"line {line_number}: unknown key {key!r}; expected one of "
                    f"{sorted(FIELDS) + sorted(ALIASES)}"
                )
            if key in seen:
                raise ConfigError(f"line {line_number}: duplicate key {key!r}")
            seen.add(key)
            field_name, convert = FIELDS[key]
            try:
                values[field_name] = convert(value)
            except ValueError as exc:
                raise ConfigError(f"line {line_number}: bad value {value!r} for {key!r}") from exc

        missing = [key for key in REQUIRED_KEYS if key not in seen]
        if missing:
            raise ConfigError(f"study config is missing required keys: {missing}")
        if seed is not None:
            values["seed"] = seed
        if "seed" not in values:
            raise ConfigError("study config needs a seed (key 'seed' or --seed)")
        return StudyConfig(**values)
