"""KV pairs (F, G) and their JSON persistence."""
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Union

from pydantic import ValidationError

from src.errors import ParseError
from src.freelie.series import FreeLieSeries, parse_series
from src.models import KVPairRecord
from src.types import REPORT_SCHEMA

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KVPair:
    """Lie series F, G solving the first KV equation through degree ``order``.

    Equation degree k + 1 fixes the degree-k parts, so F and G are stored
    with truncation degree order - 1.
    """
    F: FreeLieSeries
    G: FreeLieSeries
    order: int

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("a KV pair needs order >= 2")
        for name, series in (("F", self.F), ("G", self.G)):
            if series.truncation_degree < self.order - 1:
                raise ValueError(f"{name} is truncated at {series.truncation_degree}, need {self.order - 1}")
            object.__setattr__(self, name, series.truncate(self.order - 1))

    @property
    def truncation_degree(self) -> int:
        return self.order - 1

    def to_record(self) -> Dict[str, Any]:
        record = KVPairRecord(schema=REPORT_SCHEMA, order=self.order, F=self.F.to_text(), G=self.G.to_text())
        return record.model_dump(by_alias=True)

    @classmethod
    def from_record(cls, record: Union[Dict[str, Any], KVPairRecord]) -> "KVPair":
        if not isinstance(record, KVPairRecord):
            try:
                record = KVPairRecord.model_validate(record)
            except ValidationError as exc:
                raise ParseError(f"malformed KV pair record: {exc}") from exc
        degree = record.order - 1
        try:
            return cls(parse_series(record.F, degree), parse_series(record.G, degree), record.order)
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(f"malformed KV pair record: {exc}") from exc


def save_pair(pair: KVPair, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(pair.to_record(), indent=2) + "\n")
    logger.info("saved KV pair of order %d to %s", pair.order, path)


def load_pair(path: Union[str, Path]) -> KVPair:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read KV pair from {path}: {exc}") from exc
    try:
        record = KVPairRecord.model_validate_json(text)
    except ValidationError as exc:
        raise ParseError(f"malformed KV pair file {path}: {exc}") from exc
    return KVPair.from_record(record)
