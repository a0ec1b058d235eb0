import hashlib
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy import isprime

from config import CACHE_DIR, DEFAULT_FORMAT
from coxeter.models import CoxeterSystem, Kind
from exceptions import PCanonError
from fock.models import BoxOrder, Multipartition
from hecke.models import HeckeElement, LaurentPoly
from soergel.models import PCanonicalEntry

COMMANDS = ("pcan", "klpoly", "mult-schur", "mult-hecke", "crystal", "weights", "verify")


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    LATEX = "latex"


@dataclass
class Table:
    """Command output: ``records`` feed the JSON emitter, ``columns``/``rows`` the flat ones."""

    columns: List[str]
    rows: List[List[Any]] = field(default_factory=list)
    records: List[Dict[str, Any]] = field(default_factory=list)


def prime_label(p: Optional[int]) -> str:
    return "rational" if p is None else str(p)


class JobConfig(BaseModel):
    """One validated CLI job. Everything a command reads comes from here."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    command: str
    kind: Kind = Kind.FINITE
    rank: Optional[int] = Field(default=None, ge=1)
    e: Optional[int] = Field(default=None, ge=2)
    primes: List[Optional[int]] = Field(default_factory=lambda: [None])
    charges: List[int] = Field(default_factory=list)
    m_vector: List[int] = Field(default_factory=list)
    max_length: int = Field(default=3, ge=0)
    lam: Optional[Multipartition] = None
    mu: Optional[Multipartition] = None
    n: Optional[int] = Field(default=None, ge=0)
    order: BoxOrder = BoxOrder.SCHUR
    word: List[int] = Field(default_factory=list)
    weight: List[int] = Field(default_factory=list)
    color: Optional[int] = None
    format: OutputFormat = Field(default=DEFAULT_FORMAT, validate_default=True)
    cache_dir: str = CACHE_DIR
    use_cache: bool = True

    @field_validator("command")
    @classmethod
    def _known_command(cls, value: str) -> str:
        if value not in COMMANDS:
            raise ValueError(f"Unknown command {value!r}; expected one of {', '.join(COMMANDS)}")
        return value

    @field_validator("primes", mode="before")
    @classmethod
    def _parse_primes(cls, value: Any) -> List[Optional[int]]:
        if value is None or value == []:
            return [None]
        out: List[Optional[int]] = []
        for p in value:
            if p is None or str(p).lower() == "rational":
                out.append(None)
                continue
            try:
                p = int(p)
            except (TypeError, ValueError):
                raise ValueError(f"{p!r} is neither a prime nor 'rational'")
            if not isprime(p):
                raise ValueError(f"{p} is not prime")
            out.append(p)
        return list(dict.fromkeys(out))

    @field_validator("lam", "mu", mode="before")
    @classmethod
    def _parse_partition(cls, value: Any) -> Optional[Multipartition]:
        if value is None or isinstance(value, Multipartition):
            return value
        try:
            return Multipartition.parse(str(value))
        except PCanonError as e:
            raise ValueError(str(e))

    @field_validator("format", mode="before")
    @classmethod
    def _fallback_format(cls, value: Any) -> Any:
        if isinstance(value, str) and value not in {f.value for f in OutputFormat}:
            logger.warning(f"Unknown output format {value!r}, falling back to json")
            return OutputFormat.JSON
        return value

    @model_validator(mode="after")
    def _check_command_inputs(self) -> "JobConfig":
        needs = {
            "pcan": ("rank",),
            "klpoly": ("rank",),
            "mult-schur": ("e", "charges", "m_vector"),
            "mult-hecke": ("e", "charges", "m_vector"),
            "crystal": ("lam", "e", "charges"),
            "weights": ("weight", "e"),
            "verify": (),
        }[self.command]
        missing = [name for name in needs if getattr(self, name) in (None, [])]
        if missing:
            raise ValueError(f"{self.command} needs {', '.join('--' + m.replace('_', '-') for m in missing)}")
        if self.command in ("pcan", "klpoly"):
            try:
                self.system
            except PCanonError as e:
                raise ValueError(str(e))
        if self.command.startswith("mult"):
            if self.lam is None and self.n is None:
                raise ValueError(f"{self.command} needs --lambda and --mu, or --n")
            if (self.lam is None) != (self.mu is None):
                raise ValueError("--lambda and --mu go together")
        if self.command == "weights" and self.color is None and not self.word:
            raise ValueError("weights needs --color or --word")
        return self

    @property
    def system(self) -> CoxeterSystem:
        return CoxeterSystem(self.kind, self.rank)


class CacheRecord(BaseModel):
    """One cached p-canonical element; ``checksum`` covers every other field."""

    kind: Kind
    rank: int
    prime: Optional[int]
    word: List[int]
    expansion: List[Tuple[List[int], List[List[int]]]]
    checksum: str = ""

    @classmethod
    def from_entry(cls, entry: PCanonicalEntry) -> "CacheRecord":
        system = entry.element.system
        expansion = [(list(x.word), c.to_pairs()) for x, c in sorted(entry.expansion.items(), key=lambda kv: kv[0])]
        record = cls(kind=system.kind, rank=system.rank, prime=entry.prime, word=list(entry.element.word),
                     expansion=expansion)
        return record.model_copy(update={"checksum": record.compute_checksum()})

    @property
    def key(self) -> Tuple[str, int, Optional[int], Tuple[int, ...]]:
        return self.kind.value, self.rank, self.prime, tuple(self.word)

    def compute_checksum(self) -> str:
        payload = self.model_dump_json(exclude={"checksum"})
        return hashlib.sha256(payload.encode()).hexdigest()

    def to_entry(self) -> PCanonicalEntry:
        system = CoxeterSystem(self.kind, self.rank)
        support = {system.from_word(target): LaurentPoly.from_pairs(pairs) for target, pairs in self.expansion}
        return PCanonicalEntry(system.from_word(self.word), self.prime, HeckeElement(system, support))
