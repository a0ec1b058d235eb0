import hashlib
import os
import tempfile
from pathlib import Path
from typing import List, Optional, Tuple

from loguru import logger
from pydantic import ValidationError

from cli.models import CacheRecord, prime_label
from coxeter.models import CoxeterElement
from exceptions import CacheCorruptionError
from soergel.models import PCanonicalEntry


def record_name(kind: str, rank: int, p: Optional[int], word) -> str:
    key = f"{kind}:{rank}:{prime_label(p)}:{','.join(map(str, word))}"
    return f"{hashlib.sha256(key.encode()).hexdigest()}.json"


class CacheStore:
    """Content-addressed store of p-canonical elements, one JSON file per element.

    Writers go through a temporary file and ``os.replace``, so readers see
    either the old record or the new one.
    """

    def __init__(self, root: str):
        self.root = Path(root)

    def path_for(self, w: CoxeterElement, p: Optional[int]) -> Path:
        return self.root / record_name(w.system.kind.value, w.system.rank, p, w.word)

    def _load(self, path: Path) -> CacheRecord:
        try:
            record = CacheRecord.model_validate_json(path.read_text())
        except (ValidationError, UnicodeDecodeError) as e:
            raise CacheCorruptionError(f"Unreadable cache record {path.name}: {e}") from e
        if record.checksum != record.compute_checksum():
            raise CacheCorruptionError(f"Checksum mismatch in cache record {path.name}")
        return record

    def get(self, w: CoxeterElement, p: Optional[int]) -> Optional[PCanonicalEntry]:
        path = self.path_for(w, p)
        if not path.exists():
            return None
        record = self._load(path)
        system = w.system
        if record.key != (system.kind.value, system.rank, p, w.word):
            raise CacheCorruptionError(f"Cache record {path.name} holds {record.key}, not {w} ({prime_label(p)})")
        logger.debug(f"Cache hit for {w} ({prime_label(p)})")
        return record.to_entry()

    def put(self, entry: PCanonicalEntry) -> Path:
        path = self.path_for(entry.element, entry.prime)
        self.root.mkdir(parents=True, exist_ok=True)
        record = CacheRecord.from_entry(entry)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(record.model_dump_json())
            os.replace(tmp, path)
        except OSError:
            if os.path.exists(tmp):
                os.remove(tmp)
            raise
        logger.debug(f"Cached {entry.element} ({entry.mode}) at {path.name}")
        return path

    def verify(self) -> Tuple[int, List[str]]:
        """Count of records read, plus the names of corrupt or misfiled ones."""
        bad: List[str] = []
        if not self.root.exists():
            return 0, bad
        paths = sorted(self.root.glob("*.json"))
        for path in paths:
            try:
                record = self._load(path)
                if path.name != record_name(record.kind.value, record.rank, record.prime, record.word):
                    raise CacheCorruptionError(f"Cache record {path.name} is filed under the wrong key")
            except CacheCorruptionError as e:
                logger.error(f"Error verifying cache (CacheCorruptionError): {e}")
                bad.append(path.name)
        return len(paths), bad
