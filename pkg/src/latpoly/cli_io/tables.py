"""Plain-text persistence of exact count tables.

File layout, one record per line::

    # latpoly count table v1
    # model convention d N constraint stat value
    tree site 2 4 translation-classes count 22
    tree site 2 4 half-space left[1] 7
    ...
    # sha256 <hex digest of every record line, newline-terminated>

Values are decimal integers of any size.  Records are written sorted, so a
table has exactly one byte representation.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from ..enumeration.ensembles import EnsembleSpec, count, surface_profile
from ..errors import TableChecksumError, TableConflictError

HEADER = "# latpoly count table v1"
COLUMNS = "# model convention d N constraint stat value"
CHECKSUM = "# sha256 "


@dataclass(frozen=True, order=True)
class TableKey:
    model: str
    convention: str
    d: int
    n: int
    constraint: str
    stat: str = "count"

    @classmethod
    def of(cls, spec: EnsembleSpec, stat: str = "count") -> "TableKey":
        conv = "-" if spec.model == "walk" else spec.convention
        return cls(spec.model, conv, spec.d, spec.n, spec.constraint, stat)

    def line(self, value: int) -> str:
        return f"{self.model} {self.convention} {self.d} {self.n} {self.constraint} {self.stat} {value}"


def _digest(lines) -> str:
    h = hashlib.sha256()
    for line in lines:
        h.update(line.encode())
        h.update(b"\n")
    return h.hexdigest()


class TableStore:
    """Exact integer table with optional backing file.

    ``count`` and ``profile`` look values up and compute them on a miss; if
    the store has a path the new records are saved immediately.
    """

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = Path(path) if path is not None else None
        self.data: dict = {}
        if self.path is not None and self.path.exists():
            self.data = self.load(self.path).data

    def __len__(self) -> int:
        return len(self.data)

    def __contains__(self, key: TableKey) -> bool:
        return key in self.data

    def get(self, key: TableKey):
        return self.data.get(key)

    def put(self, key: TableKey, value: int) -> None:
        value = int(value)
        old = self.data.get(key)
        if old is not None and old != value:
            raise TableConflictError(f"{key}: stored {old}, new {value}")
        self.data[key] = value

    def merge(self, other: "TableStore") -> None:
        for key, value in other.data.items():
            old = self.data.get(key)
            if old is not None and old != value:
                raise TableConflictError(f"{key}: {old} != {value}")
        self.data.update(other.data)

    def lines(self) -> list:
        return [k.line(v) for k, v in sorted(self.data.items())]

    def dumps(self) -> str:
        body = self.lines()
        return "\n".join([HEADER, COLUMNS, *body, CHECKSUM + _digest(body)]) + "\n"

    def save(self, path: str | os.PathLike | None = None) -> Path:
        target = Path(path) if path is not None else self.path
        if target is None:
            raise ValueError("no path to save to")
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=target.name, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(self.dumps())
        os.replace(tmp, target)
        return target

    @classmethod
    def loads(cls, text: str) -> "TableStore":
        lines = text.splitlines()
        if not lines or lines[0] != HEADER:
            raise TableChecksumError("not a latpoly count table")
        if not lines[-1].startswith(CHECKSUM):
            raise TableChecksumError("checksum line missing")
        body = [ln for ln in lines[1:-1] if ln and not ln.startswith("#")]
        if _digest(body) != lines[-1][len(CHECKSUM):].strip():
            raise TableChecksumError("checksum mismatch; refusing to load")
        store = cls()
        for ln in body:
            model, conv, d, n, cons, stat, value = ln.split()
            store.put(TableKey(model, conv, int(d), int(n), cons, stat), int(value))
        return store

    @classmethod
    def load(cls, path: str | os.PathLike) -> "TableStore":
        store = cls.loads(Path(path).read_text())
        store.path = Path(path)
        return store

    # compute-on-miss

    def count(self, spec: EnsembleSpec, workers: int = 1) -> int:
        key = TableKey.of(spec)
        if key not in self.data:
            self.put(key, count(spec, workers))
            self._persist()
        return self.data[key]

    def profile(self, spec: EnsembleSpec, weighting: str = "sites", workers: int = 1) -> tuple:
        stat = "left" if weighting == "sites" else "left_edges"
        key0 = TableKey.of(spec, f"{stat}[0]")
        if key0 not in self.data:
            prof = surface_profile(spec, weighting, workers)
            for k, c in enumerate(prof.counts):
                self.put(TableKey.of(spec, f"{stat}[{k}]"), c)
            self._persist()
        out = []
        k = 0
        while (key := TableKey.of(spec, f"{stat}[{k}]")) in self.data:
            out.append(self.data[key])
            k += 1
        return tuple(out)

    def _persist(self) -> None:
        if self.path is not None:
            self.save()
