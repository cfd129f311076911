"""Canonical file formats and the on-disk expansion cache."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import re
import tempfile
from pathlib import Path
from typing import Callable

from .expansion import SiegelExpansion, WittPair
from .genus1 import JacobiSlice
from .scalars import format_rational, parse_rational

FORMAT = "smf-expansion/1"
WITT_FORMAT = "smf-witt/1"
SLICE_FORMAT = "smf-jacobi/1"


class FormatError(ValueError):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _value_text(v, modulus) -> str:
    return str(int(v)) if modulus is not None else format_rational(v)


def _document(header: dict, rows: list) -> str:
    body = ",\n".join(_dump(r) for r in rows)
    return '{"header":' + _dump(header) + ',"rows":[\n' + body + ("\n" if rows else "") + "]}\n"


def expansion_header(F: SiegelExpansion) -> dict:
    header = {
        "format": FORMAT,
        "genus": 2,
        "weight": F.weight,
        "levelTag": F.level,
        "box": F.box,
        "note": F.note,
    }
    if F.modulus is not None:
        header["modulus"] = F.modulus
    return header


def dumps_expansion(F: SiegelExpansion) -> str:
    """Canonical JSON text; rows sorted by (m, n, r), zeros omitted."""
    rows = [[n, r, m, _value_text(v, F.modulus)] for (n, r, m), v in F.coeffs.items()]
    return _document(expansion_header(F), rows)


def loads_expansion(text: str) -> SiegelExpansion:
    try:
        doc = json.loads(text)
        header, rows = doc["header"], doc["rows"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise FormatError(f"not an expansion file: {exc}") from exc
    if header.get("format") != FORMAT:
        raise FormatError(f"unsupported format {header.get('format')!r}")
    modulus = header.get("modulus")
    coeffs = {}
    prev = None
    for row in rows:
        n, r, m, s = row
        key = (m, n, r)
        if prev is not None and key <= prev:
            raise FormatError(f"rows not strictly sorted at {row}")
        prev = key
        v = int(s) if modulus is not None else parse_rational(s)
        if _value_text(v, modulus) != s or v == 0:
            raise FormatError(f"non-canonical value {s!r} at {(n, r, m)}")
        if modulus is not None and not 0 < v < modulus:
            raise FormatError(f"residue {s} out of range at {(n, r, m)}")
        coeffs[(n, r, m)] = v
    F = SiegelExpansion(
        header["weight"], header["box"], coeffs, modulus,
        level=header.get("levelTag", "1"), note=header.get("note", ""),
    )
    if len(F.coeffs) != len(coeffs):
        raise FormatError("rows outside the declared box")
    return F


def csv_expansion(F: SiegelExpansion) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "r", "m", "value"])
    for (n, r, m), v in F.coeffs.items():
        w.writerow([n, r, m, _value_text(v, F.modulus)])
    return buf.getvalue()


def dumps_witt(W: WittPair, modulus=None) -> str:
    header = {"format": WITT_FORMAT, "box": W.box}
    if modulus is not None:
        header["modulus"] = modulus
    rows = [
        [n, m, _value_text(W[(n, m)], modulus)]
        for n in range(W.box + 1) for m in range(W.box + 1)
    ]
    return _document(header, rows)


def dumps_slice(phi: JacobiSlice) -> str:
    header = {
        "format": SLICE_FORMAT,
        "weight": phi.weight,
        "index": phi.index,
        "qBound": phi.q_bound,
    }
    if phi.modulus is not None:
        header["modulus"] = phi.modulus
    rows = [[n, r, _value_text(v, phi.modulus)] for (n, r), v in phi.coeffs.items()]
    return _document(header, rows)


def atomic_write(path: Path, text: str):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def default_cache_dir() -> Path:
    return Path(os.environ.get("SMF_CACHE_DIR", ".smf-cache"))


class ExpansionCache:
    """Expansions keyed by (constructor name, box, modulus).

    Each entry is a canonical JSON file plus a sidecar recording its length
    and SHA-256; entries that fail the check are evicted and rebuilt.
    """

    def __init__(self, root: Path | str | None = None):
        self.root = Path(root) if root is not None else default_cache_dir()

    def _paths(self, name: str, box: int, modulus) -> tuple[Path, Path]:
        safe = re.sub(r"[^A-Za-z0-9_.-]", "_", name)
        digest = hashlib.sha256(_dump([name, box, modulus]).encode()).hexdigest()[:12]
        stem = f"{safe}-b{box}-{'QQ' if modulus is None else f'p{modulus}'}-{digest}"
        return self.root / f"{stem}.json", self.root / f"{stem}.meta.json"

    def lookup(self, name: str, box: int, modulus=None) -> str | None:
        data, meta = self._paths(name, box, modulus)
        if not (data.exists() and meta.exists()):
            return None
        try:
            info = json.loads(meta.read_text(encoding="utf-8"))
            raw = data.read_bytes()
        except (OSError, json.JSONDecodeError):
            self.evict(name, box, modulus)
            return None
        if len(raw) != info.get("length") or hashlib.sha256(raw).hexdigest() != info.get("sha256"):
            self.evict(name, box, modulus)
            return None
        return raw.decode("utf-8")

    def store(self, name: str, box: int, modulus, text: str):
        self.root.mkdir(parents=True, exist_ok=True)
        data, meta = self._paths(name, box, modulus)
        raw = text.encode("utf-8")
        atomic_write(data, text)
        info = {"key": [name, box, modulus], "length": len(raw),
                "sha256": hashlib.sha256(raw).hexdigest()}
        atomic_write(meta, _dump(info) + "\n")

    def evict(self, name: str, box: int, modulus=None):
        for path in self._paths(name, box, modulus):
            if path.exists():
                path.unlink()

    def get_text(self, name: str, box: int, modulus, build: Callable[[], SiegelExpansion]) -> str:
        text = self.lookup(name, box, modulus)
        if text is None:
            text = dumps_expansion(build())
            self.store(name, box, modulus, text)
        return text

    def get(self, name: str, box: int, modulus, build: Callable[[], SiegelExpansion]) -> SiegelExpansion:
        return loads_expansion(self.get_text(name, box, modulus, build))
