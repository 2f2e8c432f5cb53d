"""NDJSON corpora and pairwise distance matrices."""

from __future__ import annotations

import csv
import io
import multiprocessing
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, Iterable, Optional, Sequence

from . import _backend
from ._kernel_py import PyKernel
from .costs import Cost, CostModel, format_cost
from .errors import InputError, JsonParseError
from .forest import Forest
from .rlt import DEFAULT_MAX_DEPTH, JsonValue, dump_json, parse_json, to_rlt

ID_FIELD = "_id"


@dataclass(frozen=True)
class CorpusRecord:
    id: str
    doc: JsonValue


def _record_id(value: JsonValue, lineno: int) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (dict, list)) or value is None:
        raise InputError(f"line {lineno}: {ID_FIELD} must be a string, number or boolean")
    return dump_json(value)


def read_corpus(lines: Iterable, max_depth: int = DEFAULT_MAX_DEPTH) -> list[CorpusRecord]:
    """Parse NDJSON lines (str or bytes).

    A top-level ``"_id"`` member names the record and is removed from the
    document; otherwise the id is the 0-based line index. Blank lines are
    skipped but still counted.
    """
    records: list[CorpusRecord] = []
    seen: set[str] = set()
    for index, raw in enumerate(lines):
        lineno = index + 1
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise InputError(f"line {lineno}: not valid UTF-8 ({exc.reason})") from None
        if not raw.strip():
            continue
        try:
            doc = parse_json(raw, max_depth)
        except JsonParseError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
        if isinstance(doc, dict) and ID_FIELD in doc:
            rid = _record_id(doc.pop(ID_FIELD), lineno)
        else:
            rid = str(index)
        if rid in seen:
            raise InputError(f"line {lineno}: duplicate id {rid!r}")
        seen.add(rid)
        records.append(CorpusRecord(rid, doc))
    return records


def load_corpus(path, max_depth: int = DEFAULT_MAX_DEPTH) -> list[CorpusRecord]:
    try:
        with open(path, "rb") as fh:
            return read_corpus(fh, max_depth)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


# ---------------------------------------------------------------------------
# matrices

# worker state for the process pool (inherited on fork, rebuilt otherwise)
_WORKER: dict = {}


def _init_worker(forest: Forest) -> None:
    _WORKER["kernel"] = PyKernel(forest)


def _worker_rows(ids: list[int], rows: list[int]) -> dict[int, list]:
    return _WORKER["kernel"].fill_rows(ids, rows)


def _chunks(n: int, parts: int) -> list[list[int]]:
    # interleaved so every chunk gets a mix of long and short upper-triangle rows
    return [c for c in (list(range(k, n, parts)) for k in range(parts)) if c]


def distance_matrix(
    docs: Sequence[JsonValue],
    model: Optional[CostModel] = None,
    *,
    parallelism: int = 1,
    backend: Optional[str] = None,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> list[list[Cost]]:
    """Symmetric matrix of pairwise distances with a zero diagonal.

    Only the upper triangle is evaluated. Workers are threads over the
    compiled kernel (which releases the GIL) or processes over the Python
    kernel; every worker owns its memo, so the result never depends on how
    rows were scheduled.
    """
    model = model or CostModel.unit()
    parallelism = max(1, int(parallelism))
    forest = Forest(model, max_depth)
    ids = [forest.add(to_rlt(d, max_depth).root) for d in docs]
    n = len(ids)
    chunks = _chunks(n, min(parallelism, max(n, 1)))

    kernel = _backend.make_kernel(forest, backend)
    upper: dict[int, list] = {}
    if len(chunks) <= 1:
        for rows in chunks:
            upper.update(kernel.fill_rows(ids, rows))
    elif isinstance(kernel, _backend.CompiledKernel):
        kernels = [kernel] + [kernel.sibling() for _ in chunks[1:]]
        with ThreadPoolExecutor(len(chunks)) as pool:
            for part in pool.map(lambda kr: kr[0].fill_rows(ids, kr[1]), zip(kernels, chunks)):
                upper.update(part)
    else:
        methods = multiprocessing.get_all_start_methods()
        ctx = multiprocessing.get_context("fork" if "fork" in methods else None)
        with ProcessPoolExecutor(len(chunks), mp_context=ctx, initializer=_init_worker, initargs=(forest,)) as pool:
            for part in pool.map(_worker_rows, [ids] * len(chunks), chunks):
                upper.update(part)

    matrix: list[list[Cost]] = [[0] * n for _ in range(n)]
    for i in range(n):
        for off, d in enumerate(upper[i]):
            j = i + 1 + off
            matrix[i][j] = d
            matrix[j][i] = d
    return matrix


def write_matrix_csv(ids: Sequence[str], matrix: Sequence[Sequence[Cost]], out: IO[str]) -> None:
    """Header row of ids, then one row of formatted costs per id."""
    writer = csv.writer(out, lineterminator="\r\n")
    writer.writerow(ids)
    for row in matrix:
        writer.writerow([format_cost(c) for c in row])


def matrix_csv(ids: Sequence[str], matrix: Sequence[Sequence[Cost]]) -> str:
    buf = io.StringIO()
    write_matrix_csv(ids, matrix, buf)
    return buf.getvalue()
