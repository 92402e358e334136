"""Exact partition numbers from Euler's pentagonal-number recurrence."""
from __future__ import annotations

import struct
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Iterator, Sequence

import mpmath

from .numerics import PrecisionContext

NEGATIVE, ZERO, POSITIVE = "negative", "zero", "positive"

CACHE_MAGIC = b"PART"
CACHE_VERSION = 1


class OracleRangeError(IndexError):
    """Requested index lies outside the exact table."""


class OracleTooSmall(OracleRangeError):
    def __init__(self, required: int, available: int):
        super().__init__(f"exact table holds p(0..{available}); need n_max >= {required}")
        self.required = required
        self.available = available


def _pentagonal_offsets(n_max: int) -> list[tuple[int, int]]:
    """(offset, sign) pairs j(3j-1)/2 and j(3j+1)/2 up to n_max, in increasing order."""
    out = []
    j = 1
    while True:
        a = j * (3 * j - 1) // 2
        if a > n_max:
            break
        sign = 1 if j % 2 else -1
        out.append((a, sign))
        b = j * (3 * j + 1) // 2
        if b <= n_max:
            out.append((b, sign))
        j += 1
    return out


@dataclass(frozen=True)
class ExactPartitionTable:
    values: tuple[int, ...]

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def __len__(self) -> int:
        return len(self.values)

    def p(self, n: int) -> int:
        if n < 0 or n > self.n_max:
            raise OracleRangeError(f"p({n}) outside table range 0..{self.n_max}")
        return self.values[n]

    def __getitem__(self, n: int) -> int:
        return self.p(n)

    def require(self, n: int) -> None:
        if n > self.n_max:
            raise OracleTooSmall(n, self.n_max)

    # -- binary cache -------------------------------------------------------

    def save(self, path: str | Path) -> None:
        chunks = [CACHE_MAGIC, struct.pack("<IQ", CACHE_VERSION, len(self.values))]
        for v in self.values:
            raw = v.to_bytes(max(1, (v.bit_length() + 7) // 8), "little")
            chunks.append(struct.pack("<I", len(raw)))
            chunks.append(raw)
        Path(path).write_bytes(b"".join(chunks))

    @classmethod
    def load(cls, path: str | Path) -> "ExactPartitionTable":
        data = Path(path).read_bytes()
        if data[:4] != CACHE_MAGIC:
            raise ValueError(f"{path}: not a partition table cache")
        version, count = struct.unpack_from("<IQ", data, 4)
        if version != CACHE_VERSION:
            raise ValueError(f"{path}: unsupported cache version {version}")
        pos = 16
        values = []
        for _ in range(count):
            (length,) = struct.unpack_from("<I", data, pos)
            pos += 4
            values.append(int.from_bytes(data[pos:pos + length], "little"))
            pos += length
        if pos != len(data):
            raise ValueError(f"{path}: trailing bytes in cache")
        return cls(tuple(values))


def build_table(n_max: int, prefix: Sequence[int] | None = None) -> ExactPartitionTable:
    """p(0..n_max) via the pentagonal recurrence; ``prefix`` resumes an earlier build."""
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    p = list(prefix) if prefix else [1]
    if len(p) > n_max + 1:
        return ExactPartitionTable(tuple(p[: n_max + 1]))
    offsets = _pentagonal_offsets(n_max)
    for n in range(len(p), n_max + 1):
        s = 0
        for off, sign in offsets:
            if off > n:
                break
            if sign > 0:
                s += p[n - off]
            else:
                s -= p[n - off]
        p.append(s)
    return ExactPartitionTable(tuple(p))


def load_or_build(n_max: int, cache: str | Path | None = None) -> ExactPartitionTable:
    """Reuse a cache file when it is large enough, otherwise extend it and rewrite."""
    if cache is not None and Path(cache).exists():
        table = ExactPartitionTable.load(cache)
        if table.n_max >= n_max:
            return table
        table = build_table(n_max, table.values)
    else:
        table = build_table(n_max)
    if cache is not None:
        table.save(cache)
    return table


def exact_quotient_rational(table: ExactPartitionTable, n: int, k: int) -> Fraction:
    if n < 1 or k < 1:
        raise ValueError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    table.require(n + k)
    return Fraction(table[n + k], table[n])


def exact_quotient(table: ExactPartitionTable, n: int, k: int, ctx: PrecisionContext) -> mpmath.mpf:
    """p(n+k)/p(n) rounded to the working precision."""
    q = exact_quotient_rational(table, n, k)
    with ctx.work():
        return mpmath.mpf(q.numerator) / q.denominator


def delta(table: ExactPartitionTable, r: int, j: int, n: int) -> int:
    """r-fold backward difference with step j: sum_i (-1)^i C(r,i) p(n - i j)."""
    if r < 1 or j < 1:
        raise ValueError(f"need r >= 1 and j >= 1, got r={r}, j={j}")
    if n < r * j:
        raise OracleRangeError(f"delta needs n >= r*j = {r * j}, got n={n}")
    table.require(n)
    return sum((-1) ** i * comb(r, i) * table[n - i * j] for i in range(r + 1))


def delta_sign(table: ExactPartitionTable, r: int, j: int, n: int) -> str:
    d = delta(table, r, j, n)
    return POSITIVE if d > 0 else NEGATIVE if d < 0 else ZERO


def is_log_concave_at(table: ExactPartitionTable, n: int) -> bool:
    table.require(n + 1)
    return table[n] ** 2 >= table[n - 1] * table[n + 1]


def partitions(n: int) -> Iterator[list[int]]:
    """Every partition of n as a nondecreasing list of parts (Kelleher's ascending-composition generator)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        yield []
        return
    a = [0] * (n + 1)
    k = 1
    y = n - 1
    while k != 0:
        x = a[k - 1] + 1
        k -= 1
        while 2 * x <= y:
            a[k] = x
            y -= x
            k += 1
        last = k + 1
        while x <= y:
            a[k] = x
            a[last] = y
            yield a[: k + 2]
            x += 1
            y -= 1
        a[k] = x + y
        y = x + y - 1
        yield a[: k + 1]


def brute_force_count(n: int) -> int:
    """Count partitions of n by enumerating all of them."""
    return sum(1 for _ in partitions(n))
