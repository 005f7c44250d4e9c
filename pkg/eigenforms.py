#!/usr/bin/env python3
"""
Ramanujan tau and the normalized Hecke eigenvalues of the weight-12 cusp
form Delta, together with the coefficient streams fed to every sum.

tau(n) is the coefficient of q^n in q * prod (1 - q^k)^24. The product is
built as (prod (1 - q^k)^3)^8: the cube has Jacobi's sparse expansion
sum (-1)^k (2k+1) q^(k(k+1)/2), and three squarings take it to the 24th
power. Squarings are done modulo a handful of 30-bit primes with a
limb-split float FFT and the exact integers are recovered by CRT.
"""

import cmath
import math
import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

import arith
import config
from errors import CacheFormatError, InvalidArgumentError, OutOfRangeError, ResourceLimitError

WEIGHT_SHIFT = config.TAU_WEIGHT - 1  # p^11 in the Hecke relation
CACHE_MAGIC = "TAUCACHE"
CACHE_VERSION = "v1"

COEFFICIENT_KINDS = ("unit", "hecke", "hecke-square-at-primes", "sym2-full")


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TauTable:
    n_max: int
    tau: Tuple[int, ...]

    def __post_init__(self):
        if len(self.tau) != self.n_max:
            raise InvalidArgumentError(
                f"table holds {len(self.tau)} values but n_max={self.n_max}")

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.n_max:
            raise OutOfRangeError(f"tau({n}) requested but table covers n <= {self.n_max}")
        return self.tau[n - 1]

    def covers(self, n: int) -> bool:
        return 1 <= n <= self.n_max

    def truncated(self, n_max: int) -> "TauTable":
        if n_max > self.n_max:
            raise OutOfRangeError(f"cannot truncate table of size {self.n_max} to {n_max}")
        return TauTable(n_max=n_max, tau=self.tau[:n_max])

    @cached_property
    def lambdas(self) -> np.ndarray:
        """lambda(n) for n = 1..n_max as float64 (index n-1)."""
        n = np.arange(1, self.n_max + 1, dtype=np.float64)
        values = np.array([float(t) for t in self.tau], dtype=np.float64)
        out = values / (n ** 5 * np.sqrt(n))
        out.flags.writeable = False
        return out


@dataclass(frozen=True)
class SatakeAngle:
    p: int
    alpha: complex

    @property
    def theta(self) -> float:
        return cmath.phase(self.alpha)


# ---------------------------------------------------------------------------
# Power-series construction
# ---------------------------------------------------------------------------

_FFT_LIMB_BITS = 10
_FFT_LIMBS = 3
_CRT_PRIME_TOP = 1 << 30


def _eta_cubed(length: int) -> Tuple[np.ndarray, np.ndarray]:
    """Exponents and coefficients of prod (1-q^k)^3 below q^length."""
    exps: List[int] = []
    coeffs: List[int] = []
    k = 0
    while k * (k + 1) // 2 < length:
        exps.append(k * (k + 1) // 2)
        coeffs.append((-1) ** k * (2 * k + 1))
        k += 1
    return np.array(exps, dtype=np.int64), np.array(coeffs, dtype=np.int64)


def _sparse_square(exps: np.ndarray, coeffs: np.ndarray, length: int) -> np.ndarray:
    """Exact square of a sparse series, truncated below q^length."""
    out = np.zeros(length, dtype=np.int64)
    for e, c in zip(exps.tolist(), coeffs.tolist()):
        keep = exps + e < length
        np.add.at(out, exps[keep] + e, coeffs[keep] * c)
    return out


def _square_mod(a: np.ndarray, p: int, length: int) -> np.ndarray:
    """a*a mod p truncated below q^length; a has entries in [0, p)."""
    size = 1 << (2 * len(a) - 1).bit_length()
    mask = (1 << _FFT_LIMB_BITS) - 1
    spectra = [np.fft.rfft(((a >> (_FFT_LIMB_BITS * i)) & mask).astype(np.float64), size)
               for i in range(_FFT_LIMBS)]

    out = np.zeros(length, dtype=np.int64)
    for i in range(_FFT_LIMBS):
        for j in range(i, _FFT_LIMBS):
            conv = np.rint(np.fft.irfft(spectra[i] * spectra[j], size)[:length]).astype(np.int64)
            if i != j:
                conv *= 2
            conv %= p
            shift = pow(2, _FFT_LIMB_BITS * (i + j), p)
            out = (out + conv * shift) % p
    return out


@lru_cache(maxsize=4)
def _crt_primes(count: int) -> Tuple[int, ...]:
    primes: List[int] = []
    candidate = _CRT_PRIME_TOP - 1
    while len(primes) < count:
        if arith.is_prime(candidate):
            primes.append(candidate)
        candidate -= 2
    return tuple(primes)


def _primes_needed(n_max: int) -> int:
    # |tau(n)| <= d(n) n^(11/2) <= 2 n^6
    bound_bits = (2 * n_max ** 6).bit_length() + 2
    return max(1, -(-bound_bits // 29))


def _delta_mod(p6: np.ndarray, p: int, length: int) -> np.ndarray:
    """prod (1-q^k)^24 mod p from the exact 6th power."""
    a = np.mod(p6, p)
    a = _square_mod(a, p, length)
    return _square_mod(a, p, length)


def _crt_combine(residues: Sequence[np.ndarray], primes: Sequence[int]) -> List[int]:
    """Garner reconstruction to symmetric residues modulo prod(primes)."""
    digits = [residues[0]]
    for k in range(1, len(primes)):
        pk = primes[k]
        acc = np.zeros_like(residues[k])
        coef = 1
        for i in range(k):
            acc = (acc + digits[i] * coef) % pk
            coef = coef * primes[i] % pk
        inv = pow(coef, -1, pk)
        digits.append(((residues[k] - acc) % pk) * inv % pk)

    values = digits[0].astype(object)
    radix = 1
    for k in range(1, len(primes)):
        radix *= primes[k - 1]
        values = values + digits[k].astype(object) * radix
    modulus = radix * primes[-1]
    half = modulus // 2
    return [int(v) - modulus if v > half else int(v) for v in values]


def compute_tau(n_max: int, workers: int = 1) -> TauTable:
    """Exact tau(n) for 1 <= n <= n_max."""
    if n_max < 1:
        raise InvalidArgumentError(f"n_max must be >= 1, got {n_max}")
    if n_max > config.TAU_CEILING:
        raise ResourceLimitError(
            f"n_max={n_max} exceeds the configured ceiling {config.TAU_CEILING} "
            f"(raise HECKE_TAU_CEILING to allow it)")

    length = n_max  # coefficient of q^(n-1) in the product is tau(n)
    exps, coeffs = _eta_cubed(length)
    p6 = _sparse_square(exps, coeffs, length)

    primes = _crt_primes(_primes_needed(n_max))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=min(workers, len(primes))) as executor:
            residues = list(executor.map(lambda p: _delta_mod(p6, p, length), primes))
    else:
        residues = [_delta_mod(p6, p, length) for p in primes]

    return TauTable(n_max=n_max, tau=tuple(_crt_combine(residues, primes)))


# ---------------------------------------------------------------------------
# Eigenvalues and identities
# ---------------------------------------------------------------------------

def hecke_lambda(table: TauTable, n: int) -> float:
    """lambda(n) = tau(n) / n^(11/2)."""
    if not table.covers(n):
        raise OutOfRangeError(f"lambda({n}) requested but table covers n <= {table.n_max}")
    return float(table.lambdas[n - 1])


def _require_prime(p: int) -> None:
    if not arith.is_prime(p):
        raise InvalidArgumentError(f"{p} is not prime")


def lambda_square_identity(table: TauTable, p: int) -> Tuple[float, float]:
    """(lambda(p)^2, 1 + lambda(p^2)) from tabulated tau(p), tau(p^2)."""
    _require_prime(p)
    if not table.covers(p * p):
        raise OutOfRangeError(f"need n_max >= {p * p} for p={p}, table has {table.n_max}")
    lam = hecke_lambda(table, p)
    return lam * lam, 1.0 + hecke_lambda(table, p * p)


def satake_angle(table: TauTable, p: int) -> SatakeAngle:
    _require_prime(p)
    lam = hecke_lambda(table, p)
    half = lam / 2.0
    return SatakeAngle(p=p, alpha=complex(half, math.sqrt(max(0.0, 1.0 - half * half))))


def euler_log_coeffs(angle: SatakeAngle, k: int) -> complex:
    """b_{p^k} = (alpha^k + conj(alpha)^k) / k."""
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    return complex(2.0 * math.cos(k * angle.theta) / k, 0.0)


def hecke_from_satake(angle: SatakeAngle, k: int) -> float:
    """lambda(p^k) = U_k(lambda(p)/2) rebuilt from the Satake parameter."""
    lam = 2.0 * angle.alpha.real
    prev, cur = 1.0, lam
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, lam * cur - prev
    return cur


def tau_prime_power(tau_p: int, p: int, k: int) -> int:
    """tau(p^k) from tau(p) by the Hecke recursion."""
    prev, cur = 1, tau_p
    if k == 0:
        return 1
    pw = p ** WEIGHT_SHIFT
    for _ in range(k - 1):
        prev, cur = cur, tau_p * cur - pw * prev
    return cur


def tau_extended(table: TauTable, n: int) -> int:
    """Exact tau(n) for any n whose prime factors are tabulated."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if table.covers(n):
        return table[n]
    result = 1
    for p, e in arith.factorize(n).factors:
        if not table.covers(p):
            raise OutOfRangeError(f"tau({n}) needs tau({p}); table covers n <= {table.n_max}")
        pe = p ** e
        result *= table[pe] if table.covers(pe) else tau_prime_power(table[p], p, e)
    return result


def lambda_extended(table: TauTable, n: int) -> float:
    """tau_extended(n) / n^(11/2)."""
    return float(tau_extended(table, n)) / (float(n) ** 5 * math.sqrt(n))


def sym2_coefficient(table: TauTable, n: int, kind: str = "sym2-full") -> float:
    """
    Coefficients of the symmetric-square L-function.

    kind="hecke-square-at-primes": n prime, returns lambda(n^2).
    kind="sym2-full": sum over d^2 | n of lambda((n/d^2)^2).
    """
    if kind == "hecke-square-at-primes":
        _require_prime(n)
        if not table.covers(n):
            raise OutOfRangeError(f"need n_max >= {n}, table has {table.n_max}")
        return _lambda_p_squared(table, n)
    if kind != "sym2-full":
        raise InvalidArgumentError(f"unknown symmetric-square kind {kind!r}")
    if not table.covers(n):
        raise OutOfRangeError(f"need n_max >= {n}, table has {table.n_max}")

    total = 0.0
    d = 1
    while d * d <= n:
        if n % (d * d) == 0:
            m = n // (d * d)
            total += lambda_extended(table, m * m)
        d += 1
    return total


def _lambda_p_squared(table: TauTable, p: int) -> float:
    pw = p ** WEIGHT_SHIFT
    if table.covers(p * p):
        return float(Fraction(table[p * p], pw))
    t = table[p]
    return float(Fraction(t * t - pw, pw))


def sym2_euler_check(table: TauTable, p: int, k: int) -> Tuple[float, float]:
    """
    Coefficient of x^k in 1/((1-a^2 x)(1-x)(1-conj(a)^2 x)) against the
    sym2-full coefficient at p^k.
    """
    angle = satake_angle(table, p)
    roots = (angle.alpha ** 2, 1.0 + 0j, angle.alpha.conjugate() ** 2)
    # complete homogeneous symmetric polynomial h_k(roots)
    series = [1.0 + 0j] + [0j] * k
    for r in roots:
        for i in range(1, k + 1):
            series[i] += r * series[i - 1]
    return series[k].real, sym2_coefficient(table, p ** k)


# ---------------------------------------------------------------------------
# Coefficient streams
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoefficientSequence:
    kind: str
    table: Optional[TauTable] = None

    def __post_init__(self):
        if self.kind not in COEFFICIENT_KINDS:
            raise InvalidArgumentError(
                f"unknown coefficient kind {self.kind!r}; choose from {', '.join(COEFFICIENT_KINDS)}")
        if self.kind != "unit" and self.table is None:
            raise InvalidArgumentError(f"coefficient kind {self.kind!r} needs a tau table")

    @property
    def n_max(self) -> Optional[int]:
        return None if self.table is None else self.table.n_max

    def _check(self, hi: int) -> None:
        if self.table is not None and hi > self.table.n_max:
            raise OutOfRangeError(
                f"{self.kind} coefficients up to n={hi} need a tau table with n_max >= {hi} "
                f"(current n_max={self.table.n_max})")

    def at(self, ns) -> np.ndarray:
        """a_n for an integer array of indices."""
        ns = np.asarray(ns, dtype=np.int64)
        if ns.size == 0:
            return np.zeros(0, dtype=np.float64)
        if int(ns.min()) < 1:
            raise InvalidArgumentError("coefficient indices start at 1")
        if self.kind == "unit":
            return np.ones(ns.shape, dtype=np.float64)
        self._check(int(ns.max()))
        if self.kind == "hecke":
            return self.table.lambdas[ns - 1]
        if self.kind == "hecke-square-at-primes":
            out = np.zeros(ns.shape, dtype=np.float64)
            out[ns == 1] = 1.0
            for i, n in enumerate(ns.tolist()):
                if n > 1 and arith.is_prime(n):
                    out[i] = _lambda_p_squared(self.table, n)
            return out
        return np.array([sym2_coefficient(self.table, n) for n in ns.tolist()], dtype=np.float64)

    def values(self, lo: int, hi: int) -> np.ndarray:
        """a_n for lo < n <= hi."""
        return self.at(np.arange(lo + 1, hi + 1, dtype=np.int64))

    def __call__(self, n: int) -> float:
        return float(self.at([n])[0])


def _three_fold_divisors(n: int) -> int:
    return arith.multiply(((e + 1) * (e + 2) // 2, 1) for _, e in arith.factorize(n).factors)


def ramanujan_surrogate_ok(seq: CoefficientSequence, n_hi: int,
                           eps0: float = config.RAMANUJAN_EPS0) -> bool:
    """|a_n| <= B(n) n^eps0.

    B is d(n) for unit and hecke, d(n^2) for hecke-square-at-primes (only
    primes carry weight, where |lambda(p^2)| <= 3) and the three-fold
    divisor count d_3(n) for sym2-full, whose local factor at p^e sums
    C(e + 2, 2) unimodular terms.
    """
    ns = np.arange(1, n_hi + 1)
    a = np.abs(seq.at(ns))
    if seq.kind in ("unit", "hecke"):
        d = arith.divisor_counts(n_hi)[1:].astype(np.float64)
    elif seq.kind == "hecke-square-at-primes":
        d = np.array([arith.num_divisors(n * n) for n in ns.tolist()], dtype=np.float64)
    else:
        d = np.array([_three_fold_divisors(n) for n in ns.tolist()], dtype=np.float64)
    return bool(np.all(a <= d * ns ** eps0 * (1 + 1e-12)))


# ---------------------------------------------------------------------------
# Cache file
# ---------------------------------------------------------------------------

def save_table(table: TauTable, path: Union[str, Path]) -> None:
    """Write the v1 text cache (header, one tau per line, CRC32 trailer)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{CACHE_MAGIC} {CACHE_VERSION} {table.n_max}"]
    lines.extend(str(t) for t in table.tau)
    body = ("\n".join(lines) + "\n").encode("ascii")
    trailer = f"CRC32 {zlib.crc32(body):08x}\n".encode("ascii")
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as f:
        f.write(body + trailer)
    os.replace(tmp, path)


def load_table(path: Union[str, Path]) -> TauTable:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise CacheFormatError(f"cannot read cache: {e}", path=str(path)) from e

    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError as e:
        raise CacheFormatError("cache is not ASCII text", path=str(path)) from e
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise CacheFormatError("empty cache file", path=str(path), line=1)

    header = lines[0].split()
    if len(header) != 3 or header[0] != CACHE_MAGIC:
        raise CacheFormatError(f"bad magic in header {lines[0]!r}", path=str(path), line=1)
    if header[1] != CACHE_VERSION:
        raise CacheFormatError(f"unsupported cache version {header[1]!r}", path=str(path), line=1)
    try:
        n_max = int(header[2])
    except ValueError:
        raise CacheFormatError(f"bad n_max {header[2]!r}", path=str(path), line=1) from None

    if len(lines) != n_max + 2:
        raise CacheFormatError(
            f"truncated cache: expected {n_max + 2} lines, found {len(lines)}",
            path=str(path), line=len(lines))

    trailer = lines[-1].split()
    if len(trailer) != 2 or trailer[0] != "CRC32":
        raise CacheFormatError(f"bad checksum line {lines[-1]!r}", path=str(path), line=len(lines))
    body_end = raw.rfind(b"CRC32 ")
    expected = f"{zlib.crc32(raw[:body_end]):08x}"
    if trailer[1].lower() != expected:
        raise CacheFormatError(
            f"checksum mismatch (file says {trailer[1]}, content gives {expected})",
            path=str(path), line=len(lines))

    values = []
    for i, line in enumerate(lines[1:-1], start=2):
        try:
            values.append(int(line))
        except ValueError:
            raise CacheFormatError(f"not an integer: {line!r}", path=str(path), line=i) from None
    return TauTable(n_max=n_max, tau=tuple(values))


# Loaded tables, keyed by cache path
_table_cache: Dict[str, TauTable] = {}


def cache_path(cache_dir: Union[str, Path, None] = None) -> Path:
    return Path(cache_dir if cache_dir is not None else config.CACHE_DIR) / config.CACHE_FILE_NAME


def cached_tau_table(n_max: int, cache_dir: Union[str, Path, None] = None,
                     force: bool = False, workers: int = 1) -> Tuple[TauTable, str]:
    """
    Load tau from the disk cache, building it when missing or too small.

    Returns the table and one of "hit", "miss", "rebuilt". A corrupt cache
    raises CacheFormatError unless force is set.
    """
    path = cache_path(cache_dir)
    key = str(path.resolve())
    held = _table_cache.get(key)
    if held is not None and held.n_max >= n_max:
        return held.truncated(n_max), "hit"

    status = "miss"
    if path.exists():
        try:
            table = load_table(path)
        except CacheFormatError:
            if not force:
                raise
            table = None
            status = "rebuilt"
        if table is not None:
            _table_cache[key] = table
            if table.n_max >= n_max:
                return table.truncated(n_max), "hit"

    table = compute_tau(n_max, workers=workers)
    save_table(table, path)
    _table_cache[key] = table
    return table, status


def load_cached_table(n_hi: int, cache_dir: Union[str, Path, None] = None) -> TauTable:
    """An existing cache covering n_hi; never computes."""
    path = cache_path(cache_dir)
    if not path.exists():
        raise FileNotFoundError(
            f"no tau cache at {path}; run `hecke_sums.py tau --n-max {n_hi}` first")
    table = load_table(path)
    if table.n_max < n_hi:
        raise OutOfRangeError(
            f"tau cache at {path} covers n <= {table.n_max}, need {n_hi}; "
            f"run `hecke_sums.py tau --n-max {n_hi}`")
    return table


if __name__ == "__main__":
    t = compute_tau(30)
    print("tau(1..10):", t.tau[:10])
    print("lambda(2) =", hecke_lambda(t, 2))
    print("lambda(2)^2, 1+lambda(4) =", lambda_square_identity(t, 2))
    print("sym2 at 4 =", sym2_coefficient(t, 4))
