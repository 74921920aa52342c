"""Integral enumeration of the s = 1 subfamily, plus the data plumbing
around it.

The curves swept here are the fibers of the family at s = 1.  For
t = p/q in lowest terms, rescaling by d = q turns the fiber into the
integral model

    y^2 = (x - pq)^2 (x + 2pq) + 9 p^2 q^4
        = x^3 - 3 (pq)^2 x + (2 p^3 q^3 + 9 p^2 q^4),

whose marked point is (-2pq, -3pq^2).  Each enumerated t becomes a
SearchRecord carrying the exact height

    h(t) = max{(3 p^2 q^2)^3, (2 p^3 q^3 + 9 p^2 q^4)^2},

a nonzero-discriminant flag, and a non-torsion flag for the marked
point; a record is a *candidate* when both flags hold.  Ranks are not
computed here: they arrive from an external oracle file and get
attached to records by key.

The published totals for h(t) <= H^6 (823 at H = 10 up through 74069 at
H = 60) could not be reproduced from the stated height cut under this
convention or any close variant; `convention_sweep` enumerates the
plausible readings side by side so a mismatch is reported with data
instead of being papered over.  See TABLE_TOTALS and the sweep
docstring.

The module also hosts the small-conductor database filter: given a
table of rank-1 curves it reduces each to a twist-minimal short
Weierstrass model, keeps those of the shape y^2 = x^3 - 3t^2 x + b,
discards the ones whose shape parameter is the x-coordinate of a
torsion point, and flags those where b - 2t^3 is a perfect square (the
ones carrying a rational marked point).
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Optional, Sequence

import sympy

from .ec_core import (
    CurvePoint,
    WeierstrassCurve,
    is_torsion_overQ,
    torsion_points_overQ,
)
from .family import make_member

__all__ = [
    "TABLE_TOTALS",
    "ParseError",
    "SearchConvention",
    "DEFAULT_CONVENTION",
    "SearchRecord",
    "height_of",
    "integral_coefficients",
    "enumerate_s1",
    "SweepEntry",
    "convention_sweep",
    "format_sweep",
    "load_rank_oracle",
    "attach_ranks",
    "pair_counts",
    "PairingSummary",
    "pairing_summary",
    "records_to_csv",
    "records_from_csv",
    "CurveDbEntry",
    "parse_curve_db",
    "DbCurveClassification",
    "DbFilterReport",
    "filter_db_family_candidates",
    "candidates_in_family",
]

#: Published candidate totals per height bound H; the enumeration
#: convention behind them is unknown (no reading of the height cut we
#: tried reproduces 823 at H = 10; see convention_sweep).
TABLE_TOTALS = {10: 823, 20: 4710, 30: 13055, 40: 26828, 50: 46956, 60: 74069}


class ParseError(ValueError):
    """Malformed line in an oracle or database file."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


# ---------------------------------------------------------------------------
# enumeration


@dataclass(frozen=True)
class SearchConvention:
    """Flags selecting how the t-line is swept.

    sign: "both" sweeps p over both signs, "positive"/"negative"
    restrict it.  include_zero adds the t = 0 record (it can never be a
    candidate: the s = 1 fiber at t = 0 is singular).  reduced_only=False
    keeps non-reduced pairs (p, q) as separate records for sensitivity
    analysis; such records break the coprimality invariant on purpose.
    """

    sign: str = "both"
    include_zero: bool = False
    reduced_only: bool = True

    def __post_init__(self):
        if self.sign not in ("both", "positive", "negative"):
            raise ValueError(f"unknown sign convention {self.sign!r}")


DEFAULT_CONVENTION = SearchConvention()


def height_of(p: int, q: int) -> int:
    """max{(3 p^2 q^2)^3, (2 p^3 q^3 + 9 p^2 q^4)^2}, exactly."""
    first = 3 * p * p * q * q
    second = 2 * p**3 * q**3 + 9 * p * p * q**4
    return max(first**3, second * second)


def integral_coefficients(p: int, q: int) -> tuple[int, int]:
    """(a, b) of the integral model y^2 = x^3 + a x + b at t = p/q."""
    return -3 * p * p * q * q, 2 * p**3 * q**3 + 9 * p * p * q**4


@dataclass(frozen=True)
class SearchRecord:
    p: int
    q: int
    height_value: int
    disc_ok: bool
    non_torsion_ok: bool
    rank: Optional[int] = None

    @property
    def t(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def curve_integral(self) -> tuple[int, int]:
        return integral_coefficients(self.p, self.q)

    @property
    def is_candidate(self) -> bool:
        return self.disc_ok and self.non_torsion_ok

    def sort_key(self) -> tuple[int, int, int]:
        return (self.height_value, self.p, self.q)


def _make_record(pq: tuple[int, int]) -> SearchRecord:
    p, q = pq
    a, b = integral_coefficients(p, q)
    disc_ok = -16 * (4 * a**3 + 27 * b * b) != 0
    non_torsion = False
    if disc_ok:
        curve = WeierstrassCurve(Fraction(a), Fraction(b))
        point = CurvePoint(Fraction(-2 * p * q), Fraction(-3 * p * q * q))
        non_torsion = not is_torsion_overQ(curve, point)
    return SearchRecord(p, q, height_of(p, q), disc_ok, non_torsion)


def _candidate_pairs(H: int, convention: SearchConvention) -> list[tuple[int, int]]:
    # (3 p^2 q^2)^3 <= H^6 pins |pq| <= sqrt(H^2 / 3); the second height
    # term is checked per pair because it is not monotone in |p|.
    bound6 = H**6
    pq_max = isqrt(H * H // 3)
    pairs = []
    for q in range(1, pq_max + 1):
        for ap in range(1, pq_max // q + 1):
            if convention.reduced_only and gcd(ap, q) != 1:
                continue
            signs = {"both": (1, -1), "positive": (1,), "negative": (-1,)}[
                convention.sign
            ]
            for sign in signs:
                p = sign * ap
                if height_of(p, q) <= bound6:
                    pairs.append((p, q))
    if convention.include_zero:
        pairs.append((0, 1))
    return pairs


def _worker_count() -> int:
    raw = os.environ.get("CLEANPAIR_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"CLEANPAIR_THREADS must be an integer, got {raw!r}")
    return max(1, n)


def enumerate_s1(
    H: int, convention: SearchConvention = DEFAULT_CONVENTION
) -> list[SearchRecord]:
    """All SearchRecords with h(t) <= H^6 under the given convention,
    sorted by (height, p, q).

    The per-record torsion tests are data-parallel; CLEANPAIR_THREADS
    bounds the pool and the final sort makes the output independent of
    chunking.
    """
    if H < 1:
        raise ValueError("H must be a positive integer")
    pairs = _candidate_pairs(H, convention)
    workers = _worker_count()
    if workers == 1 or len(pairs) < 4:
        records = [_make_record(pq) for pq in pairs]
    else:
        chunk = max(1, len(pairs) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_make_record, pairs, chunksize=chunk))
    records.sort(key=SearchRecord.sort_key)
    return records


# ---------------------------------------------------------------------------
# convention sweep
#
# The published totals grow like H^(5/2), which no sweep of reduced
# fractions can produce (those grow like H log H under the stated height
# cut).  The only readings with the right growth enumerate integral
# models y^2 = (x - u)^2 (x + 2u) + v^2 directly, i.e. pairs (u, v)
# rather than reduced fractions; each such model is the d = v/(3u)
# rescaling of the s = 1 fiber at t = 9u^3/v^2.  None of the variants
# below lands on 823 at H = 10 either, so the sweep exists to report the
# deltas rather than to pick a winner.


@dataclass(frozen=True)
class SweepEntry:
    name: str
    records: int
    candidates: int
    target: Optional[int]

    @property
    def delta(self) -> Optional[int]:
        return None if self.target is None else self.candidates - self.target


def _model_is_candidate(u: int, b: int) -> bool:
    """Non-torsion test for (-2u, v) on y^2 = x^3 - 3u^2 x + b, b = 2u^3 + v^2."""
    a = -3 * u * u
    if 4 * a**3 + 27 * b * b == 0:
        return False
    v2 = b - 2 * u**3
    v = isqrt(v2)
    curve = WeierstrassCurve(Fraction(a), Fraction(b))
    point = CurvePoint(Fraction(-2 * u), Fraction(v))
    return not is_torsion_overQ(curve, point)


def _sweep_models(
    H: int, both_sign_v: bool = False, coprime: bool = False, dedupe_curve: bool = False
) -> tuple[int, int]:
    H3 = H**3
    u_max = isqrt(H * H // 3)
    records = candidates = 0
    seen: set[tuple[int, int]] = set()
    for au in range(1, u_max + 1):
        for u in (au, -au):
            head = H3 - 2 * u**3
            if head < 1:
                continue
            for v in range(1, isqrt(head) + 1):
                if coprime and gcd(u, v) != 1:
                    continue
                b = 2 * u**3 + v * v
                weight = 2 if both_sign_v else 1
                if dedupe_curve:
                    key = (u, b)
                    if key in seen:
                        continue
                    seen.add(key)
                    weight = 1
                records += weight
                if _model_is_candidate(u, b):
                    candidates += weight
    return records, candidates


def _sweep_fraction_counts(H: int, convention: SearchConvention) -> tuple[int, int]:
    records = enumerate_s1(H, convention)
    return len(records), sum(1 for r in records if r.is_candidate)


def _sweep_integer_t(H: int) -> tuple[int, int]:
    bound6 = H**6
    records = candidates = 0
    for at in range(1, isqrt(H * H // 3) + 1):
        for t in (at, -at):
            if height_of(t, 1) > bound6:
                continue
            records += 1
            if _make_record((t, 1)).is_candidate:
                candidates += 1
    return records, candidates


def convention_sweep(H: int) -> list[SweepEntry]:
    """Record/candidate counts for each plausible enumeration convention.

    "reduced-both" is the default convention.  The "models-*" entries
    sweep integral models (u, v) with max{(3u^2)^3, (2u^3 + v^2)^2} <= H^6
    instead of reduced fractions.
    """
    target = TABLE_TOTALS.get(H)
    runs = [
        ("reduced-both", lambda: _sweep_fraction_counts(H, DEFAULT_CONVENTION)),
        (
            "reduced-positive",
            lambda: _sweep_fraction_counts(H, SearchConvention(sign="positive")),
        ),
        (
            "pairs-any-gcd",
            lambda: _sweep_fraction_counts(H, SearchConvention(reduced_only=False)),
        ),
        ("integer-t", lambda: _sweep_integer_t(H)),
        ("models-v-positive", lambda: _sweep_models(H)),
        ("models-v-both", lambda: _sweep_models(H, both_sign_v=True)),
        ("models-coprime", lambda: _sweep_models(H, coprime=True)),
        ("models-dedupe-curve", lambda: _sweep_models(H, dedupe_curve=True)),
    ]
    entries = []
    for name, run in runs:
        records, candidates = run()
        entries.append(SweepEntry(name, records, candidates, target))
    return entries


def format_sweep(entries: Sequence[SweepEntry]) -> str:
    lines = [f"{'convention':<22} {'records':>8} {'candidates':>10} {'delta':>8}"]
    for e in entries:
        delta = "-" if e.delta is None else f"{e.delta:+d}"
        lines.append(f"{e.name:<22} {e.records:>8} {e.candidates:>10} {delta:>8}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# rank oracle


def load_rank_oracle(lines: Iterable[str]) -> dict[tuple[int, int], Optional[int]]:
    """Parse "p q rank" lines ('#' comments, blank lines allowed; rank
    may be '?' for explicitly-unknown).  Conflicting duplicates raise."""
    table: dict[tuple[int, int], Optional[int]] = {}
    for line_no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"expected 'p q rank', got {raw.strip()!r}", line_no)
        try:
            p, q = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer key in {raw.strip()!r}", line_no)
        if parts[2] == "?":
            rank: Optional[int] = None
        else:
            try:
                rank = int(parts[2])
            except ValueError:
                raise ParseError(f"bad rank token {parts[2]!r}", line_no)
        key = (p, q)
        if key in table and table[key] != rank:
            raise ParseError(
                f"conflicting ranks for p={p} q={q}: {table[key]} vs {rank}", line_no
            )
        table[key] = rank
    return table


def attach_ranks(
    records: Sequence[SearchRecord], oracle_lines: Iterable[str]
) -> list[SearchRecord]:
    """Fill in ranks from an oracle file; records without an entry keep
    rank None and land in the '?' bucket."""
    table = load_rank_oracle(oracle_lines)
    out = []
    for rec in records:
        rank = table.get((rec.p, rec.q))
        out.append(replace(rec, rank=rank) if rank is not None else rec)
    return out


# ---------------------------------------------------------------------------
# pairing arithmetic


def pair_counts(n: int) -> tuple[int, int]:
    """(unordered, ordered-without-diagonal) pair counts over n curves."""
    return n * (n - 1) // 2, n * n - n


@dataclass(frozen=True)
class PairingSummary:
    candidate_count: int
    rank_buckets: tuple[tuple[str, int], ...]
    rank_one_count: int
    pair_count_unordered: int
    pair_count_ordered: int


def pairing_summary(records: Sequence[SearchRecord]) -> PairingSummary:
    """Bucket the candidates by rank and count clean pairs over the
    rank-1 bucket (any two distinct rank-1 members pair cleanly)."""
    buckets: dict[Optional[int], int] = {}
    candidates = 0
    for rec in records:
        if not rec.is_candidate:
            continue
        candidates += 1
        buckets[rec.rank] = buckets.get(rec.rank, 0) + 1
    known = sorted(k for k in buckets if k is not None)
    labeled = [(str(k), buckets[k]) for k in known]
    if None in buckets:
        labeled.append(("?", buckets[None]))
    n1 = buckets.get(1, 0)
    unordered, ordered = pair_counts(n1)
    return PairingSummary(candidates, tuple(labeled), n1, unordered, ordered)


# ---------------------------------------------------------------------------
# CSV persistence

_CSV_HEADER = ["p", "q", "height", "disc_ok", "nontorsion_ok", "rank"]


def records_to_csv(records: Sequence[SearchRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_HEADER)
    for r in records:
        writer.writerow(
            [
                r.p,
                r.q,
                r.height_value,
                int(r.disc_ok),
                int(r.non_torsion_ok),
                "" if r.rank is None else r.rank,
            ]
        )
    return buf.getvalue()


def records_from_csv(text: str) -> list[SearchRecord]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != _CSV_HEADER:
        raise ParseError(f"expected header {','.join(_CSV_HEADER)}", 1)
    out = []
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 6:
            raise ParseError(f"expected 6 fields, got {len(row)}", line_no)
        try:
            out.append(
                SearchRecord(
                    p=int(row[0]),
                    q=int(row[1]),
                    height_value=int(row[2]),
                    disc_ok=bool(int(row[3])),
                    non_torsion_ok=bool(int(row[4])),
                    rank=None if row[5] == "" else int(row[5]),
                )
            )
        except ValueError as exc:
            raise ParseError(str(exc), line_no)
    return out


# ---------------------------------------------------------------------------
# curve database filter


@dataclass(frozen=True)
class CurveDbEntry:
    label: str
    a_invariants: tuple[int, int, int, int, int]
    rank: int
    torsion_order: int
    conductor: int


def parse_curve_db(lines: Iterable[str]) -> list[CurveDbEntry]:
    """One curve per line: label a1 a2 a3 a4 a6 rank torsionOrder conductor."""
    entries = []
    labels = set()
    for line_no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 9:
            raise ParseError(f"expected 9 fields, got {len(parts)}", line_no)
        label = parts[0]
        if label in labels:
            raise ParseError(f"duplicate label {label!r}", line_no)
        labels.add(label)
        try:
            nums = [int(tok) for tok in parts[1:]]
        except ValueError:
            raise ParseError(f"non-integer field in {raw.strip()!r}", line_no)
        entries.append(
            CurveDbEntry(label, tuple(nums[0:5]), nums[5], nums[6], nums[7])
        )
    return entries


def _short_model(a_invariants: Sequence[int]) -> tuple[int, int]:
    """Long Weierstrass -> integral short model y^2 = x^3 + Ax + B via the
    standard b2/b4/b6 -> c4/c6 reduction (characteristic 0)."""
    a1, a2, a3, a4, a6 = a_invariants
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
    return -27 * c4, -54 * c6


def _twist_reduce(A: int, B: int) -> tuple[int, int]:
    """Divide out the largest u with u^4 | A and u^6 | B (quartic/sextic
    twist content), giving the minimal short model in the twist class."""
    if A == 0 and B == 0:
        raise ValueError("singular model")
    base = abs(A) if B == 0 else abs(B) if A == 0 else gcd(A, B)
    u = 1
    for prime in sympy.factorint(base):
        exponent = None
        if A != 0:
            exponent = sympy.multiplicity(prime, A) // 4
        if B != 0:
            eb = sympy.multiplicity(prime, B) // 6
            exponent = eb if exponent is None else min(exponent, eb)
        u *= prime**exponent
    return A // u**4, B // u**6


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


@dataclass(frozen=True)
class DbCurveClassification:
    label: str
    short_a: int
    short_b: int
    shape_t: Optional[int]  # |t| with short_a = -3 t^2, when it exists
    shape: bool
    excluded: bool  # torsion sits at the shape x-coordinate
    square_shift: bool  # b - 2 sigma^3 is a square for a usable sign sigma
    square_sign: Optional[int]


@dataclass(frozen=True)
class DbFilterReport:
    total_rank_one: int
    shape_count: int
    eligible_count: int
    square_count: int
    shape_labels: tuple[str, ...]
    eligible_labels: tuple[str, ...]
    square_labels: tuple[str, ...]
    excluded_labels: tuple[str, ...]
    square_pairs_unordered: int  # C(n, 2) over the square bucket
    square_pairs_ordered: int  # n^2, the published "256" counts the diagonal
    classifications: tuple[DbCurveClassification, ...]


def _classify_entry(entry: CurveDbEntry) -> DbCurveClassification:
    A, B = _twist_reduce(*_short_model(entry.a_invariants))
    shape_t: Optional[int] = None
    if A == 0:
        shape_t = 0
    elif A < 0 and (-A) % 3 == 0 and _is_square((-A) // 3):
        shape_t = isqrt((-A) // 3)
    if shape_t is None:
        return DbCurveClassification(
            entry.label, A, B, None, False, False, False, None
        )
    curve = WeierstrassCurve(Fraction(A), Fraction(B))
    torsion_x = {
        pt.x for pt in torsion_points_overQ(curve) if not pt.is_infinity
    }
    # Both sign choices present the curve as y^2 = x^3 - 3t^2 x + b; a
    # sign is usable when b - 2t^3 is a square there and the point at
    # x = t (equivalently its double at x = -2t) is non-torsion.
    signs = (0,) if shape_t == 0 else (shape_t, -shape_t)
    square_signs = [s for s in signs if _is_square(B - 2 * s**3)]
    usable = [s for s in square_signs if Fraction(s) not in torsion_x]
    excluded = bool(square_signs) and not usable
    return DbCurveClassification(
        entry.label,
        A,
        B,
        abs(shape_t),
        True,
        excluded,
        bool(usable),
        usable[0] if usable else None,
    )


def filter_db_family_candidates(db: Sequence[CurveDbEntry]) -> DbFilterReport:
    """Classify the rank-1 entries of a curve table against the family
    shape, preserving the input order (label lists report "first" hits
    in table order)."""
    rank_one = [e for e in db if e.rank == 1]
    classifications = [_classify_entry(e) for e in rank_one]
    shape = [c for c in classifications if c.shape]
    eligible = [c for c in shape if not c.excluded]
    square = [c for c in eligible if c.square_shift]
    excluded = [c for c in shape if c.excluded]
    n = len(square)
    unordered, _ = pair_counts(n)
    return DbFilterReport(
        total_rank_one=len(rank_one),
        shape_count=len(shape),
        eligible_count=len(eligible),
        square_count=n,
        shape_labels=tuple(c.label for c in shape),
        eligible_labels=tuple(c.label for c in eligible),
        square_labels=tuple(c.label for c in square),
        excluded_labels=tuple(c.label for c in excluded),
        square_pairs_unordered=unordered,
        square_pairs_ordered=n * n,
        classifications=tuple(classifications),
    )


def candidates_in_family(records: Sequence[SearchRecord]) -> bool:
    """Cross-module sanity: every candidate really is a good s = 1 member."""
    for rec in records:
        if rec.is_candidate and not make_member(1, rec.t).in_u:
            return False
    return True
