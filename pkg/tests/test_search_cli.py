"""Enumeration of integral s = 1 members, rank plumbing, the database
filter, and the command-line surface."""

import json
from fractions import Fraction as F
from math import gcd

import pytest

from cleanpair import cli
from cleanpair.family import make_member
from cleanpair.search import (
    DEFAULT_CONVENTION,
    CurveDbEntry,
    ParseError,
    SearchConvention,
    SearchRecord,
    attach_ranks,
    candidates_in_family,
    convention_sweep,
    enumerate_s1,
    filter_db_family_candidates,
    format_sweep,
    height_of,
    integral_coefficients,
    load_rank_oracle,
    pair_counts,
    pairing_summary,
    parse_curve_db,
    records_from_csv,
    records_to_csv,
)
from cleanpair.search import _twist_reduce  # the twist content stripper


# Every (p, q, h) with h <= 10^6, frozen from the defining formulas.
H10_TABLE = [
    (-1, 1, 49),
    (1, 1, 121),
    (-2, 1, 1728),
    (2, 1, 2704),
    (-1, 2, 16384),
    (-3, 1, 19683),
    (3, 1, 19683),
    (1, 2, 25600),
    (-4, 1, 110592),
    (4, 1, 110592),
    (-5, 1, 421875),
    (5, 1, 421875),
    (-1, 3, 455625),
    (1, 3, 613089),
]


def test_height_of_matches_hand_values():
    assert height_of(1, 1) == 121
    assert height_of(-1, 1) == 49  # (2(-1)^3 + 9)^2 = 49 beats 27
    assert height_of(2, 1) == 2704
    assert height_of(1, 2) == 25600
    assert height_of(0, 1) == 0


def test_integral_model_carries_its_marked_point():
    # (-2pq, -3pq^2) must sit on y^2 = x^3 + ax + b for every (p, q).
    for p in range(-6, 7):
        for q in range(1, 5):
            if p == 0 or gcd(p, q) != 1:
                continue
            a, b = integral_coefficients(p, q)
            x, y = -2 * p * q, -3 * p * q * q
            assert y * y == x**3 + a * x + b


def test_h2_against_brute_force_scan():
    # Independent oracle: scan a generous (p, q) box with the raw formula.
    expected = set()
    for p in range(-8, 9):
        for q in range(1, 9):
            if p != 0 and gcd(p, q) == 1 and height_of(p, q) <= 64:
                expected.add((p, q))
    assert expected == {(-1, 1)}  # t = 1 is out: h(1) = 121 > 64
    records = enumerate_s1(2)
    assert [(r.p, r.q) for r in records] == [(-1, 1)]
    assert records[0].is_candidate
    assert enumerate_s1(1) == []


def test_h10_records_frozen():
    records = enumerate_s1(10)
    assert [(r.p, r.q, r.height_value) for r in records] == H10_TABLE
    assert all(r.is_candidate for r in records)
    assert records == sorted(records, key=SearchRecord.sort_key)


def test_enumeration_monotone_in_h():
    keys10 = {(r.p, r.q) for r in enumerate_s1(10)}
    keys20 = {(r.p, r.q) for r in enumerate_s1(20)}
    assert keys10 < keys20
    assert len(keys20) == 36


def test_candidates_are_good_family_members():
    records = enumerate_s1(10)
    assert candidates_in_family(records)
    # and the integral model is exactly the d = q rescaling of the fiber
    for r in records:
        member = make_member(1, r.t)
        a, b = r.curve_integral
        assert F(a) == member.curve.a * r.q**4
        assert F(b) == member.curve.b * r.q**6


def test_torsion_and_discriminant_exclusions_are_real():
    # t = -4/3 enters at H = 21: its marked point (24, 108) is 5-torsion.
    by_key = {(r.p, r.q): r for r in enumerate_s1(21)}
    rec = by_key[(-4, 3)]
    assert rec.disc_ok and not rec.non_torsion_ok and not rec.is_candidate
    assert not make_member(1, F(-4, 3)).in_u
    # t = -9/4 enters at H = 63 and is the discriminant exclusion.
    by_key = {(r.p, r.q): r for r in enumerate_s1(63)}
    rec = by_key[(-9, 4)]
    assert not rec.disc_ok and not rec.non_torsion_ok
    assert height_of(-9, 4) == 58773123072


def test_parallel_chunking_is_invisible(monkeypatch):
    base = enumerate_s1(10)
    monkeypatch.setenv("CLEANPAIR_THREADS", "3")
    assert enumerate_s1(10) == base


def test_sign_and_zero_flags():
    positive = enumerate_s1(10, SearchConvention(sign="positive"))
    negative = enumerate_s1(10, SearchConvention(sign="negative"))
    assert [(r.p, r.q) for r in positive] == [(p, q) for p, q, _ in H10_TABLE if p > 0]
    assert [(r.p, r.q) for r in negative] == [(p, q) for p, q, _ in H10_TABLE if p < 0]
    with_zero = enumerate_s1(10, SearchConvention(include_zero=True))
    zero = [r for r in with_zero if r.p == 0]
    assert len(zero) == 1 and not zero[0].disc_ok and not zero[0].is_candidate
    assert len(with_zero) == len(H10_TABLE) + 1
    with pytest.raises(ValueError):
        SearchConvention(sign="sideways")


def test_unreduced_pairs_flag():
    loose = enumerate_s1(10, SearchConvention(reduced_only=False))
    keys = {(r.p, r.q) for r in loose}
    assert (2, 2) in keys and (-2, 2) in keys  # duplicates of t = 1, -1
    assert len(loose) == len(H10_TABLE) + 2


def test_convention_sweep_documents_the_mismatch():
    # None of the plausible readings of the height cut reproduces the
    # published 823 at H = 10; the sweep reports each delta.
    entries = {e.name: e for e in convention_sweep(10)}
    observed = {name: (e.records, e.candidates) for name, e in entries.items()}
    assert observed == {
        "reduced-both": (14, 14),
        "reduced-positive": (7, 7),
        "pairs-any-gcd": (16, 16),
        "integer-t": (10, 10),
        "models-v-positive": (310, 308),
        "models-v-both": (620, 616),
        "models-coprime": (218, 217),
        "models-dedupe-curve": (310, 308),
    }
    assert all(e.target == 823 and e.delta != 0 for e in entries.values())
    text = format_sweep(list(entries.values()))
    assert "delta" in text.splitlines()[0]
    assert len(text.splitlines()) == 1 + len(entries)


def test_rank_oracle_parsing():
    table = load_rank_oracle(
        [
            "# comment line\n",
            "\n",
            "1 1 1\n",
            "-1 1 2   # trailing comment\n",
            "2 1 ?\n",
            "1 1 1\n",  # harmless duplicate
        ]
    )
    assert table == {(1, 1): 1, (-1, 1): 2, (2, 1): None}


def test_rank_oracle_errors_carry_line_numbers():
    with pytest.raises(ParseError) as err:
        load_rank_oracle(["1 1 1\n", "1 1\n"])
    assert err.value.line_no == 2
    with pytest.raises(ParseError) as err:
        load_rank_oracle(["x 1 1\n"])
    assert err.value.line_no == 1
    with pytest.raises(ParseError) as err:
        load_rank_oracle(["1 1 one\n"])
    assert err.value.line_no == 1
    with pytest.raises(ParseError) as err:
        load_rank_oracle(["1 1 1\n", "# fine\n", "1 1 2\n"])
    assert err.value.line_no == 3


def test_attach_ranks_and_buckets():
    records = enumerate_s1(2)
    annotated = attach_ranks(records, ["-1 1 1\n"])
    assert annotated[0].rank == 1
    assert records[0].rank is None  # input untouched
    summary = pairing_summary(annotated)
    assert summary.candidate_count == 1
    assert summary.rank_buckets == (("1", 1),)
    assert (summary.pair_count_unordered, summary.pair_count_ordered) == (0, 0)


def test_pairing_summary_buckets_candidates_only():
    def rec(p, rank, non_torsion=True):
        return SearchRecord(p, 1, height_of(p, 1), True, non_torsion, rank)

    records = [rec(1, 1), rec(2, 1), rec(3, 1), rec(4, 2), rec(5, None), rec(6, 1, False)]
    summary = pairing_summary(records)
    assert summary.candidate_count == 5  # the torsion record drops out
    assert summary.rank_buckets == (("1", 3), ("2", 1), ("?", 1))
    assert summary.rank_one_count == 3
    assert (summary.pair_count_unordered, summary.pair_count_ordered) == (3, 6)


def test_pair_counts_exact():
    assert pair_counts(0) == (0, 0)
    assert pair_counts(2) == (1, 2)
    # 27062 rank-1 curves, every two of which pair: both conventions.
    assert pair_counts(27062) == (366162391, 732324782)


def test_csv_round_trip(tmp_path):
    records = attach_ranks(enumerate_s1(10), ["1 1 1\n", "-1 1 1\n", "2 1 2\n"])
    text = records_to_csv(records)
    assert text.splitlines()[0] == "p,q,height,disc_ok,nontorsion_ok,rank"
    assert records_from_csv(text) == records
    path = tmp_path / "records.csv"
    path.write_text(text)
    assert records_from_csv(path.read_text()) == records


def test_csv_rejects_foreign_layouts():
    with pytest.raises(ParseError):
        records_from_csv("a,b,c\n1,2,3\n")
    with pytest.raises(ParseError) as err:
        records_from_csv("p,q,height,disc_ok,nontorsion_ok,rank\n1,1,121,1\n")
    assert err.value.line_no == 2


# ---------------------------------------------------------------------------
# database filter

DB_FIXTURE = [
    "43a1 0 1 1 0 0 1 1 43",
    "65a1 1 0 0 -1 0 1 1 65",
    "37a1 0 0 1 -1 0 1 1 37",
    "mord9 0 0 0 0 9 1 3 999",  # y^2 = x^3 + 9: (0, 3) is 3-torsion
    "syn1 0 0 0 -3 4 1 1 998",  # shape t = 1, shift 2 is not a square
    "syn7 0 0 0 -3 7 1 1 997",  # the t = -1 fiber: shift 9 = 3^2
    "rank0 0 0 0 0 1 0 6 27",
]


def test_parse_curve_db():
    entries = parse_curve_db(DB_FIXTURE)
    assert len(entries) == 7
    assert entries[0] == CurveDbEntry("43a1", (0, 1, 1, 0, 0), 1, 1, 43)
    with pytest.raises(ParseError) as err:
        parse_curve_db(["43a1 0 1 1 0 0 1 1 43", "65a1 1 0 0 -1 0 1 1"])
    assert err.value.line_no == 2
    with pytest.raises(ParseError):
        parse_curve_db(["a 0 0 0 0 1 1 1 1", "a 0 0 0 0 2 1 1 2"])
    assert parse_curve_db(["# only comments", ""]) == []


def test_twist_reduction_finds_minimal_models():
    # 37a1's raw short form (-1296, 11664) strips a cube of 3.
    assert _twist_reduce(-1296, 11664) == (-16, 16)
    assert _twist_reduce(0, 419904) == (0, 9)
    assert _twist_reduce(-1296, 0) == (-1, 0)
    assert _twist_reduce(-432, 15120) == (-432, 15120)  # already minimal


def test_db_filter_classification():
    report = filter_db_family_candidates(parse_curve_db(DB_FIXTURE))
    assert report.total_rank_one == 6  # rank0 never enters
    assert report.shape_labels == ("43a1", "65a1", "mord9", "syn1", "syn7")
    assert report.eligible_labels == ("43a1", "65a1", "syn1", "syn7")
    assert report.excluded_labels == ("mord9",)
    assert report.square_labels == ("43a1", "syn7")
    assert (report.shape_count, report.eligible_count, report.square_count) == (5, 4, 2)
    assert (report.square_pairs_unordered, report.square_pairs_ordered) == (1, 4)

    by_label = {c.label: c for c in report.classifications}
    c43 = by_label["43a1"]
    assert (c43.short_a, c43.short_b, c43.shape_t) == (-432, 15120, 12)
    assert c43.square_sign == 12  # 15120 - 2*12^3 = 108^2
    c65 = by_label["65a1"]
    assert (c65.short_a, c65.shape_t, c65.square_shift) == (-1323, 21, False)
    assert by_label["37a1"].shape is False
    assert by_label["syn7"].square_sign == -1  # needs the t = -1 presentation


def test_db_filter_empty():
    report = filter_db_family_candidates([])
    assert report.shape_count == report.eligible_count == report.square_count == 0
    assert report.square_pairs_ordered == 0


# ---------------------------------------------------------------------------
# command line


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_cli_member(capsys):
    code, out, _ = run_cli(capsys, "member", "1", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["in_u"] is True
    assert payload["curve"] == {"a": "-12/1", "b": "52/1"}
    assert payload["marked_point"] == {"x": "-4/1", "y": "-6/1"}

    code, out, _ = run_cli(capsys, "member", "1", "0")
    assert code == 0
    assert json.loads(out)["failure"] == "ZeroDiscriminant"


def test_cli_certify_verify_round_trip(capsys, tmp_path):
    cert = tmp_path / "cert.json"
    code, out, err = run_cli(capsys, "certify", "1", "1", "2", "--out", str(cert))
    assert code == 0 and out == "" and err == ""
    code, out, _ = run_cli(capsys, "verify", str(cert))
    assert code == 0 and out.strip() == "OK"

    tampered = tmp_path / "tampered.json"
    tampered.write_text(cert.read_text().replace('"1/2"', '"2/3"', 1))
    code, out, _ = run_cli(capsys, "verify", str(tampered))
    assert code == 1
    assert "DivisorMismatch" in out

    code, _, err = run_cli(capsys, "verify", str(tmp_path / "missing.json"))
    assert code == 1 and "cannot read" in err


def test_cli_certify_stdout_and_failures(capsys):
    code, out, _ = run_cli(capsys, "certify", "1", "1", "2")
    assert code == 0
    assert json.loads(out)["format"] == "cleanpair.certificate/1"

    code, _, err = run_cli(capsys, "certify", "1", "0", "1")
    assert code == 1 and "ZeroDiscriminant" in err

    code, _, err = run_cli(capsys, "certify", "2", "0", "1")
    assert code == 1  # the t = 0 fiber is good here but the node degenerates
    assert "cusp" in err.lower()


def test_cli_heights(capsys):
    code, out, _ = run_cli(capsys, "heights", "1")
    assert code == 0
    payload = json.loads(out)
    assert payload["places"] == ["(T)", "(T + 9/4)", "infinity"]
    assert payload["local_heights"] == ["0/1", "1/12", "1/12"]
    assert payload["total"] == "1/6"
    assert payload["shioda_tate_bound"] == 1

    code, out, _ = run_cli(capsys, "heights", "1", "--markdown")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("| place |")
    assert lines[-1] == "| total |  |  | 1/6 |"

    code, _, err = run_cli(capsys, "heights", "0")
    assert code == 1 and "s = 0" in err


def test_cli_rank_ff(capsys):
    code, out, _ = run_cli(capsys, "rank-ff", "4")
    assert code == 0
    payload = json.loads(out)
    assert payload["rank"] == 2
    assert payload["orthogonal"] is True

    code, out, _ = run_cli(capsys, "rank-ff", "2")
    assert json.loads(out)["rank"] == 1


def test_cli_search_plain(capsys):
    code, out, _ = run_cli(capsys, "search", "2")
    assert code == 0
    assert out.splitlines() == ["H=2 records=1 candidates=1"]


def test_cli_search_reports_the_published_mismatch(capsys):
    code, out, _ = run_cli(capsys, "search", "10")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "H=10 records=14 candidates=14"
    assert lines[1] == "published_total=823 delta=-809"
    assert any("convention sweep" in line for line in lines)
    assert any(line.startswith("models-v-both") for line in lines)


def test_cli_search_oracle_and_csv(capsys, tmp_path):
    oracle = tmp_path / "oracle.txt"
    oracle.write_text("# oracle\n1 1 1\n-1 1 1\n2 1 2\n")
    out_csv = tmp_path / "records.csv"
    code, out, _ = run_cli(
        capsys, "search", "10", "--oracle", str(oracle), "--csv", str(out_csv)
    )
    assert code == 0
    assert "rank 1: 2" in out
    assert "rank 2: 1" in out
    assert "rank ?: 11" in out
    assert "unordered=1 ordered=2" in out
    restored = records_from_csv(out_csv.read_text())
    assert len(restored) == 14
    assert {(r.p, r.q): r.rank for r in restored}[(1, 1)] == 1

    bad = tmp_path / "bad.txt"
    bad.write_text("1 1\n")
    code, _, err = run_cli(capsys, "search", "10", "--oracle", str(bad))
    assert code == 1 and "line 1" in err


def test_cli_dbfilter(capsys, tmp_path):
    db = tmp_path / "db.txt"
    db.write_text("\n".join(DB_FIXTURE) + "\n")
    code, out, _ = run_cli(capsys, "dbfilter", str(db))
    assert code == 0
    payload = json.loads(out)
    assert payload["shape_count"] == 5
    assert payload["eligible_count"] == 4
    assert payload["square_count"] == 2
    assert payload["square_labels"] == ["43a1", "syn7"]

    code, _, err = run_cli(capsys, "dbfilter", str(tmp_path / "absent.txt"))
    assert code == 1 and "cannot read" in err


def test_cli_usage_errors(capsys):
    assert run_cli(capsys, "nosuch")[0] == 2
    assert run_cli(capsys, "member", "1")[0] == 2
    assert run_cli(capsys, "member", "x", "1")[0] == 2
    assert run_cli(capsys, "search", "0")[0] == 2
    assert run_cli(capsys)[0] == 2
