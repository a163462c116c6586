"""Depth classification, sieve scans, record search, twins and the cache."""

from __future__ import annotations

import json
from fractions import Fraction

import pytest

from collatz_descent import (
    CorruptCache,
    DepthTooLarge,
    VersionMismatch,
    cache_load,
    cache_store,
    classify_depth,
    descent_trace,
    record_search,
    sieve_scan,
    twin_check,
)

# resolved measures for depths 1..12, frozen from brute-force simulation
# of one large member per residue
EXPECTED_MEASURES = {
    1: Fraction(1, 2),
    2: Fraction(3, 4),
    3: Fraction(3, 4),
    4: Fraction(13, 16),
    5: Fraction(7, 8),
    6: Fraction(7, 8),
    7: Fraction(115, 128),
    8: Fraction(237, 256),
    9: Fraction(237, 256),
    10: Fraction(15, 16),
    11: Fraction(15, 16),
    12: Fraction(1935, 2048),
}


def test_classify_examples():
    r = classify_depth(2)
    assert r.resolved_measure == Fraction(3, 4)
    assert r.unresolved_residues == (3,)
    r = classify_depth(5)
    assert r.resolved_measure == Fraction(7, 8)
    assert r.unresolved_residues == (7, 15, 27, 31)
    r = classify_depth(1)
    assert r.resolved_measure == Fraction(1, 2)
    assert r.unresolved_residues == (1,)


def test_classify_measures_to_depth_12():
    for depth, expected in EXPECTED_MEASURES.items():
        assert classify_depth(depth).resolved_measure == expected


def test_measure_computed_two_ways():
    for depth in range(1, 13):
        r = classify_depth(depth)
        size = 1 << depth
        # route 1: the report's sum of 2^-j; route 2: residue bitmap popcount
        bitmap = bytearray(size)
        for c in r.classes:
            for offset in range(c.x, size, c.modulus):
                assert not bitmap[offset], "classes overlap"
                bitmap[offset] = 1
        covered = sum(bitmap)
        assert r.resolved_measure == Fraction(covered, size)
        assert covered + len(r.unresolved_residues) == size
        assert all(res % 2 == 1 for res in r.unresolved_residues)
        assert list(r.unresolved_residues) == sorted(r.unresolved_residues)


def test_classify_depth_bounds():
    with pytest.raises(DepthTooLarge):
        classify_depth(25)
    with pytest.raises(ValueError):
        classify_depth(0)


def test_classify_classes_respect_depth():
    r = classify_depth(7)
    assert {c.j for c in r.classes} == {1, 2, 4, 5, 7}
    assert max(len(c.pattern) for c in r.classes) == 11


def test_sieve_scan_even_class_only():
    rep = sieve_scan(2, 100, 1)
    assert rep.skipped_count == 50  # the even numbers
    assert rep.verified_count == 49
    assert rep.failures == ()


def test_sieve_scan_without_sieve_finds_27():
    rep = sieve_scan(2, 30, 0)
    assert rep.skipped_count == 0
    assert rep.max_descent_steps == 96
    assert rep.max_descent_n == 27


def test_sieve_scan_rejects_bad_ranges():
    with pytest.raises(ValueError):
        sieve_scan(1, 10, 1)
    with pytest.raises(ValueError):
        sieve_scan(10, 2, 1)


def test_sieve_matches_naive_scan():
    hi = 1 << 16
    # naive route: simulate everything through the public trace API
    naive_max, naive_arg = 0, None
    for n in range(2, hi + 1):
        tr = descent_trace(n)
        assert tr.first_lower < n
        if len(tr) > naive_max:
            naive_max, naive_arg = len(tr), n
    for depth in (1, 2, 5):
        rep = sieve_scan(2, hi, depth)
        assert rep.failures == ()
        assert rep.verified_count + rep.skipped_count == hi - 1
        assert rep.max_descent_steps == naive_max
        assert rep.max_descent_n == naive_arg


def test_scan_records_step_cap_hits_as_failures():
    rep = sieve_scan(2, 30, 0, step_cap=20)
    assert (27, "step cap exceeded") in rep.failures
    assert rep.verified_count + rep.skipped_count + len(rep.failures) == 29


def test_scan_deterministic_across_worker_counts():
    reference = sieve_scan(2, 50_000, 5, workers=1, block_size=8192)
    other = sieve_scan(2, 50_000, 5, workers=2, block_size=8192)
    assert reference.canonical_json() == other.canonical_json()
    assert reference.wall_time > 0 and other.wall_time > 0


def test_record_search_examples():
    assert record_search(2, 2) == [(2, 1)]
    records = record_search(2, 10)
    assert (7, 11) in records
    assert record_search(2, 30)[-1] == (27, 96)


def test_twin_of_27():
    rec = twin_check(27)
    assert rec.twin == 576460752303423515
    assert rec.twin_first_lower == 450283905890997386 == 3**37 + 23
    assert (rec.i, rec.j) == (37, 59)


def test_twin_of_3():
    rec = twin_check(3)
    assert rec.twin == 19
    assert rec.first_lower == 2
    assert rec.twin_first_lower == 11


def test_twin_rejects_even_and_tiny():
    with pytest.raises(ValueError):
        twin_check(4)
    with pytest.raises(ValueError):
        twin_check(1)


def test_twin_law_holds_up_to_10k():
    for n in range(3, 10_001, 2):
        rec = twin_check(n)
        assert rec.twin_first_lower == rec.first_lower + 3**rec.i


def test_cache_roundtrip(tmp_path):
    path = tmp_path / "classes.jsonl"
    report = classify_depth(5)
    cache_store(report, path)
    assert cache_load(path) == report


def test_cache_rejects_tampered_offset(tmp_path):
    path = tmp_path / "classes.jsonl"
    cache_store(classify_depth(5), path)
    lines = path.read_text().splitlines()
    rec = json.loads(lines[2])
    rec["x"] = str(int(rec["x"]) + 2)
    lines[2] = json.dumps(rec)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(CorruptCache):
        cache_load(path)


def test_cache_rejects_empty_file(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    with pytest.raises(CorruptCache):
        cache_load(path)


def test_cache_rejects_garbage(tmp_path):
    path = tmp_path / "garbage.jsonl"
    path.write_text("not json at all\n")
    with pytest.raises(CorruptCache):
        cache_load(path)


def test_cache_rejects_other_versions(tmp_path):
    path = tmp_path / "future.jsonl"
    cache_store(classify_depth(2), path)
    lines = path.read_text().splitlines()
    header = json.loads(lines[0])
    header["version"] = 99
    lines[0] = json.dumps(header)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(VersionMismatch):
        cache_load(path)


def test_cache_rejects_duplicate_classes(tmp_path):
    path = tmp_path / "dup.jsonl"
    cache_store(classify_depth(2), path)
    lines = path.read_text().splitlines()
    lines.append(lines[-1])
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(CorruptCache):
        cache_load(path)
