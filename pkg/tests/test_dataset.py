import hashlib
from fractions import Fraction as F

import pytest

import diocurves.families as fam
from diocurves.errors import DatasetCorrupt
from diocurves.families import (
    DATASET_SHA256,
    PaperRecord,
    dataset_record,
    paper_dataset,
)
from diocurves.triples import validate_tuple
from diocurves.weierstrass import is_on_curve


def test_checksum_pins_file_bytes():
    assert hashlib.sha256(fam._dataset_bytes()).hexdigest() == DATASET_SHA256


def test_dataset_size_and_ids_unique():
    records = paper_dataset()
    assert len(records) == 59
    ids = [r.record_id for r in records]
    assert len(set(ids)) == len(ids)
    assert all(isinstance(r, PaperRecord) for r in records)


def test_dataset_record_lookup():
    rec = dataset_record("s3-rank9")
    assert rec.section == "s3"
    assert rec.claimed_rank == 9
    assert rec.torsion_shape == (2, 2)
    assert len(rec.points) == 9
    assert len(rec.torsion_points) == 3
    with pytest.raises(KeyError):
        dataset_record("no-such-record")


def test_rank9_triple_values():
    rec = dataset_record("s3-rank9")
    assert rec.triple.elements == (F(1270, 2323), F(5916, 2323),
                                   F(664593861324, 12535672267))
    assert rec.family is not None
    assert rec.family.parameters == (F(3593, 2323),)


def test_connell_record():
    rec = dataset_record("s6-connell")
    assert rec.torsion_shape == (2, 8)
    assert rec.printed_triple_valid is False
    assert rec.printed_triple is not None
    xs = {(p.x, p.y) for p in rec.torsion_points}
    assert (F(2346026160), F(-1173013080)) in xs


def test_stored_points_lie_on_stored_curves():
    for rec in paper_dataset():
        if rec.curve is None:
            continue
        for p in rec.torsion_points + rec.points:
            assert is_on_curve(rec.curve, p)


def test_all_triples_valid():
    for rec in paper_dataset():
        assert validate_tuple(rec.triple.elements)


def test_printed_invalid_records_flagged():
    flagged = {r.record_id for r in paper_dataset()
               if not r.printed_triple_valid}
    assert flagged == {"s4-rank5-a", "s6-connell"}


def test_family_parameters_regenerate_triples():
    for rec in paper_dataset():
        if rec.family is None:
            continue
        member = fam.make_family_member(rec.family.family_id,
                                        *rec.family.parameters)
        assert member.triple == rec.triple, rec.record_id


def test_sections_covered():
    sections = {r.section for r in paper_dataset()}
    assert {"s3", "s4", "s5", "s6"} <= sections


def test_big_record_has_huge_coordinates():
    rec = dataset_record("s6-big")
    assert rec.claimed_rank == 3
    bits = max(v.bit_length() for p in rec.points
               for v in (p.x.numerator, p.x.denominator,
                         p.y.numerator, p.y.denominator))
    assert bits > 400


def test_checksum_mismatch_detected(monkeypatch):
    monkeypatch.setattr(fam, "DATASET_SHA256", "0" * 64)
    with pytest.raises(DatasetCorrupt):
        fam._dataset_bytes()


def test_tampered_content_detected(monkeypatch):
    tampered = fam._dataset_bytes().replace(b"664593861324", b"664593861325")
    assert tampered != fam._dataset_bytes()
    monkeypatch.setattr(fam, "_dataset_bytes", lambda: tampered)
    monkeypatch.setattr(fam, "_DATASET", None)
    with pytest.raises(DatasetCorrupt):
        paper_dataset()


def test_cache_restored_after_corruption_test():
    # depends on monkeypatch teardown from the previous test
    assert len(paper_dataset()) == 59
