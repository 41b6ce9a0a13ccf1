"""Cohort metadata CSV parsing."""

import pytest

from fiberlens.errors import BadDate, BadValue, DuplicateScanId, MissingColumn
from fiberlens.tract_io.metadata import dump_metadata, load_metadata
from fiberlens.tract_io.model import CONTROL, DISEASE

HEADER = "subject_id,scan_id,visit_date,age,sex,group\n"


def test_basic_two_rows():
    csv = HEADER + "s1,s1v1,2020-01-01,63.5,M,PD\ns2,s2v1,2020-02-01,59,F,HC\n"
    records = load_metadata(csv.encode())
    assert [r.group_label for r in records] == [DISEASE, CONTROL]
    assert records[0].subject_id == "s1"
    assert records[0].age_at_scan == 63.5
    assert records[1].sex == "F"
    assert records[1].visit_date.isoformat() == "2020-02-01"


def test_duplicate_scan_id():
    csv = HEADER + "s1,v1,2020-01-01,60,M,PD\ns1,v1,2020-06-01,60.5,M,PD\n"
    with pytest.raises(DuplicateScanId):
        load_metadata(csv)


def test_unparseable_age():
    csv = HEADER + "s1,v1,2020-01-01,sixty,M,PD\n"
    with pytest.raises(BadValue, match="row 2"):
        load_metadata(csv)


def test_bad_date():
    csv = HEADER + "s1,v1,01/02/2020,60,M,PD\n"
    with pytest.raises(BadDate):
        load_metadata(csv)


def test_missing_column():
    with pytest.raises(MissingColumn, match="group"):
        load_metadata("subject_id,scan_id,visit_date,age,sex\ns1,v1,2020-01-01,60,M\n")


def test_unknown_group_rejected():
    csv = HEADER + "s1,v1,2020-01-01,60,M,MYSTERY\n"
    with pytest.raises(BadValue, match="group"):
        load_metadata(csv)


def test_negative_age_rejected():
    csv = HEADER + "s1,v1,2020-01-01,-2,M,PD\n"
    with pytest.raises(BadValue):
        load_metadata(csv)


def test_file_reference_columns():
    csv = (
        "subject_id,scan_id,visit_date,age,sex,group,tracks,vol_FA\n"
        "s1,v1,2020-01-01,60,M,PD,fibers/v1.tck,volumes/v1_FA.json\n"
    )
    (record,) = load_metadata(csv)
    assert record.tracks_path == "fibers/v1.tck"
    assert record.volume_paths == {"FA": "volumes/v1_FA.json"}


def test_dump_load_round_trip():
    csv = (
        "subject_id,scan_id,visit_date,age,sex,group,tracks,vol_FA\n"
        "s1,v1,2020-01-01,60.25,M,PD,fibers/v1.tck,volumes/v1_FA.json\n"
        "s2,v2,2021-03-04,59.0,F,HC,,\n"
    )
    records = load_metadata(csv)
    again = load_metadata(dump_metadata(records))
    assert again == records
