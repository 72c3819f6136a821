"""
Tests for file formats.

Tests cover:
- Bundled quivers and quiver files on disk
- Representation files with integer and p/q entries
- Malformed input is reported as InputFormatError with a location
- Bound module files are checked against the relations
"""

import json
from fractions import Fraction

import pytest

from flagpave.errors import InputFormatError, RelationViolationError
from flagpave.formats import (
    QuiverFile,
    RepresentationFile,
    bundled_quivers,
    load_bound_module,
    load_quiver,
    load_representation,
    parse_dimvec,
    parse_quiver,
)


def _write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf-8")
    return str(path)


class TestQuiverFiles:
    def test_bundled_names(self):
        names = bundled_quivers()
        for name in ("a2", "d4", "e6_ar", "e7_alt", "e8", "affine_a3", "affine_d4"):
            assert name in names

    def test_load_by_name_and_path(self, tmp_path):
        q = load_quiver("a3")
        assert q.vertices == ("1", "2", "3")
        path = _write(tmp_path, "mine.json", QuiverFile.from_quiver(q).model_dump(by_alias=True))
        again = load_quiver(path)
        assert again.vertices == q.vertices
        assert [(a.id, a.source, a.target) for a in again.arrows] == [(a.id, a.source, a.target) for a in q.arrows]

    def test_name_defaults_to_stem(self, tmp_path):
        path = _write(tmp_path, "tiny.json", {"vertices": ["x"], "arrows": []})
        assert load_quiver(path).name == "tiny"

    def test_malformed_json_reports_line(self, tmp_path):
        path = _write(tmp_path, "broken.json", '{\n  "vertices": ["1",\n}')
        with pytest.raises(InputFormatError) as info:
            load_quiver(path)
        assert "line" in str(info.value)

    def test_missing_field(self):
        with pytest.raises(InputFormatError) as info:
            parse_quiver({"arrows": []}, "bad")
        assert "vertices" in str(info.value)

    def test_unknown_name(self):
        with pytest.raises(InputFormatError):
            load_quiver("no_such_quiver")


class TestRepresentationFiles:
    def test_rational_entries(self, tmp_path):
        path = _write(tmp_path, "m.json", {
            "quiver": "a2", "dims": {"1": 1, "2": 1}, "maps": {"a1": [["1/2"]]},
        })
        m = load_representation(path)
        assert m.dims == (1, 1)
        assert m.map("a1").to_rows() == [[Fraction(1, 2)]]

    def test_unknown_arrow(self, tmp_path, a2):
        path = _write(tmp_path, "m.json", {"dims": {"1": 1, "2": 1}, "maps": {"b": [[1]]}})
        with pytest.raises(InputFormatError) as info:
            load_representation(path, a2)
        assert "unknown arrows" in str(info.value)

    def test_bad_scalar(self, tmp_path, a2):
        path = _write(tmp_path, "m.json", {"dims": {"1": 1, "2": 1}, "maps": {"a1": [["one"]]}})
        with pytest.raises(InputFormatError):
            load_representation(path, a2)

    def test_wrong_shape(self, tmp_path, a2):
        path = _write(tmp_path, "m.json", {"dims": {"1": 1, "2": 1}, "maps": {"a1": [[1, 2]]}})
        with pytest.raises(InputFormatError):
            load_representation(path, a2)

    def test_modulus(self, tmp_path, a2):
        path = _write(tmp_path, "m.json", {"dims": {"1": 1, "2": 1}, "maps": {"a1": [["1/2"]]}, "modulus": 3})
        m = load_representation(path, a2)
        assert m.field.characteristic == 3
        assert m.map("a1").to_rows() == [[2]]

    def test_round_trip_model(self, a2):
        from flagpave.rep import Representation

        m = Representation.projective(a2, "1")
        model = RepresentationFile.from_representation(m)
        assert model.to_representation(a2).maps == m.maps


class TestBoundModuleFiles:
    def test_relations_checked(self, tmp_path, a2):
        path = _write(tmp_path, "t.json", {
            "d": 2,
            "dims": {"1:1": 1, "2:1": 1, "1:2": 1, "2:2": 1},
            "maps": {"a1:1": [[1]], "a1:2": [[1]], "1:1^": [[1]], "2:1^": [[0]]},
        })
        with pytest.raises(RelationViolationError):
            load_bound_module(path, a2)

    def test_valid_module(self, tmp_path, a2):
        path = _write(tmp_path, "t.json", {
            "d": 2,
            "dims": {"1:1": 1, "2:1": 1, "1:2": 1, "2:2": 1},
            "maps": {"a1:1": [[1]], "a1:2": [[1]], "1:1^": [[1]], "2:1^": [[1]]},
        })
        assert load_bound_module(path, a2).validate() == []


class TestDimvecs:
    def test_parse(self):
        assert parse_dimvec("1,2, 1,1") == (1, 2, 1, 1)

    @pytest.mark.parametrize("text", ["1,x", "1,-1"])
    def test_rejects(self, text):
        with pytest.raises(InputFormatError):
            parse_dimvec(text)

    def test_length(self):
        with pytest.raises(InputFormatError):
            parse_dimvec("1,2", length=3)
