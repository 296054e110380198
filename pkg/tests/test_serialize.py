import json

import numpy as np
import pytest

from lamespectra.lattice import Lattice, random_scalar_field, random_vector_field
from lamespectra.serialize import (
    SCHEMA_VERSION,
    read_report,
    scalar_from_csv,
    scalar_to_csv,
    vector_from_csv,
    vector_to_csv,
    write_metadata,
    write_report,
)


def test_scalar_csv_roundtrip(tmp_path):
    lat = Lattice(2, 8)
    rng = np.random.default_rng(0)
    f = random_scalar_field(lat, rng)
    path = tmp_path / "field.csv"
    scalar_to_csv(f, path)
    g = scalar_from_csv(lat, path)
    assert np.array_equal(f.values, g.values)


def test_vector_csv_roundtrip(tmp_path):
    lat = Lattice(3, 4)
    rng = np.random.default_rng(1)
    f = random_vector_field(lat, rng)
    path = tmp_path / "vec.csv"
    vector_to_csv(f, path)
    g = vector_from_csv(lat, path)
    assert np.array_equal(f.values, g.values)


def test_csv_header_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("idx,re,im\n0,1.0,0.0\n")
    with pytest.raises(ValueError, match="unexpected CSV header"):
        scalar_from_csv(Lattice(1, 4), path)


def test_csv_count_rejected(tmp_path):
    lat = Lattice(1, 8)
    rng = np.random.default_rng(2)
    f = random_scalar_field(Lattice(1, 4), rng)
    path = tmp_path / "short.csv"
    scalar_to_csv(f, path)
    with pytest.raises(ValueError, match="expected 8 samples, file holds 4"):
        scalar_from_csv(lat, path)
    vpath = tmp_path / "vshort.csv"
    vector_to_csv(random_vector_field(Lattice(2, 4), rng), vpath)
    with pytest.raises(ValueError, match="file holds 32"):
        vector_from_csv(Lattice(2, 8), vpath)


def test_reports_are_byte_stable(tmp_path):
    payload = {"b": [1.0, 2.5], "a": {"z": 0.1, "y": "text"}}
    p1 = tmp_path / "one.json"
    p2 = tmp_path / "two.json"
    write_report(payload, p1)
    write_report(payload, p2)
    assert p1.read_bytes() == p2.read_bytes()
    doc = read_report(p1)
    assert doc["schema_version"] == SCHEMA_VERSION
    assert doc["a"] == payload["a"]
    # keys come out sorted so diffs stay small
    text = p1.read_text()
    assert text.index('"a"') < text.index('"b"') < text.index('"schema_version"')
    assert text.endswith("\n")


def test_metadata_sidecar(tmp_path):
    artifact = tmp_path / "spectrum.json"
    write_report({"eigenvalues": []}, artifact)
    sidecar = write_metadata(artifact, extra={"seed": 7})
    assert sidecar.name == "spectrum.json.meta.json"
    doc = json.loads(sidecar.read_text())
    assert doc["artifact"] == "spectrum.json"
    assert doc["seed"] == 7
    assert "written_at" in doc
