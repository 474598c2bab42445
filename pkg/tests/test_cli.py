import io
import json

import pytest

from stellar.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def segment(tmp_path):
    code, _, _ = call("family", "constant-segment", "--out", str(tmp_path / "seg.json"))
    assert code == 0
    return str(tmp_path / "seg.json")


def test_family_then_classify(tmp_path):
    es = str(tmp_path / "es.json")
    code, _, _ = call("family", "effros-shen", "--cf", "1,1,1,1,1,1", "--steps", "9", "--out", es)
    assert code == 0
    code, out, _ = call("classify", es, "--depth", "9")
    report = json.loads(out)
    assert report["properties"]["local"]["status"] == "Yes"
    assert report["properties"]["local"]["certificate_kind"] == "family-certificate"
    code, out, _ = call("classify", es, "--depth", "9", "--property", "finitely_presented")
    assert code == 1


def test_self_equivalence_exit_zero(segment):
    code, out, _ = call("equiv", segment, segment)
    assert code == 0 and json.loads(out)["status"] == "certified"


def test_refuted_equivalence(segment, tmp_path):
    pt = str(tmp_path / "pt.json")
    call("family", "simplicial", "--weights", "1", "--out", pt)
    code, out, _ = call("equiv", segment, pt, "--depth", "3")
    assert code == 1 and json.loads(out)["status"] == "refuted"


def test_open_sequence_is_consistent(tmp_path):
    lz = str(tmp_path / "lz.json")
    call("family", "lex-z2", "--n", "2", "--out", lz)
    code, _, _ = call("equiv", lz, lz, "--depth", "6")
    assert code == 2


def test_validate_reports_violations(tmp_path):
    broken = write(tmp_path / "broken.json", {"vertices": [{"label": "a", "weight": 1},
                                                           {"label": "b", "weight": 2}],
                                              "maximal_faces": [["a"]]})
    code, out, err = call("validate", broken)
    assert 64 <= code < 80
    assert "uncovered-vertex" in out + err


def test_malformed_json_reports_position(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"initial": \n  [}')
    code, _, err = call("classify", str(bad))
    assert code == 65 and "line 2" in err


def test_usage_errors():
    assert call("frobnicate")[0] == 64
    assert call("classify")[0] == 64
    assert call("family", "lex-z2", "--out", "x.json")[0] == 64
    assert call("classify", "x.json", "--depth", "-1")[0] == 64


def test_member_and_dominate(tmp_path, segment):
    f = write(tmp_path / "f.json", {"term": "2p1 ^ (1 - p1)"})
    g = write(tmp_path / "g.json", {"term": "p1 ^ (1 - p1)"})
    code, out, _ = call("dominate", "--f", f, "--g", g)
    assert code == 0 and json.loads(out)["m"] == 2
    code, _, err = call("dominate", "--f", write(tmp_path / "h.json", {"term": "1 - p1"}), "--g", g)
    assert code == 65 and "witness" in err
    zero = write(tmp_path / "z.json", {"term": "p1 - p1", "ambient_dim": 2})
    code, out, _ = call("member", "--func", zero, "--seq", segment, "--depth", "2")
    assert code == 0


def test_orbit_and_export(segment):
    code, out, _ = call("orbit", segment, "--depth", "2")
    assert code == 0 and len(json.loads(out)["supports"]) == 3
    code, out, _ = call("export", segment, "--format", "mesh")
    assert code == 0 and out.strip()
    code, out, _ = call("realize", segment, "--format", "text")
    assert code == 0 and out.strip()


def test_output_is_byte_identical(tmp_path):
    es = str(tmp_path / "es.json")
    call("family", "effros-shen", "--cf", "golden", "--out", es)
    runs = [call("classify", es, "--depth", "12") for _ in range(2)]
    assert runs[0] == runs[1]
    runs = [call("equiv", es, es, "--depth", "6") for _ in range(2)]
    assert runs[0] == runs[1]
