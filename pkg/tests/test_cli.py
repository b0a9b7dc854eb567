import json

import pytest

from qtorus.cli import COMMANDS, EXIT_CODES, ToolConfig, main, run
from qtorus.cmspace import point_to_json
from qtorus.ideals import ideal_to_json, omega_x

from samples import sample_point_n1

SMALL = ToolConfig(membership_x_span=4, membership_y_span=4, unit_search_bound=2, escalation_steps=1)


@pytest.fixture
def files(tmp_path):
    p = sample_point_n1()
    out = {}

    def put(name, data):
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(data))
        out[name] = str(path)

    put("point", point_to_json(p))
    put("ideal", ideal_to_json(omega_x(p)))
    put("g1", {"letters": ["g1"]})
    put("empty", {"letters": []})
    put("pic", {"alpha": "2", "beta": "3", "m": [[1, 1], [0, 1]]})
    put("inner", {"q": "2", "alpha": "4", "beta": "2", "m": [[1, 0], [0, 1]]})
    put("spec", {"q": "2", "x": ["1", "3"], "i": ["1", "2"], "j": ["3", "-1"]})
    put("elem", {"coeffs": [{"deg": 0, "num": ["3", "-1"], "den": ["1"]}]})
    out["dir"] = tmp_path
    return out


def test_command_table():
    assert len(COMMANDS) == 17 and EXIT_CODES == {"ok": 0, "not_found": 1, "error": 2}


def test_point_commands(files):
    assert run("cm-validate", [files["point"]]).payload == {"valid": True, "diagnostic": "ok"}
    made = run("cm-make", [files["spec"]])
    assert made.status == "ok" and made.payload["point"]["n"] == 2
    moved = run("cm-act", [files["point"], files["g1"]])
    assert moved.status == "ok"
    assert run("cm-equiv", [files["point"], files["point"]]).payload["equivalent"]
    path = files["dir"] / "moved.json"
    path.write_text(json.dumps(moved.payload["point"]))
    assert run("cm-equiv", [files["point"], str(path)]).exit_code == 1


def test_ideal_commands(files):
    built = run("ideal-build", [files["point"]])
    assert set(built.payload) == {"omega_x", "omega_y"}
    assert run("ideal-member", [files["elem"], files["ideal"]], SMALL).payload["member"]
    assert run("ideal-isom", [files["ideal"], files["ideal"]], SMALL).payload["unit"] == \
        {"alpha": "1", "m": 0, "k": 0}
    assert run("ideal-cyclic", [files["ideal"]], SMALL).exit_code == 1
    assert run("ideal-stab-units", [files["ideal"]], SMALL).payload["units"] == [[0, 0]]
    # a point file is accepted wherever an ideal is expected
    assert run("ideal-isom", [files["point"], files["ideal"]], SMALL).status == "ok"


def test_kappa_command(files):
    r = run("kappa-expand", [files["point"]], ToolConfig(series_depth=3))
    assert r.payload["a"][0][0] == "-15" and r.payload["a"][1][0] == "-150"
    assert r.payload["cayley_hamilton_failures"] == []


def test_pic_commands(files):
    r = run("pic-mul", [files["pic"], files["pic"]], options={"q": "2"})
    assert r.payload["product"]["m"] == [[1, 2], [0, 1]]
    assert run("pic-normalize", ["8"], options={"q": "2"}).payload == {"canonical": "1", "k": 3}
    assert run("pic-normalize", ["8"]).exit_code == 2
    assert run("pic-word", ["0,1,-1,0"]).payload["m"] == [[0, 1], [-1, 0]]
    assert run("pic-word", ["2,0,0,1"]).exit_code == 2
    assert run("pic-word", ["a,b"]).exit_code == 2
    inner = run("pic-inner", [files["inner"]])
    assert inner.status == "ok" and inner.payload["inner"]


def test_equivariance_and_stabilizer(files):
    r = run("equivariance", [files["point"], files["g1"]])
    assert r.status == "ok" and r.payload["orientation"] == "forward"
    assert run("stabilizer", [files["point"], files["empty"]]).payload["stabilizes"]
    assert run("stabilizer", [files["point"], files["g1"]]).exit_code == 1


def test_errors(files):
    bad = json.loads(open(files["point"]).read())
    bad["q"] = "1//2"
    assert run("cm-validate", [json.dumps(bad)]).exit_code == 2
    assert run("cm-validate", [str(files["dir"] / "missing.json")]).exit_code == 2
    assert run("cm-validate", []).exit_code == 2
    assert run("no-such", []).exit_code == 2


def test_reports_are_deterministic(files):
    a = run("ideal-build", [files["point"]]).to_json()
    b = run("ideal-build", [files["point"]]).to_json()
    assert a == b
    data = json.loads(a)
    assert data["bounds_used"]["membership_x_span"] == 6


def test_main_options(files, capsys):
    out = files["dir"] / "report.json"
    cfg = files["dir"] / "cfg.json"
    cfg.write_text(json.dumps({"series_depth": 2}))
    code = main(["kappa-expand", files["point"], "--config", str(cfg), "--bounds", "3,3,1",
                 "--out", str(out)])
    assert code == 0
    printed = capsys.readouterr().out.strip()
    assert out.read_text().strip() == printed
    rep = json.loads(printed)
    assert rep["payload"]["depth"] == 2
    assert rep["bounds_used"]["membership_x_span"] == 3 and rep["bounds_used"]["unit_search_bound"] == 1
    assert main(["pic-normalize", "8", "--q", "2"]) == 0
    assert main(["cm-validate", files["point"], "--bounds", "1"]) == 2


def test_selftest():
    r = run("selftest", [])
    assert r.status == "ok" and r.payload["failed"] == 0
