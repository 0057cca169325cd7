import json

from attrkit.cli import main

TQ = {"rank": 3, "c1": [0], "ch2_pair": [-50], "ch3": -100}
INTERIOR = {"rank": 2, "c1": [0], "ch2_pair": ["-85/6"], "ch3": "20/3"}
SURFACE = {"rank": 2, "c1_lift": [0], "c1_sq": 0, "c1_dot_D": 0, "c2_num": 10, "divisor": [1]}


def _write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_check_exit_codes(tmp_path, capsys):
    tq = _write(tmp_path, "tq.json", TQ)
    assert main(["check", tq, "--geometry", "quintic"]) == 2
    out = capsys.readouterr().out
    assert "c3_attractor" in out and "violated" in out
    good = _write(tmp_path, "good.json", INTERIOR)
    assert main(["check", good]) == 0
    surf = _write(tmp_path, "surf.json", SURFACE)
    assert main(["check", surf]) == 0
    out = capsys.readouterr().out
    assert "4/13" in out


def test_check_input_errors(tmp_path, capsys):
    assert main(["check", str(tmp_path / "absent.json")]) == 3
    assert "file not found" in capsys.readouterr().err
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    assert main(["check", str(bad)]) == 3
    assert "line" in capsys.readouterr().err
    missing = _write(tmp_path, "missing.json", {"rank": 3, "c1": [0]})
    assert main(["check", missing]) == 3
    err = capsys.readouterr().err
    assert "c2_pair" in err or "ch2_pair" in err


def test_check_boundary_exit_code(tmp_path):
    boundary = _write(
        tmp_path,
        "boundary.json",
        {"rank": 2, "c1_lift": [0], "c1_sq": 0, "c1_dot_D": 0, "c2_num": "55/12", "divisor": [1]},
    )
    assert main(["check", boundary]) == 1


def test_json_output_deterministic(tmp_path, capsys):
    tq = _write(tmp_path, "tq.json", TQ)
    main(["check", tq, "--json"])
    first = capsys.readouterr().out
    json.loads(first)
    main(["check", tq, "--json"])
    second = capsys.readouterr().out
    assert first == second


def test_catalog_roundtrip(tmp_path, capsys):
    out_path = tmp_path / "rec.json"
    assert main(["catalog", "monad", "--r", "3", "--n", "2", "--out", str(out_path)]) == 0
    capsys.readouterr()
    written = json.loads(out_path.read_text())
    assert written == {"rank": "3", "c1": ["0"], "ch2_pair": ["-15"], "ch3": "20"}
    # the emitted record re-ingests losslessly
    assert main(["check", str(out_path)]) == 2
    assert main(["catalog", "jardim"]) == 0
    out = capsys.readouterr().out
    assert "75/2" in out
    assert main(["catalog", "nonsense"]) == 3


def test_closure_budget_zero_echo(tmp_path, capsys):
    seeds = [
        {"rank": 1, "c1": [0], "ch2_pair": [0], "ch3": 0},
        {"rank": 1, "c1": [1], "ch2_pair": ["5/2"], "ch3": "5/6"},
    ]
    path = _write(tmp_path, "seeds.json", seeds)
    assert main(["closure", path, "--point-b", "0", "--point-j", "3", "--budget", "0"]) == 0
    out = capsys.readouterr().out
    assert "closure size 2 (added 0)" in out
    assert main(["closure", path, "--point-b", "0", "--point-j", "3", "--budget", "3"]) == 0
    out = capsys.readouterr().out
    assert "added 3" in out


def test_push_command(tmp_path, capsys):
    surf = _write(tmp_path, "surf.json", {k: v for k, v in SURFACE.items() if k != "divisor"})
    assert main(["push", surf, "--divisor", "1"]) == 0
    out = capsys.readouterr().out
    assert '"ch3": "-25/3"' in out
    assert "-25/6" in out


def test_surface_bounds_command(tmp_path, capsys):
    path = _write(tmp_path, "sb.json", {"r": 2, "c1_sq": 0, "c2_num": 4, "surface_kind": "k3"})
    assert main(["surface-bounds", path]) == 0
    out = capsys.readouterr().out
    assert "index_k3" in out and "boundary" in out


def test_bounds_command(tmp_path, capsys):
    tq = _write(tmp_path, "tq.json", TQ)
    assert main(["bounds", tq, "--const-c", "1"]) == 0
    out = capsys.readouterr().out
    assert "c3_guess" in out


def test_minimize_command(tmp_path, capsys):
    rec = _write(tmp_path, "rec.json", INTERIOR)
    assert main(["minimize", rec, "--start-b", "-0.9", "--start-j", "1.1"]) == 0
    out = capsys.readouterr().out
    assert "value:" in out


def test_geometry_dir_env(tmp_path, monkeypatch, capsys):
    from attrkit.geometry import preset

    gdir = tmp_path / "geoms"
    gdir.mkdir()
    (gdir / "mine.json").write_text(json.dumps(preset("quintic").to_dict()))
    monkeypatch.setenv("ATTRKIT_GEOMETRY_DIR", str(gdir))
    tq = _write(tmp_path, "tq.json", TQ)
    assert main(["check", tq, "--geometry", str(gdir / "mine.json")]) == 2
    capsys.readouterr()


def test_help_exit(capsys):
    assert main([]) == 0
    assert "attrkit" in capsys.readouterr().out
