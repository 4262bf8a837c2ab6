import pytest

from hjelmslev import IncidenceStructure, read_artifact, write_artifact
from hjelmslev._cli import EXIT_BAD_INPUT, EXIT_FAILED, EXIT_OK, build_cli, main


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def _fields(out):
    return dict(row.split("=", 1) for row in out.splitlines() if "=" in row and " " not in row.split("=", 1)[0])


@pytest.fixture
def seed_files(tmp_path, capsys):
    """PG(2,3), AG(2,3), OA(2,4,3) and OA(2,3,3) written by the CLI."""
    files = {
        "pp": tmp_path / "p3.inc",
        "ap": tmp_path / "a3.inc",
        "oa": tmp_path / "oa3.oa",
        "short_oa": tmp_path / "oa3x3.oa",
    }
    assert main(["gen-pp", "--order", "3", "-o", str(files["pp"])]) == EXIT_OK
    assert main(["gen-ap", "--projective", str(files["pp"]), "--line", "0", "-o", str(files["ap"])]) == EXIT_OK
    assert main(["gen-oa", "--order", "3", "-o", str(files["oa"])]) == EXIT_OK
    assert main(["gen-oa", "--order", "3", "--columns", "3", "-o", str(files["short_oa"])]) == EXIT_OK
    capsys.readouterr()
    return files


@pytest.fixture
def ph_file(tmp_path, seed_files, capsys):
    path = tmp_path / "h3.inc"
    code = main(
        [
            "construct-ph",
            "--base", str(seed_files["pp"]),
            "--affine", str(seed_files["ap"]),
            "--oa", str(seed_files["oa"]),
            "--choices", "canonical",
            "-o", str(path),
        ]
    )
    assert code == EXIT_OK
    capsys.readouterr()
    return path


def _construct_ah(seed_files, output, *extra):
    return [
        "construct-ah",
        "--base", seed_files["ap"],
        "--affine", seed_files["ap"],
        "--oa", seed_files["short_oa"],
        "-o", output,
        *extra,
    ]


def test_gen_pp(tmp_path, capsys):
    code, out = _run(capsys, "gen-pp", "--order", 3, "-o", tmp_path / "p3.inc")
    fields = _fields(out)
    assert code == EXIT_OK
    assert (fields["order"], fields["points"], fields["lines"]) == ("3", "13", "13")
    assert len(fields["digest"]) == 64
    assert read_artifact(tmp_path / "p3.inc").num_lines == 13


def test_gen_pp_with_modulus(tmp_path, capsys):
    code, out = _run(capsys, "gen-pp", "--order", 4, "--modulus", "1,1,1", "-o", tmp_path / "p4.inc")
    assert code == EXIT_OK
    assert _fields(out)["points"] == "21"


def test_gen_ap_from_order(tmp_path, capsys):
    code, out = _run(capsys, "gen-ap", "--order", 4, "-o", tmp_path / "a4.inc")
    fields = _fields(out)
    assert code == EXIT_OK
    assert (fields["order"], fields["classes"], fields["points"], fields["lines"]) == ("4", "5", "16", "20")


def test_gen_oa_columns(tmp_path, capsys):
    code, out = _run(capsys, "gen-oa", "--order", 4, "--columns", 3, "-o", tmp_path / "oa.oa")
    assert code == EXIT_OK
    assert _fields(out) == {"columns": "3", "symbols": "4"}


def test_complete_oa(seed_files, tmp_path, capsys):
    completed = tmp_path / "completed.oa"
    code, out = _run(capsys, "complete-oa", seed_files["short_oa"], "-o", completed)
    assert code == EXIT_OK
    assert _fields(out) == {"columns": "4", "symbols": "3"}
    _, out = _run(capsys, "info", completed)
    assert _fields(out) == {"artifact": "oa", "columns": "4", "symbols": "3", "valid": "true"}


def test_construct_and_verify_ph(seed_files, tmp_path, capsys):
    plane = tmp_path / "h3.inc"
    ledger = tmp_path / "c3.ch"
    code, out = _run(
        capsys,
        "construct-ph",
        "--base", seed_files["pp"],
        "--affine", seed_files["ap"],
        "--oa", seed_files["oa"],
        "--choices", "canonical",
        "-o", plane,
        "--emit-choices", ledger,
    )
    fields = _fields(out)
    assert code == EXIT_OK
    assert (fields["kind"], fields["t"], fields["r"], fields["points"]) == ("projective", "3", "3", "117")

    code, out = _run(capsys, "verify", "--ph", plane)
    assert code == EXIT_OK
    assert out == "VERDICT pass\nPARAMS t=3 r=3\n"

    _, out = _run(capsys, "info", ledger)
    assert _fields(out)["artifact"] == "choices"
    assert _fields(out)["digest"] == fields["choices"]


def test_rebuild_from_emitted_choices(seed_files, tmp_path, capsys):
    ledger = tmp_path / "c3.ch"
    args = ["construct-ph", "--base", seed_files["pp"], "--affine", seed_files["ap"], "--oa", seed_files["oa"]]
    _, first = _run(capsys, *args, "--choices", "random", "--seed", 4, "-o", tmp_path / "a.inc", "--emit-choices", ledger)
    _, again = _run(capsys, *args, "--choices", ledger, "-o", tmp_path / "b.inc")
    assert (tmp_path / "a.inc").read_bytes() == (tmp_path / "b.inc").read_bytes()
    assert _fields(first)["digest"] == _fields(again)["digest"]


def test_random_runs_are_byte_identical(seed_files, tmp_path, capsys, fresh_settings):
    outputs = []
    for threads in (1, 2, 4):
        path = tmp_path / f"h{threads}.inc"
        code, _ = _run(
            capsys,
            "--threads", threads,
            "construct-ph",
            "--base", seed_files["pp"],
            "--affine", seed_files["ap"],
            "--oa", seed_files["oa"],
            "--choices", "random",
            "--seed", 7,
            "-o", path,
        )
        assert code == EXIT_OK
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]


def test_corrupted_plane_fails(ph_file, tmp_path, capsys):
    structure = read_artifact(ph_file)
    lines = list(structure.lines)
    lines[0] = lines[0] - {min(lines[0])}
    broken = tmp_path / "broken.inc"
    write_artifact(broken, IncidenceStructure(structure.num_points, lines))

    code, out = _run(capsys, "verify", "--ph", broken)
    assert code == EXIT_FAILED
    assert out.startswith("VERDICT fail\n")
    assert "VIOLATION " in out


def test_verify_uniform(ph_file, tmp_path, capsys):
    report = tmp_path / "report.txt"
    code, out = _run(capsys, "verify", "--uniform", ph_file, "-o", report)
    assert code == EXIT_OK
    assert out == "VERDICT pass\nPARAMS t=3 r=3\nuniformity=2\n"
    assert read_artifact(report).passed


def test_truncate(ph_file, tmp_path, capsys):
    affine = tmp_path / "t3.inc"
    code, out = _run(capsys, "truncate", ph_file, "--line-class", 0, "-o", affine)
    fields = _fields(out)
    assert code == EXIT_OK
    assert (fields["kind"], fields["points"], fields["lines"]) == ("affine", "81", "108")
    code, out = _run(capsys, "verify", "--ah", affine)
    assert code == EXIT_OK
    assert out == "VERDICT pass\nPARAMS t=3 r=3\n"


def test_construct_ah_and_extend(seed_files, tmp_path, capsys):
    affine = tmp_path / "ah3.inc"
    code, out = _run(capsys, *_construct_ah(seed_files, affine))
    assert code == EXIT_OK
    assert _fields(out)["kind"] == "affine"

    code, out = _run(capsys, "verify", "--uniform", "--kind", "affine", affine)
    assert code == EXIT_OK

    projective = tmp_path / "ph3.inc"
    code, out = _run(
        capsys,
        "extend",
        "--base", seed_files["ap"],
        "--affine", seed_files["ap"],
        "--oa", seed_files["short_oa"],
        "--plane", affine,
        "--new-affine", seed_files["ap"],
        "--infinity-oa", seed_files["oa"],
        "-o", projective,
    )
    fields = _fields(out)
    assert code == EXIT_OK
    assert (fields["kind"], fields["points"], fields["infinity_class"]) == ("projective", "117", "12")

    code, out = _run(capsys, "verify", "--ph", projective)
    assert code == EXIT_OK

    back = tmp_path / "back.inc"
    _, out = _run(capsys, "truncate", projective, "--line-class", 12, "-o", back)
    assert _fields(out)["points"] == "81"


def test_extend_rejects_foreign_plane(seed_files, ph_file, tmp_path, capsys):
    code, _ = _run(
        capsys,
        "extend",
        "--base", seed_files["ap"],
        "--affine", seed_files["ap"],
        "--oa", seed_files["short_oa"],
        "--plane", ph_file,
        "--new-affine", seed_files["ap"],
        "--infinity-oa", seed_files["oa"],
        "-o", tmp_path / "out.inc",
    )
    assert code == EXIT_BAD_INPUT


def test_restrict(ph_file, tmp_path, capsys):
    local = tmp_path / "local.inc"
    code, out = _run(capsys, "restrict", ph_file, "--point", 0, "-o", local)
    fields = _fields(out)
    assert code == EXIT_OK
    assert (fields["center"], fields["points"], fields["lines"]) == ("0", "9", "12")
    assert fields["multiplicities"] == ",".join(["3"] * 12)
    assert read_artifact(local).num_points == 9


def test_restrict_affine_plane(seed_files, tmp_path, capsys):
    affine = tmp_path / "ah3.inc"
    assert _run(capsys, *_construct_ah(seed_files, affine))[0] == EXIT_OK
    code, out = _run(capsys, "restrict", affine, "--point", 0)
    fields = _fields(out)
    assert code == EXIT_OK
    assert (fields["center"], fields["points"], fields["lines"]) == ("0", "9", "12")
    assert fields["multiplicities"] == ",".join(["3"] * 12)


def test_fingerprint(seed_files, ph_file, tmp_path, capsys):
    other = tmp_path / "other.inc"
    _run(
        capsys,
        "construct-ph",
        "--base", seed_files["pp"],
        "--affine", seed_files["ap"],
        "--oa", seed_files["oa"],
        "--choices", "random",
        "-o", other,
    )
    code, out = _run(capsys, "fingerprint", ph_file, other)
    assert code == EXIT_OK
    assert _fields(out)["equal"] == "true"

    _, out = _run(capsys, "fingerprint", seed_files["pp"], seed_files["ap"])
    assert _fields(out)["equal"] == "false"


def test_info_on_structure(seed_files, capsys):
    code, out = _run(capsys, "info", seed_files["ap"])
    fields = _fields(out)
    assert code == EXIT_OK
    assert (fields["artifact"], fields["line_sizes"], fields["points"]) == ("inc", "3", "9")


@pytest.mark.parametrize(
    "argv",
    [
        ["gen-pp", "--order", "6", "-o", "{tmp}/p6.inc"],
        ["gen-oa", "--order", "3", "--columns", "9", "-o", "{tmp}/oa.oa"],
        ["verify", "--ph", "{tmp}/missing.inc"],
        ["verify", "--ph", "{tmp}/garbage.inc"],
        ["truncate", "{tmp}/garbage.inc", "--line-class", "0", "-o", "{tmp}/t.inc"],
        ["--threads", "0", "info", "{tmp}/garbage.inc"],
    ],
)
def test_bad_input(tmp_path, capsys, fresh_settings, argv):
    (tmp_path / "garbage.inc").write_text("INC 1\npoints two\n", encoding="utf-8")
    code = main([a.format(tmp=tmp_path) for a in argv])
    assert code == EXIT_BAD_INPUT
    assert capsys.readouterr().err.startswith("error: ")


def test_verify_rejects_wrong_artifact(seed_files, capsys):
    code, _ = _run(capsys, "verify", "--ph", seed_files["oa"])
    assert code == EXIT_BAD_INPUT


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        build_cli().parse_args([])
