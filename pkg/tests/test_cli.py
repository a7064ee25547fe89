from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import pytest

from harmonia import cli, constructions
from harmonia.complex import format_filtration
from harmonia.reports import TrialReport


def write_filtration(path: Path, name: str, text: str) -> Path:
    target = path / name
    target.write_text(text, encoding="utf-8")
    return target


@pytest.fixture
def book_file(tmp_path: Path) -> Path:
    return write_filtration(
        tmp_path, "book.txt", format_filtration(constructions.example_one_book())
    )


def test_validate_reports_ok(book_file: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert cli.main(["validate", str(book_file)]) == 0
    assert capsys.readouterr().out.startswith("ok: 19 simplices")


def test_validate_names_the_bad_line(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    path = write_filtration(tmp_path, "bad.txt", "0 0\n0 1\n1 0 1\n2 0 1 2\n")

    assert cli.main(["validate", str(path)]) == 2
    out = capsys.readouterr().out
    assert out.startswith("invalid: line 4:")
    assert "[0,1,2]" in out


def test_validate_rejects_non_ascii_vertex(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    path = write_filtration(tmp_path, "digits.txt", "0 0\n0 \N{SUPERSCRIPT TWO}\n")

    assert cli.main(["validate", str(path)]) == 2
    assert capsys.readouterr().out.startswith("invalid: line 2:")


def test_validate_missing_file(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert cli.main(["validate", str(tmp_path / "missing.txt")]) == 1
    assert capsys.readouterr().out.startswith("error: cannot read")


def test_barcode_json(book_file: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert cli.main(["barcode", str(book_file), "--dim", "1", "--reps"]) == 0

    payload = json.loads(capsys.readouterr().out)
    assert payload["provenance"]["algorithm"] == "canonical"
    assert [(e["birth"], e["death"]) for e in payload["bars"]["1"]] == [
        ("9", "16"),
        ("11", "18"),
        ("13", "17"),
        ("15", "19"),
    ]
    assert all(entry["representative"] for entry in payload["bars"]["1"])


def test_barcode_text_for_each_algorithm(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    path = write_filtration(
        tmp_path, "square.txt", format_filtration(constructions.repair_square())
    )
    expected = {
        "persistence": ["1 2", "1 3"],
        "canonical": ["1 2", "1 3"],
        "subordinate": ["1 2", "1 2", "2 3"],
    }

    for algo, lines in expected.items():
        assert cli.main(["barcode", str(path), "--algo", algo, "--format", "text"]) == 0
        assert capsys.readouterr().out.splitlines() == lines


def test_barcode_rejects_invalid_input(tmp_path: Path) -> None:
    path = write_filtration(tmp_path, "dup.txt", "0 0\n0 0\n")

    assert cli.main(["barcode", str(path)]) == 2


def test_bottleneck_between_files(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    left = write_filtration(tmp_path, "left.txt", format_filtration(constructions.swap_pair(10)))
    right = write_filtration(
        tmp_path, "right.txt", format_filtration(constructions.swap_pair(10, swapped=True))
    )

    assert cli.main(["bottleneck", str(left), str(right)]) == 0
    assert capsys.readouterr().out.strip() == "1"
    assert cli.main(["bottleneck", str(left), str(right), "--algo", "subordinate"]) == 0
    assert capsys.readouterr().out.strip() == "10"


def test_bottleneck_accepts_documents(
    book_file: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    assert cli.main(["barcode", str(book_file), "--algo", "persistence"]) == 0
    document = write_filtration(tmp_path, "persistence.json", capsys.readouterr().out)

    assert cli.main(["bottleneck", str(document), str(book_file)]) == 0
    assert capsys.readouterr().out.strip() == "2"
    assert cli.main(["bottleneck", str(document), str(book_file), "--dim", "3"]) == 2


def test_render_writes_svg(book_file: Path, tmp_path: Path) -> None:
    target = tmp_path / "book.svg"

    assert cli.main(["render", str(book_file), "--out", str(target)]) == 0
    assert b"<svg" in target.read_bytes()


def test_stability_prints_reports_and_summary(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    workbook = tmp_path / "trials.xlsx"

    code = cli.main(
        ["stability", "--random", "3", "--trials", "4", "--eps", "1/10", "--xlsx", str(workbook)]
    )

    lines = capsys.readouterr().out.splitlines()
    assert code == 0
    assert [json.loads(line)["seed"] for line in lines[:-1]] == [3, 4, 5, 6]
    summary = json.loads(lines[-1])["summary"]
    assert summary["trials"] == 4
    assert summary["passed"] == 4
    assert workbook.exists()


def test_stability_reads_yaml_and_complex(
    book_file: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    config = tmp_path / "stability.yaml"
    config.write_text("trials: 3\nkind: lower_star\n", encoding="utf-8")

    assert cli.main(["stability", "--complex", str(book_file), "--config", str(config)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 4
    assert json.loads(lines[0])["kind"] == "lower_star"


def test_stability_exit_code_on_failure(
    monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
) -> None:
    failing = TrialReport.from_values(
        seed=0,
        kind="monotone",
        dimension=1,
        requested_eps=Fraction(1, 5),
        eps=Fraction(1, 5),
        sup_distance=Fraction(1, 5),
        canonical_distance=Fraction(1),
        persistence_distance=Fraction(0),
    )
    monkeypatch.setattr(cli, "run_trials", lambda *_, **__: [failing])

    assert cli.main(["stability", "--trials", "1"]) == 3
    summary = json.loads(capsys.readouterr().out.splitlines()[-1])["summary"]
    assert summary["failed_seeds"] == [0]


def test_stability_rejects_bad_eps() -> None:
    assert cli.main(["stability", "--eps", "abc"]) == 2


def test_instability(capsys: pytest.CaptureFixture[str]) -> None:
    assert cli.main(["instability", "--scales", "3", "30"]) == 0

    rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [row["subordinate_distance"] for row in rows] == ["3", "30"]
    assert [row["canonical_distance"] for row in rows] == ["1", "1"]


def test_unknown_command_is_an_input_error() -> None:
    assert cli.main(["frobnicate"]) == 2
