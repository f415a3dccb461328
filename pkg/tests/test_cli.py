"""End-to-end command line tests over the synthetic speaker fixture."""

import json
import math

import pytest

from tractvar.cli import main
from tractvar.tvcsv import read_tv_csv

from helpers import (
    ANGLE_TOL,
    DISTANCE_TOL,
    EXPECTED_TV,
    on_arc,
    palate_coords,
    reference_pellets,
    wall_coords,
    write_pellet_csv,
    write_speaker_fixture,
    write_trace_csv,
)


def run_cli(*args):
    return main([str(a) for a in args])


def write_manifest(root, entry):
    path = root / "manifest.json"
    path.write_text(json.dumps(entry))
    return path


def penetration_fixture(root):
    """Speaker whose tongue-body circle pokes 5 mm past the palate."""
    root.mkdir(parents=True, exist_ok=True)
    write_trace_csv(root / "palate.csv", palate_coords())
    write_trace_csv(root / "wall.csv", wall_coords())
    coords = dict(reference_pellets())
    cx, cy = on_arc(20.25, radius=25.0)
    coords["T2"] = (cx + 15.0, cy)
    coords["T3"] = (cx, cy - 15.0)
    coords["T4"] = (cx - 15.0, cy)
    rows = [(k / 145.0, coords) for k in range(5)]
    write_pellet_csv(root / "utt.csv", rows)
    return write_manifest(
        root,
        {
            "speaker_id": "pen",
            "sex": "F",
            "palate": "palate.csv",
            "posterior_wall": "wall.csv",
            "utterances": ["utt.csv"],
        },
    )


class TestRun:
    def test_end_to_end_constant_fixture(self, tmp_path):
        manifest = write_speaker_fixture(tmp_path / "data")
        out = tmp_path / "out"
        rc = run_cli("run", "--manifest", manifest, "--out", out)
        assert rc == 0
        assert (out / "synth.anatomy.json").exists()
        times, columns, quality = read_tv_csv(out / "utt00.tv.csv")
        assert len(times) == 30
        assert all(q == "Ok" for q in quality)
        for k, t in enumerate(times):
            assert t == k / 145.0
        for name in ("LA", "LP", "TBCD", "TTCD"):
            for v in columns[name]:
                assert v == pytest.approx(EXPECTED_TV[name], abs=DISTANCE_TOL)
        for name in ("TBCL", "TTCL"):
            for v in columns[name]:
                assert v == pytest.approx(EXPECTED_TV[name], abs=ANGLE_TOL)

    def test_creates_nested_output_dir(self, tmp_path):
        manifest = write_speaker_fixture(tmp_path / "data")
        out = tmp_path / "a" / "b" / "out"
        assert run_cli("run", "--manifest", manifest, "--out", out) == 0
        assert (out / "utt00.tv.csv").exists()

    def test_degrees_flag(self, tmp_path):
        manifest = write_speaker_fixture(tmp_path / "data")
        out = tmp_path / "out"
        rc = run_cli("run", "--manifest", manifest, "--out", out, "--degrees")
        assert rc == 0
        _, columns, _ = read_tv_csv(out / "utt00.tv.csv")
        for v in columns["TBCL"]:
            assert v == pytest.approx(33.75, abs=math.degrees(ANGLE_TOL))
        for v in columns["TTCL"]:
            assert v == pytest.approx(10.0, abs=math.degrees(ANGLE_TOL))
        # Distances are untouched by the unit switch.
        for v in columns["TBCD"]:
            assert v == pytest.approx(EXPECTED_TV["TBCD"], abs=DISTANCE_TOL)

    def test_penetration_signed_then_clamped(self, tmp_path):
        manifest = penetration_fixture(tmp_path / "data")
        out_signed = tmp_path / "signed"
        assert run_cli("run", "--manifest", manifest, "--out", out_signed) == 0
        _, columns, _ = read_tv_csv(out_signed / "utt.tv.csv")
        for v in columns["TBCD"]:
            assert v == pytest.approx(-5.0, abs=DISTANCE_TOL)

        out_clamped = tmp_path / "clamped"
        rc = run_cli(
            "run", "--manifest", manifest, "--out", out_clamped, "--clamp-tbcd"
        )
        assert rc == 0
        _, columns, _ = read_tv_csv(out_clamped / "utt.tv.csv")
        for v in columns["TBCD"]:
            assert v == 0.0
        for v in columns["TBCL"]:
            assert v == pytest.approx(math.radians(20.25), abs=ANGLE_TOL)

    def test_rate_flag(self, tmp_path):
        manifest = write_speaker_fixture(tmp_path / "data")
        out = tmp_path / "out"
        rc = run_cli("run", "--manifest", manifest, "--out", out, "--rate", 72.5)
        assert rc == 0
        times, _, _ = read_tv_csv(out / "utt00.tv.csv")
        assert len(times) == 15
        for k, t in enumerate(times):
            assert t == k / 72.5

    def test_plots_flag(self, tmp_path):
        manifest = write_speaker_fixture(tmp_path / "data")
        out = tmp_path / "out"
        rc = run_cli("run", "--manifest", manifest, "--out", out, "--plots")
        assert rc == 0
        anatomy = (out / "synth.anatomy.svg").read_text()
        assert anatomy.count("<polyline") == 4
        assert anatomy.count('class="reference-center"') == 1
        tvs = (out / "utt00.tvs.svg").read_text()
        assert tvs.count('<g class="panel"') == 6
        assert tvs.count('<polyline class="series"') == 6

    def test_no_plots_by_default(self, tmp_path):
        manifest = write_speaker_fixture(tmp_path / "data")
        out = tmp_path / "out"
        assert run_cli("run", "--manifest", manifest, "--out", out) == 0
        assert not (out / "synth.anatomy.svg").exists()
        assert not (out / "utt00.tvs.svg").exists()

    def test_missing_manifest_is_config_error(self, tmp_path):
        rc = run_cli(
            "run", "--manifest", tmp_path / "nope.json", "--out", tmp_path / "out"
        )
        assert rc == 1

    def test_missing_palate_file_is_config_error(self, tmp_path):
        root = tmp_path / "data"
        manifest = write_speaker_fixture(root)
        (root / "palate.csv").unlink()
        rc = run_cli("run", "--manifest", manifest, "--out", tmp_path / "out")
        assert rc == 1

    def test_straight_palate_is_data_error(self, tmp_path):
        # A perfectly straight palate admits no reference circle.
        root = tmp_path / "data"
        manifest = write_speaker_fixture(root)
        coords = [(-20.0 - 5.0 * k, 15.0 - 1.0 * k) for k in range(6)]
        write_trace_csv(root / "palate.csv", coords)
        rc = run_cli("run", "--manifest", manifest, "--out", tmp_path / "out")
        assert rc == 2

    def test_bad_parallelism_is_config_error(self, tmp_path):
        manifest = write_speaker_fixture(tmp_path / "data")
        rc = run_cli(
            "run", "--manifest", manifest, "--out", tmp_path / "out",
            "--parallelism", 0,
        )
        assert rc == 1

    def test_partial_utterance_failure_still_succeeds(self, tmp_path):
        root = tmp_path / "data"
        manifest = write_speaker_fixture(root, n_utterances=2)
        (root / "utt01.csv").write_text("t,broken\n")
        out = tmp_path / "out"
        rc = run_cli("run", "--manifest", manifest, "--out", out)
        assert rc == 0
        assert (out / "utt00.tv.csv").exists()
        assert not (out / "utt01.tv.csv").exists()

    def test_all_utterances_failed_is_data_error(self, tmp_path):
        root = tmp_path / "data"
        manifest = write_speaker_fixture(root, n_utterances=1)
        (root / "utt00.csv").write_text("t,broken\n")
        rc = run_cli("run", "--manifest", manifest, "--out", tmp_path / "out")
        assert rc == 2

    def test_missing_utterance_file_is_config_error(self, tmp_path):
        # I/O trouble wins over data trouble in the exit code.
        root = tmp_path / "data"
        manifest = write_speaker_fixture(root, n_utterances=2)
        (root / "utt01.csv").unlink()
        rc = run_cli("run", "--manifest", manifest, "--out", tmp_path / "out")
        assert rc == 1

    def test_parallel_matches_serial(self, tmp_path):
        root = tmp_path / "data"
        manifest = write_speaker_fixture(root, n_utterances=3, constant=False)
        out1 = tmp_path / "serial"
        out8 = tmp_path / "parallel"
        assert run_cli("run", "--manifest", manifest, "--out", out1) == 0
        assert run_cli(
            "run", "--manifest", manifest, "--out", out8, "--parallelism", 8
        ) == 0
        for u in range(3):
            name = f"utt{u:02d}.tv.csv"
            assert (out1 / name).read_bytes() == (out8 / name).read_bytes()


class TestCompare:
    def make_tv_files(self, tmp_path, n_utterances=2):
        manifest = write_speaker_fixture(
            tmp_path / "data", n_utterances=n_utterances, constant=False
        )
        out = tmp_path / "out"
        assert run_cli("run", "--manifest", manifest, "--out", out) == 0
        return [out / f"utt{u:02d}.tv.csv" for u in range(n_utterances)]

    def test_self_compare_is_unity(self, tmp_path, capsys):
        a, _ = self.make_tv_files(tmp_path)
        rc = run_cli("compare", a, a)
        assert rc == 0
        lines = capsys.readouterr().out.splitlines()
        assert "LA" in lines[0] and "Average" in lines[0]
        assert lines[1].split() == ["1.0000"] * 7
        assert lines[2] == "frames compared: 30"

    def test_cross_compare_and_json(self, tmp_path, capsys):
        a, b = self.make_tv_files(tmp_path)
        report_path = tmp_path / "report.json"
        rc = run_cli("compare", a, b, "--json", report_path)
        assert rc == 0
        payload = json.loads(report_path.read_text())
        assert payload["n_frames_compared"] == 30
        scores = payload["scores"]
        assert set(scores) == {"LA", "LP", "TBCL", "TBCD", "TTCL", "TTCD"}
        for v in scores.values():
            assert -1.0 <= v <= 1.0
        mean = sum(scores.values()) / 6.0
        assert payload["average"] == pytest.approx(mean, abs=1e-12)

    def test_frame_count_mismatch_is_data_error(self, tmp_path):
        root = tmp_path
        short = write_speaker_fixture(
            root / "short", n_frames=20, constant=False, speaker_id="a"
        )
        long = write_speaker_fixture(
            root / "long", n_frames=30, constant=False, speaker_id="b"
        )
        out_a = root / "out_a"
        out_b = root / "out_b"
        assert run_cli("run", "--manifest", short, "--out", out_a) == 0
        assert run_cli("run", "--manifest", long, "--out", out_b) == 0
        rc = run_cli("compare", out_a / "utt00.tv.csv", out_b / "utt00.tv.csv")
        assert rc == 2

    def test_missing_file_is_config_error(self, tmp_path):
        a, _ = self.make_tv_files(tmp_path)
        assert run_cli("compare", a, tmp_path / "nope.csv") == 1

    def test_constant_series_is_data_error(self, tmp_path):
        manifest = write_speaker_fixture(tmp_path / "data")
        out = tmp_path / "out"
        assert run_cli("run", "--manifest", manifest, "--out", out) == 0
        rc = run_cli("compare", out / "utt00.tv.csv", out / "utt00.tv.csv")
        assert rc == 2


class TestAnatomySubcommand:
    def test_writes_json_and_svg(self, tmp_path):
        manifest = write_speaker_fixture(tmp_path / "data")
        out = tmp_path / "anat"
        rc = run_cli("anatomy", "--manifest", manifest, "--out", out)
        assert rc == 0
        payload = json.loads((out / "synth.anatomy.json").read_text())
        assert payload["speaker_id"] == "synth"
        assert payload["sex"] == "F"
        assert payload["thickness_mm"] == 5.8
        for x, _ in payload["anterior_wall"]:
            assert x == -80.0 + 5.8
        assert len(payload["extended_palate"]) > len(payload["palate"])
        cx, cy = payload["reference_center"]
        assert cx == pytest.approx(-30.0, abs=1e-3)
        assert cy == pytest.approx(-5.0, abs=1e-3)
        assert (out / "synth.anatomy.svg").exists()

    def test_missing_manifest_is_config_error(self, tmp_path):
        rc = run_cli(
            "anatomy", "--manifest", tmp_path / "nope.json", "--out", tmp_path / "o"
        )
        assert rc == 1

    def test_bad_trace_is_data_error(self, tmp_path):
        root = tmp_path / "data"
        manifest = write_speaker_fixture(root)
        write_trace_csv(root / "palate.csv", [(-20.0 - k, 15.0 - k) for k in range(5)])
        rc = run_cli("anatomy", "--manifest", manifest, "--out", tmp_path / "o")
        assert rc == 2


class TestArgParsing:
    def test_no_subcommand_exits(self):
        with pytest.raises(SystemExit):
            main([])

    def test_unknown_subcommand_exits(self):
        with pytest.raises(SystemExit):
            main(["frobnicate"])
