import pytest

from pehfault.cli import (
    EXIT_CONFIG_ERROR,
    EXIT_DATA_ERROR,
    EXIT_OK,
    RunConfig,
    _check_periods_fit_segment,
    main,
    parse_config_file,
    validate_config,
)
from pehfault.errors import ConfigError
from tests.conftest import SMALL_SEGMENT_S, SMALL_SEGMENTS


def small_flags(corpus, out_dir):
    return [
        "--manifest",
        str(corpus.root / "manifest.csv"),
        "--out",
        str(out_dir),
        "--segment",
        str(SMALL_SEGMENT_S),
        "--segments",
        str(SMALL_SEGMENTS),
        "--T",
        str(SMALL_SEGMENT_S),
    ]


class TestConfigHandling:
    def test_config_file_roundtrip(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text(
            "# run parameters\n"
            "thickness_mm=0.45\n"
            "t_s=1.5\n"
            "segment_s=1.5\n"
            "n_repeats=5\n"
            "thicknesses=0.35,0.50\n"
            "labels=healthy,ball_crack\n"
            "stratified=true\n"
        )
        values = parse_config_file(path)
        assert values["thickness_mm"] == 0.45
        assert values["thicknesses"] == (0.35, 0.50)
        assert values["labels"] == ("healthy", "ball_crack")
        assert values["stratified"] is True

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("bogus_key=1\n")
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config_file(path)

    def test_validate_catches_bad_values(self):
        with pytest.raises(ConfigError):
            validate_config(RunConfig(t_s=-1.0))
        with pytest.raises(ConfigError):
            validate_config(RunConfig(k=0))
        with pytest.raises(ConfigError):
            validate_config(RunConfig(train_fraction=1.5))
        with pytest.raises(ConfigError, match="segment"):
            _check_periods_fit_segment(RunConfig(t_s=5.0, segment_s=3.0), [5.0])

    def test_unknown_config_key_exit_code(self, tmp_path, capsys):
        path = tmp_path / "run.cfg"
        path.write_text("bogus=1\n")
        assert main(["energy-report", "--config", str(path)]) == EXIT_CONFIG_ERROR
        assert "config error" in capsys.readouterr().err

    def test_missing_manifest_is_config_error(self, tmp_path, capsys):
        assert main(["extract", "--out", str(tmp_path)]) == EXIT_CONFIG_ERROR

    def test_nonexistent_manifest_is_data_error(self, tmp_path, capsys):
        code = main(["extract", "--manifest", str(tmp_path / "nope.csv"), "--out", str(tmp_path)])
        assert code == EXIT_DATA_ERROR
        assert "data error" in capsys.readouterr().err


class TestThoughtExperiment:
    def test_default_ordering_and_margin(self, capsys):
        assert main(["thought-experiment"]) == EXIT_OK
        out = capsys.readouterr().out
        rows = [line for line in out.splitlines() if "|" in line and "input" not in line]
        healthy = [float(tok) for tok in rows[0].split("|")[1:3]]
        faulty = [float(tok) for tok in rows[1].split("|")[1:3]]
        assert healthy[0] / healthy[1] >= 20.0
        assert faulty[1] / faulty[0] >= 20.0
        assert rows[0].strip().endswith("healthy")
        assert rows[1].strip().endswith("faulty")

    def test_identical_frequencies_identical_rows(self, capsys):
        assert main(["thought-experiment", "--f-healthy", "180", "--f-faulty", "180"]) == EXIT_OK
        out = capsys.readouterr().out
        rows = [line for line in out.splitlines() if "|" in line and "input" not in line]
        healthy = [float(tok) for tok in rows[0].split("|")[1:3]]
        faulty = [float(tok) for tok in rows[1].split("|")[1:3]]
        assert healthy[0] == pytest.approx(faulty[0], rel=1e-9)
        assert healthy[1] == pytest.approx(faulty[1], rel=1e-9)


class TestExtract:
    def test_row_count_and_rerun_identical(self, small_corpus, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(["extract", *small_flags(small_corpus, out_a), "--thickness", "0.50"]) == EXIT_OK
        assert main(["extract", *small_flags(small_corpus, out_b), "--thickness", "0.50"]) == EXIT_OK
        content = (out_a / "features.csv").read_bytes()
        assert content == (out_b / "features.csv").read_bytes()
        lines = content.decode().splitlines()
        assert lines[0] == "recording_id,segment_index,label,design,T_s,feature_0"
        assert len(lines) == 1 + len(small_corpus.entries) * SMALL_SEGMENTS

    def test_empty_manifest_header_only_and_nonzero_exit(self, tmp_path, capsys):
        manifest = tmp_path / "manifest.csv"
        manifest.write_text("path,label,bearing_type,load_w,fs_hz\n")
        code = main(["extract", "--manifest", str(manifest), "--out", str(tmp_path / "out")])
        assert code == EXIT_DATA_ERROR
        lines = (tmp_path / "out" / "features.csv").read_text().splitlines()
        assert len(lines) == 1
        assert lines[0].startswith("recording_id,segment_index,label,design,T_s")


class TestClassify:
    def test_repeat_seed_deterministic(self, small_corpus, tmp_path, capsys):
        args = ["classify", *small_flags(small_corpus, tmp_path / "a"), "--repeats", "1", "--seed", "7"]
        assert main(args) == EXIT_OK
        first = capsys.readouterr().out.replace(str(tmp_path / "a"), "OUT")
        args[args.index(str(tmp_path / "a"))] = str(tmp_path / "b")
        assert main(args) == EXIT_OK
        second = capsys.readouterr().out.replace(str(tmp_path / "b"), "OUT")
        assert first == second
        assert (tmp_path / "a" / "classification.csv").read_bytes() == (tmp_path / "b" / "classification.csv").read_bytes()

    def test_surrogate_accuracy(self, small_corpus, tmp_path, capsys):
        assert main(["classify", *small_flags(small_corpus, tmp_path), "--thickness", "0.50", "--repeats", "5"]) == EXIT_OK
        out = capsys.readouterr().out
        mean = float(out.split("mean accuracy")[1].split()[0])
        assert mean >= 0.85

    def test_csv_layout(self, small_corpus, tmp_path):
        assert main(["classify", *small_flags(small_corpus, tmp_path), "--repeats", "2", "--seed", "3"]) == EXIT_OK
        lines = (tmp_path / "classification.csv").read_text().splitlines()
        assert lines[0] == "repeat,seed,accuracy,n_train,n_validation"
        assert len(lines) == 3
        assert lines[1].split(",")[1] == "3"
        assert lines[2].split(",")[1] == "4"


class TestSweep:
    def test_table_shape(self, small_corpus, tmp_path, capsys):
        args = [
            "sweep",
            *small_flags(small_corpus, tmp_path),
            "--thicknesses",
            "0.35,0.50",
            "--t-values",
            str(SMALL_SEGMENT_S),
            "--repeats",
            "2",
        ]
        assert main(args) == EXIT_OK
        lines = (tmp_path / "sweep.csv").read_text().splitlines()
        assert lines[0] == "design,thickness_mm,T_s,mean_accuracy,std_accuracy,n_repeats,seed0"
        assert len(lines) == 3


class TestScatter:
    def test_four_points_and_discriminating_design(self, default_corpus, tmp_path, capsys):
        args = [
            "scatter",
            "--manifest",
            str(default_corpus.root / "manifest.csv"),
            "--out",
            str(tmp_path),
        ]
        assert main(args) == EXIT_OK
        lines = (tmp_path / "scatter.csv").read_text().splitlines()
        assert lines[0] == "design,thickness_mm,mean_healthy_j,mean_faulty_j,diag_distance_j"
        assert len(lines) == 5
        rows = [line.split(",") for line in lines[1:]]
        farthest = max(rows, key=lambda row: float(row[4]))
        # healthy's 200 Hz component lands in the 0.50 mm design's pass-band
        assert farthest[0] == "peh_0.50mm"
        svg = (tmp_path / "scatter.svg").read_text()
        assert svg.startswith("<svg")
        assert "stroke-dasharray" in svg
        assert svg.count("<circle") == 4
        # SVG is a pure function of the CSV data: rerun is byte-identical
        rerun = tmp_path / "rerun"
        assert main([*args[:4], str(rerun)]) == EXIT_OK
        assert (rerun / "scatter.svg").read_bytes() == (tmp_path / "scatter.svg").read_bytes()

    def test_identical_class_recipes_sit_on_diagonal(self, tmp_path):
        spec = tmp_path / "spec.cfg"
        spec.write_text(
            "count_per_class=2\n"
            "fs_hz=8192\n"
            "duration_s=1.0\n"
            "amplitude_jitter=0\n"
            "healthy.tones=200:1.0\n"
            "ball_crack.tones=200:1.0\n"
        )
        root = tmp_path / "sym"
        assert main(["surrogate-gen", "--spec", str(spec), "--out", str(root), "--seed", "2"]) == EXIT_OK
        args = [
            "scatter",
            "--manifest",
            str(root / "corpus" / "manifest.csv"),
            "--out",
            str(tmp_path / "out"),
            "--segment",
            "0.25",
            "--segments",
            "2",
            "--T",
            "0.25",
        ]
        assert main(args) == EXIT_OK
        for line in (tmp_path / "out" / "scatter.csv").read_text().splitlines()[1:]:
            assert float(line.split(",")[4]) <= 1e-9

    def test_missing_fault_class_is_data_error(self, tmp_path, capsys):
        spec = tmp_path / "spec.cfg"
        spec.write_text("count_per_class=2\nfs_hz=8192\nduration_s=1.0\nhealthy.tones=200:1.0\n")
        root = tmp_path / "onlyhealthy"
        assert main(["surrogate-gen", "--spec", str(spec), "--out", str(root)]) == EXIT_OK
        args = [
            "scatter",
            "--manifest",
            str(root / "corpus" / "manifest.csv"),
            "--out",
            str(tmp_path / "out"),
            "--segment",
            "0.25",
            "--segments",
            "2",
            "--T",
            "0.25",
        ]
        assert main(args) == EXIT_DATA_ERROR


class TestEnergyReport:
    def test_exact_ratio_and_feature_rate(self, capsys):
        assert main(["energy-report", "--fs-raw", "51200", "--T", "3"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "153600" in out
        assert "0.33 Hz" in out

    def test_degenerate_ratio_one(self, capsys):
        assert main(["energy-report", "--fs-raw", "4", "--T", "0.25"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "1x" in out

    def test_zero_cost_model(self, capsys):
        assert main(["energy-report", "--fs-raw", "51200", "--T", "3", "--e-adc", "0", "--e-tx", "0"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "raw 0 J/s, feature 0 J/s" in out


class TestSurrogateGen:
    def test_seeded_determinism(self, tmp_path, capsys):
        spec = tmp_path / "spec.cfg"
        spec.write_text(
            "count_per_class=2\nfs_hz=8192\nduration_s=0.5\n"
            "healthy.tones=120:0.8,200:1.0\nhealthy.noise_sigma=0.05\n"
            "ball_crack.tones=60:0.6,95:0.6\nball_crack.noise_sigma=0.3\n"
        )
        for name in ("a", "b"):
            assert main(["surrogate-gen", "--spec", str(spec), "--out", str(tmp_path / name), "--seed", "9"]) == EXIT_OK
        a_files = sorted((tmp_path / "a" / "corpus").glob("*.f32"))
        b_files = sorted((tmp_path / "b" / "corpus").glob("*.f32"))
        assert len(a_files) == 4
        assert all(x.read_bytes() == y.read_bytes() for x, y in zip(a_files, b_files))

    def test_spec_seed_used_without_explicit_seed(self, tmp_path):
        spec = tmp_path / "spec.cfg"
        spec.write_text("count_per_class=2\nfs_hz=8192\nduration_s=0.5\nseed=31\nhealthy.tones=200:1.0\n")
        assert main(["surrogate-gen", "--spec", str(spec), "--out", str(tmp_path / "a")]) == EXIT_OK
        assert main(["surrogate-gen", "--spec", str(spec), "--out", str(tmp_path / "b"), "--seed", "31"]) == EXIT_OK
        a = sorted((tmp_path / "a" / "corpus").glob("*.f32"))[0].read_bytes()
        b = sorted((tmp_path / "b" / "corpus").glob("*.f32"))[0].read_bytes()
        assert a == b
