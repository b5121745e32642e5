import csv
import hashlib
import json
import math

import pytest

from spinlab.analysis import dicke_average
from spinlab.cli import ExperimentConfig, fmt, main
from spinlab.errors import ConfigError

ZONE_PARAMS = [[0.5, 1 / 3, 1], [2, 0.5, 1], [5, -3, 1], [5, 3, 1]]


def write_config(tmp_path, name="cfg.json", **fields):
    fields.setdefault("output_dir", str(tmp_path / "out"))
    path = tmp_path / name
    path.write_text(json.dumps(fields))
    return str(path)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_zones_experiment(tmp_path):
    cfg = write_config(tmp_path, experiment="zones", params=ZONE_PARAMS)
    assert main(["run", "--config", cfg]) == 0
    zones = json.loads((tmp_path / "out" / "zones.json").read_text())["zones"]
    assert [z["zone"] for z in zones] == ["I", "II", "III", "IV"]
    assert zones[2]["esqpt_energies"] == [-1.0, 1.0]
    labels = [fp["label"] for fp in zones[0]["fixed_points"]]
    assert labels == ["FP_XZ+", "FP_XZ-", "FP_YZ+", "FP_YZ-", "FP_Z+", "FP_Z-"]


def test_dicke_average_with_fit_and_manifest(tmp_path):
    cfg = write_config(tmp_path, experiment="dicke-average", sizes=[200, 400, 800], fractions=[0.5])
    assert main(["run", "--config", cfg]) == 0
    out = tmp_path / "out"
    rows = read_csv(out / "scaling.csv")
    assert rows[0] == ["basis", "N", "p", "s_max", "avg_ee", "normalized"]
    assert len(rows) == 4
    assert float(rows[1][5]) == dicke_average(200, 0.5).normalized  # round-trips exactly
    fits = json.loads((out / "fit.json").read_text())["fits"]
    assert fits[0]["a"] == 0.5 and {"b", "r2", "one_minus_r2", "scan"} <= set(fits[0])
    assert len(fits[0]["scan"]) == 41
    manifest = json.loads((out / "manifest.json").read_text())
    assert set(manifest["files"]) == {"scaling.csv", "fit.json"}
    for name, digest in manifest["files"].items():
        assert hashlib.sha256((out / name).read_bytes()).hexdigest() == digest
    assert manifest["config"]["sizes"] == [200, 400, 800]
    assert len(manifest["tasks"]) == 3 and "version" in manifest


def test_rerun_is_byte_identical(tmp_path):
    fields = dict(experiment="lmg-spectrum", params=[[5, -3, 1]], sizes=[64, 128], fractions=[0.25, 0.5])
    a = write_config(tmp_path, "a.json", output_dir=str(tmp_path / "a"), **fields)
    b = write_config(tmp_path, "b.json", output_dir=str(tmp_path / "b"), threads=2, **fields)
    assert main(["run", "--config", a]) == 0
    assert main(["run", "--config", b]) == 0
    for name in ("scaling.csv", "fit.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_distribution_outputs(tmp_path):
    cfg = write_config(tmp_path, experiment="distribution", params=[[5, 3, 1]], sizes=[256],
                       fractions=[0.5], bins=51)
    assert main(["run", "--config", cfg]) == 0
    profile = read_csv(tmp_path / "out" / "profile.csv")
    assert profile[0] == ["index", "energy", "scaled_energy", "entropy"]
    assert len(profile) - 1 == 129  # positive sector of N = 256
    dos = read_csv(tmp_path / "out" / "dos.csv")
    assert len(dos) - 1 == 51
    assert sum(int(r[2]) for r in dos[1:]) == 129
    for row in profile[1:] + dos[1:]:
        assert all(math.isfinite(float(v)) for v in row)


def test_c0_and_superposition(tmp_path):
    cfg = write_config(tmp_path, experiment="c0-profile", sizes=[64], fractions=[0.125, 0.25, 0.5])
    assert main(["run", "--config", cfg]) == 0
    assert len(read_csv(tmp_path / "out" / "c0.csv")) == 4
    cfg = write_config(tmp_path, "s.json", experiment="superposition-average", sizes=[32],
                       output_dir=str(tmp_path / "s"))
    assert main(["run", "--config", cfg, "--sector", "positive"]) == 0
    assert read_csv(tmp_path / "s" / "scaling.csv")[1][0] == "superposition"


def test_fit_subcommand(tmp_path, capsys):
    cfg = write_config(tmp_path, experiment="dicke-average", sizes=[100, 200, 400])
    assert main(["run", "--config", cfg]) == 0
    capsys.readouterr()
    assert main(["fit", "--input", str(tmp_path / "out" / "scaling.csv"), "--intercept", "0.5",
                 "--scan", "0.48:0.52:0.001"]) == 0
    fits = json.loads(capsys.readouterr().out)["fits"]
    assert fits[0]["a"] == 0.5 and 0.48 <= fits[0]["best_a"] <= 0.52


def test_zones_subcommand(capsys):
    assert main(["zones", "--gx", "5", "--gy", "-3", "--h", "1"]) == 0
    zone = json.loads(capsys.readouterr().out)["zones"][0]
    assert (zone["zone"], zone["sub_case"]) == ("III", "a")
    assert main(["zones", "--gx", "1", "--gy", "0.5", "--h", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["zones"][0]["zone"] == "boundary"


@pytest.mark.parametrize("fields", [
    dict(experiment="dicke-average", sizes=[101]),
    dict(experiment="dicke-average", sizes=[100], fractions=[0.125]),
    dict(experiment="dicke-average", sizes=[100], colour="red"),
    dict(experiment="nonsense", sizes=[100]),
    dict(experiment="scaling-fit", sizes=[100, 200], intercept_scan=[0.52, 0.48, 0.001]),
    dict(experiment="zones"),
])
def test_config_errors_exit_two(tmp_path, fields):
    assert main(["run", "--config", write_config(tmp_path, **fields)]) == 2


def test_malformed_json_exit_two(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["run", "--config", str(path)]) == 2


def test_domain_error_exit_three():
    assert main(["zones", "--gx", "1", "--gy", "0.5", "--h", "0"]) == 3


def test_io_errors_exit_four(tmp_path):
    assert main(["run", "--config", str(tmp_path / "missing.json")]) == 4
    blocker = tmp_path / "file"
    blocker.write_text("x")
    cfg = write_config(tmp_path, experiment="zones", params=ZONE_PARAMS,
                       output_dir=str(blocker / "sub"))
    assert main(["run", "--config", cfg]) == 4


def test_number_format():
    assert fmt(0.1) == "0.1"
    x = 1 / 3
    assert float(fmt(x)) == x and len(fmt(x).replace("0.", "")) <= 17
    assert fmt(7) == "7"
    with pytest.raises(Exception):
        fmt(float("nan"))


def test_config_validation_direct():
    cfg = ExperimentConfig.from_dict({"experiment": "dicke-average", "sizes": [10.0]})
    assert cfg.sizes == [10]
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"experiment": "dicke-average", "sizes": [10.5]})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict([1, 2])
