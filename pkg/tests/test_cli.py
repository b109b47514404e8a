import io
import textwrap
from pathlib import Path
from unittest import mock

import numpy as np

from adacat import cli
from adacat.numkit import Rng
from adacat.problems import gen_quadratic, load_quadratic

CFG = """
[DEFAULT]
problem = quadratic
n = 20
seed = 5
eps = 1e-6

[sd]
method = sd

[sd_acc]
method = sd
accelerated = true
"""


def test_gen_quadratic(tmp_path):
    out = tmp_path / "a.txt"
    assert cli.main(["gen-quadratic", "--n", "8", "--seed", "3", "--out", str(out)]) == 0
    assert np.array_equal(load_quadratic(out).A, gen_quadratic(8, Rng(3)).A)


def test_run_and_only(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text(textwrap.dedent(CFG))
    out = tmp_path / "out"
    assert cli.main(["run", "--config", str(cfg), "--out", str(out)]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["manifest.csv", "sd.csv", "sd_acc.csv"]
    only = tmp_path / "only"
    assert cli.main(["run", "--config", str(cfg), "--out", str(only), "--only", "sd_acc"]) == 0
    assert sorted(p.name for p in only.iterdir()) == ["manifest.csv", "sd_acc.csv"]
    assert (out / "sd_acc.csv").read_text() .split("\n")[0] == (only / "sd_acc.csv").read_text().split("\n")[0]


def test_run_exit_codes(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text(textwrap.dedent(CFG) + "outer_cap = 2\n")
    assert cli.main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert cli.main(["run", "--config", str(tmp_path / "missing.ini"), "--out", str(tmp_path / "o")]) == 3
    cfg.write_text(textwrap.dedent(CFG) + "gamma = 5\n")
    assert cli.main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 3
    cfg.write_text(textwrap.dedent(CFG))
    assert cli.main(["run", "--config", str(cfg), "--out", str(tmp_path / "o"), "--only", "zzz"]) == 3


def test_validate(tmp_path, capsys):
    good = tmp_path / "good.txt"
    good.write_text("+1 1:1 3:1\n-1 2:1\n")
    assert cli.main(["validate", "--libsvm", str(good)]) == 0
    assert "2 rows" in capsys.readouterr().out
    bad = tmp_path / "bad.txt"
    bad.write_text("+1 1:1\n-1 3:x\n")
    assert cli.main(["validate", "--libsvm", str(bad)]) == 3
    assert "line 2" in capsys.readouterr().err


def test_validate_bundled_file():
    path = Path(cli.__file__).parent / "data" / "a1a_like_subset.txt"
    assert cli.main(["validate", "--libsvm", str(path)]) == 0


def test_fetch_a1a_without_network(tmp_path):
    payload = b"-1 3:1 11:1\n+1 5:1\n"
    with mock.patch("urllib.request.urlopen", return_value=io.BytesIO(payload)) as urlopen:
        assert cli.main(["fetch-a1a", "--out", str(tmp_path / "a1a")]) == 0
    assert urlopen.call_args[0][0] == cli.A1A_URL
    assert (tmp_path / "a1a").read_bytes() == payload
