from pathlib import Path

import pytest

from dqpt.config import ConfigError, dumps, load, loads
from dqpt.models import Model, QuenchSpec

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

BASE = """
# transverse-field Ising quench
model = tfi
pre.h = 0.5     # ordered side
post.h = 1.5
n_cells = 100
t_max = 10
n_time = 11
"""


def test_parses_with_comments_and_defaults():
    cfg = loads(BASE)
    assert cfg.spec == QuenchSpec.tfi(0.5, 1.5)
    assert (cfg.n_cells, cfg.t_min, cfg.t_max, cfg.n_time) == (100, 0.0, 10.0, 11)
    assert cfg.outputs == ("entropy", "echo", "otoc", "rate")
    assert cfg.tol == 1e-10 and cfg.n_max_critical_times == 2


@pytest.mark.parametrize(
    "extra, key",
    [
        ("t_min = 20", "t_min"),
        ("pre.hh = 1", "pre.hh"),
        ("pre.t2 = 1", "pre.t2"),
        ("pre.h = 0.7", "pre.h"),
        ("n_time = lots", "n_time"),
        ("n_cells = 10.5", "n_cells"),
        ("outputs = entropy,heat", "outputs"),
        ("tol = ", "tol"),
    ],
)
def test_errors_name_the_key(extra, key):
    text = BASE.replace("n_time = 11\n", "") + ("n_time = 11\n" if "n_time" not in extra else "") + extra + "\n"
    with pytest.raises(ConfigError) as info:
        loads(text)
    assert info.value.key == key
    assert key in str(info.value)


def test_missing_key():
    with pytest.raises(ConfigError, match="post.h"):
        loads(BASE.replace("post.h = 1.5", ""))


def test_missing_model():
    with pytest.raises(ConfigError, match="model"):
        loads("n_cells = 4")


def test_line_without_equals():
    with pytest.raises(ConfigError, match="line 3"):
        loads("model = tfi\npre.h = 1\nbroken line\n")


def test_ssh_config():
    cfg = loads("model = ssh\npre.t2 = 0.5\npost.t2 = 2\nn_cells = 50\nt_max = 5\nn_time = 3\noutputs = rate")
    assert cfg.spec == QuenchSpec.ssh(0.5, 2.0)
    assert cfg.outputs == ("rate",)


@pytest.mark.parametrize("name", ["fig1_tfi.conf", "fig1_ssh.conf"])
def test_shipped_configs_round_trip(name):
    cfg = load(CONFIGS / name)
    assert cfg.n_cells == 400 and cfg.n_time == 501 and cfg.t_max == 10.0
    assert loads(dumps(cfg)) == cfg
    assert cfg.spec.model is (Model.TFI if "tfi" in name else Model.SSH)
