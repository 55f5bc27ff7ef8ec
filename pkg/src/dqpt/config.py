"""Flat ``key = value`` run configuration.

Blank lines and ``#`` comments are ignored.  ``outputs`` is a comma-separated
list.  Example::

    model = tfi
    pre.h = 0.5
    post.h = 1.5
    n_cells = 400
    t_max = 10
    n_time = 501
"""

from .models import Model, QuenchSpec, SshParams, TfiParams
from .sweep import OUTPUTS, SweepConfig

MODEL_KEYS = {
    Model.TFI: ("pre.h", "pre.j", "post.h", "post.j"),
    Model.SSH: ("pre.t1", "pre.t2", "post.t1", "post.t2"),
}
GRID_KEYS = ("n_cells", "t_min", "t_max", "n_time", "outputs", "n_max_critical_times", "tol")
ALL_KEYS = ("model",) + MODEL_KEYS[Model.TFI] + MODEL_KEYS[Model.SSH] + GRID_KEYS
REQUIRED = {
    Model.TFI: ("pre.h", "post.h", "n_cells", "t_max", "n_time"),
    Model.SSH: ("pre.t2", "post.t2", "n_cells", "t_max", "n_time"),
}
DEFAULTS = {"pre.j": "1", "post.j": "1", "pre.t1": "1", "post.t1": "1", "t_min": "0"}


class ConfigError(ValueError):
    def __init__(self, message, key=None):
        self.key = key
        super().__init__(f"{key}: {message}" if key else message)


def parse_pairs(text):
    """Raw ``{key: value}`` strings; rejects unknown and repeated keys."""
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in ALL_KEYS:
            raise ConfigError(f"unknown key on line {lineno}", key=key)
        if key in pairs:
            raise ConfigError(f"repeated on line {lineno}", key=key)
        if not value:
            raise ConfigError(f"empty value on line {lineno}", key=key)
        pairs[key] = value
    return pairs


def _number(pairs, key, kind=float):
    value = pairs[key]
    try:
        x = float(value)
    except ValueError:
        raise ConfigError(f"not a number: {value!r}", key=key) from None
    if kind is int:
        if x != int(x):
            raise ConfigError(f"not an integer: {value!r}", key=key)
        return int(x)
    return x


def build_config(pairs):
    if "model" not in pairs:
        raise ConfigError("missing", key="model")
    try:
        model = Model(pairs["model"].lower())
    except ValueError:
        raise ConfigError(f"must be one of {[m.value for m in Model]}", key="model") from None
    other = MODEL_KEYS[Model.SSH if model is Model.TFI else Model.TFI]
    for key in other:
        if key in pairs:
            raise ConfigError(f"not a {model.value} parameter", key=key)
    for key in REQUIRED[model]:
        if key not in pairs:
            raise ConfigError("missing", key=key)
    pairs = {**DEFAULTS, **pairs}

    try:
        if model is Model.TFI:
            pre = TfiParams(h=_number(pairs, "pre.h"), j=_number(pairs, "pre.j"))
            post = TfiParams(h=_number(pairs, "post.h"), j=_number(pairs, "post.j"))
        else:
            pre = SshParams(_number(pairs, "pre.t1"), _number(pairs, "pre.t2"))
            post = SshParams(_number(pairs, "post.t1"), _number(pairs, "post.t2"))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc), key="pre/post") from None

    t_min, t_max = _number(pairs, "t_min"), _number(pairs, "t_max")
    if not t_min < t_max:
        raise ConfigError(f"must be smaller than t_max ({t_min!r} >= {t_max!r})", key="t_min")
    outputs = OUTPUTS
    if "outputs" in pairs:
        outputs = tuple(s.strip() for s in pairs["outputs"].split(",") if s.strip())
        bad = [o for o in outputs if o not in OUTPUTS]
        if bad or not outputs:
            raise ConfigError(f"expected a subset of {','.join(OUTPUTS)}, got {pairs['outputs']!r}", key="outputs")
    kwargs = {}
    if "n_max_critical_times" in pairs:
        kwargs["n_max_critical_times"] = _number(pairs, "n_max_critical_times", int)
    if "tol" in pairs:
        kwargs["tol"] = _number(pairs, "tol")
    n_cells = _number(pairs, "n_cells", int)
    n_time = _number(pairs, "n_time", int)
    try:
        return SweepConfig(
            spec=QuenchSpec(model, pre, post),
            n_cells=n_cells,
            t_min=t_min,
            t_max=t_max,
            n_time=n_time,
            outputs=outputs,
            **kwargs,
        )
    except ValueError as exc:
        msg = str(exc)
        key = next((k for k in GRID_KEYS if msg.startswith(k)), None)
        raise ConfigError(msg, key=key) from None


def loads(text):
    return build_config(parse_pairs(text))


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dumps(cfg):
    """Inverse of ``loads``: ``loads(dumps(cfg)) == cfg``."""
    d = cfg.to_dict()
    lines = [f"model = {d['model']}"]
    for phase in ("pre", "post"):
        for name, value in d[phase].items():
            lines.append(f"{phase}.{name} = {value!r}")
    for key in GRID_KEYS:
        value = d[key]
        lines.append(f"{key} = {','.join(value) if key == 'outputs' else repr(value)}")
    return "\n".join(lines) + "\n"
