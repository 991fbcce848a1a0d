"""Flat ``key = value`` run configuration."""

from dataclasses import dataclass, field, fields

from .errors import ConstraintViolation, TypeMismatch, UnknownKey
from .model import ModelParams
from .operator import GridSpec

__all__ = ["RunConfig", "MODES", "parse_config"]

MODES = ("eigen", "state", "adjoint", "optimize", "oracle", "verify", "wellposed")

# config key -> RunConfig attribute, where they differ
ALIASES = {"lambda": "lam"}


def _floats(text):
    return tuple(float(t) for t in text.replace(";", ",").split(",") if t.strip())


@dataclass
class RunConfig:
    """Every setting of one run. Defaults give the canonical 1D configuration."""

    lam: float = 500.0
    K: float = 20.0
    c: float = 0.5
    q: float = 1.0
    H: float = 0.3
    B1: float = 1.0
    B2: float = 2.0
    dim: int = 1
    extents: str = "0,1"  # "a,b" or "a1,b1;a2,b2"
    nodes: str = "257"  # "n" or "nx,ny"
    mode: str = "optimize"
    h0: str = "0"  # constant effort, or "random" (seeded)
    gamma: float = 1.0  # sensitivity direction (constant) in adjoint mode
    omega: float = 0.5
    sweep_tol: float = 1e-9
    max_iter: int = 500
    bang_bang: bool = False
    B2_sweep: str = ""  # e.g. "10,20,40,80"
    partitions: int = 3
    levels: str = "0,0.15,0.3"
    verify_nodes: str = "33,65,129,257"
    out: str = "out"
    seed: int = 0
    _given: set = field(default_factory=set, repr=False)

    @property
    def params(self):
        return ModelParams(lam=self.lam, K=self.K, c=self.c, q=self.q, H=self.H, B1=self.B1, B2=self.B2)

    @property
    def grid(self):
        ext = [tuple(float(v) for v in part.split(",")) for part in self.extents.split(";")]
        nodes = tuple(int(v) for v in self.nodes.split(","))
        return GridSpec(tuple(ext), nodes)

    @property
    def B2_values(self):
        return _floats(self.B2_sweep)

    @property
    def level_values(self):
        return _floats(self.levels)

    @property
    def verify_ns(self):
        return tuple(int(v) for v in _floats(self.verify_nodes))


_TYPES = {f.name: f.type for f in fields(RunConfig) if not f.name.startswith("_")}


def _convert(key, attr, raw):
    kind = _TYPES[attr]
    try:
        if kind in (float, "float"):
            return float(raw)
        if kind in (int, "int"):
            return int(raw)
        if kind in (bool, "bool"):
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        return raw
    except ValueError:
        raise TypeMismatch(f"{key}: cannot read {raw!r} as {getattr(kind, '__name__', kind)}", key=key) from None


def _validate(cfg):
    params = cfg.params
    if cfg.mode not in MODES:
        raise ConstraintViolation(f"mode must be one of {', '.join(MODES)}", key="mode")
    try:
        grid = cfg.grid
    except Exception as exc:
        key = "nodes" if "nodes" in str(exc) or "coarse" in str(exc) else "extents"
        raise ConstraintViolation(f"{key}: {exc}", key=key) from None
    if grid.dim != cfg.dim:
        raise ConstraintViolation(f"dim = {cfg.dim} but extents/nodes describe {grid.dim} axes", key="dim")
    if cfg.mode == "wellposed" and not params.wellposed:
        raise ConstraintViolation(f"c = {params.c} violates c < 2(1 - H) = {2 * (1 - params.H)}", key="c")
    if not 0 < cfg.omega <= 1:
        raise ConstraintViolation("omega must lie in (0, 1]", key="omega")
    if cfg.sweep_tol <= 0:
        raise ConstraintViolation("sweep_tol must be > 0", key="sweep_tol")
    if cfg.max_iter < 0:
        raise ConstraintViolation("max_iter must be >= 0", key="max_iter")
    if cfg.partitions < 1:
        raise ConstraintViolation("partitions must be >= 1", key="partitions")
    if cfg.h0 != "random":
        try:
            h0 = float(cfg.h0)
        except ValueError:
            raise TypeMismatch("h0 must be a number or 'random'", key="h0") from None
        if not 0 <= h0 <= params.H:
            raise ConstraintViolation(f"h0 must lie in [0, H = {params.H}]", key="h0")
    for key in ("B2_sweep", "levels", "verify_nodes"):
        try:
            _floats(getattr(cfg, key))
        except ValueError:
            raise TypeMismatch(f"{key}: expected a comma-separated list of numbers", key=key) from None
    if any(not 0 <= v <= params.H for v in cfg.level_values):
        raise ConstraintViolation(f"levels must lie in [0, H = {params.H}]", key="levels")
    return cfg


def parse_config(text, **overrides):
    """Parse ``key = value`` lines (``#`` starts a comment) into a RunConfig.

    ``overrides`` (e.g. ``mode`` from the command line) are applied after the
    document and before validation.
    """
    cfg = RunConfig()
    items = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise TypeMismatch(f"line {lineno}: expected 'key = value'", key=line)
        key, value = (s.strip() for s in line.split("=", 1))
        items.append((key, value))
    items.extend((k, str(v)) for k, v in overrides.items() if v is not None)
    for key, value in items:
        attr = ALIASES.get(key, key)
        if attr not in _TYPES:
            raise UnknownKey(f"unknown key {key!r}", key=key)
        setattr(cfg, attr, _convert(key, attr, value))
        cfg._given.add(attr)
    if "dim" not in cfg._given and ("extents" in cfg._given or "nodes" in cfg._given):
        cfg.dim = len(cfg.nodes.split(","))
    if cfg.dim == 2 and "extents" not in cfg._given:
        cfg.extents = "0,1;0,1"
    if cfg.dim == 2 and "nodes" not in cfg._given:
        cfg.nodes = "65,65"
    return _validate(cfg)
