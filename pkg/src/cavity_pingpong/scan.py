"""Grid scans over position, drive or detuning, and comparisons of columns."""
from __future__ import annotations

import dataclasses
import hashlib
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .bistability import bistability_roots
from .errors import (CalibrationError, ConfigError, ConvergenceError, IllConditionedError,
                     SingularRatesError, SingularStateError)
from .exact import solve_exact
from .kinetics import (FVariant, d_at, diffusion_atomic, diffusion_cavity, diffusion_field,
                       diffusion_free, diffusion_spontaneous, friction_atomic, friction_field,
                       scaled_atom_rates, scaled_mode_rates)
from .model import SystemParams, alpha0, coupling, nu_from_coupling
from .presets import AXES, Preset, get_preset
from .results import FAILED, SINGULAR, ScanResult
from .states import STATE_VARIANTS, Variant, bloch_moments, build_state, state_residual

THREADS_ENV = "CAVITY_PINGPONG_THREADS"
ALPHA_D_CHOICES = ("alpha", "alpha0")
DRIVE_AXES = ("N0", "E", "sqrt_N0")


def transmission(field, params: SystemParams) -> float:
    """|<a>|^2 / N0 (a convention: the empty cavity reads 1).

    ``field`` may be a complex amplitude or a SemiclassicalState.
    """
    N0 = abs(alpha0(params)) ** 2
    if N0 <= 0:
        raise ValueError("transmission needs N0 > 0")
    a = getattr(field, "alpha", field)
    return abs(a) ** 2 / N0


# ------------------------------------------------------------ scan config

@dataclass(frozen=True)
class ScanConfig:
    name: str
    params: SystemParams
    scan_axis: str
    grid: Tuple[float, ...]
    quantities: Tuple[str, ...]
    position: float = 0.0
    state_variant: str = "polarized2"
    f_variant: str = "V1"
    alpha_d_choice: str = "alpha0"
    drive_axis: str = "N0"
    n_max: Optional[int] = None
    zeta_c: bool = False

    @classmethod
    def from_preset(cls, preset: Preset, **overrides):
        kw = {f.name: getattr(preset, f.name) for f in dataclasses.fields(Preset)
              if f.name in {g.name for g in dataclasses.fields(cls)}}
        kw.update(overrides)
        return cls(**kw)

    def validate(self):
        if self.scan_axis not in AXES:
            raise ConfigError(f"scan must be one of {AXES}")
        if self.drive_axis not in DRIVE_AXES:
            raise ConfigError(f"drive_axis must be one of {DRIVE_AXES}")
        if self.alpha_d_choice not in ALPHA_D_CHOICES:
            raise ConfigError(f"alpha_d_choice must be one of {ALPHA_D_CHOICES}")
        try:
            FVariant(self.f_variant)
            Variant(self.state_variant)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        unknown = [q for q in self.quantities if q not in QUANTITIES]
        if unknown:
            raise ConfigError(f"unknown quantities: {', '.join(unknown)}")
        return self

    def content_hash(self):
        d = dataclasses.asdict(dataclasses.replace(self, params=None))
        d["params"] = self.params.to_dict()
        return hashlib.sha1(repr(sorted(d.items())).encode()).hexdigest()[:12]


def _parse_bool(v):
    t = v.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {v!r}")


_PARAM_KEYS = {"gamma", "kappa", "omega_a", "omega_c", "g0", "wavelength"}


def parse_config(text: str) -> ScanConfig:
    """Parse ``key = value`` lines (``#`` starts a comment)."""
    kv = {}
    for i, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {i}: expected 'key = value'")
        k, v = (s.strip() for s in line.split("=", 1))
        if k == "lambda":
            k = "wavelength"
        if k in kv:
            raise ConfigError(f"line {i}: duplicate key {k!r}")
        kv[k] = v
    try:
        return _config_from_dict(kv)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def _config_from_dict(kv: Dict[str, str]) -> ScanConfig:
    kv = dict(kv)
    base = get_preset(kv.pop("preset")) if "preset" in kv else None
    pv = {k: float(kv.pop(k)) for k in list(kv) if k in _PARAM_KEYS}
    E = kv.pop("E", None)
    N0 = kv.pop("N0", None)
    if E is not None and N0 is not None:
        raise ConfigError("give either E or N0, not both")
    if base is not None:
        # rates overridden on a preset keep its empty-cavity photon number
        params = base.params.replace(**pv, N0=base.params.N0)
    else:
        missing = {"gamma", "kappa", "omega_a", "omega_c"} - set(pv)
        if missing:
            raise ConfigError(f"missing parameters: {', '.join(sorted(missing))}")
        params = SystemParams(**pv)
    if E is not None:
        params = params.replace(E=complex(E.replace(" ", "")))
    elif N0 is not None:
        params = params.replace(N0=float(N0))
    elif base is None:
        raise ConfigError("missing drive: give E or N0")

    fields = {}
    if "scan" in kv:
        fields["scan_axis"] = kv.pop("scan")
    grid_keys = [k for k in ("grid_min", "grid_max", "grid_points") if k in kv]
    if grid_keys:
        if len(grid_keys) != 3:
            raise ConfigError("grid needs grid_min, grid_max and grid_points")
        n = int(kv.pop("grid_points"))
        if n < 0:
            raise ConfigError("grid_points must be non-negative")
        fields["grid"] = tuple(float(v) for v in np.linspace(float(kv.pop("grid_min")),
                                                             float(kv.pop("grid_max")), n))
    if "quantities" in kv:
        fields["quantities"] = tuple(q.strip() for q in kv.pop("quantities").split(",")
                                     if q.strip())
    for k in ("state_variant", "f_variant", "alpha_d_choice", "drive_axis"):
        if k in kv:
            fields[k] = kv.pop(k)
    if "position" in kv:
        fields["position"] = float(kv.pop("position"))
    if "n_max" in kv:
        fields["n_max"] = int(kv.pop("n_max"))
    if "zeta_c" in kv:
        fields["zeta_c"] = _parse_bool(kv.pop("zeta_c"))
    if kv:
        raise ConfigError(f"unknown keys: {', '.join(sorted(kv))}")

    if base is not None:
        cfg = ScanConfig.from_preset(base, params=params, **fields)
    else:
        for k in ("scan_axis", "grid", "quantities"):
            if k not in fields:
                raise ConfigError(f"missing {k if k != 'scan_axis' else 'scan'}")
        cfg = ScanConfig(name="custom", params=params, **fields)
    return cfg.validate()


def load_config(path) -> ScanConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config(text)


def config_text(cfg: ScanConfig) -> str:
    """Render a config back to the ``key = value`` format."""
    p = cfg.params
    lines = [f"# {cfg.name}",
             f"gamma = {p.gamma!r}", f"kappa = {p.kappa!r}",
             f"omega_a = {p.omega_a!r}", f"omega_c = {p.omega_c!r}",
             f"g0 = {p.g0!r}", f"wavelength = {p.wavelength!r}",
             f"N0 = {p.N0!r}" if p.E.imag == 0 and p.E.real >= 0 else f"E = {p.E!r}",
             f"scan = {cfg.scan_axis}"]
    if cfg.grid:
        lines += [f"grid_min = {cfg.grid[0]!r}", f"grid_max = {cfg.grid[-1]!r}"]
    else:
        lines += ["grid_min = 0.0", "grid_max = 0.0"]
    lines += [f"grid_points = {len(cfg.grid)}",
              f"quantities = {', '.join(cfg.quantities)}",
              f"position = {cfg.position!r}",
              f"state_variant = {cfg.state_variant}", f"f_variant = {cfg.f_variant}",
              f"alpha_d_choice = {cfg.alpha_d_choice}", f"drive_axis = {cfg.drive_axis}"]
    if cfg.n_max is not None:
        lines.append(f"n_max = {cfg.n_max}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ point model

class _Point:
    """Lazily evaluated quantities at one grid value."""

    def __init__(self, cfg: ScanConfig, value: float):
        self.cfg = cfg
        p = cfg.params
        x = cfg.position
        if cfg.scan_axis == "position":
            x = value
        elif cfg.scan_axis == "atomic_detuning":
            p = p.replace(omega_a=value)
        elif cfg.drive_axis == "N0":
            p = p.replace(N0=value)
        elif cfg.drive_axis == "sqrt_N0":
            p = p.replace(N0=value * value)
        else:
            p = p.replace(E=value)
        self.params, self.x = p, x
        self.g = coupling(p, x)
        self._cache = {}

    def _memo(self, key, fn):
        if key not in self._cache:
            try:
                self._cache[key] = fn()
            except Exception as exc:  # cached so the failure is reported per quantity
                self._cache[key] = exc
        v = self._cache[key]
        if isinstance(v, Exception):
            raise v
        return v

    def state(self, variant):
        return self._memo(("state", variant), lambda: build_state(self.params, self.x, variant))

    def roots(self):
        return self._memo("roots", lambda: bistability_roots(self.params, self.x))

    def exact(self):
        return self._memo("exact", lambda: solve_exact(self.params, self.x, n_max=self.cfg.n_max))

    def exact_D(self):
        return self._memo("D_exact", lambda: self.exact().diffusion())

    def exact_G(self):
        return self._memo("G_exact", lambda: self.exact().friction())

    def kstate(self):
        return self.state(self.cfg.state_variant)

    def atom_rates(self):
        return self._memo("arates", lambda: scaled_atom_rates(self.params, self.x, self.kstate().s))

    def mode_rates(self):
        return self._memo("mrates", lambda: scaled_mode_rates(self.params, self.x, self.kstate().s))

    def alpha_d(self):
        return self.kstate().alpha if self.cfg.alpha_d_choice == "alpha" else alpha0(self.params)

    def D_at(self, which):
        r = self.atom_rates()
        a = self.kstate().alpha if which == "alpha" else alpha0(self.params)
        return d_at(r.W_A, r.Gamma_A, a, self.kstate().s)

    def G_at(self):
        return self._memo("G_at", lambda: friction_atomic(
            self.params, self.x, self.kstate(), self.atom_rates(), self.cfg.f_variant))

    def G_field(self):
        return friction_field(self.params, self.x, self.kstate(), self.mode_rates(),
                              self.cfg.f_variant, zeta_c_zero=not self.cfg.zeta_c)


def _state_q(kind, variant):
    def f(pt):
        st = pt.state(variant)
        if kind == "photons":
            return st.photon_number
        if kind == "transmission":
            return transmission(st, pt.params)
        if kind == "excited":
            return bloch_moments(st, pt.params).excited_population
        if kind == "residual_field":
            return abs(state_residual(st, pt.params)[0])
        return abs(state_residual(st, pt.params)[1])
    return f


def _ob_q(kind, which):
    def f(pt):
        r = pt.roots()
        I = r.intensities[0] if which == "low" else r.intensities[-1]
        if kind == "photons":
            return I
        if kind == "transmission":
            return I / abs(alpha0(pt.params)) ** 2
        s = r.saturations[0] if which == "low" else r.saturations[-1]
        return 0.5 * s / (1 + s)
    return f


def _temperature(pt):
    G = pt.exact_G()
    if abs(G) < 1e-15:
        raise ZeroDivisionError("friction vanishes")
    return pt.exact_D() / G


QUANTITIES = {}
for _v in STATE_VARIANTS:
    for _k in ("photons", "transmission", "excited", "residual_field", "residual_corr"):
        QUANTITIES[f"{_k}_{_v.value}"] = ("states", _state_q(_k, _v))
for _w in ("low", "high"):
    for _k in ("photons", "transmission", "excited"):
        QUANTITIES[f"{_k}_ob_{_w}"] = ("states", _ob_q(_k, _w))

QUANTITIES.update({
    "ob_root_count": ("states", lambda pt: float(len(pt.roots()))),
    "nu_re": ("states", lambda pt: nu_from_coupling(pt.params, pt.g).real),
    "nu_im": ("states", lambda pt: nu_from_coupling(pt.params, pt.g).imag),
    "photons_exact": ("exact", lambda pt: pt.exact().photon_number),
    "transmission_exact": ("exact", lambda pt: transmission(pt.exact().field, pt.params)),
    "excited_exact": ("exact", lambda pt: pt.exact().excited_population),
    "force_exact": ("exact", lambda pt: pt.exact().force_expectation),
    "D_exact": ("exact", lambda pt: pt.exact_D()),
    "G_exact": ("exact", lambda pt: pt.exact_G()),
    "temperature_exact": ("exact", _temperature),
    "saturation": ("kinetics", lambda pt: pt.kstate().s),
    "W_A": ("kinetics", lambda pt: pt.atom_rates().W_A),
    "Gamma_A": ("kinetics", lambda pt: pt.atom_rates().Gamma_A),
    "W_C": ("kinetics", lambda pt: pt.mode_rates().W_C),
    "K_c": ("kinetics", lambda pt: pt.mode_rates().K_c),
    "D_field": ("kinetics", lambda pt: diffusion_field(pt.kstate().beta, pt.mode_rates())),
    "D_at": ("kinetics", lambda pt: pt.D_at(pt.cfg.alpha_d_choice)),
    "D_at_alpha": ("kinetics", lambda pt: pt.D_at("alpha")),
    "D_at_alpha0": ("kinetics", lambda pt: pt.D_at("alpha0")),
    "D_atomic": ("kinetics", lambda pt: diffusion_atomic(
        pt.atom_rates(), alpha0(pt.params), pt.alpha_d(), pt.kstate().s)),
    "D_free": ("kinetics", lambda pt: diffusion_free(pt.params, pt.kstate())),
    "D_field_plus_at_alpha": ("kinetics", lambda pt: diffusion_field(
        pt.kstate().beta, pt.mode_rates()) + pt.D_at("alpha")),
    "D_field_plus_at_alpha0": ("kinetics", lambda pt: diffusion_field(
        pt.kstate().beta, pt.mode_rates()) + pt.D_at("alpha0")),
    "D_cav_high": ("kinetics", lambda pt: diffusion_cavity(pt.params, pt.x, pt.kstate(),
                                                           "high_sat")),
    "D_cav_low": ("kinetics", lambda pt: diffusion_cavity(pt.params, pt.x, pt.kstate(),
                                                          "low_sat")),
    "D_spont": ("kinetics", lambda pt: diffusion_spontaneous(pt.kstate())),
    "G_field": ("kinetics", lambda pt: pt.G_field()),
    "G_at": ("kinetics", lambda pt: pt.G_at().total),
    "G_free": ("kinetics", lambda pt: pt.G_at().G_free),
    "G_translational": ("kinetics", lambda pt: pt.G_at().translational),
    "G_field_plus_at": ("kinetics", lambda pt: pt.G_field() + pt.G_at().total),
})

GROUPS = ("states", "kinetics", "exact")
DEFAULT_QUANTITIES = {
    "states": ("photons_bounced1", "photons_bounced2", "photons_bounced3",
               "photons_polarized1", "photons_polarized2", "photons_polarized3",
               "photons_ob_low", "photons_ob_high", "ob_root_count"),
    "kinetics": ("Gamma_A", "K_c", "D_field", "D_at", "D_atomic", "D_free", "D_cav_high",
                 "D_cav_low", "D_spont", "G_field", "G_at", "G_free"),
    "exact": ("photons_exact", "transmission_exact", "excited_exact", "D_exact", "G_exact",
              "temperature_exact"),
}


def quantities_for_group(cfg: ScanConfig, group: str) -> Tuple[str, ...]:
    """The config's quantities belonging to ``group``, or the group default."""
    sel = tuple(q for q in cfg.quantities if QUANTITIES[q][0] == group)
    return sel or DEFAULT_QUANTITIES[group]


_NUMERICAL = (ConvergenceError, IllConditionedError, ZeroDivisionError, FloatingPointError,
              np.linalg.LinAlgError, RuntimeError, CalibrationError, SingularRatesError)


def _evaluate(cfg: ScanConfig, value: float, quantities):
    pt = _Point(cfg, value)
    row = [float(value), float(pt.g)]
    status = []
    for q in quantities:
        try:
            v = float(QUANTITIES[q][1](pt))
            row.append(v)
        except SingularStateError:
            row.append(SINGULAR)
            status.append(f"{q}:{SINGULAR}")
        except _NUMERICAL as exc:
            row.append(FAILED)
            status.append(f"{q}:{type(exc).__name__}")
    needs_exact = any(QUANTITIES[q][0] == "exact" for q in quantities)
    if needs_exact:
        try:
            row.append(float(pt.exact().n_max))
        except _NUMERICAL:
            row.append(FAILED)
    row.append(";".join(status) if status else "ok")
    return row


def thread_count():
    raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer") from None
    if n < 0:
        raise ConfigError(f"{THREADS_ENV} must be >= 0")
    return n or (os.cpu_count() or 1)


AXIS_COLUMN = {"position": "x", "drive_strength": "drive", "atomic_detuning": "omega_a"}


def run_scan(source, quantities: Optional[Sequence[str]] = None, n_max=None,
             threads=None) -> ScanResult:
    """Evaluate quantities over the grid of a preset name, Preset or ScanConfig."""
    if isinstance(source, str):
        source = get_preset(source)
    cfg = ScanConfig.from_preset(source) if isinstance(source, Preset) else source
    if quantities is not None:
        cfg = dataclasses.replace(cfg, quantities=tuple(quantities))
    if n_max is not None:
        cfg = dataclasses.replace(cfg, n_max=int(n_max))
    cfg.validate()
    qs = list(cfg.quantities)
    needs_exact = any(QUANTITIES[q][0] == "exact" for q in qs)
    axis = AXIS_COLUMN[cfg.scan_axis]
    if cfg.scan_axis == "drive_strength":
        axis = cfg.drive_axis
    columns = [axis, "g"] + qs + (["n_max"] if needs_exact else []) + ["status"]
    workers = threads or thread_count()
    if workers > 1 and len(cfg.grid) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(lambda v: _evaluate(cfg, v, qs), cfg.grid))
    else:
        rows = [_evaluate(cfg, v, qs) for v in cfg.grid]
    used = [r[-2] for r in rows if needs_exact and not isinstance(r[-2], str)]
    meta = {"preset": cfg.name,
            "n_max": str(int(max(used))) if used else "-",
            "version": __version__,
            "config_hash": cfg.content_hash(),
            "scan": cfg.scan_axis,
            "state_variant": cfg.state_variant,
            "f_variant": cfg.f_variant}
    return ScanResult(columns, rows, meta)


# ------------------------------------------------------------- comparison

@dataclass
class Comparison:
    table: ScanResult
    max_error: float
    antinode_error: float
    antinode_index: int


def compare_arrays(baseline, target, coupling_values=None, axis_values=None) -> Comparison:
    b = np.asarray(baseline, dtype=float)
    t = np.asarray(target, dtype=float)
    if b.shape != t.shape:
        raise ValueError("columns differ in length")
    absd = np.abs(t - b)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(b != 0, absd / np.abs(b), np.where(absd == 0, 0.0, np.inf))
    if axis_values is None:
        axis_values = np.arange(len(b), dtype=float)
    rows = [[float(a), float(x), float(y), float(e), float(r)]
            for a, x, y, e, r in zip(axis_values, b, t, absd, rel)]
    table = ScanResult(["axis", "baseline", "target", "abs_error", "rel_error"], rows)
    finite = rel[np.isfinite(b) & np.isfinite(t)]
    max_err = float(finite.max()) if finite.size else float("nan")
    if len(b) == 0:
        return Comparison(table, max_err, float("nan"), -1)
    if coupling_values is None:
        k = 0
    else:
        k = int(np.nanargmax(np.abs(np.asarray(coupling_values, dtype=float))))
    return Comparison(table, max_err, float(rel[k]), k)


def compare(result: ScanResult, baseline_quantity: str, target_quantity: str,
            target_result: Optional[ScanResult] = None) -> Comparison:
    """Pointwise relative error of ``target`` against ``baseline``.

    The antinode is the row with the largest |g|. Sentinel cells become NaN.
    """
    other = target_result if target_result is not None else result
    b = result.column(baseline_quantity)
    t = other.column(target_quantity)
    g = result.column("g") if "g" in result.columns else None
    ax = result.column(result.columns[0]) if result.columns else None
    c = compare_arrays(b, t, g, ax)
    c.table.meta.update({"preset": result.meta.get("preset", "custom"),
                         "n_max": result.meta.get("n_max", "-"),
                         "version": __version__,
                         "baseline": baseline_quantity, "target": target_quantity,
                         "max_rel_error": repr(c.max_error),
                         "antinode_rel_error": repr(c.antinode_error)})
    return c
