"""Parameter sweeps over both prescriptions with deterministic CSV output.

A sweep evaluates the closed-form observables of one model over a grid of
loop delays (in units of the orthogonalisation time), vacuum weights, and,
for the Deutsch model, trapped-vacuum weights ``g``.  Output rows are sorted
and serialized with fixed formatting so identical configurations always
produce byte-identical CSV.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clock import ClockSpec
from .dctc import FixedPointQuery, dctc_clock_probabilities
from .gates import CircuitSpec
from .pctc import ConstraintParams, ForbiddenInitialData, pctc_observables

__all__ = [
    "ConfigError",
    "RunConfig",
    "SweepRow",
    "SweepResult",
    "parse_config",
    "run_sweep",
    "single_point",
    "CSV_HEADER",
    "DEFAULT_SQRT_OMEGAS",
]

CSV_HEADER = "dt_over_tperp,omega,g,observable,value,reason"

# Figure-family default: the user-facing sweep variable is sqrt(omega).
DEFAULT_SQRT_OMEGAS = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)

_DCTC_OBSERVABLES = ("populations", "clock_probs", "cv_probs")
_PCTC_OBSERVABLES = ("populations", "clock_probs")


class ConfigError(ValueError):
    """Invalid run configuration; message carries the offending line when known."""


@dataclass(frozen=True)
class RunConfig:
    """Validated sweep configuration.

    ``dt_grid`` is ``(start, stop, points)`` in units of ``t_perp``.  When
    ``constrained`` is set the grid is replaced by the single induced delay
    and the ground energy is retuned accordingly.  ``gs=None`` resolves to
    the uniform default ``1/(N + 1)``.
    """

    model: str
    n_levels: int = 2
    omegas: tuple = tuple(s * s for s in DEFAULT_SQRT_OMEGAS)
    gs: tuple | None = None
    dt_grid: tuple = (0.0, 2.0, 201)
    e1: float = 0.0
    constrained: tuple | None = None
    observables: tuple | None = None
    output_path: str = "-"

    def __post_init__(self):
        if self.model not in ("dctc", "pctc"):
            raise ConfigError(f"model must be 'dctc' or 'pctc', got {self.model!r}")
        if int(self.n_levels) != self.n_levels or self.n_levels < 2:
            raise ConfigError(f"N must be an integer >= 2, got {self.n_levels}")
        object.__setattr__(self, "n_levels", int(self.n_levels))
        if not self.omegas:
            raise ConfigError("omega list must be nonempty")
        for omega in self.omegas:
            if not 0.0 <= omega <= 1.0:
                raise ConfigError(f"omega {omega} out of range [0, 1]")
        if self.gs is not None:
            if not self.gs:
                raise ConfigError("g list must be nonempty")
            for g in self.gs:
                if not 0.0 <= g <= 1.0:
                    raise ConfigError(f"g {g} out of range [0, 1]")
        start, stop, points = self.dt_grid
        if int(points) != points or points < 2:
            raise ConfigError(f"dt_grid needs at least 2 points, got {points}")
        if stop < start:
            raise ConfigError(f"dt_grid stop {stop} precedes start {start}")
        object.__setattr__(self, "dt_grid", (float(start), float(stop), int(points)))
        if self.constrained is not None:
            p, q = self.constrained
            if int(p) != p or p < 1 or int(q) != q or q < 0:
                raise ConfigError(f"constrained needs integers p >= 1, q >= 0, got {self.constrained}")
            object.__setattr__(self, "constrained", (int(p), int(q)))
        allowed = _DCTC_OBSERVABLES if self.model == "dctc" else _PCTC_OBSERVABLES
        if self.observables is None:
            object.__setattr__(self, "observables", allowed)
        else:
            for name in self.observables:
                if name not in allowed:
                    raise ConfigError(
                        f"observable {name!r} not available for model {self.model}"
                    )
            if not self.observables:
                raise ConfigError("observables list must be nonempty")

    def resolved_gs(self):
        if self.gs is not None:
            return self.gs
        return (1.0 / (self.n_levels + 1),)


_KNOWN_KEYS = (
    "model",
    "N",
    "omega",
    "sqrt_omega",
    "g",
    "dt_grid",
    "e1",
    "constrained",
    "observables",
    "out",
)


def parse_config(text):
    """Parse a flat ``key=value`` document into a :class:`RunConfig`.

    Lines are UTF-8, ``#`` starts a comment, blank lines are ignored.  Every
    error message names the offending line.
    """
    fields = {}
    seen_sqrt = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            if key == "model":
                fields["model"] = value
            elif key == "N":
                fields["n_levels"] = _parse_int(value)
            elif key == "omega":
                fields["omegas"] = _parse_float_list(value)
            elif key == "sqrt_omega":
                fields["omegas"] = tuple(s * s for s in _parse_float_list(value))
                seen_sqrt = True
            elif key == "g":
                fields["gs"] = _parse_float_list(value)
            elif key == "dt_grid":
                fields["dt_grid"] = _parse_grid(value)
            elif key == "e1":
                fields["e1"] = float(value)
            elif key == "constrained":
                parts = value.split(",")
                if len(parts) != 2:
                    raise ValueError("expected P,Q")
                fields["constrained"] = (_parse_int(parts[0]), _parse_int(parts[1]))
            elif key == "observables":
                fields["observables"] = tuple(v.strip() for v in value.split(",") if v.strip())
            elif key == "out":
                fields["output_path"] = value
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from exc
        if seen_sqrt and "omegas" in fields and key == "omega":
            raise ConfigError(f"line {lineno}: omega and sqrt_omega are mutually exclusive")
        seen_sqrt = seen_sqrt or key == "sqrt_omega"
    if "model" not in fields:
        raise ConfigError("missing required key 'model'")
    try:
        return RunConfig(**fields)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_int(text):
    value = float(text)
    if int(value) != value:
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


def _parse_float_list(text):
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("empty list")
    return tuple(float(p) for p in parts)


def _parse_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"dt_grid must be START:STOP:POINTS, got {text!r}")
    return (float(parts[0]), float(parts[1]), _parse_int(parts[2]))


@dataclass(frozen=True)
class SweepRow:
    dt_over_tperp: float
    omega: float
    g: float | None
    observable: str
    value: float | None
    reason: str = ""


@dataclass(frozen=True)
class SweepResult:
    rows: tuple = field(default_factory=tuple)

    @property
    def has_forbidden(self):
        return any(row.reason == "forbidden_initial_data" for row in self.rows)

    def to_csv(self):
        """Serialize with the fixed schema, 17 significant digits, LF endings."""
        lines = [CSV_HEADER]
        for row in self.rows:
            lines.append(
                ",".join(
                    (
                        _fmt(row.dt_over_tperp),
                        _fmt(row.omega),
                        "" if row.g is None else _fmt(row.g),
                        row.observable,
                        "NA" if row.value is None else _fmt(row.value),
                        row.reason,
                    )
                )
            )
        return "\n".join(lines) + "\n"


def _fmt(value):
    return f"{value:.17g}"


def run_sweep(config):
    """Evaluate the configured observables on every grid point.

    Deterministic: identical configurations yield byte-identical CSV. Points
    whose post-selection norm vanishes are emitted with value ``NA`` and
    reason ``forbidden_initial_data``.
    """
    base_spec = ClockSpec(config.n_levels, e1=config.e1)
    if config.constrained is not None:
        params = ConstraintParams(*config.constrained)
        circuit0 = params.circuit(base_spec)
        spec = circuit0.clock
        taus = [circuit0.delay / spec.t_perp]
    else:
        spec = base_spec
        start, stop, points = config.dt_grid
        taus = list(np.linspace(start, stop, points))

    rows = []
    if config.model == "dctc":
        for tau in taus:
            circuit = CircuitSpec(clock=spec, delay=tau * spec.t_perp)
            for omega in config.omegas:
                for g in config.resolved_gs():
                    rows.extend(_dctc_rows(config, circuit, tau, omega, g))
    else:
        for tau in taus:
            circuit = CircuitSpec(clock=spec, delay=tau * spec.t_perp)
            for omega in config.omegas:
                rows.extend(_pctc_rows(config, circuit, tau, omega))

    rows.sort(key=_row_key)
    return SweepResult(rows=tuple(rows))


def _dctc_rows(config, circuit, tau, omega, g):
    query = FixedPointQuery(circuit=circuit, omega=omega, g=g)
    rows = []
    if "populations" in config.observables:
        n = circuit.clock.n_levels
        values = [omega] + [(1.0 - omega) / n] * n
        _check_population_sum(values, tau, omega)
        rows.extend(
            SweepRow(tau, omega, g, f"population_{level}", value)
            for level, value in enumerate(values)
        )
    if "clock_probs" in config.observables or "cv_probs" in config.observables:
        probs = dctc_clock_probabilities(query)
        if "clock_probs" in config.observables:
            rows.append(SweepRow(tau, omega, g, "out_unevolved", probs.out_unevolved))
            rows.append(SweepRow(tau, omega, g, "out_orthogonal", probs.out_orthogonal))
        if "cv_probs" in config.observables:
            rows.append(SweepRow(tau, omega, g, "cv_unevolved", probs.cv_unevolved))
            rows.append(SweepRow(tau, omega, g, "cv_orthogonal", probs.cv_orthogonal))
    return rows


def _pctc_rows(config, circuit, tau, omega):
    try:
        obs = pctc_observables(circuit, omega)
    except ForbiddenInitialData:
        rows = []
        if "populations" in config.observables:
            rows.extend(
                SweepRow(tau, omega, None, f"population_{level}", None, "forbidden_initial_data")
                for level in range(circuit.clock.dim)
            )
        if "clock_probs" in config.observables:
            rows.append(SweepRow(tau, omega, None, "p_unevolved", None, "forbidden_initial_data"))
            rows.append(SweepRow(tau, omega, None, "p_orthogonal", None, "forbidden_initial_data"))
        return rows
    rows = []
    if "populations" in config.observables:
        _check_population_sum(obs.populations, tau, omega)
        rows.extend(
            SweepRow(tau, omega, None, f"population_{level}", float(value))
            for level, value in enumerate(obs.populations)
        )
    if "clock_probs" in config.observables:
        rows.append(SweepRow(tau, omega, None, "p_unevolved", obs.p_unevolved))
        rows.append(SweepRow(tau, omega, None, "p_orthogonal", obs.p_orthogonal))
    return rows


def _check_population_sum(values, tau, omega):
    total = float(np.sum(values))
    if abs(total - 1.0) > 1e-10:
        raise RuntimeError(
            f"populations at dt/t_perp={tau}, omega={omega} sum to {total}, not 1"
        )


def _row_key(row):
    return (
        row.dt_over_tperp,
        row.omega,
        -1.0 if row.g is None else row.g,
        row.observable,
    )


def single_point(config):
    """True when the configuration evaluates exactly one parameter point."""
    n_dt = 1 if config.constrained is not None else config.dt_grid[2]
    n_g = 1 if config.model == "pctc" else len(config.resolved_gs())
    return n_dt == 1 and len(config.omegas) == 1 and n_g == 1
