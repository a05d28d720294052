"""Flat key=value run configuration with CLI overrides and strict validation."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path

from ..algebra import SpinQuantumNumber
from ..dynamics import INTEGRATORS, EvolutionSpec
from ..errors import ConfigError
from ..model import (
    EfgParameters,
    ZeemanParameters,
    mat_hamiltonian,
    total_hamiltonian,
    zeeman_hamiltonian,
)
from ..states import BlochDirection


@dataclass(frozen=True)
class RunConfig:
    """One simulation run, fully determined (no randomness anywhere).

    Frequencies are linear (Hz): ``larmor_hz`` is omega0/2pi and
    ``dephasing_hz`` is W/2pi.  Times are expressed on the dimensionless axis
    tau = f_Q t.
    """

    spin_two_i: int = 3
    eta: float = 0.0
    f_q_hz: float = 1.0
    larmor_hz: float = 0.0
    field_theta: float = 0.0
    field_phi: float = 0.0
    dephasing_hz: float = 0.0
    css_theta: float = math.pi / 2
    css_phi: float = math.pi / 2
    t_max_in_inverse_fq: float = 10.0
    samples_per_inverse_fq: int = 200
    integrator: str = "rk45"
    output_dir: str = "quadspin_out"

    def validate(self):
        if self.spin_two_i < 2:
            raise ConfigError("need 2I >= 2 (quadrupole coupling requires I >= 1)",
                              field="spin_two_i")
        if not 0.0 <= self.eta <= 1.0:
            raise ConfigError(f"must lie in [0, 1], got {self.eta}", field="eta")
        if not self.f_q_hz > 0:
            raise ConfigError(f"must be positive, got {self.f_q_hz}", field="f_q_hz")
        if self.larmor_hz < 0:
            raise ConfigError(f"must be >= 0, got {self.larmor_hz}", field="larmor_hz")
        if not 0.0 <= self.field_theta <= math.pi:
            raise ConfigError(f"must lie in [0, pi], got {self.field_theta}",
                              field="field_theta")
        if not 0.0 <= self.field_phi < 2 * math.pi:
            raise ConfigError(f"must lie in [0, 2*pi), got {self.field_phi}",
                              field="field_phi")
        if self.dephasing_hz < 0:
            raise ConfigError(f"must be >= 0, got {self.dephasing_hz}",
                              field="dephasing_hz")
        if not 0.0 <= self.css_theta <= math.pi:
            raise ConfigError(f"must lie in [0, pi], got {self.css_theta}",
                              field="css_theta")
        if not 0.0 <= self.css_phi < 2 * math.pi:
            raise ConfigError(f"must lie in [0, 2*pi), got {self.css_phi}",
                              field="css_phi")
        if not self.t_max_in_inverse_fq > 0:
            raise ConfigError(f"must be positive, got {self.t_max_in_inverse_fq}",
                              field="t_max_in_inverse_fq")
        if self.samples_per_inverse_fq < 50:
            raise ConfigError(
                f"must be >= 50 to resolve the f_Q oscillations, "
                f"got {self.samples_per_inverse_fq}",
                field="samples_per_inverse_fq")
        if self.integrator not in INTEGRATORS:
            raise ConfigError(f"must be one of {INTEGRATORS}, got {self.integrator!r}",
                              field="integrator")
        if not self.output_dir:
            raise ConfigError("must be a non-empty path", field="output_dir")
        return self

    # -- derived physics objects ------------------------------------------

    def spin(self) -> SpinQuantumNumber:
        return SpinQuantumNumber(self.spin_two_i)

    def css_direction(self) -> BlochDirection:
        return BlochDirection(self.css_theta, self.css_phi)

    def hamiltonian(self):
        spin = self.spin()
        parts = [mat_hamiltonian(spin, EfgParameters(self.f_q_hz, self.eta))]
        if self.larmor_hz > 0:
            parts.append(zeeman_hamiltonian(spin, ZeemanParameters(
                self.larmor_hz, BlochDirection(self.field_theta, self.field_phi))))
        return total_hamiltonian(parts)

    def dephasing_rate(self) -> float:
        """W in rad/s."""
        return 2.0 * math.pi * self.dephasing_hz

    def dt_sample_s(self) -> float:
        return 1.0 / (self.samples_per_inverse_fq * self.f_q_hz)

    def t_max_s(self) -> float:
        return self.t_max_in_inverse_fq / self.f_q_hz

    def evolution_spec(self) -> EvolutionSpec:
        return EvolutionSpec(
            hamiltonian=self.hamiltonian(),
            t_max=self.t_max_s(),
            dt_sample=self.dt_sample_s(),
            dephasing_rate=self.dephasing_rate(),
            integrator=self.integrator,
            # deterministic fallback step pinned to the quadrupole period
            rk4_substep=1.0 / (200.0 * self.f_q_hz),
        )

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}

    @classmethod
    def from_dict(cls, values: dict, lines: dict | None = None) -> "RunConfig":
        lines = lines or {}
        known = {f.name: f.type for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, raw in values.items():
            if key not in known:
                raise ConfigError("unknown configuration key", field=key,
                                  line=lines.get(key))
            kwargs[key] = _coerce(key, raw, known[key], lines.get(key))
        return cls(**kwargs).validate()


_INT_FIELDS = {"spin_two_i", "samples_per_inverse_fq"}
_STR_FIELDS = {"integrator", "output_dir"}


def _coerce(key, raw, _annotation, line):
    if key in _STR_FIELDS:
        return str(raw)
    try:
        if key in _INT_FIELDS:
            if isinstance(raw, float) and raw != int(raw):
                raise ValueError(f"not an integer: {raw}")
            return int(raw)
        return float(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"cannot parse value {raw!r} ({exc})", field=key, line=line)


def parse_config_file(path) -> RunConfig:
    """Read a flat ``key = value`` file ('#' comments, blank lines allowed)."""
    values: dict = {}
    lines: dict = {}
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError("expected 'key = value'", field=stripped.split()[0],
                              line=lineno)
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        values[key] = value
        lines[key] = lineno
    return RunConfig.from_dict(values, lines)


def apply_overrides(config: RunConfig, assignments: list[str]) -> RunConfig:
    """Apply ``key=value`` command-line overrides on top of a config."""
    values = config.to_dict()
    for item in assignments:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value",
                              field=item)
        key, _, value = item.partition("=")
        values[key.strip()] = value.strip()
    return RunConfig.from_dict(values)
