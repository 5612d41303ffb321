"""Energy/evaluation trace records shared by builders and the CLI."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class TraceRecord:
    eval_count: int
    energy: float
    phase: str          # "selection" or "optimization"
    stage: str
    ansatz_size: int
    energy_error: float | None = None

    def to_dict(self):
        d = {
            "eval_count": self.eval_count,
            "energy": self.energy,
            "phase": self.phase,
            "stage": self.stage,
            "ansatz_size": self.ansatz_size,
        }
        if self.energy_error is not None:
            d["energy_error"] = self.energy_error
        return d


class RunTrace:
    """Append-only trace with strictly increasing evaluation counts.

    A record arriving at an unchanged eval_count replaces the previous one,
    so zero-cost stages coalesce into the next paid measurement.
    """

    def __init__(self, oracle_energy=None):
        self.records: list[TraceRecord] = []
        self.oracle_energy = oracle_energy

    def record(self, eval_count, energy, phase, stage, ansatz_size):
        err = None if self.oracle_energy is None else energy - self.oracle_energy
        rec = TraceRecord(eval_count, energy, phase, stage, ansatz_size, err)
        if self.records and self.records[-1].eval_count == eval_count:
            self.records[-1] = rec
        elif self.records and eval_count < self.records[-1].eval_count:
            raise ValueError("evaluation count went backwards")
        else:
            self.records.append(rec)

    @property
    def final(self):
        return self.records[-1] if self.records else None

    def first_eval_below(self, error_target):
        """First cumulative eval count whose |energy error| is under target."""
        if self.oracle_energy is None:
            raise ValueError("trace has no oracle energy")
        for rec in self.records:
            if abs(rec.energy - self.oracle_energy) < error_target:
                return rec.eval_count
        return None
