"""Schema-versioned reports: per-cell records plus gate verdicts."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from . import __version__
from .koszul import CSV_HEADER, SCHEMA_VERSION, BettiTable
from .suite import GateResult, Record


def _sort_key(r: Record):
    return (r.model, r.char, str(r.g), r.p, r.q)


@dataclass
class Report:
    """Records are emitted sorted by ``(model, char, g, p, q)``.

    Wall times are dropped unless ``timings`` is set, so identical runs give
    byte-identical files.
    """

    records: list[Record] = field(default_factory=list)
    gates: list[GateResult] = field(default_factory=list)
    timings: bool = False

    @classmethod
    def from_tables(cls, tables: list[BettiTable], timings: bool = False) -> Report:
        recs = [
            Record(t.model, "" if t.g is None else t.g, t.char, p, q, v, t.certification, t.ms.get((p, q), 0.0))
            for t in tables
            for (p, q), v in t.entries.items()
        ]
        return cls(recs, [], timings)

    @classmethod
    def from_gates(cls, gates: list[GateResult], timings: bool = False) -> Report:
        return cls([r for g in gates for r in g.records], list(gates), timings)

    @property
    def passed(self) -> bool:
        return all(g.passed for g in self.gates)

    def sorted_records(self) -> list[Record]:
        return sorted(self.records, key=_sort_key)

    def _row(self, r: Record) -> list:
        row = r.row()
        if not self.timings:
            row[-1] = 0
        return row

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "version": __version__,
            "verdict": None if not self.gates else ("PASS" if self.passed else "FAIL"),
            "gates": [g.to_dict() for g in self.gates],
            "records": [dict(zip(CSV_HEADER, self._row(r))) for r in self.sorted_records()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows(self._row(r) for r in self.sorted_records())
        return buf.getvalue()

    def summary(self) -> str:
        lines = []
        for g in self.gates:
            lines.append(f"{g.name:16s} {'PASS' if g.passed else 'FAIL'}  ({g.checked} checks)")
            lines.extend(f"    {f}" for f in g.failures)
        return "\n".join(lines) + "\n"
