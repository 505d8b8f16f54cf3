"""Model identifiers and whole-table computations.

Model ids: ``tangent-rnc:g=<n>``, ``elliptic:d=<n>``, ``genus2:deg13``.
Section-ring models are built over prime fields; a characteristic-0 request
runs every proxy prime of the linear-algebra config and requires agreement.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

from .config import TableConfig
from .errors import HilbertMismatch
from .koszul import (
    BettiTable,
    KoszulEngine,
    LinearSection,
    betti_table,
    hilbert_numerator_check,
)
from .linalg import EXACT_FP, MULTI_PRIME, FieldSpec, LinalgConfig
from .models.base import GradedModule, SectionRingModel, hilbert_check
from .models.curves import EllipticTangentModel, Genus2TangentModel
from .models.rnc import RncTangentModel

log = logging.getLogger(__name__)


class ConsistencyError(RuntimeError):
    """A computed table failed an internal consistency gate."""


_ID_RE = re.compile(r"^(tangent-rnc):g=(\d+)$|^(elliptic):d=(\d+)$|^(genus2):deg13$")


@dataclass(frozen=True)
class ModelSpec:
    kind: str  # "tangent-rnc" | "elliptic" | "genus2"
    param: int  # g for the rational normal curve, the degree otherwise

    @classmethod
    def parse(cls, text: str) -> ModelSpec:
        m = _ID_RE.match(text.strip())
        if not m:
            raise ValueError(f"unknown model id {text!r}; expected tangent-rnc:g=<n>, elliptic:d=<n> or genus2:deg13")
        if m.group(1):
            return cls("tangent-rnc", int(m.group(2)))
        if m.group(3):
            return cls("elliptic", int(m.group(4)))
        return cls("genus2", 13)

    @property
    def id(self) -> str:
        if self.kind == "tangent-rnc":
            return f"tangent-rnc:g={self.param}"
        if self.kind == "elliptic":
            return f"elliptic:d={self.param}"
        return "genus2:deg13"

    @property
    def genus(self) -> int:
        return {"tangent-rnc": 0, "elliptic": 1, "genus2": 2}[self.kind]

    @property
    def r(self) -> int:
        """Dimension of the ambient projective space."""
        return self.param if self.kind == "tangent-rnc" else self.param - self.genus

    def build(self, field: FieldSpec) -> SectionRingModel:
        if self.kind == "tangent-rnc":
            return RncTangentModel(self.param, field)
        if self.kind == "elliptic":
            return EllipticTangentModel(self.param, field)
        return Genus2TangentModel(field)

    def default_reduce(self) -> bool:
        return self.kind != "tangent-rnc"


def working_primes(char: int, linalg: LinalgConfig) -> list[int]:
    return [char] if char else list(linalg.proxy_primes)


def koszul_module_for(model: SectionRingModel, reduce: bool, seed: int, degree: int) -> GradedModule:
    if not reduce:
        return model
    sec = LinearSection(model, seed=seed)
    sec.verify_regular(degree)
    return sec


def compute_table(spec: ModelSpec | str, char: int, config: TableConfig | None = None) -> BettiTable:
    """Betti table of a model over ``F_char`` (or over QQ via proxy primes when ``char == 0``).

    Gates applied before the table is returned: the Hilbert function of the
    model through ``config.hilbert_degree`` and the Hilbert-numerator identity
    of the table.
    """
    spec = ModelSpec.parse(spec) if isinstance(spec, str) else spec
    cfg = config or TableConfig()
    reduce = spec.default_reduce() if cfg.reduce is None else cfg.reduce
    p_max = spec.r - 1 if cfg.p_max is None else cfg.p_max
    tables = []
    for prime in working_primes(char, cfg.linalg):
        model = spec.build(FieldSpec(prime))
        hilbert_check(model, max(cfg.hilbert_degree, cfg.q_max + 1))
        module = koszul_module_for(model, reduce, cfg.section_seed, cfg.q_max + 1)
        eng = KoszulEngine(module, cfg.linalg, certify_complex=cfg.certify_complex)
        t = betti_table(module, p_max, cfg.q_max, cfg.linalg, model_id=spec.id, engine=eng)
        # a truncated grid only determines the numerator up to degree min(p_max, q_max)
        full = cfg.p_max is None and cfg.q_max >= 3
        degree = min(p_max, module.nvars) + cfg.q_max if full else min(p_max, module.nvars, cfg.q_max)
        if not hilbert_numerator_check(t, module.expected_hilbert, module.nvars, degree=degree):
            raise ConsistencyError(f"{spec.id} over F_{prime}: table does not match the Hilbert series")
        tables.append(t)
    out = tables[0]
    out.g = spec.param
    out.char = char
    if char:
        out.certification = EXACT_FP
        return out
    out.certification = MULTI_PRIME
    for other in tables[1:]:
        for key in sorted(set(out.entries) | set(other.entries)):
            if out[key] != other[key]:
                out.notes.append(f"proxy primes disagree at {key}: {out[key]} vs {other[key]}")
        for key, ms in other.ms.items():
            out.ms[key] = out.ms.get(key, 0.0) + ms
    if out.notes:
        log.warning("%s: %s", spec.id, "; ".join(out.notes))
    return out


__all__ = ["ConsistencyError", "HilbertMismatch", "ModelSpec", "compute_table", "working_primes"]
