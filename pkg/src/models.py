"""
Data models for RANK FLOW classification and fuzz reports.
"""
from dataclasses import dataclass, field as dataclass_field
from enum import Enum
from typing import Any, Dict, List

from src.config_loader import FuzzConfig
from src.field_core import FieldSpec
from src.schemas import (
    FailureDocument, FuzzConfigDocument, FuzzReportDocument, ReportDocument, StatementDocument
)


class PropertyKind(Enum):
    """Matrix properties decided by rank statements (CLI names as values)."""
    IDEMPOTENT = "idempotent"
    INVOLUTIVE = "involutive"
    TRIPOTENT = "tripotent"
    A3_EQUALS_A5 = "a3a5"
    CHAR_FACTOR_RANK_SUM = "charfactors"
    RANK_IDENTITY_APP5 = "app5"

    @property
    def is_equivalence(self) -> bool:
        """True for properties whose statements must all equal direct_check."""
        return self not in (PropertyKind.CHAR_FACTOR_RANK_SUM, PropertyKind.RANK_IDENTITY_APP5)


@dataclass(frozen=True)
class Statement:
    """A labelled rank equation and whether it holds."""
    label: str
    holds: bool


@dataclass
class ClassificationReport:
    """Independently evaluated statements about one matrix."""
    property: PropertyKind
    field: FieldSpec
    n: int
    statements: List[Statement]
    direct_check: bool
    ranks_used: Dict[str, int] = dataclass_field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        """
        Agreement contract of the report.

        Equivalence properties: every statement equals direct_check.
        Identities (charfactors, app5): every statement and direct_check true.
        """
        if self.property.is_equivalence:
            return all(s.holds == self.direct_check for s in self.statements)
        return self.direct_check and all(s.holds for s in self.statements)

    def to_document(self) -> ReportDocument:
        return ReportDocument(
            property=self.property.value,
            n=self.n,
            field=self.field.label,
            direct_check=self.direct_check,
            statements=[StatementDocument(label=s.label, holds=s.holds) for s in self.statements],
            ranks=dict(self.ranks_used),
            consistent=self.consistent,
        )


@dataclass(frozen=True)
class FuzzFailure:
    """A contract that failed in one trial, with the inputs to replay it."""
    trial_index: int
    contract: str
    inputs: Dict[str, Any]


@dataclass
class FuzzReport:
    """Outcome of a fuzz run; failures sorted by trial index then contract."""
    config: FuzzConfig
    trials_run: int
    failures: List[FuzzFailure]
    elapsed: float
    contract_checks: Dict[str, int] = dataclass_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_document(self) -> FuzzReportDocument:
        cfg = self.config
        return FuzzReportDocument(
            config=FuzzConfigDocument(
                field=cfg.field.label,
                n_range=list(cfg.n_range),
                deg_range=list(cfg.deg_range),
                trials=cfg.trials,
                seed=cfg.seed,
                generators=list(cfg.generators),
            ),
            trials_run=self.trials_run,
            failures=[
                FailureDocument(trial_index=f.trial_index, contract=f.contract, inputs=f.inputs)
                for f in self.failures
            ],
            contract_checks=dict(sorted(self.contract_checks.items())),
            elapsed=round(self.elapsed, 6),
        )
