"""
JSON document models for RANK FLOW.

Certificates, classification reports and fuzz reports are written and read
through these pydantic models, so a document is structurally validated
before any of its algebra is re-checked.
"""

from typing import Any, Dict, List

from pydantic import BaseModel, ConfigDict, Field

EntryRows = List[List[str]]


class CertificateDocument(BaseModel):
    """Serialized rank identity certificate (polynomials ascending)."""
    field: str
    n: int = Field(ge=1)
    A: EntryRows
    f: List[str]
    g: List[str]
    D: List[str]
    M: List[str]
    phi1: List[str]
    phi2: List[str]
    psi1: List[str]
    psi2: List[str]
    lcm_scale: str = "1"
    B: EntryRows
    C: EntryRows
    C1: EntryRows
    C2: EntryRows
    L1: EntryRows
    L2: EntryRows
    ranks: Dict[str, int]
    verified: bool


class StatementDocument(BaseModel):
    label: str
    holds: bool


class ReportDocument(BaseModel):
    """Classification report as emitted by the classify command."""
    model_config = ConfigDict(populate_by_name=True)

    property_name: str = Field(alias="property")
    n: int
    field: str
    direct_check: bool
    statements: List[StatementDocument]
    ranks: Dict[str, int]
    consistent: bool


class FailureDocument(BaseModel):
    """One reproducible fuzz counterexample."""
    trial_index: int
    contract: str
    inputs: Dict[str, Any]


class FuzzConfigDocument(BaseModel):
    field: str
    n_range: List[int]
    deg_range: List[int]
    trials: int
    seed: int
    generators: List[str]


class FuzzReportDocument(BaseModel):
    config: FuzzConfigDocument
    trials_run: int
    failures: List[FailureDocument]
    contract_checks: Dict[str, int]
    elapsed: float
