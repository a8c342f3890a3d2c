"""Request/response models shared by the HTTP endpoints and the CLI client.

File contents travel as raw text so the service parses with the same
line-numbered errors as local runs.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

DEFAULT_CAP = 10_000


class ClosureRequest(BaseModel):
    ontology: str


class ClosureResponse(BaseModel):
    facts: list[str]  # rendered, sorted


class CheckRequest(BaseModel):
    ontology: str
    sensitive: str
    subset: Optional[list[str]] = None  # None: all relation ids


class CheckResponse(BaseModel):
    safe: bool
    witness_fact: Optional[str] = None
    witness_support: Optional[list[str]] = None


class ExplainRequest(BaseModel):
    ontology: str
    sensitive: str
    cap: int = Field(default=DEFAULT_CAP, gt=0)


class FactMinsets(BaseModel):
    fact: str
    minsets: list[list[str]]  # each sorted; empty when underivable


class ExplainResponse(BaseModel):
    facts: list[FactMinsets]


class SanitizeRequest(BaseModel):
    ontology: str
    sensitive: Optional[str] = None
    minsets: Optional[str] = None  # wins over sensitive when both are given
    method: Literal["greedy", "augment", "oracle"] = "augment"
    cap: int = Field(default=DEFAULT_CAP, gt=0)
    dump_border: bool = False


class SanitizeResponse(BaseModel):
    kept: list[str]
    removed: list[str]
    weight: float
    method: str
    optimal: bool
    border_dump: Optional[str] = None


class HealthResponse(BaseModel):
    status: str = "ok"
    version: str
