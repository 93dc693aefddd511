"""Pydantic request/response models for the verification service."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field


class SettingsModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seed: Optional[int] = None
    samples: Optional[int] = Field(default=None, ge=1, le=10000)
    tol: Optional[float] = Field(default=None, gt=0, lt=1)
    fd_step: Optional[float] = Field(default=None, gt=1e-12, lt=1e-2)
    fd_tol: Optional[float] = Field(default=None, gt=0, lt=1)
    exact_points: Optional[int] = Field(default=None, ge=1, le=1000)

    def overrides(self) -> dict:
        return {k: v for k, v in self.model_dump().items() if v is not None}


class CheckSpec(BaseModel):
    model_config = ConfigDict(extra="allow")

    name: str
    label: Optional[str] = None


class ScenarioModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    schema_version: str = Field(default="dirac-kit/1", alias="schema")
    settings: SettingsModel = SettingsModel()
    declarations: dict[str, Any] = {}
    checks: list[CheckSpec] = []

    def to_document(self) -> dict:
        doc = self.model_dump(by_alias=True, exclude_none=True)
        doc["settings"] = self.settings.overrides()
        doc["checks"] = [c.model_dump(exclude_none=True) for c in self.checks]
        return doc


class VerifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: ScenarioModel
    settings: SettingsModel = SettingsModel()


class CatalogRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    settings: SettingsModel = SettingsModel()


class CheckRecord(BaseModel):
    model_config = ConfigDict(extra="allow")

    name: Optional[str] = None
    check: Optional[str] = None
    status: Optional[str] = None


class ReportModel(BaseModel):
    model_config = ConfigDict(extra="allow", populate_by_name=True)

    schema_version: str = Field(alias="schema")
    passed: bool = Field(alias="pass")


class CatalogListing(BaseModel):
    names: list[str]


class HealthResponse(BaseModel):
    status: str
    version: str
