#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import annotations

from typing import Annotated, Any, ClassVar, List, Literal
from functools import lru_cache

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, NoDecode, SettingsConfigDict

PLACEMENT_NAMES = ("none", "start", "middle", "end")


class Settings(BaseSettings):
    # ---- App ----
    app_name: str = Field("folda", description="Program name in usage text and log labels")
    app_env: Literal["development", "testing", "benchmark"] = Field(
        "development", description="Environment Name."
    )
    app_version: str = Field("0.1.0", description="Version Number")

    # ---- Logging ----
    log_level: Literal["debug", "info", "warning", "error", "critical"] = Field(
        "info", description="Log Level"
    )
    log_format: Literal["plain", "json"] = Field(
        "plain", description='Log format: "plain" or "json"'
    )
    log_stream: Literal["stdout", "stderr"] = Field(
        "stderr", description="Console stream for log records (stdout carries results)"
    )
    log_utc: bool = Field(True, description="UTC timestamps")
    log_capture_warnings: bool = Field(True, description="Route warnings.warn through logging")
    log_to_file: bool = Field(False, description="Also write a file rotated at midnight")
    log_dir: str = Field("logs", description="Directory of the rotated log file")
    log_file_backups: int = Field(5, ge=0, description="Rotated files kept")

    plain_format: ClassVar[str] = (
        "%(asctime)s | %(levelname)s | %(name)s | %(process)d | "
        "job=%(job_id)s trace=%(trace_id)s | %(message)s"
    )

    # ---- Alignment engine ----
    align_timeout: float = Field(100.0, gt=0, description="Wall-clock budget per trace (seconds)")
    debug_checks: bool = Field(
        False, description="Assert branching-process invariants after every append"
    )
    silent_cost_denominator: int = Field(
        10000, ge=1, description="Silent model moves cost 1/silent_cost_denominator"
    )
    brute_force_bound: int = Field(
        100_000, ge=1, description="Marking budget of the exhaustive oracle"
    )

    # ---- Generation / benchmark ----
    jobs: int = Field(1, ge=1, description="Parallel alignment jobs (FOLDA_JOBS)")
    simulation_max_len: int = Field(50, ge=1, description="Loop cap for simulated traces")
    bench_traces: int = Field(50, ge=1, description="Traces simulated per model")
    bench_placements: Annotated[List[str], NoDecode] = Field(
        default_factory=lambda: list(PLACEMENT_NAMES),
        description="Deviation placements crossed with every manifest spec",
    )
    bench_variants: Annotated[List[str], NoDecode] = Field(
        default_factory=lambda: ["foldn", "foldh"],
        description="Aligners crossed with every manifest spec",
    )

    model_config = SettingsConfigDict(
        env_prefix="FOLDA_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    @field_validator("bench_placements", "bench_variants", mode="before")
    @classmethod
    def _split_str_list(cls, v: Any) -> Any:
        if isinstance(v, str):
            return [s.strip() for s in v.split(",") if s.strip()]
        return v

    @field_validator("bench_placements", mode="after")
    @classmethod
    def _normalize_placements(cls, v: List[str]) -> List[str]:
        out = [p.strip().lower() for p in v if p and p.strip()]
        unknown = sorted(set(out) - set(PLACEMENT_NAMES))
        if unknown:
            raise ValueError(f"unknown deviation placement(s): {', '.join(unknown)}")
        return list(dict.fromkeys(out))


@lru_cache(maxsize=None)
def get_settings() -> Settings:
    return Settings()
