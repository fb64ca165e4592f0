#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import annotations

import json
import logging

import pytest
from pydantic import ValidationError

from folda.core.di import get_settings, settings_override
from folda.core.errors import FoldaError, NoAlignmentError, NotEnabledError, ParseError, handle_error
from folda.core.log import JsonFormatter, RunContextFilter, bind_run, current_run
from folda.core.settings import Settings


def _record(message="hello", **extra):
    record = logging.LogRecord("folda.test", logging.INFO, __file__, 1, message, None, None)
    for key, value in extra.items():
        setattr(record, key, value)
    return record


def test_settings_defaults():
    settings = Settings(_env_file=None)
    assert settings.align_timeout == 100.0
    assert settings.silent_cost_denominator == 10000
    assert settings.bench_placements == ["none", "start", "middle", "end"]
    assert settings.bench_variants == ["foldn", "foldh"]


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("FOLDA_ALIGN_TIMEOUT", "2.5")
    monkeypatch.setenv("FOLDA_JOBS", "4")
    monkeypatch.setenv("FOLDA_BENCH_PLACEMENTS", "End, start,end")
    settings = Settings(_env_file=None)
    assert settings.align_timeout == 2.5
    assert settings.jobs == 4
    assert settings.bench_placements == ["end", "start"]


def test_settings_reject_unknown_placement():
    with pytest.raises(ValidationError):
        Settings(_env_file=None, bench_placements="none,sideways")


def test_settings_reject_non_positive_timeout():
    with pytest.raises(ValidationError):
        Settings(_env_file=None, align_timeout=0)


def test_settings_override_is_scoped():
    before = get_settings().align_timeout
    with settings_override(align_timeout=7.0) as settings:
        assert settings.align_timeout == 7.0
        assert get_settings() is settings
    assert get_settings().align_timeout == before


def test_handle_error_reports_code(capsys):
    assert handle_error(NoAlignmentError("final marking unreachable")) == 1
    err = capsys.readouterr().err
    assert err.startswith("error [NO_ALIGNMENT]: no alignment exists")


def test_handle_error_hides_internal_details(capsys):
    assert handle_error(KeyError("secret")) == 1
    err = capsys.readouterr().err
    assert "INTERNAL_ERROR" in err
    assert "secret" not in err


def test_error_attributes():
    exc = NotEnabledError("t6", 1)
    assert isinstance(exc, FoldaError)
    assert exc.code == "NOT_ENABLED"
    assert "index 1" in str(exc)
    assert "model.pnml" in str(ParseError("bad arc", source="model.pnml"))


def test_bind_run_attaches_ids():
    with bind_run(job_id=17, trace_id=3):
        with bind_run(variant="foldh"):
            record = _record()
            assert RunContextFilter().filter(record)
            assert current_run() == {"job_id": "17", "trace_id": "3", "variant": "foldh"}
        assert current_run()["variant"] is None
    assert (record.job_id, record.trace_id, record.variant) == ("17", "3", "foldh")
    after = _record()
    RunContextFilter().filter(after)
    assert after.job_id is None


def test_bind_run_rejects_unknown_keys():
    with pytest.raises(TypeError):
        with bind_run(request_id="x"):
            pass


def test_explicit_extra_wins_over_context():
    with bind_run(trace_id=1):
        record = _record(trace_id="9")
        RunContextFilter().filter(record)
    assert record.trace_id == "9"


def test_json_formatter_payload():
    record = _record("aligned", job_id="2", trace_id="5", cost="1/10000")
    payload = json.loads(JsonFormatter(service="folda").format(record))
    assert payload["message"] == "aligned"
    assert payload["job_id"] == "2"
    assert payload["trace_id"] == "5"
    assert payload["cost"] == "1/10000"
    assert payload["service"] == "folda"
    assert payload["logger"] == "folda.test"
