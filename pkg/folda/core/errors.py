#!/usr/bin/env python
# -*- coding:utf-8 -*-

from __future__ import annotations

from typing import Optional
import sys

from pydantic import BaseModel

from folda.core.log import get_logger

logger = get_logger(__name__)


class FoldaError(RuntimeError):
    def __init__(self, message: str, *, code: str = "FOLDA_ERROR", exit_code: int = 1):
        super().__init__(message)
        self.code = code
        self.exit_code = exit_code


class InvalidNetError(FoldaError):
    def __init__(self, message: str):
        super().__init__(message, code="INVALID_NET")


class NotEnabledError(FoldaError):
    def __init__(self, transition: str, index: Optional[int] = None):
        where = f" at index {index}" if index is not None else ""
        super().__init__(f"transition {transition!r} is not enabled{where}", code="NOT_ENABLED")
        self.transition = transition
        self.index = index


class CyclicOrderError(FoldaError):
    def __init__(self, cycle: list[str]):
        super().__init__(f"trace order has a cycle: {' < '.join(cycle)}", code="CYCLIC_ORDER")
        self.cycle = cycle


class ParseError(FoldaError):
    def __init__(self, message: str, *, source: Optional[str] = None, element: Optional[str] = None):
        context = ", ".join(x for x in (source, element) if x)
        super().__init__(f"{message} ({context})" if context else message, code="PARSE_ERROR")
        self.source = source
        self.element = element


class MissingFinalMarkingError(FoldaError):
    def __init__(self, source: str):
        super().__init__(f"no final marking found for {source}", code="MISSING_FINAL_MARKING")


class InvalidSpecError(FoldaError):
    def __init__(self, message: str):
        super().__init__(message, code="INVALID_SPEC")


class EmptyTraceError(FoldaError):
    def __init__(self, message: str = "cannot remove an event from an empty trace"):
        super().__init__(message, code="EMPTY_TRACE")


class NoAlignmentError(FoldaError):
    def __init__(self, reason: str):
        super().__init__(f"no alignment exists: {reason}", code="NO_ALIGNMENT")
        self.reason = reason


class BoundExceededError(FoldaError):
    def __init__(self, bound: int):
        super().__init__(f"state space exceeds the bound of {bound} markings", code="BOUND_EXCEEDED")
        self.bound = bound


class InvariantViolation(FoldaError):
    def __init__(self, message: str):
        super().__init__(message, code="INVARIANT_VIOLATION")


class UsageError(FoldaError):
    def __init__(self, message: str):
        super().__init__(message, code="USAGE")


class ErrorPayload(BaseModel):
    code: str
    message: str


def handle_error(exc: BaseException) -> int:
    if isinstance(exc, FoldaError):
        payload = ErrorPayload(code=exc.code, message=str(exc))
        logger.error("Command failed", extra={"code": exc.code})
        print(f"error [{payload.code}]: {payload.message}", file=sys.stderr)
        return exc.exit_code
    logger.exception("Unhandled exception")
    payload = ErrorPayload(code="INTERNAL_ERROR", message="Internal error")
    print(f"error [{payload.code}]: {payload.message}", file=sys.stderr)
    return 1
