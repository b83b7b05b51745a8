"""Pydantic schemas for files, reports and API bodies"""

from app.models.group import GroupSpecModel
from app.models.job import JobConfig
from app.models.report import CheckResult, CheckStatus, Report

__all__ = ["GroupSpecModel", "JobConfig", "CheckResult", "CheckStatus", "Report"]
