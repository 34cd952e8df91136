"""Shared data models for the Hodge-join toolkit."""

from src.models.report import Report

__all__ = ["Report"]
