"""Thin synchronous client for the newline-delimited JSON reward service."""

from .client import ClientSession, GroupScore, ServiceError, Timeout

__all__ = ["ClientSession", "GroupScore", "ServiceError", "Timeout"]
