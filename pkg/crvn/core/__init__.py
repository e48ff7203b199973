"""Core configuration and error types."""
from crvn.core.config import settings

__all__ = ["settings"]
