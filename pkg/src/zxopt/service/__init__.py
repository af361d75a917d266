"""HTTP service layer: pydantic models, handlers, FastAPI app."""

from .app import app, create_app
from .handlers import HandlerError

__all__ = ["app", "create_app", "HandlerError"]
