"""
Command handlers, registered by name.

A handler takes a resolved Job and returns a CommandResult; it raises an
AlgebraError when the job cannot be run.
"""
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List

from app.dependencies import Job
from app.exceptions import UsageError


@dataclass
class CommandResult:
    verdict: str
    summary: List[str] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)


Handler = Callable[[Job], CommandResult]


class CommandRouter:
    """Collects handlers under their command names."""

    def __init__(self, tags: List[str]):
        self.tags = tags
        self.handlers: Dict[str, Handler] = {}

    def command(self, name: str) -> Callable[[Handler], Handler]:
        def register(handler: Handler) -> Handler:
            self.handlers[name] = handler
            return handler

        return register


registry: Dict[str, Handler] = {}


def include_router(router: CommandRouter) -> None:
    for name, handler in router.handlers.items():
        if name in registry:
            raise UsageError(f"command '{name}' registered twice")
        registry[name] = handler


def get_handler(name: str) -> Handler:
    if name not in registry:
        raise UsageError(f"unknown command '{name}'; expected one of {', '.join(sorted(registry))}")
    return registry[name]
