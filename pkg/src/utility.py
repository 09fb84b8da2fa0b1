import os
import sys
from datetime import datetime
from typing import Any, Callable

from loguru import logger

LOG_FORMAT: str = "{time:YYYY-MM-DD HH:mm:ss} | {level} | {message}"


def dget(data: dict, *path: str | list[str], default: Any = None) -> Any:
    """Returns the first non-None value found along any of the given paths."""
    if path is None or not data:
        return default

    for p in path:
        value = dotget(data, p)
        if value is not None:
            return value

    return default


def dotexists(data: dict, *paths: str) -> bool:
    return any(dotget(data, path, default="@@") != "@@" for path in paths)


def dotexpand(paths: str | list[str]) -> list[str]:
    """Expands comma separated paths; `a:b` is tried both as `a.b` and `a_b`."""
    if not paths:
        return []
    if not isinstance(paths, (str, list)):
        raise ValueError("dot path must be a string or list of strings")
    paths = paths if isinstance(paths, list) else [paths]
    expanded_paths: list[str] = []
    for p in paths:
        for q in p.replace(" ", "").split(","):
            if not q:
                continue
            if ":" in q:
                expanded_paths.extend([q.replace(":", "."), q.replace(":", "_")])
            else:
                expanded_paths.append(q)
    return expanded_paths


def dotget(data: dict, path: str, default: Any = None) -> Any:
    """Gets element from dict. Path can be x.y.z, x_y_z or x:y:z (the latter tries both)."""

    for key in dotexpand(path):
        d: Any = data
        for attr in key.split("."):
            d = d.get(attr) if isinstance(d, dict) else None
            if d is None:
                break
        if d is not None:
            return d
    return default


def dotset(data: dict, path: str, value: Any) -> dict:
    """Sets element in dict using dot notation x.y.z or x:y:z"""

    d: dict = data
    attrs: list[str] = path.replace(":", ".").split(".")
    for attr in attrs[:-1]:
        if not attr:
            continue
        d = d.setdefault(attr, {})
    d[attrs[-1]] = value

    return data


def env2dict(prefix: str, data: dict[str, Any] | None = None, lower_key: bool = True) -> dict[str, Any]:
    """Loads environment variables starting with `prefix` into `data`.

    RADIAL_MULTIPLIERS_OPTIONS_RADIAL_TRUNCATION=300 becomes options:radial:truncation.
    Values are strings; consumers cast them (see ConfigValue.after).
    """
    if data is None:
        data = {}
    if not prefix:
        return data
    if lower_key:
        prefix = prefix.lower()
    for key, value in os.environ.items():
        if lower_key:
            key = key.lower()
        if key.startswith(prefix + "_"):
            dotset(data, key[len(prefix) + 1 :].replace("_", ":"), value)
    return data


def replace_env_vars(data: Any) -> Any:
    """Recursively replaces string values of the form ${ENV_VAR} with os.getenv("ENV_VAR", "")"""
    if isinstance(data, dict):
        return {k: replace_env_vars(v) for k, v in data.items()}
    if isinstance(data, list):
        return [replace_env_vars(i) for i in data]
    if isinstance(data, str) and data.startswith("${") and data.endswith("}"):
        return os.getenv(data[2:-1], "")
    return data


STREAM_SINKS: dict[str, Any] = {"sys.stdout": sys.stdout, "sys.stderr": sys.stderr}


def configure_logging(opts: dict[str, Any] | None) -> None:
    """Installs loguru handlers.

    Reports are written to stdout, so the default sink is stderr. Named stream sinks are
    mapped to the streams, `*.log` sinks are placed in `folder` with a date prefix.
    """
    logger.remove()
    logger.add(sys.stderr, level="INFO", format=LOG_FORMAT)

    if not opts or not opts.get("handlers"):
        return

    handlers: list[dict[str, Any]] = []
    for handler in opts["handlers"]:
        sink: Any = handler.get("sink")
        if not sink:
            continue
        if isinstance(sink, str) and sink in STREAM_SINKS:
            sink = STREAM_SINKS[sink]
        elif isinstance(sink, str) and sink.endswith(".log"):
            sink = os.path.join(opts.get("folder", "logs"), f"{datetime.now().strftime('%Y%m%d')}_{sink}")
        handlers.append(handler | {"sink": sink})

    logger.configure(handlers=handlers)


def _ensure_key_property(cls):
    if not hasattr(cls, "key"):

        def key(self) -> str:
            return getattr(self, "_registry_key", "unknown")

        cls.key = property(key)
    return cls


class Registry:
    """Name -> implementation lookup. Subclasses declare their own `items` dict."""

    items: dict = {}
    kind: str = "item"

    @classmethod
    def get(cls, key: str) -> Any:
        if key not in cls.items:
            raise KeyError(f"{cls.kind} '{key}' is not registered (known: {', '.join(sorted(cls.items))})")
        return cls.items[key]

    @classmethod
    def register(cls, **args) -> Callable[..., Any]:
        """Registers a class or function under `key` (defaults to its name).

        type="factory" registers the result of calling the decorated object instead.
        """

        def decorator(fn_or_class):
            key: str = args.get("key") or fn_or_class.__name__
            item: Any = fn_or_class
            if args.get("type") == "factory":
                item = fn_or_class()
            elif isinstance(fn_or_class, type):
                setattr(fn_or_class, "_registry_key", key)
                item = _ensure_key_property(fn_or_class)

            cls.items[key] = item
            return fn_or_class

        return decorator

    @classmethod
    def is_registered(cls, key: str) -> bool:
        return key in cls.items

    @classmethod
    def keys(cls) -> list[str]:
        return sorted(cls.items)
