from dataclasses import dataclass
from typing import Any, Callable, Generic, TypeVar

from .interface import ConfigLike
from .provider import ConfigProvider, get_config_provider

T = TypeVar("T")


@dataclass
class ConfigValue(Generic[T]):
    """A value resolved lazily from the active configuration provider.

    When nothing has been configured the default is used, so numerical code runs
    without a config file. `after` casts the raw value (environment overrides are strings).
    """

    key: str
    default: T | None = None
    description: str | None = None
    after: Callable[[Any], T] | None = None
    mandatory: bool = False

    @property
    def value(self) -> T:
        return self.resolve()

    def resolve(self, context: str | None = None) -> T:
        provider: ConfigProvider = get_config_provider()

        val: T | None
        if not provider.is_configured(context):
            val = self.default
        else:
            config: ConfigLike = provider.get_config(context)
            path = [p.strip() for p in self.key.split(",")]
            val = config.get(*path, default=self.default)

        if val is None:
            if self.mandatory:
                raise ValueError(f"ConfigValue '{self.key}' is mandatory but missing from config")
            return val

        if self.after is not None:
            val = self.after(val)

        return val
