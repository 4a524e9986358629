"""
Configuration access for seqsim.

Values resolve as: environment variable `SEQSIM_<NAME>` if set, otherwise
the constant of the same name in `conf.settings`.
"""

import os
from typing import Any, Callable, Optional

from conf import settings

ENV_PREFIX = "SEQSIM_"


def get_setting(name: str, cast: Optional[Callable[[str], Any]] = None, default: Any = None) -> Any:
    """
    Resolve a setting by name.

    Args:
        name: Setting name as it appears in `conf.settings` (e.g. "ALPHA").
        cast: Converter applied to an environment value (e.g. float).
        default: Returned when neither the environment nor settings define it.

    Returns:
        The resolved value.

    Raises:
        ValueError: If the environment value cannot be converted by `cast`.
    """
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is not None and raw.strip() != "":
        if cast is None:
            return raw
        try:
            return cast(raw.strip())
        except (TypeError, ValueError):
            raise ValueError(f"Invalid value for {ENV_PREFIX}{name}: {raw!r}")
    return getattr(settings, name, default)
