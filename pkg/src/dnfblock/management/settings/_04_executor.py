"""Blocking Executor Configuration."""

from ...constants import Defaults
from ..conf import BaseConf, ConfField

__all__: list[str] = ["EXECUTOR"]


class _ExecutorConf(BaseConf):
    """Blocking Executor Configuration."""

    verbose_name = "04. Blocking Executor Configuration"

    purge_cap = ConfField(
        type=int,
        env="DNFBLOCK_PURGE_CAP",
        toml="executor.purge-cap",
        default=Defaults.PURGE_CAP,
        help="blocks emitting more pairs are dropped",
    )
    key_cap = ConfField(
        type=int,
        env="DNFBLOCK_KEY_CAP",
        toml="executor.key-cap",
        default=Defaults.KEY_CAP,
        help="most blocking keys one node may generate per term",
    )


EXECUTOR = _ExecutorConf()
