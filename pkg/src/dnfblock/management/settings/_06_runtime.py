"""Runtime Configuration."""

from ..conf import BaseConf, ConfField

__all__: list[str] = ["LOG_LEVELS", "RUNTIME"]

LOG_LEVELS: list[str] = ["DEBUG", "INFO", "WARNING", "ERROR"]


class _RuntimeConf(BaseConf):
    """Runtime Configuration."""

    verbose_name = "06. Runtime Configuration"

    threads = ConfField(
        type=int, env="DNFBLOCK_THREADS", toml="runtime.threads", default=0, help="worker threads; 0 uses every core"
    )
    log_level = ConfField(
        type=str,
        choices=LOG_LEVELS,
        env="DNFBLOCK_LOG_LEVEL",
        toml="runtime.log-level",
        default="WARNING",
        help="root logger level",
    )


RUNTIME = _RuntimeConf()
