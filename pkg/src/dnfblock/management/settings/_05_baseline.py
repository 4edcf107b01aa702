"""Attribute Clustering Configuration."""

from ...constants import Defaults
from ..conf import BaseConf, ConfField

__all__: list[str] = ["BASELINE"]


class _BaselineConf(BaseConf):
    """Attribute Clustering Configuration."""

    verbose_name = "05. Attribute Clustering Configuration"

    sim_threshold = ConfField(
        type=float,
        env="DNFBLOCK_SIM_THRESHOLD",
        toml="baseline.sim-threshold",
        default=Defaults.SIM_THRESHOLD,
        help="cosine similarity linking two edge labels",
    )


BASELINE = _BaselineConf()
