"""Graph Ingestion and Trails Configuration."""

from ...constants import Defaults
from ..conf import BaseConf, ConfField

__all__: list[str] = ["GRAPH"]


class _GraphConf(BaseConf):
    """Graph Ingestion and Trails Configuration."""

    verbose_name = "01. Graph Ingestion and Trails Configuration"

    max_trail_len = ConfField(
        type=int,
        env="DNFBLOCK_MAX_TRAIL_LEN",
        toml="graph.max-trail-len",
        default=Defaults.MAX_TRAIL_LEN,
        help="longest edge-label sequence a t-FEO may follow",
    )
    max_trails = ConfField(
        type=int,
        env="DNFBLOCK_MAX_TRAILS",
        toml="graph.max-trails",
        default=Defaults.MAX_TRAILS,
        help="cap on trails enumerated from one node",
    )
    type_predicate = ConfField(
        type=str,
        env="DNFBLOCK_TYPE_PREDICATE",
        toml="graph.type-predicate",
        default=Defaults.TYPE_PREDICATE,
        help="triple predicate read as a node attribute",
    )


GRAPH = _GraphConf()
