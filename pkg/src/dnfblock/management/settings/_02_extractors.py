"""Extractor Configuration."""

from ...constants import Defaults
from ..conf import BaseConf, ConfField

__all__: list[str] = ["EXTRACTORS"]


class _ExtractorsConf(BaseConf):
    """Extractor Configuration."""

    verbose_name = "02. Extractor Configuration"

    output_cap = ConfField(
        type=int,
        env="DNFBLOCK_EXTRACTOR_OUTPUT_CAP",
        toml="extractors.output-cap",
        default=Defaults.EXTRACTOR_OUTPUT_CAP,
        help="most strings one FEO may return for a label",
    )
    feos = ConfField(
        type=list,
        env="DNFBLOCK_FEOS",
        toml="extractors.feos",
        default=list(Defaults.FEOS),
        help="FEOs the predicate universe is built from",
    )


EXTRACTORS = _ExtractorsConf()
