"""Scheme Learner Configuration."""

from ...constants import Defaults
from ..conf import BaseConf, ConfField

__all__: list[str] = ["LEARNER"]


class _LearnerConf(BaseConf):
    """Scheme Learner Configuration."""

    verbose_name = "03. Scheme Learner Configuration"

    epsilon = ConfField(
        type=float,
        env="DNFBLOCK_EPSILON",
        toml="learner.epsilon",
        default=Defaults.EPSILON,
        help="share of training positives each member must cover",
    )
    max_term_size = ConfField(
        type=int,
        env="DNFBLOCK_MAX_TERM_SIZE",
        toml="learner.max-term-size",
        default=Defaults.MAX_TERM_SIZE,
        help="most predicates in one conjunction",
    )
    max_terms = ConfField(
        type=int,
        env="DNFBLOCK_MAX_TERMS",
        toml="learner.max-terms",
        default=Defaults.MAX_TERMS,
        help="most conjunctions in one member scheme",
    )
    min_support = ConfField(
        type=int,
        env="DNFBLOCK_MIN_SUPPORT",
        toml="learner.min-support",
        default=Defaults.MIN_SUPPORT,
        help="positives an attribute pair needs to enter a relation",
    )
    universe_cap = ConfField(
        type=int,
        env="DNFBLOCK_UNIVERSE_CAP",
        toml="learner.universe-cap",
        default=Defaults.UNIVERSE_CAP,
        help="largest predicate universe accepted",
    )


LEARNER = _LearnerConf()
