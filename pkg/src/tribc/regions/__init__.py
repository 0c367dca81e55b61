"""Rate regions of the three-user broadcast channel, per test channel."""

from .analytic import (
    Corollary1Report,
    corollary1_report,
    corollary1_window,
    lemma1_point,
    theorem2_holds,
)
from .coset3to1 import (
    BETA1_AXES,
    BETA2_AXES,
    beta1_member,
    beta1_raw_member,
    beta1_raw_system,
    beta2_member,
    beta2_system,
)
from .full import BETAF_AXES, betaf_member, betaf_system
from .marton import marton2_region_check
from .nem import NEM_AXES, Lemma3Report, lemma3_audit, nem_member, nem_system
from .testchannel import TestChannel

__all__ = [
    "TestChannel",
    "lemma1_point",
    "theorem2_holds",
    "corollary1_window",
    "corollary1_report",
    "Corollary1Report",
    "marton2_region_check",
    "NEM_AXES",
    "nem_system",
    "nem_member",
    "lemma3_audit",
    "Lemma3Report",
    "BETA1_AXES",
    "BETA2_AXES",
    "beta1_member",
    "beta1_raw_system",
    "beta1_raw_member",
    "beta2_member",
    "beta2_system",
    "BETAF_AXES",
    "betaf_system",
    "betaf_member",
]
