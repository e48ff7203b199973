"""
Primary-layer view: the channel set each PVN receives and the idle capacity it
leaves to secondary users.
"""
import logging
import math
from typing import List

from crvn.analytics.channel_model import channel_profile
from crvn.analytics.occupancy import (
    expected_idle_channels,
    idle_count_distribution,
    pu_count_distribution,
)
from crvn.analytics.scenario import allocate_pvn_channels
from crvn.schemas.metrics import PvnSummary
from crvn.schemas.scenario import Scenario


logger = logging.getLogger(__name__)


def pvn_layer_report(scenario: Scenario) -> List[PvnSummary]:
    """
    Summarise every PVN of a scenario.

    Args:
        scenario: Validated scenario

    Returns:
        One PvnSummary per PVN, in share order
    """
    allocation = allocate_pvn_channels(scenario.channels, scenario.pvn_shares)
    channels = scenario.channel_index()

    summaries = []
    for share in scenario.pvn_shares:
        channel_ids = allocation.sets[share.pvn_id]
        profiles = [channel_profile(channels[cid]) for cid in channel_ids]
        rhos = [p.rho for p in profiles]
        summaries.append(
            PvnSummary(
                pvn_id=share.pvn_id,
                share=share.share,
                channel_ids=channel_ids,
                expected_idle_channels=expected_idle_channels(rhos),
                idle_distribution=idle_count_distribution(rhos),
                pu_distribution=pu_count_distribution(rhos),
                effective_rate_bps=math.fsum(p.effective_rate_bps for p in profiles),
            )
        )

    logger.info(f"Allocated {len(scenario.channels)} channels over {len(summaries)} PVNs")
    return summaries
