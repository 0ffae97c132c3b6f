from .channel import ChannelSet, draw_channel_estimate, dd_channel, build_channel_set
from .precoding import Precoders, random_precoders
from .sinr import (
    SinrInputs, LmmseFilters, UserSinr,
    lmmse_filters, matched_filter, sinr_common, sinr_private, mmse_sinr_reference, evaluate_users,
)

__all__ = [
    'ChannelSet', 'draw_channel_estimate', 'dd_channel', 'build_channel_set',
    'Precoders', 'random_precoders',
    'SinrInputs', 'LmmseFilters', 'UserSinr',
    'lmmse_filters', 'matched_filter', 'sinr_common', 'sinr_private', 'mmse_sinr_reference', 'evaluate_users',
]
