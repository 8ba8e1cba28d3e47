"""spimris: spatial path index modulation over RIS-aided massive MIMO.

Library layers: array geometry, channels, pattern books, beamformers, RIS
phase control, pilot acquisition, SE metrics, pattern detection, and a
scenario harness (spimris.harness) with a CLI entry point `spimris`.
"""

from .arrays import (
    DirectionGrid,
    UlaSpec,
    UpaSpec,
    build_bs_dictionary,
    default_direction_grid,
    ula_steering,
    upa_steering,
)
from .channel import (
    ChannelRealization,
    PathSet,
    cascade,
    generate_channel,
    generate_channel_mu,
    perturb_channel,
)
from .errors import (
    ConfigError,
    ContractViolation,
    DomainError,
    NumericError,
    SpimError,
)
from .patterns import (
    PatternBook,
    bits_to_pattern,
    build_pattern_book,
    pattern_to_bits,
    selection_matrix,
)

__version__ = "0.1.0"
