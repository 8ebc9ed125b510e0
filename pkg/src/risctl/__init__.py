"""Link-level simulator for RIS-aided uplink with explicit control-plane cost.

The package models two transmission paradigms (channel-estimation based rate
adaptation and beam sweeping) over a frame split into Setup, Algorithmic,
Acknowledgement and Payload phases, and quantifies goodput/utility under
in-band or out-of-band RIS control channels.
"""

from risctl.errors import ConfigurationError, ContractError, EstimationError

__all__ = ["ConfigurationError", "ContractError", "EstimationError"]

__version__ = "0.1.0"
