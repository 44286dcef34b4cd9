from rejectq.core.utils.colors import Colors
from rejectq.core.utils.log import configure_logging

__all__ = ["Colors", "configure_logging"]
