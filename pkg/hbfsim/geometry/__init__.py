"""Array steering, element patterns and the sector layout."""

from .array import Role, UraConfig, element_gain, ura_response, ura_responses
from .layout import SectorLayout, UserDrop, drop_users

__all__ = [
    "Role",
    "UraConfig",
    "element_gain",
    "ura_response",
    "ura_responses",
    "SectorLayout",
    "UserDrop",
    "drop_users",
]
