"""
Per-drop view of every channel, shared by all scheme handlers.

Users are indexed globally (cell-major) and channels are keyed by
``(user, tp)``: ``channels[(u, i)]`` is the link from TP ``i`` to user ``u``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Tuple

from hbfsim.channel.model import ChannelRealization
from hbfsim.core.linalg import ComplexMatrix

from .codebook import Codebooks, effective_channel, rf_select_max


@dataclass
class DropContext:
    channels: Mapping[Tuple[int, int], ChannelRealization]
    user_cells: Sequence[int]
    codebooks: Mapping[int, Codebooks]
    tx_power_w: float
    noise_w: float
    n_streams: int
    tx_chains: int
    rx_chains: int
    _rf: Dict[int, Tuple[ComplexMatrix, ComplexMatrix]] = field(default_factory=dict, repr=False)

    @property
    def users(self) -> range:
        return range(len(self.user_cells))

    def cell(self, user: int) -> int:
        return int(self.user_cells[user])

    def desired(self, user: int) -> ChannelRealization:
        return self.channels[(user, self.cell(user))]

    def others(self, user: int) -> List[int]:
        return [m for m in self.users if m != user]

    def rf(self, user: int) -> Tuple[ComplexMatrix, ComplexMatrix]:
        """Max-gain analog precoder/combiner of ``user``; computed once per drop."""
        if user not in self._rf:
            self._rf[user] = rf_select_max(
                self.desired(user).H, self.codebooks[user], self.tx_chains, self.rx_chains
            )
        return self._rf[user]

    def effective(
        self,
        rx_user: int,
        tx_user: int,
        F_RF: ComplexMatrix | None = None,
        W_RF: ComplexMatrix | None = None,
    ) -> ComplexMatrix:
        """Effective channel from ``tx_user``'s precoder, through its TP, into ``rx_user``'s combiner."""
        if F_RF is None:
            F_RF = self.rf(tx_user)[0]
        if W_RF is None:
            W_RF = self.rf(rx_user)[1]
        link = self.channels[(rx_user, self.cell(tx_user))]
        return effective_channel(link.H, F_RF, W_RF, link.effective_path_loss)


__all__ = ["DropContext"]
