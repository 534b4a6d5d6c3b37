#pragma once

#include <map>
#include <span>

#include "tokenlab/market/types.hpp"

namespace tokenlab::market {

struct ParticipantAccount {
  ParticipantId owner = 0;
  Money cash = 0;
  Shares inventory = 0;
  Money initial_cash = 0;
  Shares initial_inventory = 0;

  friend bool operator==(const ParticipantAccount&, const ParticipantAccount&) = default;
};

/// net = (cash - initial_cash) + (inventory - initial_inventory) * closing_price
[[nodiscard]] constexpr Money mark_to_market(const ParticipantAccount& account,
                                             Ticks closing_price) noexcept {
  return (account.cash - account.initial_cash) +
         (account.inventory - account.initial_inventory) * closing_price;
}

/// Accounts keyed by participant. Balances move only through apply().
class AccountBook {
 public:
  using Map = std::map<ParticipantId, ParticipantAccount>;

  void open(ParticipantId owner, Money initial_cash = 0, Shares initial_inventory = 0);

  /// Opens unseen participants with zero balances.
  void apply(const Trade& trade);

  [[nodiscard]] const ParticipantAccount& at(ParticipantId owner) const { return accounts_.at(owner); }
  [[nodiscard]] bool contains(ParticipantId owner) const { return accounts_.contains(owner); }
  [[nodiscard]] const Map& all() const noexcept { return accounts_; }

  /// Rebuild balances from a trade log starting from the given openings.
  [[nodiscard]] static AccountBook replay(const Map& openings, std::span<const Trade> trades);

 private:
  ParticipantAccount& ensure(ParticipantId owner);

  Map accounts_;
};

}  // namespace tokenlab::market
