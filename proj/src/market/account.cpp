#include "tokenlab/market/account.hpp"

namespace tokenlab::market {

void AccountBook::open(ParticipantId owner, Money initial_cash, Shares initial_inventory) {
  accounts_[owner] = ParticipantAccount{owner, initial_cash, initial_inventory, initial_cash,
                                        initial_inventory};
}

ParticipantAccount& AccountBook::ensure(ParticipantId owner) {
  auto [it, inserted] = accounts_.try_emplace(owner);
  if (inserted) {
    it->second.owner = owner;
  }
  return it->second;
}

void AccountBook::apply(const Trade& trade) {
  const Money notional = trade.price * trade.quantity;
  auto& buyer = ensure(trade.buyer);
  buyer.cash -= notional;
  buyer.inventory += trade.quantity;
  auto& seller = ensure(trade.seller);
  seller.cash += notional;
  seller.inventory -= trade.quantity;
}

AccountBook AccountBook::replay(const Map& openings, std::span<const Trade> trades) {
  AccountBook book;
  for (const auto& [owner, acct] : openings) {
    book.open(owner, acct.initial_cash, acct.initial_inventory);
  }
  for (const auto& t : trades) {
    book.apply(t);
  }
  return book;
}

}  // namespace tokenlab::market
