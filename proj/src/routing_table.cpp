#include "dvsim/routing_table.hpp"

#include <algorithm>
#include <ostream>
#include <tuple>

#include "dvsim/text.hpp"

namespace dvsim {

RoutingTable::RoutingTable(NodeId self, std::size_t node_count, Comparator comparator)
    : self_(self), cmp_(comparator), rows_(node_count) {
  RouteEntry own;
  own.dest = self;
  own.next_hop = self;
  own.metric = cmp_.identity();
  own.seq = own_seq_;
  if (cmp_.needs_path_check()) own.path = {self};
  rows_.at(self) = own;
}

void RoutingTable::bump_own_seq(SimTime now) {
  own_seq_ += 2;
  auto& own = *rows_[self_];
  own.seq = own_seq_;
  own.installed_at = now;
}

RouteAdvert RoutingTable::advert_of(const RouteEntry& e) const {
  return {e.dest, e.metric, e.hop_count, e.seq, e.path};
}

std::vector<RouteAdvert> RoutingTable::full_dump() {
  std::vector<RouteAdvert> out;
  out.reserve(rows_.size());
  for (auto& row : rows_) {
    if (!row) continue;
    out.push_back(advert_of(*row));
    row->changed = false;
  }
  return out;
}

std::vector<RouteAdvert> RoutingTable::incremental_dump() {
  std::vector<RouteAdvert> out;
  for (auto& row : rows_) {
    if (!row || !row->changed) continue;
    out.push_back(advert_of(*row));
    row->changed = false;
  }
  return out;
}

UpdateResult RoutingTable::apply_update(NodeId from, double link,
                                        std::span<const RouteAdvert> entries, SimTime now) {
  UpdateResult result;
  if (from == self_ || !cmp_.usable(link)) return result;
  const bool check_path = cmp_.needs_path_check();

  for (const auto& adv : entries) {
    if (adv.dest == self_ || adv.dest >= rows_.size()) continue;
    auto& row = rows_[adv.dest];
    const bool through_us =
        check_path && std::find(adv.path.begin(), adv.path.end(), self_) != adv.path.end();
    if (through_us) {
      // Our next hop now routes back through us: the stored route is gone.
      if (row && row->valid() && row->next_hop == from && adv.seq >= row->seq) {
        row.reset();
      }
      continue;
    }

    const bool adv_valid = adv.seq % 2 == 0;
    RouteEntry cand;
    cand.dest = adv.dest;
    cand.next_hop = from;
    cand.metric = adv_valid ? cmp_.combine(adv.metric, link) : cmp_.worst();
    cand.hop_count = adv.hop_count + 1;
    cand.seq = adv.seq;
    cand.installed_at = now;
    if (adv_valid && !cmp_.usable(cand.metric)) continue;
    if (check_path && adv_valid) {
      cand.path.reserve(adv.path.size() + 1);
      cand.path.push_back(self_);
      cand.path.insert(cand.path.end(), adv.path.begin(), adv.path.end());
    }

    // A break report only matters from the neighbor we actually route through.
    if (!adv_valid && row && row->valid() && row->next_hop != from) continue;

    bool adopt = false;
    if (!row) {
      adopt = adv_valid;
    } else if (cand.seq > row->seq) {
      adopt = true;
    } else if (cand.seq == row->seq && adv_valid) {
      adopt = cmp_.better(cand.metric, row->metric) ||
              (check_path && row->next_hop == from &&
               (cand.metric != row->metric || cand.path != row->path));
    }
    if (!adopt) continue;

    const bool was_valid = row && row->valid();
    cand.changed = !row || row->valid() != adv_valid || row->next_hop != from ||
                   row->metric != cand.metric || row->hop_count != cand.hop_count;
    if (row && row->changed) cand.changed = true;
    if (was_valid && !adv_valid) ++result.newly_broken;
    row = std::move(cand);
    ++result.adopted;
  }
  return result;
}

std::size_t RoutingTable::mark_broken_via(NodeId neighbor, SimTime now) {
  std::size_t n = 0;
  for (auto& row : rows_) {
    if (!row || row->dest == self_ || !row->valid() || row->next_hop != neighbor) continue;
    row->seq += 1;
    row->metric = cmp_.worst();
    row->installed_at = now;
    row->path.clear();
    row->changed = true;
    ++n;
  }
  return n;
}

bool RoutingTable::has_active_route_via(NodeId neighbor) const {
  return std::any_of(rows_.begin(), rows_.end(), [&](const auto& row) {
    return row && row->dest != self_ && row->valid() && row->next_hop == neighbor;
  });
}

std::optional<NodeId> RoutingTable::next_hop(NodeId dest) const {
  if (dest == self_) return self_;
  if (dest >= rows_.size()) return std::nullopt;
  const auto& row = rows_[dest];
  if (!row || !row->valid()) return std::nullopt;
  return row->next_hop;
}

void RoutingTable::dump(std::ostream& os, SimTime now) const {
  os << "# node " << self_ << " at " << now << "\n";
  for (const auto& row : rows_) {
    if (!row) continue;
    os << row->dest << ' ' << row->next_hop << ' ' << text::format_double(row->metric) << ' '
       << row->seq << ' ' << row->installed_at << '\n';
  }
}

FrozenConvergence converge_frozen(std::size_t node_count, Comparator comparator,
                                  const FrozenLinks& cost, int max_rounds) {
  FrozenConvergence out;
  out.tables.reserve(node_count);
  for (NodeId i = 0; i < node_count; ++i) {
    out.tables.emplace_back(i, node_count, comparator);
    out.tables.back().bump_own_seq(SimTime{});
  }

  auto snapshot = [&] {
    std::vector<std::tuple<NodeId, NodeId, double, std::uint32_t, std::uint32_t>> s;
    for (const auto& t : out.tables) {
      for (NodeId d = 0; d < node_count; ++d) {
        if (const auto& e = t.entry(d)) s.emplace_back(t.self(), d, e->metric, e->seq, e->next_hop);
      }
    }
    return s;
  };

  for (out.rounds = 1; out.rounds <= max_rounds; ++out.rounds) {
    const auto before = snapshot();
    std::vector<std::vector<RouteAdvert>> dumps;
    dumps.reserve(node_count);
    for (auto& t : out.tables) dumps.push_back(t.full_dump());
    for (NodeId from = 0; from < node_count; ++from) {
      for (NodeId to = 0; to < node_count; ++to) {
        if (to == from) continue;
        if (auto c = cost(to, from)) out.tables[to].apply_update(from, *c, dumps[from], SimTime{});
      }
    }
    if (snapshot() == before) {
      out.converged = true;
      return out;
    }
  }
  out.rounds = max_rounds;
  return out;
}

}  // namespace dvsim
