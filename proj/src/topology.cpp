#include "dvsim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dvsim/random.hpp"
#include "dvsim/text.hpp"

namespace dvsim {

double LinkModel::probability_at(double d) const {
  if (d > comm_range_m) return 0.0;
  if (d <= inner_range_m) return p_max;
  const double span = comm_range_m - inner_range_m;
  return p_max * (comm_range_m - d) / span;
}

double LinkModel::bandwidth_at(double d) const {
  if (d <= inner_range_m || comm_range_m <= inner_range_m) return bandwidth_max_bps;
  const double t = std::min(1.0, (d - inner_range_m) / (comm_range_m - inner_range_m));
  return bandwidth_max_bps + t * (bandwidth_min_bps - bandwidth_max_bps);
}

Topology::Topology(std::vector<Position> positions, Area area, LinkModel model,
                   std::vector<AsymmetricLink> asymmetric)
    : positions_(std::move(positions)),
      area_(area),
      model_(model),
      asymmetric_(std::move(asymmetric)),
      propagation_(SimTime::from_seconds(model.propagation_delay_s)) {
  const std::size_t n = positions_.size();
  probability_.assign(n * n, 0.0);
  bandwidth_.assign(n * n, model_.bandwidth_max_bps);
  neighbors_.assign(n, {});
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = 0; b < n; ++b) {
      if (a == b) continue;
      const double d = distance(a, b);
      probability_[index(a, b)] = model_.probability_at(d);
      bandwidth_[index(a, b)] = model_.bandwidth_at(d);
      if (d <= model_.comm_range_m) neighbors_[a].push_back(b);
    }
  }
  for (const auto& link : asymmetric_) {
    if (link.from >= n || link.to >= n || link.from == link.to) {
      throw std::invalid_argument("asymmetric link references unknown node");
    }
    double& p = probability_[index(link.from, link.to)];
    p = std::clamp(p * link.factor, 0.0, 1.0);
  }
}

double Topology::distance(NodeId a, NodeId b) const {
  const auto& pa = positions_.at(a);
  const auto& pb = positions_.at(b);
  return std::hypot(pa.x - pb.x, pa.y - pb.y);
}

bool Topology::in_range(NodeId a, NodeId b) const {
  return a != b && distance(a, b) <= model_.comm_range_m;
}

double Topology::delivery_probability(NodeId a, NodeId b) const {
  if (a == b) return 1.0;
  return probability_.at(index(a, b));
}

double Topology::bandwidth(NodeId a, NodeId b) const { return bandwidth_.at(index(a, b)); }

std::span<const NodeId> Topology::neighbors(NodeId node) const { return neighbors_.at(node); }

Topology build_random_topology(std::size_t n, Area area, const LinkModel& model,
                               std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("topology needs at least 2 nodes");
  if (!(area.width > 0.0) || !(area.height > 0.0)) {
    throw std::invalid_argument("area dimensions must be positive");
  }
  Rng rng = make_stream(seed, 0, Stream::kTopology);
  std::vector<Position> positions(n);
  for (auto& p : positions) {
    p.x = uniform01(rng) * area.width;
    p.y = uniform01(rng) * area.height;
  }

  std::vector<AsymmetricLink> asym;
  if (model.asymmetry_fraction > 0.0) {
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = a + 1; b < n; ++b) {
        const double d = std::hypot(positions[a].x - positions[b].x,
                                    positions[a].y - positions[b].y);
        if (d > model.comm_range_m) continue;
        const double pick = uniform01(rng);
        const double dir = uniform01(rng);
        if (pick < model.asymmetry_fraction) {
          asym.push_back(dir < 0.5 ? AsymmetricLink{a, b, model.asymmetry_factor}
                                   : AsymmetricLink{b, a, model.asymmetry_factor});
        }
      }
    }
  }
  return Topology(std::move(positions), area, model, std::move(asym));
}

void write_topology(std::ostream& os, const Topology& t) {
  using text::format_double;
  const auto& m = t.link_model();
  os << "# dvsim topology\n";
  os << "area " << format_double(t.area().width) << ' ' << format_double(t.area().height)
     << '\n';
  os << "comm_range " << format_double(m.comm_range_m) << '\n';
  os << "inner_range " << format_double(m.inner_range_m) << '\n';
  os << "p_max " << format_double(m.p_max) << '\n';
  os << "bandwidth_max " << format_double(m.bandwidth_max_bps) << '\n';
  os << "bandwidth_min " << format_double(m.bandwidth_min_bps) << '\n';
  os << "propagation_delay " << format_double(m.propagation_delay_s) << '\n';
  os << "asymmetry " << format_double(m.asymmetry_fraction) << ' '
     << format_double(m.asymmetry_factor) << '\n';
  for (NodeId i = 0; i < t.size(); ++i) {
    os << i << ' ' << format_double(t.position(i).x) << ' ' << format_double(t.position(i).y)
       << '\n';
  }
  for (const auto& a : t.asymmetric_links()) {
    os << "asym " << a.from << ' ' << a.to << ' ' << format_double(a.factor) << '\n';
  }
}

Topology read_topology(std::istream& is) {
  Area area;
  LinkModel model;
  std::vector<Position> positions;
  std::vector<AsymmetricLink> asym;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("topology line " + std::to_string(line_no) + ": " + what);
  };
  auto num = [&](std::string_view tok) {
    auto v = text::parse_double(tok);
    if (!v) fail("bad number '" + std::string(tok) + "'");
    return *v;
  };

  while (std::getline(is, line)) {
    ++line_no;
    auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::vector<std::string_view> tok;
    for (auto part : text::split(body, ' ')) {
      if (!text::trim(part).empty()) tok.push_back(text::trim(part));
    }
    const auto key = tok.front();
    if (key == "area" && tok.size() == 3) {
      area = {num(tok[1]), num(tok[2])};
    } else if (key == "comm_range" && tok.size() == 2) {
      model.comm_range_m = num(tok[1]);
    } else if (key == "inner_range" && tok.size() == 2) {
      model.inner_range_m = num(tok[1]);
    } else if (key == "p_max" && tok.size() == 2) {
      model.p_max = num(tok[1]);
    } else if (key == "bandwidth_max" && tok.size() == 2) {
      model.bandwidth_max_bps = num(tok[1]);
    } else if (key == "bandwidth_min" && tok.size() == 2) {
      model.bandwidth_min_bps = num(tok[1]);
    } else if (key == "propagation_delay" && tok.size() == 2) {
      model.propagation_delay_s = num(tok[1]);
    } else if (key == "asymmetry" && tok.size() == 3) {
      model.asymmetry_fraction = num(tok[1]);
      model.asymmetry_factor = num(tok[2]);
    } else if (key == "asym" && tok.size() == 4) {
      asym.push_back({static_cast<NodeId>(num(tok[1])), static_cast<NodeId>(num(tok[2])),
                      num(tok[3])});
    } else if (tok.size() == 3 && text::parse_int(key)) {
      if (*text::parse_int(key) != static_cast<long long>(positions.size())) {
        fail("node ids must be consecutive from 0");
      }
      positions.push_back({num(tok[1]), num(tok[2])});
    } else {
      fail("unrecognized record");
    }
  }
  if (positions.size() < 2) throw std::runtime_error("topology has fewer than 2 nodes");
  return Topology(std::move(positions), area, model, std::move(asym));
}

}  // namespace dvsim
