#include "lpkit/instancegen.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lpkit/rng.hpp"

namespace lpkit {

namespace {

int int_param(const GenSpec& spec, const std::string& key, double fallback) {
  double v = spec.param(key, fallback);
  int iv = static_cast<int>(std::lround(v));
  if (iv <= 0 || std::abs(v - iv) > 1e-9)
    throw std::invalid_argument("parameter '" + key + "' must be a positive integer");
  return iv;
}

// Rows demand coverage by at least one member column; column costs are real
// valued so no two columns are trivially interchangeable.
LPProblem gen_set_covering(const GenSpec& spec, Rng& rng, GenInfo& info) {
  int nrow = int_param(spec, "nrow", 300);
  int ncol = int_param(spec, "ncol", 600);
  double dens = spec.param("dens", 0.01);
  double max_coef = spec.param("max_coef", 100.0);
  if (dens <= 0.0 || dens > 1.0)
    throw std::invalid_argument("set covering dens must be in (0, 1]");
  if (max_coef < 1.0) throw std::invalid_argument("max_coef must be >= 1");

  LPProblem lp;
  for (int j = 0; j < ncol; ++j) lp.add_col(0.0, 1.0, rng.uniform(1.0, max_coef));
  for (int i = 0; i < nrow; ++i) lp.add_row(1.0, kInfinity);
  for (int i = 0; i < nrow; ++i)
    for (int j = 0; j < ncol; ++j)
      if (rng.bernoulli(dens)) {
        lp.set_coef(i, j, 1.0);
        ++info.placements;
      }
  for (int i = 0; i < nrow; ++i) {
    if (!lp.row(i).empty()) continue;
    lp.set_coef(i, rng.index(ncol), 1.0);
    ++info.placements;
  }
  return lp;
}

// Capacitated facility location, aggregated form: one demand row per
// customer, one capacity row per facility. Total capacity is `ratio` times
// total demand, so spreading each customer across facilities in proportion
// to capacity is always feasible with every facility open.
LPProblem gen_facility_location(const GenSpec& spec, Rng& rng, GenInfo& info) {
  int customers = int_param(spec, "number_of_customers", 30);
  int facilities = int_param(spec, "number_of_facilities", 30);
  double ratio = spec.param("ratio", 2.0);
  if (ratio < 1.0) throw std::invalid_argument("ratio must be >= 1");

  std::vector<std::pair<double, double>> fpos(facilities), cpos(customers);
  for (auto& p : fpos) p = {rng.u01(), rng.u01()};
  for (auto& p : cpos) p = {rng.u01(), rng.u01()};
  std::vector<double> demand(customers);
  double total_demand = 0.0;
  for (double& d : demand) {
    d = rng.uniform(5.0, 35.0);
    total_demand += d;
  }
  double capacity = ratio * total_demand / facilities;

  LPProblem lp;
  std::vector<int> open(facilities);
  for (int i = 0; i < facilities; ++i) open[i] = lp.add_col(0.0, 1.0, rng.uniform(50.0, 150.0));
  // assignment fractions x_ij, column id open-count + i*customers + j
  std::vector<int> assign(static_cast<std::size_t>(facilities) * customers);
  for (int i = 0; i < facilities; ++i)
    for (int j = 0; j < customers; ++j) {
      double dx = fpos[i].first - cpos[j].first;
      double dy = fpos[i].second - cpos[j].second;
      double unit_cost = 10.0 * std::sqrt(dx * dx + dy * dy) + rng.uniform(0.0, 1.0);
      assign[static_cast<std::size_t>(i) * customers + j] =
          lp.add_col(0.0, 1.0, demand[j] * unit_cost);
    }
  for (int j = 0; j < customers; ++j) {
    int r = lp.add_row(1.0, 1.0);
    for (int i = 0; i < facilities; ++i) {
      lp.set_coef(r, assign[static_cast<std::size_t>(i) * customers + j], 1.0);
      ++info.placements;
    }
  }
  for (int i = 0; i < facilities; ++i) {
    int r = lp.add_row(-kInfinity, 0.0);
    for (int j = 0; j < customers; ++j) {
      lp.set_coef(r, assign[static_cast<std::size_t>(i) * customers + j], demand[j]);
      ++info.placements;
    }
    lp.set_coef(r, open[i], -capacity);
    ++info.placements;
  }
  return lp;
}

// Multicommodity flow with arc installation. A directed cycle through all
// nodes keeps every origin-destination pair routable, and arc capacities
// exceed total demand, so shipping along the cycle with every arc installed
// is feasible.
LPProblem gen_multicommodity(const GenSpec& spec, Rng& rng, GenInfo& info) {
  int min_n = int_param(spec, "min_n", 12);
  int max_n = int_param(spec, "max_n", 12);
  if (max_n < min_n) throw std::invalid_argument("max_n must be >= min_n");
  int n = rng.uniform_int(min_n, max_n);
  if (n < 3) throw std::invalid_argument("need at least 3 nodes");
  int commodities = n;

  std::vector<std::pair<int, int>> arcs;
  std::set<std::pair<int, int>> seen;
  for (int v = 0; v < n; ++v) {
    arcs.push_back({v, (v + 1) % n});
    seen.insert(arcs.back());
  }
  int extra = n;
  while (extra > 0) {
    int u = rng.index(n), v = rng.index(n);
    if (u == v || seen.count({u, v})) continue;
    arcs.push_back({u, v});
    seen.insert({u, v});
    --extra;
  }
  int na = static_cast<int>(arcs.size());

  double total_demand = 0.0;
  std::vector<int> src(commodities), dst(commodities);
  std::vector<double> dem(commodities);
  for (int k = 0; k < commodities; ++k) {
    src[k] = rng.index(n);
    dst[k] = (src[k] + 1 + rng.index(n - 1)) % n;
    dem[k] = rng.uniform(1.0, 10.0);
    total_demand += dem[k];
  }

  LPProblem lp;
  // flow variables f[k][a] then installation variables y[a]
  std::vector<int> flow(static_cast<std::size_t>(commodities) * na);
  for (int k = 0; k < commodities; ++k)
    for (int a = 0; a < na; ++a)
      flow[static_cast<std::size_t>(k) * na + a] =
          lp.add_col(0.0, kInfinity, rng.uniform(1.0, 5.0));
  std::vector<int> install(na);
  for (int a = 0; a < na; ++a) install[a] = lp.add_col(0.0, 1.0, rng.uniform(10.0, 50.0));

  // conservation: inflow - outflow = demand at the sink, -demand at the source
  for (int k = 0; k < commodities; ++k)
    for (int v = 0; v < n; ++v) {
      double b = v == dst[k] ? dem[k] : (v == src[k] ? -dem[k] : 0.0);
      int r = lp.add_row(b, b);
      for (int a = 0; a < na; ++a) {
        if (arcs[a].second == v) {
          lp.set_coef(r, flow[static_cast<std::size_t>(k) * na + a], 1.0);
          ++info.placements;
        } else if (arcs[a].first == v) {
          lp.set_coef(r, flow[static_cast<std::size_t>(k) * na + a], -1.0);
          ++info.placements;
        }
      }
    }
  for (int a = 0; a < na; ++a) {
    double cap = total_demand * rng.uniform(1.1, 1.6);
    int r = lp.add_row(-kInfinity, 0.0);
    for (int k = 0; k < commodities; ++k) {
      lp.set_coef(r, flow[static_cast<std::size_t>(k) * na + a], 1.0);
      ++info.placements;
    }
    lp.set_coef(r, install[a], -cap);
    ++info.placements;
  }
  return lp;
}

// Flow network with arc gain multipliers. Row bounds are set to the exact
// node balances of a randomly constructed flow, making that flow a feasible
// point by construction. The size parameters carry a per-instance +/-10%
// jitter.
LPProblem gen_generalized_network(const GenSpec& spec, Rng& rng, GenInfo& info) {
  auto jitter = [&rng](double v) { return v * rng.uniform(0.9, 1.1); };
  int nodes = std::max(3, static_cast<int>(std::lround(jitter(spec.param("nodes", 500)))));
  int nsorc = std::max(1, static_cast<int>(std::lround(jitter(spec.param("nsorc", 25)))));
  int nsink = std::max(1, static_cast<int>(std::lround(jitter(spec.param("nsink", 50)))));
  int narcs = std::max(nodes / 2, static_cast<int>(std::lround(jitter(spec.param("dens", 600)))));
  if (nsorc + nsink > nodes)
    throw std::invalid_argument("nsorc + nsink must not exceed nodes");

  // Sources are nodes [0, nsorc), sinks are [nodes - nsink, nodes); arc
  // endpoints are biased toward leaving sources and entering sinks.
  std::vector<std::pair<int, int>> arcs;
  std::set<std::pair<int, int>> seen;
  int guard = narcs * 50;
  while (static_cast<int>(arcs.size()) < narcs && guard-- > 0) {
    int u = rng.bernoulli(0.4) ? rng.index(nsorc) : rng.index(nodes);
    int v = rng.bernoulli(0.4) ? nodes - 1 - rng.index(nsink) : rng.index(nodes);
    if (u == v || seen.count({u, v})) continue;
    arcs.push_back({u, v});
    seen.insert({u, v});
  }

  LPProblem lp;
  std::vector<double> balance(nodes, 0.0);
  std::vector<int> flow(arcs.size());
  std::vector<double> gain(arcs.size());
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    double cap = rng.uniform(10.0, 100.0);
    gain[a] = rng.uniform(0.5, 1.2);
    flow[a] = lp.add_col(0.0, cap, rng.uniform(1.0, 20.0));
    double carried = rng.uniform(0.0, 0.8 * cap);
    balance[arcs[a].first] -= carried;
    balance[arcs[a].second] += gain[a] * carried;
  }
  for (int v = 0; v < nodes; ++v) lp.add_row(balance[v], balance[v]);
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    lp.set_coef(arcs[a].first, flow[a], -1.0);
    lp.set_coef(arcs[a].second, flow[a], gain[a]);
    info.placements += 2;
  }
  return lp;
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::kSetCovering: return "SetCovering";
    case Family::kFacilityLocation: return "FacilityLocation";
    case Family::kMulticommodityFlow: return "MulticommodityFlow";
    case Family::kGeneralizedNetworkFlow: return "GeneralizedNetworkFlow";
  }
  throw std::invalid_argument("bad family");
}

Family family_from_name(const std::string& name) {
  if (name == "SetCovering") return Family::kSetCovering;
  if (name == "FacilityLocation") return Family::kFacilityLocation;
  if (name == "MulticommodityFlow") return Family::kMulticommodityFlow;
  if (name == "GeneralizedNetworkFlow") return Family::kGeneralizedNetworkFlow;
  throw std::invalid_argument("unknown family '" + name + "'");
}

LPProblem generate(const GenSpec& spec, GenInfo* info) {
  Rng rng(spec.seed);
  GenInfo local;
  LPProblem lp;
  switch (spec.family) {
    case Family::kSetCovering: lp = gen_set_covering(spec, rng, local); break;
    case Family::kFacilityLocation: lp = gen_facility_location(spec, rng, local); break;
    case Family::kMulticommodityFlow: lp = gen_multicommodity(spec, rng, local); break;
    case Family::kGeneralizedNetworkFlow: lp = gen_generalized_network(spec, rng, local); break;
  }
  if (lp.num_rows() == 0 || lp.num_cols() == 0)
    throw std::invalid_argument("parameters yield an empty problem");
  local.rows = lp.num_rows();
  local.cols = lp.num_cols();
  if (info) *info = local;
  return lp;
}

}  // namespace lpkit
