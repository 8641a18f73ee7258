#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "lpkit/lp.hpp"

// Seeded synthetic LP families used as benchmark corpora. Generation is a
// pure function of the spec, so instances can be rebuilt anywhere from the
// manifest line alone.

namespace lpkit {

enum class Family {
  kSetCovering,
  kFacilityLocation,
  kMulticommodityFlow,
  kGeneralizedNetworkFlow,
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);  // throws on unknown name

struct GenSpec {
  Family family = Family::kSetCovering;
  // Family-specific knobs; missing keys take the desk-scale defaults:
  //   SetCovering:            nrow=300 ncol=600 dens=0.01 max_coef=100
  //   FacilityLocation:       number_of_customers=30 number_of_facilities=30 ratio=2
  //   MulticommodityFlow:     min_n=12 max_n=12
  //   GeneralizedNetworkFlow: nodes=500 nsorc=25 nsink=50 dens=600 (arc count)
  std::map<std::string, double> params;
  std::uint64_t seed = 0;

  double param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  }
};

struct GenInfo {
  // Matrix entries the generator placed; for SetCovering this counts the
  // Bernoulli successes plus the re-draws that fix empty rows.
  long placements = 0;
  int rows = 0;
  int cols = 0;
};

// Builds the LP relaxation for the spec. Deterministic per seed. Throws
// std::invalid_argument on out-of-range parameters.
LPProblem generate(const GenSpec& spec, GenInfo* info = nullptr);

}  // namespace lpkit
