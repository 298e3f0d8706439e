#pragma once

#include "stratkit/strata.hpp"

#include <vector>

namespace stratkit {

struct ScenarioInfo {
    std::string name;
    int ambient_dim;
    int stratum_count;
    std::string action;
    std::string source;
};

// Built-in library: FLAG3, CONE2, MOMZERO, D3RED, CRIT11.
StratifiedScenario make_scenario(const std::string& name);

// Weighted-circle scenario on C^2 with custom weights and momentum shift.
// shift == 0 needs weights of opposite sign (zero level is a cone through
// the origin); shift != 0 gives a single smooth stratum.
StratifiedScenario make_custom_torus(const std::vector<int>& weights, double shift);

std::vector<ScenarioInfo> list_scenarios();

bool is_known_scenario(const std::string& name);

// Focused sampler for membership overlaps of a comparable pair; candidates
// still must pass the membership checks of both tubulars.
Vec pair_overlap_candidate(const StratifiedScenario& s, int lower, int higher,
                           std::mt19937_64& rng);

// Candidate point near some stratum, used to populate union-of-tubulars
// neighbourhoods; `scale` shrinks the fiber offset.
Vec near_stratum_candidate(const StratifiedScenario& s, int stratum, double scale,
                           std::mt19937_64& rng);

}  // namespace stratkit
