#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace coin {

/// Generated benchmark models standing in for case studies.
///  toggles(n)          n independent two-state primitives with one internal toggle each
///  pipeline-tree(n, d) n producer/consumer pairs plus a 3-slot semaphore, placed under a
///                      complete binary composition tree of depth d; pairs synchronize
///                      across the root, every composite carries a restrictL filter
///  ring(n)             n primitives passing one token around by synchronization
struct ModelFamily {
    enum class Kind { Toggles, PipelineTree, Ring };
    Kind kind = Kind::Toggles;
    std::uint32_t n = 1;
    std::uint32_t depth = 1; // pipeline-tree only
};

ModelFamily parse_family(const std::string &name, std::uint32_t n, std::uint32_t depth = 1);
std::string family_name(ModelFamily::Kind kind);

/// Deterministic CoIn text. Throws std::invalid_argument on out-of-range parameters.
std::string generate(const ModelFamily &family);

struct RandomModelParams {
    std::uint32_t max_leaves = 6;
    std::uint32_t max_states = 4;
    std::uint32_t max_depth = 4;      // root composite has depth 0, leaves at most max_depth
    std::uint32_t max_trans = 5;      // per primitive
    std::uint32_t actions = 3;
    double local_leaf_bias = 0.0;     // probability a primitive only has internal labels
};

/// Random valid CoIn model (hierarchy, primitives and restrictL/onlyL filters).
std::string generate_random_model(std::uint64_t seed, const RandomModelParams &params = {});

} // namespace coin
