#pragma once

#include <cstdint>
#include <vector>

#include "sdsplit/instance.hpp"
#include "sdsplit/partition.hpp"
#include "sdsplit/rational.hpp"

namespace sdsplit {

enum class SplitRuleKind { lossless, denomination };

/// Demand-splitting policy. k_bar is the assumed bound on trucks per
/// customer; demands of at most q*Q are left unsplit (strict threshold:
/// split iff d > q*Q, compared exactly). The denomination rule uses the
/// capacity fractions in `denominations` instead of coalescing partitions.
struct SplitPolicy {
    SplitRuleKind kind = SplitRuleKind::lossless;
    int k_bar = 2;
    Rational q;  // in [0, 1]
    std::vector<Rational> denominations;  // strictly decreasing, each in (0, 1]

    static SplitPolicy lossless(int k_bar, Rational q = {});
    /// The 20/10/5/1 rule of the denomination heuristic.
    static SplitPolicy denomination_20(Rational q = {});
    /// The 25/10/5/1 variant.
    static SplitPolicy denomination_25(Rational q = {});

    void check() const;
};

/// Pieces for a single demand under the lossless rule: {d} when d <= q*Q,
/// otherwise mscp(d, k_eff) with k_eff = max(k_bar, ceil(d/Q)) so that no
/// piece exceeds the vehicle capacity even for oversized demands.
Partition lossless_split(std::int64_t demand, std::int64_t capacity, int k_bar, Rational q);

/// Pieces under the denomination rule: the maximum count of each
/// denomination piece in order, then at most one remainder piece. Piece
/// sizes are floor(fraction*Q) with a floor of 1. Note the worked example
/// in the source heuristic's description disagrees with its own formulas
/// on the residual (it keeps a single piece of 7 where the formulas give
/// three pennies and a remainder of 1); this follows the formulas.
Partition denomination_split(std::int64_t demand, std::int64_t capacity,
                             const std::vector<Rational>& denominations);

/// Pieces for one demand under an arbitrary policy.
Partition split_demand(std::int64_t demand, std::int64_t capacity, const SplitPolicy& policy);

/// Copy of the instance with every demand and the capacity multiplied by
/// factor; coordinates, costs and time data unchanged. Overflow of the
/// 64-bit demand type throws std::overflow_error.
VrpInstance rescale_granularity(const VrpInstance& instance, std::int64_t factor);

/// Node count of the expanded instance under the policy: the sum of piece
/// counts over all customers, plus the depot. Matches the Prob size /
/// Full size accounting of the benchmark tables.
std::int64_t expanded_size(const VrpInstance& instance, const SplitPolicy& policy);

}  // namespace sdsplit
