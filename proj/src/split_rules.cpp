#include "sdsplit/split_rules.hpp"

#include <limits>

namespace sdsplit {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

const Rational kOne{1, 1};

}  // namespace

SplitPolicy SplitPolicy::lossless(int k_bar, Rational q) {
    SplitPolicy policy;
    policy.kind = SplitRuleKind::lossless;
    policy.k_bar = k_bar;
    policy.q = q;
    policy.check();
    return policy;
}

SplitPolicy SplitPolicy::denomination_20(Rational q) {
    SplitPolicy policy;
    policy.kind = SplitRuleKind::denomination;
    policy.q = q;
    policy.denominations = {Rational(20, 100), Rational(10, 100), Rational(5, 100),
                            Rational(1, 100)};
    policy.check();
    return policy;
}

SplitPolicy SplitPolicy::denomination_25(Rational q) {
    SplitPolicy policy;
    policy.kind = SplitRuleKind::denomination;
    policy.q = q;
    policy.denominations = {Rational(25, 100), Rational(10, 100), Rational(5, 100),
                            Rational(1, 100)};
    policy.check();
    return policy;
}

void SplitPolicy::check() const {
    if (k_bar < 1) throw std::invalid_argument("k_bar must be >= 1");
    if (kOne < q) throw std::invalid_argument("q must be in [0, 1]");
    if (kind == SplitRuleKind::denomination) {
        if (denominations.empty()) throw std::invalid_argument("denomination rule needs fractions");
        for (std::size_t i = 0; i < denominations.size(); ++i) {
            const Rational& f = denominations[i];
            if (f.num == 0 || kOne < f)
                throw std::invalid_argument("denominations must lie in (0, 1]");
            if (i > 0 && !(f < denominations[i - 1]))
                throw std::invalid_argument("denominations must be strictly decreasing");
        }
    }
}

Partition lossless_split(std::int64_t demand, std::int64_t capacity, int k_bar, Rational q) {
    if (demand < 1) throw std::invalid_argument("demand must be >= 1");
    if (capacity < 1) throw std::invalid_argument("capacity must be >= 1");
    if (k_bar < 1) throw std::invalid_argument("k_bar must be >= 1");
    if (!exceeds(demand, q, capacity)) return Partition({demand});
    const int k_eff = std::max<std::int64_t>(k_bar, ceil_div(demand, capacity));
    return mscp(demand, k_eff);
}

Partition denomination_split(std::int64_t demand, std::int64_t capacity,
                             const std::vector<Rational>& denominations) {
    if (demand < 1) throw std::invalid_argument("demand must be >= 1");
    if (capacity < 1) throw std::invalid_argument("capacity must be >= 1");
    std::vector<std::int64_t> pieces;
    std::int64_t remaining = demand;
    for (const Rational& fraction : denominations) {
        const std::int64_t piece = std::max<std::int64_t>(1, fraction.num * capacity / fraction.den);
        const std::int64_t count = remaining / piece;
        for (std::int64_t c = 0; c < count; ++c) pieces.push_back(piece);
        remaining -= count * piece;
    }
    if (remaining > 0) pieces.push_back(remaining);
    return Partition(std::move(pieces));
}

Partition split_demand(std::int64_t demand, std::int64_t capacity, const SplitPolicy& policy) {
    if (policy.kind == SplitRuleKind::lossless)
        return lossless_split(demand, capacity, policy.k_bar, policy.q);
    if (!exceeds(demand, policy.q, capacity)) return Partition({demand});
    return denomination_split(demand, capacity, policy.denominations);
}

VrpInstance rescale_granularity(const VrpInstance& instance, std::int64_t factor) {
    if (factor < 1) throw std::invalid_argument("factor must be >= 1");
    const std::int64_t limit = std::numeric_limits<std::int64_t>::max() / factor;
    VrpInstance scaled = instance;
    if (scaled.capacity > limit)
        throw std::overflow_error("capacity overflows when rescaled");
    scaled.capacity *= factor;
    for (Node& node : scaled.nodes) {
        if (node.demand > limit)
            throw std::overflow_error("demand of node " + std::to_string(node.id) +
                                      " overflows when rescaled");
        node.demand *= factor;
    }
    return scaled;
}

std::int64_t expanded_size(const VrpInstance& instance, const SplitPolicy& policy) {
    policy.check();
    std::int64_t nodes = 1;  // depot
    for (std::size_t i = 1; i < instance.nodes.size(); ++i)
        nodes += static_cast<std::int64_t>(
            split_demand(instance.nodes[i].demand, instance.capacity, policy).size());
    return nodes;
}

}  // namespace sdsplit
