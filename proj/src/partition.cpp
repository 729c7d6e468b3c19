#include "sdsplit/partition.hpp"

#include <algorithm>
#include <cstring>
#include <functional>
#include <string>
#include <unordered_set>

namespace sdsplit {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Unsigned big integer on 32-bit limbs, little endian. Just enough for the
// exact comparison k^t >= n * (k-1)^t in size_bound.
class BigUint {
public:
    BigUint() : limbs_{1} {}

    void mul_u64(std::uint64_t m) {
        unsigned __int128 carry = 0;
        for (auto& limb : limbs_) {
            unsigned __int128 cur = static_cast<unsigned __int128>(limb) * m + carry;
            limb = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        while (carry) {
            limbs_.push_back(static_cast<std::uint32_t>(carry));
            carry >>= 32;
        }
    }

    static int cmp(const BigUint& a, const BigUint& b) {
        std::size_t na = a.normalized_size(), nb = b.normalized_size();
        if (na != nb) return na < nb ? -1 : 1;
        for (std::size_t i = na; i-- > 0;) {
            if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
        }
        return 0;
    }

private:
    std::size_t normalized_size() const {
        std::size_t n = limbs_.size();
        while (n > 0 && limbs_[n - 1] == 0) --n;
        return n;
    }
    std::vector<std::uint32_t> limbs_;
};

// Depth-first coalescing search. Source parts are consumed largest first,
// each placed into the unfilled target with the largest remaining deficit;
// failed (position, deficit multiset) states are memoized.
class CoalesceSearch {
public:
    CoalesceSearch(const std::vector<std::int64_t>& parts, std::vector<std::int64_t> deficits,
                   std::uint64_t max_nodes)
        : parts_(parts), deficit_(std::move(deficits)), choice_(parts.size(), -1),
          max_nodes_(max_nodes) {}

    // Shared across calls so that states proven dead for one target partition
    // are reused for others (the state only encodes remaining parts/deficits).
    explicit CoalesceSearch(const std::vector<std::int64_t>& parts, std::uint64_t max_nodes)
        : parts_(parts), choice_(parts.size(), -1), max_nodes_(max_nodes) {}

    void reset_targets(std::vector<std::int64_t> deficits) { deficit_ = std::move(deficits); }

    bool run() { return place(0); }

    std::vector<std::vector<std::size_t>> groups() const {
        std::vector<std::vector<std::size_t>> out(deficit_.size());
        for (std::size_t i = 0; i < choice_.size(); ++i) out[choice_[i]].push_back(i);
        return out;
    }

private:
    bool place(std::size_t idx) {
        if (max_nodes_ && ++nodes_ > max_nodes_)
            throw SearchBudgetExceeded("coalescing search exceeded its node budget");
        if (idx == parts_.size()) return true;  // sums match, so all deficits are zero

        std::size_t open = 0;
        for (std::int64_t d : deficit_)
            if (d > 0) ++open;
        if (open > parts_.size() - idx) return false;  // each open target needs a part

        const std::string key = encode(idx);
        if (dead_.count(key)) return false;

        const std::int64_t part = parts_[idx];
        std::vector<std::size_t> order(deficit_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return deficit_[a] > deficit_[b]; });

        std::int64_t previously_tried = -1;
        for (std::size_t t : order) {
            if (deficit_[t] < part) break;             // the rest are smaller still
            if (deficit_[t] == previously_tried) continue;  // symmetric to an earlier try
            previously_tried = deficit_[t];
            deficit_[t] -= part;
            choice_[idx] = static_cast<int>(t);
            if (place(idx + 1)) return true;
            deficit_[t] += part;
        }
        dead_.insert(key);
        return false;
    }

    std::string encode(std::size_t idx) const {
        std::vector<std::int64_t> sorted = deficit_;
        std::sort(sorted.begin(), sorted.end());
        std::string key(sizeof(idx) + sorted.size() * sizeof(std::int64_t), '\0');
        std::memcpy(key.data(), &idx, sizeof(idx));
        std::memcpy(key.data() + sizeof(idx), sorted.data(), sorted.size() * sizeof(std::int64_t));
        return key;
    }

    const std::vector<std::int64_t>& parts_;
    std::vector<std::int64_t> deficit_;
    std::vector<int> choice_;
    std::unordered_set<std::string> dead_;
    std::uint64_t nodes_ = 0;
    std::uint64_t max_nodes_ = 0;
};

}  // namespace

Partition::Partition(std::vector<std::int64_t> parts) : parts_(std::move(parts)) {
    for (std::int64_t p : parts_) {
        require(p >= 1, "partition parts must be >= 1");
        total_ += p;
    }
    std::sort(parts_.begin(), parts_.end(), std::greater<>());
}

std::vector<Partition> enumerate_partitions(std::int64_t n, int max_parts) {
    require(n >= 1, "n must be >= 1");
    require(max_parts >= 1, "max_parts must be >= 1");
    std::vector<Partition> out;
    std::vector<std::int64_t> current;
    // Largest-first recursion yields lexicographically descending sequences.
    std::function<void(std::int64_t, std::int64_t, int)> rec =
        [&](std::int64_t remaining, std::int64_t max_part, int parts_left) {
            if (remaining == 0) {
                out.emplace_back(current);
                return;
            }
            if (parts_left == 0) return;
            std::int64_t hi = std::min(max_part, remaining);
            std::int64_t lo = ceil_div(remaining, parts_left);
            for (std::int64_t p = hi; p >= lo; --p) {
                current.push_back(p);
                rec(remaining - p, p, parts_left - 1);
                current.pop_back();
            }
        };
    rec(n, n, max_parts);
    return out;
}

std::optional<CoalesceAssignment> coalesces_to(const Partition& mu, const Partition& lambda,
                                               std::uint64_t max_nodes) {
    require(mu.total() == lambda.total(), "partition sums must match");
    CoalesceSearch search(mu.parts(), lambda.parts(), max_nodes);
    if (!search.run()) return std::nullopt;
    return CoalesceAssignment{search.groups()};
}

bool coalesces_to_all(const Partition& mu, int k, std::uint64_t max_nodes) {
    require(k >= 1, "k must be >= 1");
    if (mu.total() == 0) return true;
    CoalesceSearch search(mu.parts(), max_nodes);
    for (const Partition& lambda : enumerate_partitions(mu.total(), k)) {
        search.reset_targets(lambda.parts());
        if (!search.run()) return false;
    }
    return true;
}

CoalesceAssignment greedy_coalesce(const Partition& mu, const Partition& gamma) {
    require(mu.total() == gamma.total(), "partition sums must match");
    std::vector<std::int64_t> remaining = gamma.parts();
    CoalesceAssignment assignment;
    assignment.groups.resize(gamma.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const std::int64_t part = mu.parts()[i];
        std::size_t best = remaining.size();
        for (std::size_t t = 0; t < remaining.size(); ++t) {
            if (remaining[t] >= part && (best == remaining.size() || remaining[t] > remaining[best]))
                best = t;
        }
        if (best == remaining.size())
            throw std::runtime_error(
                "greedy coalescing got stuck: the source partition does not "
                "coalesce to all partitions of this size");
        remaining[best] -= part;
        assignment.groups[best].push_back(i);
    }
    return assignment;
}

Partition mscp(std::int64_t n, int k) {
    require(n >= 1, "n must be >= 1");
    require(k >= 1, "k must be >= 1");
    std::vector<std::int64_t> parts;
    for (std::int64_t remaining = n; remaining > 0;) {
        std::int64_t piece = ceil_div(remaining, k);
        parts.push_back(piece);
        remaining -= piece;
    }
    return Partition(std::move(parts));
}

int mscp_size(std::int64_t n, int k) {
    require(n >= 1, "n must be >= 1");
    require(k >= 1, "k must be >= 1");
    int count = 0;
    for (std::int64_t remaining = n; remaining > 0; ++count) remaining -= ceil_div(remaining, k);
    return count;
}

int size_bound(std::int64_t n, int k) {
    require(n >= 1, "n must be >= 1");
    require(k >= 2, "size_bound requires k >= 2");
    // Smallest t with (k/(k-1))^t >= n, via exact comparison k^t >= n*(k-1)^t.
    BigUint pow_k, pow_km1;
    for (int t = 0;; ++t) {
        BigUint rhs = pow_km1;
        rhs.mul_u64(static_cast<std::uint64_t>(n));
        if (BigUint::cmp(pow_k, rhs) >= 0) return t + 1;
        pow_k.mul_u64(static_cast<std::uint64_t>(k));
        pow_km1.mul_u64(static_cast<std::uint64_t>(k - 1));
    }
}

std::vector<std::vector<int>> mscp_table(std::int64_t n_max, int k_max) {
    require(n_max >= 1, "n_max must be >= 1");
    require(k_max >= 1, "k_max must be >= 1");
    std::vector<std::vector<int>> table(k_max);
    for (int k = 1; k <= k_max; ++k) {
        table[k - 1].reserve(n_max);
        for (std::int64_t n = 1; n <= n_max; ++n) table[k - 1].push_back(mscp_size(n, k));
    }
    return table;
}

bool verify_minimality(std::int64_t n, int k, std::uint64_t max_nodes) {
    const int optimal = mscp_size(n, k);
    if (optimal == 1) return true;  // size 1 is a lower bound
    for (const Partition& candidate : enumerate_partitions(n, optimal - 1)) {
        if (coalesces_to_all(candidate, k, max_nodes)) return false;
    }
    return true;
}

}  // namespace sdsplit
