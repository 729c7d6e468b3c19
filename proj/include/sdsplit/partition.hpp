#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace sdsplit {

/// Thrown when an exhaustive search exceeds its node budget.
class SearchBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A partition of a positive integer: a multiset of parts >= 1 kept in
/// non-increasing order. Equality is multiset equality.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<std::int64_t> parts);

    const std::vector<std::int64_t>& parts() const { return parts_; }
    std::int64_t total() const { return total_; }
    std::size_t size() const { return parts_.size(); }
    bool empty() const { return parts_.empty(); }

    bool operator==(const Partition&) const = default;

private:
    std::vector<std::int64_t> parts_;  // sorted non-increasing
    std::int64_t total_ = 0;
};

/// One group of source-part indices per target part; groups are disjoint,
/// cover every source index, and group i sums to the i-th target part.
struct CoalesceAssignment {
    std::vector<std::vector<std::size_t>> groups;
};

/// All partitions of n with at most max_parts parts, each exactly once,
/// in lexicographically descending order of the part sequences.
std::vector<Partition> enumerate_partitions(std::int64_t n, int max_parts);

/// Exhaustive (memoized) search for a way to merge mu's parts into lambda's.
/// Returns an assignment if one exists, std::nullopt otherwise.
/// max_nodes > 0 bounds the search; exceeding it throws SearchBudgetExceeded.
std::optional<CoalesceAssignment> coalesces_to(const Partition& mu, const Partition& lambda,
                                               std::uint64_t max_nodes = 0);

/// True iff mu coalesces to every partition of its sum with at most k parts.
bool coalesces_to_all(const Partition& mu, int k, std::uint64_t max_nodes = 0);

/// Greedy formation of gamma from mu: mu's parts in descending order, each
/// placed in the target with the largest remaining capacity that fits it
/// (ties broken by lower target index). Never gets stuck when mu coalesces
/// to all k-partitions for some k >= |gamma|; otherwise throws
/// std::runtime_error to signal the violated precondition.
CoalesceAssignment greedy_coalesce(const Partition& mu, const Partition& gamma);

/// The greedy ceiling-division partition: repeatedly break off the ceiling
/// of the remaining total divided by k. It coalesces to all k-partitions of
/// n and has minimum size among such partitions.
Partition mscp(std::int64_t n, int k);

/// |mscp(n, k)| without materializing the parts.
int mscp_size(std::int64_t n, int k);

/// Upper bound ceil(log_{k/(k-1)}(n)) + 1 on mscp_size(n, k), computed with
/// exact integer arithmetic (k^t vs n*(k-1)^t). Requires k >= 2.
int size_bound(std::int64_t n, int k);

/// Matrix with cell [k-1][n-1] = mscp_size(n, k) for 1 <= k <= k_max,
/// 1 <= n <= n_max.
std::vector<std::vector<int>> mscp_table(std::int64_t n_max, int k_max);

/// Independent brute-force confirmation that no partition of n with fewer
/// than mscp_size(n, k) parts coalesces to all k-partitions. Intended for
/// small n (exhaustive over all smaller partitions).
bool verify_minimality(std::int64_t n, int k, std::uint64_t max_nodes = 50'000'000);

}  // namespace sdsplit
