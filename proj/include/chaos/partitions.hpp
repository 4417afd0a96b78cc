#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace chaos {

/// Sorted list of 0-based elements.
using IndexSet = std::vector<int>;

/// Blocks are sorted and nonempty; the block list is sorted lexicographically.
/// The empty partition (of the empty set) is an empty list.
using Partition = std::vector<IndexSet>;

/// (P, P') with P u P' a partition of [d] and P n P' empty. Blocks of P carry
/// unit vectors, blocks of P' carry jointly indexed Gaussian weights.
struct PartitionPair {
    Partition deterministic;  // P
    Partition gaussian;       // P'
    bool operator==(const PartitionPair&) const = default;
};

/// Subset J of [d] together with a partition of J.
struct SubsetPartition {
    IndexSet subset;
    Partition partition;
    bool operator==(const SubsetPartition&) const = default;
};

/// (J, I_1, ..., I_k): J u I_1 u ... u I_k = [d], each I_r nonempty, every
/// element in at most two of the sets. I_1..I_k are kept sorted.
struct MSequence {
    IndexSet outer;              // J
    std::vector<IndexSet> sets;  // I_1 .. I_k
    int size() const { return static_cast<int>(sets.size()) + 1; }
    bool operator==(const MSequence&) const = default;
    auto operator<=>(const MSequence&) const = default;
};

IndexSet full_set(int d);
IndexSet set_difference(const IndexSet& a, const IndexSet& b);
IndexSet set_union(const Partition& blocks);

/// Sorts blocks and block contents.
Partition canonical(Partition p);

/// All partitions of `ground`, each once, in a fixed deterministic order.
std::vector<Partition> enumerate_partitions(const IndexSet& ground);

/// All (P, P') with P u P' in P([d]).
std::vector<PartitionPair> enumerate_partition_pairs(int d);

/// All (J, P) with J subset of [d] and P in P(J), J = {} included.
std::vector<SubsetPartition> enumerate_subset_partitions(int d);

/// The family M([d]), duplicate-free up to reordering of I_1..I_k.
std::vector<MSequence> enumerate_M(int d);

/// J disjoint from every I_l, and intersecting I's must be equal singletons.
bool in_class_C(const MSequence& seq);
std::vector<MSequence> filter_class_C(const std::vector<MSequence>& seqs);

void validate_pair(const PartitionPair& pair, int d);
void validate_msequence(const MSequence& seq, int d);

/// Triple-norm index (J, P) as the pair (P, singletons of [d] \ J).
PartitionPair pair_for_triple(int d, const SubsetPartition& jp);

long long bell_number(int k);

// Rendering uses 1-based elements, e.g. "{1},{2,3}"; the empty family is "{}".
std::string format_partition(const Partition& p);
/// "P'|P", e.g. "{1}|{2},{3}" for P' = {{1}}, P = {{2},{3}}.
std::string format_pair(const PartitionPair& pair);
std::string format_msequence(const MSequence& seq);

/// Parses format_partition output; also accepts "", "{}" and "∅" as empty.
Partition parse_partition(std::string_view text);
PartitionPair parse_pair(std::string_view text);

}  // namespace chaos
