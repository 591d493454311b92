#pragma once

#include <cstddef>
#include <vector>

namespace hdsynth::counting {

/// ⌈log₂ n⌉ for n ≥ 1.
std::size_t ceil_log2(std::size_t n);

/// Halving bookkeeping of the recursive decomposition. levels[k−1] lists the block
/// sizes n(k, 1..2^{k−1}) after k−1 halvings; level 1 is {n}. A block b splits into
/// ⌊b/2⌋ (odd position) and b − ⌊b/2⌋ (even position).
struct PartitionTree {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<std::vector<std::size_t>> levels;
};

PartitionTree partition_tree(std::size_t n);

/// Children of one partition level under the floor split.
std::vector<std::size_t> split_level(const std::vector<std::size_t>& level);

/// N^{(k)}: number of odd entries on each level, k = 1..d.
std::vector<std::size_t> odd_counts(std::size_t n);

/// Closed-form CINC count (2n−1)·2^{d+1} − 2n − Σ_k 2^{k+1}·N^{(k)}.
std::size_t cinc_upper_bound(std::size_t n);

struct CountBreakdown {
    std::size_t multiplexor_cinc = 0;
    std::size_t ucr_cinc = 0;
    std::size_t eliminated_controlled_units = 0;
    std::size_t total_cinc = 0;
};

struct StructurePrediction {
    CountBreakdown breakdown;
    std::size_t multiplexors = 0;
    std::size_t v_blocks = 0;
    /// Uniformly controlled R_x gates in each V-block of depth k, (n − N^{(k)})/2.
    std::vector<std::size_t> ucr_gates_per_level;
};

/// Gate-count prediction assembled from the per-primitive costs: 2(n−1) CINC per
/// multiplexor, 4 per uniformly controlled rotation, minus 2 per eliminated factor.
StructurePrediction predict_structure(std::size_t n);

}  // namespace hdsynth::counting
