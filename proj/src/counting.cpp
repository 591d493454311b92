#include "hdsynth/counting.hpp"

#include <string>

#include "hdsynth/error.hpp"

namespace hdsynth::counting {

namespace {

void require_n(std::size_t n, const char* what) {
    if (n < 2) {
        throw DimensionError(std::string(what) + ": n must be >= 2, got " + std::to_string(n));
    }
}

}  // namespace

std::size_t ceil_log2(std::size_t n) {
    std::size_t d = 0;
    while ((std::size_t{1} << d) < n) {
        ++d;
    }
    return d;
}

std::vector<std::size_t> split_level(const std::vector<std::size_t>& level) {
    std::vector<std::size_t> next;
    next.reserve(level.size() * 2);
    for (std::size_t b : level) {
        next.push_back(b / 2);
        next.push_back(b - b / 2);
    }
    return next;
}

PartitionTree partition_tree(std::size_t n) {
    require_n(n, "partition_tree");
    PartitionTree tree;
    tree.n = n;
    tree.d = ceil_log2(n);
    tree.levels.push_back({n});
    while (tree.levels.size() < tree.d) {
        tree.levels.push_back(split_level(tree.levels.back()));
    }
    return tree;
}

std::vector<std::size_t> odd_counts(std::size_t n) {
    PartitionTree tree = partition_tree(n);
    std::vector<std::size_t> out;
    out.reserve(tree.d);
    for (const auto& level : tree.levels) {
        std::size_t odd = 0;
        for (std::size_t b : level) {
            odd += b % 2;
        }
        out.push_back(odd);
    }
    return out;
}

std::size_t cinc_upper_bound(std::size_t n) {
    require_n(n, "cinc_upper_bound");
    const std::size_t d = ceil_log2(n);
    const auto odds = odd_counts(n);
    std::size_t total = (2 * n - 1) * (std::size_t{1} << (d + 1)) - 2 * n;
    for (std::size_t k = 1; k <= d; ++k) {
        total -= (std::size_t{1} << (k + 1)) * odds[k - 1];
    }
    return total;
}

StructurePrediction predict_structure(std::size_t n) {
    require_n(n, "predict_structure");
    const std::size_t d = ceil_log2(n);
    const auto odds = odd_counts(n);

    StructurePrediction p;
    p.multiplexors = std::size_t{1} << d;
    p.v_blocks = p.multiplexors - 1;
    p.breakdown.multiplexor_cinc = p.multiplexors * 2 * (n - 1);
    for (std::size_t k = 1; k <= d; ++k) {
        const std::size_t copies = std::size_t{1} << (k - 1);
        const std::size_t ucr = (n - odds[k - 1]) / 2;
        p.ucr_gates_per_level.push_back(ucr);
        p.breakdown.ucr_cinc += copies * ucr * 4;
        p.breakdown.eliminated_controlled_units += copies * odds[k - 1];
    }
    p.breakdown.total_cinc = p.breakdown.multiplexor_cinc + p.breakdown.ucr_cinc -
                             2 * p.breakdown.eliminated_controlled_units;
    return p;
}

}  // namespace hdsynth::counting
