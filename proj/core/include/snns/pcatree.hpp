#pragma once

#include "snns/kdnns.hpp"
#include "snns/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace snns {

struct PcaTreeParams {
    double epsilon = 0.1;
    std::size_t k = 1;
    /// Nodes with at most this many points become leaves; 0 selects d.
    std::size_t stop_size = 0;
};

/// Slab width eps / (1000 k^1.5).
double slab_width(double epsilon, std::size_t k);
/// De-clumping threshold (eps / 16) sqrt(count / k).
double declump_threshold(double epsilon, std::size_t count, std::size_t k);

struct DeclumpResult {
    std::vector<PointId> kept;
    std::vector<PointId> removed;
    double top_centered_singular_value = 0.0;
    double threshold = 0.0;
    bool triggered = false;
    double closest_pair_dist2 = 0.0;
};

/// `rows` holds the node's current (orthogonalized) coordinates of the points
/// `ids`, which must be in ascending order. When the top centered singular
/// value falls below the threshold, removes both endpoints of every pair
/// within closest-pair + eps^2 / 2 (squared), scanning pairs in ascending
/// (i, j) id order.
DeclumpResult declump(const DenseMatrix& rows, std::span<const PointId> ids, double epsilon, std::size_t k);

struct PcaTreeNode {
    /// Unit top centered-PCA direction; empty at leaves.
    Vector direction;
    /// (slab index, child node index), sorted by slab index.
    std::vector<std::pair<std::int64_t, std::uint32_t>> children;
    std::vector<PointId> leaf_ids;
    std::vector<PointId> removed_ids;
    std::uint32_t depth = 0;

    bool is_leaf() const { return direction.size() == 0; }
};

struct TreeSearchStats {
    std::size_t leaves_visited = 0;
    std::size_t nodes_visited = 0;
    bool fallback = false;
};

class PcaTree {
public:
    /// Reassembles a tree from stored nodes and validates its invariants.
    static PcaTree assemble(PcaTreeParams params, DenseMatrix points, std::vector<PcaTreeNode> nodes);

    /// Ball search of radius 1 + eps/2: a slab is followed when the
    /// accumulated squared slab offsets stay within (1 + eps/2)^2.
    SearchResult query(const Vector& q, TreeSearchStats* stats = nullptr) const;
    /// Same search with an explicit radius parameter in place of eps.
    SearchResult query(const Vector& q, double epsilon, TreeSearchStats* stats = nullptr) const;

    const PcaTreeParams& params() const { return params_; }
    double theta() const { return theta_; }
    const std::vector<PcaTreeNode>& nodes() const { return nodes_; }
    const PcaTreeNode& root() const { return nodes_.front(); }
    const DenseMatrix& points() const { return points_; }
    /// Ids removed by de-clumping anywhere in the tree, ascending.
    const std::vector<PointId>& declump_removed() const { return removed_; }
    /// Number of direction-bearing ancestors of the deepest leaf.
    std::size_t depth() const { return depth_; }
    /// True when the depth exceeds 2k (still within the 4k hard cap).
    bool depth_exceeds_model_bound() const { return depth_ > 2 * params_.k; }
    std::size_t declump_events() const { return declump_events_; }

private:
    friend PcaTree build_tree(const DenseMatrix&, const PcaTreeParams&);
    PcaTree() = default;
    void finalize();

    PcaTreeParams params_;
    double theta_ = 0.0;
    DenseMatrix points_;
    std::vector<PcaTreeNode> nodes_;
    std::vector<PointId> removed_;
    std::size_t depth_ = 0;
    std::size_t declump_events_ = 0;
};

/// Recursive centered-PCA slab partition. Throws ModelViolation when a node
/// at depth 4k still needs splitting.
PcaTree build_tree(const DenseMatrix& points, const PcaTreeParams& params);

}  // namespace snns
