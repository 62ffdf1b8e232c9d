#include "snns/pcatree.hpp"

#include "snns/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace snns {

namespace {

DenseMatrix select_rows(const DenseMatrix& rows, const std::vector<std::size_t>& local) {
    DenseMatrix out(static_cast<Eigen::Index>(local.size()), rows.cols());
    for (std::size_t i = 0; i < local.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = rows.row(static_cast<Eigen::Index>(local[i]));
    }
    return out;
}

double gap_to_slab(double t, std::int64_t slab, double theta) {
    const double lo = theta * static_cast<double>(slab);
    const double hi = theta * static_cast<double>(slab + 1);
    if (t < lo) return lo - t;
    if (t >= hi) return t - hi;
    return 0.0;
}

// Fixes the sign of a direction so that its largest-magnitude coordinate
// (first on ties) is positive.
void canonical_sign(Vector& v) {
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) {
        v = -v;
    }
}

class TreeBuilder {
public:
    TreeBuilder(const PcaTreeParams& params, double theta, std::size_t stop, std::vector<PcaTreeNode>& nodes,
                std::size_t& declump_events)
        : params_(params), theta_(theta), stop_(stop), nodes_(nodes), declump_events_(declump_events) {}

    std::uint32_t build(std::vector<PointId> ids, DenseMatrix rows, std::uint32_t depth) {
        const auto index = static_cast<std::uint32_t>(nodes_.size());
        nodes_.emplace_back();
        nodes_[index].depth = depth;
        if (ids.size() <= stop_) {
            nodes_[index].leaf_ids = std::move(ids);
            return index;
        }

        DeclumpResult dc = declump(rows, ids, params_.epsilon, params_.k);
        if (dc.triggered) {
            ++declump_events_;
            if (!dc.removed.empty()) {
                std::vector<std::size_t> keep_local;
                std::size_t cursor = 0;
                for (std::size_t i = 0; i < ids.size(); ++i) {
                    if (cursor < dc.kept.size() && dc.kept[cursor] == ids[i]) {
                        keep_local.push_back(i);
                        ++cursor;
                    }
                }
                rows = select_rows(rows, keep_local);
                ids = dc.kept;
            }
            nodes_[index].removed_ids = std::move(dc.removed);
        }
        if (ids.size() <= stop_) {
            nodes_[index].leaf_ids = std::move(ids);
            return index;
        }
        if (depth >= 4 * params_.k) {
            throw ModelViolation("model precondition violated: PCA tree node at depth " + std::to_string(depth) +
                                 " still holds " + std::to_string(ids.size()) + " points (hard cap 4k = " +
                                 std::to_string(4 * params_.k) + ")");
        }

        const SvdResult decomposition = svd(center(rows));
        Vector direction = decomposition.right_vectors.col(0);
        if (decomposition.singular_values(0) == 0.0) {
            direction = Vector::Unit(rows.cols(), 0);
        }
        direction.normalize();
        canonical_sign(direction);

        const Vector proj = rows * direction;
        std::map<std::int64_t, std::vector<std::size_t>> slabs;
        for (Eigen::Index i = 0; i < proj.size(); ++i) {
            slabs[static_cast<std::int64_t>(std::floor(proj(i) / theta_))].push_back(static_cast<std::size_t>(i));
        }

        std::vector<std::pair<std::int64_t, std::uint32_t>> children;
        children.reserve(slabs.size());
        for (const auto& [slab, local] : slabs) {
            DenseMatrix child_rows = select_rows(rows, local);
            for (std::size_t i = 0; i < local.size(); ++i) {
                child_rows.row(static_cast<Eigen::Index>(i)) -=
                    proj(static_cast<Eigen::Index>(local[i])) * direction.transpose();
            }
            std::vector<PointId> child_ids;
            child_ids.reserve(local.size());
            for (std::size_t i : local) {
                child_ids.push_back(ids[i]);
            }
            children.emplace_back(slab, build(std::move(child_ids), std::move(child_rows), depth + 1));
        }
        nodes_[index].direction = std::move(direction);
        nodes_[index].children = std::move(children);
        return index;
    }

private:
    const PcaTreeParams& params_;
    double theta_;
    std::size_t stop_;
    std::vector<PcaTreeNode>& nodes_;
    std::size_t& declump_events_;
};

}  // namespace

double slab_width(double epsilon, std::size_t k) {
    return epsilon / (1000.0 * std::pow(static_cast<double>(k), 1.5));
}

double declump_threshold(double epsilon, std::size_t count, std::size_t k) {
    return epsilon / 16.0 * std::sqrt(static_cast<double>(count) / static_cast<double>(k));
}

DeclumpResult declump(const DenseMatrix& rows, std::span<const PointId> ids, double epsilon, std::size_t k) {
    if (ids.empty() || static_cast<std::size_t>(rows.rows()) != ids.size()) {
        throw InvalidArgument("declump: need one row per id and at least one id");
    }
    if (!std::is_sorted(ids.begin(), ids.end())) {
        throw InvalidArgument("declump: ids must be ascending");
    }
    DeclumpResult out;
    out.threshold = declump_threshold(epsilon, ids.size(), k);
    out.top_centered_singular_value = spectral_norm(center(rows));
    if (out.top_centered_singular_value >= out.threshold || ids.size() < 2) {
        out.kept.assign(ids.begin(), ids.end());
        return out;
    }
    out.triggered = true;

    const auto n = rows.rows();
    double closest = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            closest = std::min(closest, (rows.row(i) - rows.row(j)).squaredNorm());
        }
    }
    out.closest_pair_dist2 = closest;
    const double limit = closest + epsilon * epsilon / 2.0;

    std::vector<char> alive(static_cast<std::size_t>(n), 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n && alive[static_cast<std::size_t>(i)]; ++j) {
            if (alive[static_cast<std::size_t>(j)] && (rows.row(i) - rows.row(j)).squaredNorm() <= limit) {
                alive[static_cast<std::size_t>(i)] = 0;
                alive[static_cast<std::size_t>(j)] = 0;
            }
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        (alive[static_cast<std::size_t>(i)] ? out.kept : out.removed).push_back(ids[static_cast<std::size_t>(i)]);
    }
    return out;
}

PcaTree build_tree(const DenseMatrix& points, const PcaTreeParams& params) {
    if (points.rows() < 1 || points.cols() < 1) {
        throw InvalidArgument("build_tree: need at least one point");
    }
    require_finite(points, "dataset");
    if (!(params.epsilon > 0.0) || params.k < 1) {
        throw InvalidArgument("build_tree: need epsilon > 0 and k >= 1");
    }
    PcaTree tree;
    tree.params_ = params;
    tree.params_.stop_size = params.stop_size > 0 ? params.stop_size : static_cast<std::size_t>(points.cols());
    tree.theta_ = slab_width(params.epsilon, params.k);
    tree.points_ = points;

    std::vector<PointId> ids(static_cast<std::size_t>(points.rows()));
    for (std::size_t i = 0; i < ids.size(); ++i) {
        ids[i] = i;
    }
    TreeBuilder builder(tree.params_, tree.theta_, tree.params_.stop_size, tree.nodes_, tree.declump_events_);
    builder.build(std::move(ids), points, 0);
    tree.finalize();
    return tree;
}

void PcaTree::finalize() {
    removed_.clear();
    depth_ = 0;
    for (const auto& node : nodes_) {
        removed_.insert(removed_.end(), node.removed_ids.begin(), node.removed_ids.end());
        if (node.is_leaf()) {
            depth_ = std::max<std::size_t>(depth_, node.depth);
        }
    }
    std::sort(removed_.begin(), removed_.end());
}

PcaTree PcaTree::assemble(PcaTreeParams params, DenseMatrix points, std::vector<PcaTreeNode> nodes) {
    if (nodes.empty()) {
        throw FormatError("PCA tree has no nodes");
    }
    const auto n = static_cast<std::size_t>(points.rows());
    const auto d = points.cols();
    std::vector<char> seen(n, 0);
    auto claim = [&](PointId id) {
        if (id >= n || seen[id]) {
            throw FormatError("PCA tree leaves do not partition the point ids");
        }
        seen[id] = 1;
    };
    for (const auto& node : nodes) {
        for (PointId id : node.leaf_ids) claim(id);
        for (PointId id : node.removed_ids) claim(id);
        if (!node.is_leaf() && node.direction.size() != d) {
            throw FormatError("PCA tree direction has the wrong dimension");
        }
        for (const auto& [slab, child] : node.children) {
            if (child >= nodes.size() || child == 0) {
                throw FormatError("PCA tree child index out of range");
            }
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        throw FormatError("PCA tree does not cover every point id");
    }
    PcaTree tree;
    tree.params_ = params;
    tree.theta_ = slab_width(params.epsilon, params.k);
    tree.points_ = std::move(points);
    tree.nodes_ = std::move(nodes);
    tree.finalize();
    return tree;
}

SearchResult PcaTree::query(const Vector& q, TreeSearchStats* stats) const {
    return query(q, params_.epsilon, stats);
}

SearchResult PcaTree::query(const Vector& q, double epsilon, TreeSearchStats* stats) const {
    if (q.size() != points_.cols()) {
        throw InvalidArgument("query dimension does not match the tree");
    }
    const double radius = 1.0 + epsilon / 2.0;
    const double budget = radius * radius;

    SearchResult best;
    bool found = false;
    TreeSearchStats local;
    auto scan_leaf = [&](const PcaTreeNode& leaf) {
        ++local.leaves_visited;
        for (PointId id : leaf.leaf_ids) {
            const double dist = (points_.row(static_cast<Eigen::Index>(id)).transpose() - q).norm();
            ++best.scanned;
            if (!found || dist < best.distance || (dist == best.distance && id < best.id)) {
                best.id = id;
                best.distance = dist;
                found = true;
            }
        }
    };

    struct Frame {
        std::uint32_t node;
        Vector residual;
        double spent;
    };
    std::vector<Frame> stack;
    stack.push_back({0, q, 0.0});
    while (!stack.empty()) {
        Frame frame = std::move(stack.back());
        stack.pop_back();
        const PcaTreeNode& node = nodes_[frame.node];
        ++local.nodes_visited;
        if (node.is_leaf()) {
            scan_leaf(node);
            continue;
        }
        const double t = frame.residual.dot(node.direction);
        const double reach = std::sqrt(std::max(0.0, budget - frame.spent));
        const auto lo = static_cast<std::int64_t>(std::floor((t - reach) / theta_)) - 1;
        const auto hi = static_cast<std::int64_t>(std::floor((t + reach) / theta_)) + 1;
        auto it = std::lower_bound(node.children.begin(), node.children.end(), lo,
                                   [](const auto& child, std::int64_t key) { return child.first < key; });
        // Reverse push keeps the traversal in ascending slab order.
        std::vector<Frame> admitted;
        for (; it != node.children.end() && it->first <= hi; ++it) {
            const double gap = gap_to_slab(t, it->first, theta_);
            const double spent = frame.spent + gap * gap;
            if (spent > budget) {
                continue;
            }
            const PcaTreeNode& child = nodes_[it->second];
            Vector residual = child.is_leaf() ? Vector() : Vector(frame.residual - t * node.direction);
            admitted.push_back({it->second, std::move(residual), spent});
        }
        for (auto rit = admitted.rbegin(); rit != admitted.rend(); ++rit) {
            stack.push_back(std::move(*rit));
        }
    }

    if (!found) {
        // Nothing admitted: descend along the nearest slab at every level.
        local.fallback = true;
        std::uint32_t current = 0;
        Vector residual = q;
        while (!nodes_[current].is_leaf()) {
            const PcaTreeNode& node = nodes_[current];
            const double t = residual.dot(node.direction);
            double best_gap = std::numeric_limits<double>::infinity();
            std::uint32_t next = node.children.front().second;
            for (const auto& [slab, child] : node.children) {
                const double gap = gap_to_slab(t, slab, theta_);
                if (gap < best_gap) {
                    best_gap = gap;
                    next = child;
                }
            }
            residual -= t * node.direction;
            current = next;
        }
        scan_leaf(nodes_[current]);
        if (!found) {
            for (const auto& node : nodes_) {
                if (node.is_leaf() && !node.leaf_ids.empty()) {
                    scan_leaf(node);
                }
            }
        }
        if (!found) {
            throw InvalidArgument("PCA tree holds no points outside the de-clumped set");
        }
    }
    best.visits = local.leaves_visited;
    if (stats != nullptr) {
        *stats = local;
    }
    return best;
}

}  // namespace snns
