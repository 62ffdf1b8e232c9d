#include "snns/kdnns.hpp"

#include "snns/error.hpp"

#include <cmath>
#include <limits>
#include <unordered_set>

namespace snns {

namespace {

// Keeps the running best; distances compared squared, ties to smaller id.
struct Best {
    PointId id = 0;
    double dist2 = std::numeric_limits<double>::infinity();
    bool found = false;

    void offer(PointId id_, double d2) {
        if (!found || d2 < dist2 || (d2 == dist2 && id_ < id)) {
            id = id_;
            dist2 = d2;
            found = true;
        }
    }
};

}  // namespace

LowDimIndex::LowDimIndex(DenseMatrix coords, std::vector<PointId> ids)
    : dim_(static_cast<std::size_t>(coords.cols())), coords_(std::move(coords)), ids_(std::move(ids)) {
    if (static_cast<std::size_t>(coords_.rows()) != ids_.size()) {
        throw InvalidArgument("build_lowdim: id count does not match row count");
    }
    std::unordered_set<PointId> seen(ids_.begin(), ids_.end());
    if (seen.size() != ids_.size()) {
        throw InvalidArgument("build_lowdim: duplicate point ids");
    }
    require_finite(coords_, "low-dimensional coordinates");
}

Neighbor LowDimIndex::query(const Vector& x) const {
    if (ids_.empty()) {
        throw InvalidArgument("query on an empty low-dimensional index");
    }
    if (static_cast<std::size_t>(x.size()) != dim_) {
        throw InvalidArgument("low-dimensional query has the wrong dimension");
    }
    Best best;
    for (Eigen::Index r = 0; r < coords_.rows(); ++r) {
        best.offer(ids_[static_cast<std::size_t>(r)], (coords_.row(r).transpose() - x).squaredNorm());
    }
    return {best.id, std::sqrt(best.dist2)};
}

LowDimIndex build_lowdim(DenseMatrix coords, std::vector<PointId> ids) {
    return LowDimIndex(std::move(coords), std::move(ids));
}

Neighbor scan_nearest(const DenseMatrix& points, std::span<const PointId> candidates, const Vector& x) {
    if (candidates.empty()) {
        throw InvalidArgument("scan_nearest: no candidates");
    }
    if (points.cols() != x.size()) {
        throw InvalidArgument("scan_nearest: dimension mismatch");
    }
    Best best;
    for (const PointId id : candidates) {
        best.offer(id, (points.row(static_cast<Eigen::Index>(id)).transpose() - x).squaredNorm());
    }
    return {best.id, std::sqrt(best.dist2)};
}

Neighbor scan_nearest(const DenseMatrix& points, const Vector& x) {
    if (points.rows() == 0) {
        throw InvalidArgument("scan_nearest: no candidates");
    }
    if (points.cols() != x.size()) {
        throw InvalidArgument("scan_nearest: dimension mismatch");
    }
    Best best;
    for (Eigen::Index r = 0; r < points.rows(); ++r) {
        best.offer(static_cast<PointId>(r), (points.row(r).transpose() - x).squaredNorm());
    }
    return {best.id, std::sqrt(best.dist2)};
}

}  // namespace snns
