#pragma once

#include "snns/linalg.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace snns {

using PointId = std::size_t;

struct Neighbor {
    PointId id = 0;
    double distance = 0.0;
};

/// Answer of a full-dimensional index query. `visits` counts probed
/// layers (iterative PCA) or visited leaves (PCA tree); `scanned` counts
/// exact d-dimensional distance evaluations.
struct SearchResult {
    PointId id = 0;
    double distance = 0.0;
    std::size_t visits = 0;
    std::size_t scanned = 0;
};

/// Exact low-dimensional nearest-neighbor structure over projected
/// coordinates. Brute force, so trivially (1 + eps')-approximate for any
/// eps' >= 0. Ties go to the smallest id.
class LowDimIndex {
public:
    LowDimIndex() = default;
    LowDimIndex(DenseMatrix coords, std::vector<PointId> ids);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return ids_.size(); }
    bool empty() const { return ids_.empty(); }
    const std::vector<PointId>& ids() const { return ids_; }
    const DenseMatrix& coords() const { return coords_; }

    Neighbor query(const Vector& x) const;

private:
    std::size_t dim_ = 0;
    DenseMatrix coords_;
    std::vector<PointId> ids_;
};

LowDimIndex build_lowdim(DenseMatrix coords, std::vector<PointId> ids);

/// Exact nearest neighbor of x among the rows `candidates` of `points`.
/// Ties go to the smallest id; an empty candidate list is an error.
Neighbor scan_nearest(const DenseMatrix& points, std::span<const PointId> candidates, const Vector& x);

/// Exact nearest neighbor over every row of `points`.
Neighbor scan_nearest(const DenseMatrix& points, const Vector& x);

}  // namespace snns
