#include "snns/error.hpp"
#include "snns/kdnns.hpp"
#include "snns/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace snns;

namespace {

// Written independently of the library: plain loops over raw doubles.
std::pair<std::size_t, double> oracle_scan(const std::vector<std::vector<double>>& pts,
                                           const std::vector<std::size_t>& ids, const std::vector<double>& x) {
    std::size_t best_id = 0;
    double best = INFINITY;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) s += (pts[i][j] - x[j]) * (pts[i][j] - x[j]);
        if (s < best || (s == best && ids[i] < best_id)) {
            best = s;
            best_id = ids[i];
        }
    }
    return {best_id, std::sqrt(best)};
}

}  // namespace

TEST(LowDim, BuildsAndCounts) {
    DenseMatrix c(3, 2);
    c << 0, 0, 1, 0, 0, 1;
    const LowDimIndex idx = build_lowdim(c, {4, 7, 9});
    EXPECT_EQ(idx.size(), 3U);
    EXPECT_EQ(idx.dim(), 2U);
}

TEST(LowDim, RejectsDuplicateIdsAndMismatchedCounts) {
    DenseMatrix c(2, 1);
    c << 0, 1;
    EXPECT_THROW(build_lowdim(c, {3, 3}), InvalidArgument);
    EXPECT_THROW(build_lowdim(c, {3}), InvalidArgument);
}

TEST(LowDim, EmptyIndexRejectsQueries) {
    const LowDimIndex idx = build_lowdim(DenseMatrix(0, 2), {});
    EXPECT_TRUE(idx.empty());
    EXPECT_THROW(idx.query(Vector::Zero(2)), InvalidArgument);
}

TEST(LowDim, OneDimensionalExample) {
    DenseMatrix c(2, 1);
    c << 0, 5;
    const LowDimIndex idx = build_lowdim(c, {10, 11});
    Vector x(1);
    x << 1;
    const Neighbor nn = idx.query(x);
    EXPECT_EQ(nn.id, 10U);
    EXPECT_DOUBLE_EQ(nn.distance, 1.0);
    x << 5;
    EXPECT_EQ(idx.query(x).id, 11U);
    EXPECT_EQ(idx.query(x).distance, 0.0);
    EXPECT_THROW(idx.query(Vector::Zero(2)), InvalidArgument);
}

TEST(LowDim, TiesGoToSmallestId) {
    DenseMatrix c(3, 1);
    c << 1, -1, 1;
    const LowDimIndex idx = build_lowdim(c, {8, 5, 2});
    EXPECT_EQ(idx.query(Vector::Zero(1)).id, 2U);
}

TEST(LowDim, MatchesIndependentScan) {
    Rng rng(17);
    std::vector<std::vector<double>> pts(100, std::vector<double>(5));
    std::vector<std::size_t> ids(100);
    DenseMatrix c(100, 5);
    for (std::size_t i = 0; i < 100; ++i) {
        ids[i] = 1000 - 3 * i;
        for (std::size_t j = 0; j < 5; ++j) c(i, j) = pts[i][j] = rng.normal();
    }
    const LowDimIndex idx = build_lowdim(c, ids);
    for (int q = 0; q < 20; ++q) {
        std::vector<double> x(5);
        Vector xv(5);
        for (int j = 0; j < 5; ++j) xv(j) = x[j] = rng.normal();
        const auto [id, dist] = oracle_scan(pts, ids, x);
        const Neighbor nn = idx.query(xv);
        EXPECT_EQ(nn.id, id);
        EXPECT_NEAR(nn.distance, dist, 1e-12);
    }
}

TEST(ScanNearest, SubsetAndFullScan) {
    DenseMatrix pts(4, 2);
    pts << 0, 0, 1, 1, 2, 2, 3, 3;
    Vector x(2);
    x << 2.9, 2.9;
    EXPECT_EQ(scan_nearest(pts, x).id, 3U);
    const std::vector<PointId> subset{0, 1};
    EXPECT_EQ(scan_nearest(pts, subset, x).id, 1U);
    EXPECT_THROW(scan_nearest(pts, std::vector<PointId>{}, x), InvalidArgument);
}
