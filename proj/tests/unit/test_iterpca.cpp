#include "snns/error.hpp"
#include "snns/genmodel.hpp"
#include "snns/iterpca.hpp"
#include "snns/kdnns.hpp"
#include "snns/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace snns;

namespace {

void expect_partition(const IterPcaIndex& index) {
    std::set<PointId> seen;
    std::size_t total = 0;
    for (const auto& layer : index.layers()) {
        for (PointId id : layer.members) seen.insert(id);
        total += layer.members.size();
    }
    for (PointId id : index.leftover()) seen.insert(id);
    total += index.leftover().size();
    EXPECT_EQ(total, static_cast<std::size_t>(index.points().rows()));
    EXPECT_EQ(seen.size(), total);
}

void expect_capture_certificate(const IterPcaIndex& index) {
    for (const auto& layer : index.layers()) {
        for (PointId id : layer.members) {
            const double dist = dist_to_subspace(index.points().row(static_cast<Eigen::Index>(id)).transpose(),
                                                 layer.subspace);
            EXPECT_LE(dist * dist, index.capture_radius2() + 1e-9);
        }
    }
}

DenseMatrix random_points(std::uint64_t seed, Eigen::Index n, Eigen::Index d) {
    Rng rng(seed);
    DenseMatrix m(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rng.normal();
    }
    return m;
}

}  // namespace

TEST(Formulas, PsiDeltaAndCaps) {
    EXPECT_NEAR(capture_psi(1000, 0.01, 0.1), 0.10001, 1e-15);
    EXPECT_NEAR(singular_threshold(0.001, 0.1, 10000, 4), 0.005, 1e-15);
    EXPECT_EQ(default_sample_size(2000, 512, 6), 1000U);
    EXPECT_EQ(default_sample_size(100000, 10, 2), static_cast<std::size_t>(std::ceil(2 * 10 * std::log(100000.0))));
    EXPECT_EQ(default_sample_size(10, 50, 4), 16U);
    EXPECT_EQ(iteration_cap(2000, 512, 4.0), static_cast<std::size_t>(std::ceil(4 * std::sqrt(512 * std::log(2000.0)))));
    EXPECT_EQ(warmup_layer_cap(1024), 11U);
    EXPECT_EQ(warmup_layer_cap(1000), 11U);
}

TEST(Warmup, PointsInsideSubspaceGiveOneLayer) {
    const PlantedInstance inst = gen_planted(PlantedParams{300, 30, 3, 0.3, 1, Geometry::random_cluster});
    const IterPcaIndex index = build_warmup(inst.points, 3, 0.3);
    ASSERT_EQ(index.layers().size(), 1U);
    EXPECT_EQ(index.layers()[0].members.size(), 300U);
    EXPECT_TRUE(index.leftover().empty());
    EXPECT_LE(sin_theta(index.layers()[0].subspace, inst.subspace), 1e-8);
}

TEST(Warmup, AdversarialInstancesHalveAndAnswer) {
    for (Adversary adv : {Adversary::toward_query, Adversary::random_direction}) {
        const PlantedInstance inst = gen_planted(PlantedParams{1024, 128, 4, 0.3, 5, Geometry::random_cluster});
        const NoisyInstance noisy = perturb_adversarial(inst, adv, 6);
        const IterPcaIndex index = build_warmup(noisy.noisy_points, 4, 0.3);
        EXPECT_LE(index.layers().size(), 11U);
        for (const auto& it : index.iterations()) EXPECT_GE(2 * it.captured, it.survivors);
        expect_partition(index);
        expect_capture_certificate(index);
        EXPECT_EQ(index.query(noisy.noisy_query).id, inst.planted_index);
    }
}

TEST(Warmup, ScatteredPointsViolateTheModel) {
    EXPECT_THROW(build_warmup(random_points(3, 200, 20), 2, 0.3), ModelViolation);
}

TEST(Query, CandidatesCompeteOnOriginalDistance) {
    // Layer 0 offers a point close in projection but far in the plane; layer 1
    // offers a point farther in projection but closer overall.
    DenseMatrix pts(3, 2);
    pts << 0.1, 3.0,   //
        0.5, 0.5,      //
        5.0, 5.0;
    std::vector<std::pair<Subspace, std::vector<PointId>>> layers;
    layers.emplace_back(Subspace::coordinate(2, 1), std::vector<PointId>{0});
    layers.emplace_back(Subspace::coordinate(2, 1), std::vector<PointId>{1});
    IterPcaParams params;
    params.epsilon = 0.3;
    params.k = 1;
    const IterPcaIndex index = IterPcaIndex::assemble(IterPcaVariant::sampled, params, pts, std::move(layers), {2});
    const Vector q = Vector::Zero(2);
    const SearchResult r = index.query(q);
    EXPECT_EQ(r.id, 1U);
    EXPECT_EQ(r.id, scan_nearest(pts, q).id);
    EXPECT_EQ(r.visits, 2U);
}

TEST(Query, AssembleRejectsBrokenPartitions) {
    DenseMatrix pts = random_points(1, 3, 2);
    std::vector<std::pair<Subspace, std::vector<PointId>>> layers;
    layers.emplace_back(Subspace::coordinate(2, 1), std::vector<PointId>{0, 1});
    EXPECT_THROW(IterPcaIndex::assemble(IterPcaVariant::sampled, {}, pts, layers, {1, 2}), FormatError);
    EXPECT_THROW(IterPcaIndex::assemble(IterPcaVariant::sampled, {}, pts, layers, {}), FormatError);
}

TEST(Sampled, EverythingInLeftoverMatchesBruteForce) {
    const DenseMatrix pts = random_points(8, 200, 10);
    IterPcaParams params;
    params.epsilon = 0.3;
    params.sigma = 0.1;
    params.k = 2;
    params.sample_size = 200;
    const IterPcaIndex index = build_iterpca(pts, params);
    EXPECT_TRUE(index.layers().empty());
    EXPECT_EQ(index.leftover().size(), 200U);
    Rng rng(9);
    for (int q = 0; q < 100; ++q) {
        Vector x(10);
        for (auto& v : x) v = rng.normal();
        const SearchResult r = index.query(x);
        const Neighbor truth = scan_nearest(pts, x);
        EXPECT_EQ(r.id, truth.id);
        EXPECT_EQ(r.distance, truth.distance);
    }
    const Vector stored = pts.row(17).transpose();
    EXPECT_EQ(index.query(stored).id, 17U);
}

TEST(Sampled, ZeroNoiseFirstLayerIsExact) {
    const PlantedInstance inst = gen_planted(PlantedParams{2000, 64, 3, 0.3, 2, Geometry::random_cluster});
    IterPcaParams params;
    params.epsilon = 0.3;
    params.sigma = 0.0;
    params.k = 3;
    params.seed = 4;
    const IterPcaIndex index = build_iterpca(inst.points, params);
    ASSERT_FALSE(index.layers().empty());
    EXPECT_LE(sin_theta(index.layers()[0].subspace, inst.subspace), 1e-8);
    const auto& first = index.iterations().front();
    EXPECT_EQ(first.captured, first.survivors - first.sampled_distinct);
    expect_partition(index);
    expect_capture_certificate(index);
}

TEST(Sampled, ConformingInstanceReturnsPlanted) {
    std::size_t hits = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const PlantedInstance inst = gen_planted(PlantedParams{1000, 128, 4, 0.3, seed, Geometry::random_cluster});
        const NoisyInstance noisy = perturb_gaussian(inst, auto_sigma(1000, 128, 0.3), false, seed + 50);
        IterPcaParams params;
        params.epsilon = 0.3;
        params.sigma = noisy.sigma;
        params.k = 4;
        params.seed = seed;
        const IterPcaIndex index = build_iterpca(noisy.noisy_points, params);
        expect_partition(index);
        expect_capture_certificate(index);
        EXPECT_LE(index.layers().size(), iteration_cap(1000, 128, 4.0));
        hits += index.query(noisy.noisy_query).id == inst.planted_index ? 1 : 0;
    }
    EXPECT_GE(hits, 4U);
}

TEST(Sampled, FractionModeCapturesQuota) {
    const PlantedInstance inst = gen_planted(PlantedParams{1000, 64, 3, 0.3, 3, Geometry::random_cluster});
    const NoisyInstance noisy = perturb_gaussian(inst, 0.01, false, 1);
    IterPcaParams params;
    params.epsilon = 0.3;
    params.sigma = 0.01;
    params.k = 3;
    params.capture_mode = CaptureMode::fraction_eta;
    params.eta = 0.25;
    const IterPcaIndex index = build_iterpca(noisy.noisy_points, params);
    for (const auto& it : index.iterations()) {
        if (it.m == 0) continue;
        const std::size_t candidates = it.survivors - it.sampled_distinct;
        EXPECT_EQ(it.captured, static_cast<std::size_t>(std::ceil(0.25 * static_cast<double>(candidates))));
    }
    expect_partition(index);
    EXPECT_EQ(parse_capture_mode(to_string(CaptureMode::fraction_eta)), CaptureMode::fraction_eta);
}

TEST(Sampled, ThreeEmptyIterationsStop) {
    const DenseMatrix pts = random_points(4, 500, 8);
    IterPcaParams params;
    params.epsilon = 0.3;
    params.k = 2;
    params.sample_size = 20;
    params.c_threshold = 1e6;
    const IterPcaIndex index = build_iterpca(pts, params);
    EXPECT_TRUE(index.layers().empty());
    EXPECT_EQ(index.iterations().size(), 3U);
    EXPECT_EQ(index.leftover().size(), 500U);
    expect_partition(index);
}

TEST(Sampled, DeterministicForSeed) {
    const PlantedInstance inst = gen_planted(PlantedParams{800, 64, 3, 0.3, 7, Geometry::random_cluster});
    const NoisyInstance noisy = perturb_gaussian(inst, 0.003, false, 2);
    IterPcaParams params;
    params.epsilon = 0.3;
    params.sigma = 0.003;
    params.k = 3;
    params.seed = 11;
    const IterPcaIndex a = build_iterpca(noisy.noisy_points, params);
    const IterPcaIndex b = build_iterpca(noisy.noisy_points, params);
    ASSERT_EQ(a.layers().size(), b.layers().size());
    for (std::size_t l = 0; l < a.layers().size(); ++l) {
        EXPECT_EQ(a.layers()[l].members, b.layers()[l].members);
        EXPECT_EQ(a.layers()[l].subspace.basis(), b.layers()[l].subspace.basis());
    }
    EXPECT_EQ(a.leftover(), b.leftover());
}
