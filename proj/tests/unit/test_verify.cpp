#include "snns/error.hpp"
#include "snns/genmodel.hpp"
#include "snns/iterpca.hpp"
#include "snns/pcatree.hpp"
#include "snns/verify.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>

using namespace snns;

TEST(MonteCarloMargin, Formula) {
    EXPECT_NEAR(monte_carlo_margin(0.25, 10000), 3.0 * std::sqrt(0.25 * 0.75 / 10000.0), 1e-15);
    EXPECT_EQ(monte_carlo_margin(0.0, 100), 0.0);
}

TEST(Wedin, ZeroNoiseGivesZeroAngle) {
    const VerifyReport r = check_wedin(60, 20, 4, 2, 0.0, 10, 1);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.failures, 0U);
    EXPECT_LE(r.statistics.at("max_sin_theta"), 1e-9);
}

TEST(Wedin, FullSpaceTarget) {
    const VerifyReport r = check_wedin(40, 6, 6, 3, 0.5, 10, 2);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.statistics.at("max_sin_theta"), 1e-9);
}

TEST(Wedin, HoldsOnRandomTrials) {
    const VerifyReport r = check_wedin(200, 50, 5, 3, 0.05, 20, 3);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.trials + r.skipped, 20U);
    EXPECT_LE(r.statistics.at("max_ratio_sin_theta_to_bound"), 1.0);
}

TEST(Wedin, RejectsBadShapes) {
    EXPECT_THROW(check_wedin(30, 5, 2, 3, 0.1, 5, 4), InvalidArgument);
    EXPECT_THROW(check_wedin(30, 5, 6, 3, 0.1, 5, 4), InvalidArgument);
    EXPECT_THROW(check_wedin(2, 5, 4, 3, 0.1, 5, 4), InvalidArgument);
}

TEST(ChiSquare, ZeroXAndModerateTail) {
    EXPECT_TRUE(check_chi_square_tail(10, 0.0, 1000, 1).pass);
    const VerifyReport r = check_chi_square_tail(100, 4.0, 100000, 2);
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.statistics.at("upper_threshold"), 144.0, 1e-12);
    EXPECT_LE(r.statistics.at("empirical_upper_tail"), std::exp(-4.0));
}

TEST(NnPreserved, ZeroNoiseAndOutsideRegime) {
    const VerifyReport clean = check_nn_preserved(200, 64, 3, 0.3, 0.0, 10, 1);
    EXPECT_TRUE(clean.pass);
    EXPECT_EQ(clean.statistics.at("fraction_preserved"), 1.0);

    const double big = 20.0 * auto_sigma(200, 64, 0.3);
    const VerifyReport noisy = check_nn_preserved(200, 64, 3, 0.3, big, 10, 1);
    EXPECT_TRUE(noisy.pass);
    EXPECT_EQ(noisy.statistics.at("in_regime"), 0.0);
    EXPECT_FALSE(noisy.notes.empty());
}

TEST(SpectralNorm, ZeroAndTypical) {
    const VerifyReport zero = check_spectral_norm_bound(100, 50, 0.0, 5, 1);
    EXPECT_TRUE(zero.pass);
    EXPECT_EQ(zero.failures, 0U);
    const VerifyReport r = check_spectral_norm_bound(300, 100, 1.0, 10, 2);
    EXPECT_TRUE(r.pass);
    EXPECT_GT(r.statistics.at("subset_checks"), 0.0);
    EXPECT_LE(r.statistics.at("max_ratio_norm_to_bound"), 1.0);
}

TEST(IterpcaDiagnostics, ZeroNoise) {
    const PlantedInstance inst = gen_planted(PlantedParams{1500, 64, 3, 0.3, 1, Geometry::random_cluster});
    const NoisyInstance clean = perturb_gaussian(inst, 0.0, true, 1);
    IterPcaParams p;
    p.epsilon = 0.3;
    p.k = 3;
    const IterPcaIndex index = build_iterpca(clean.noisy_points, p);
    const VerifyReport r = check_iterpca_diagnostics(clean, index);
    EXPECT_TRUE(r.pass) << r.to_json();
    EXPECT_LE(r.statistics.at("max_sin_theta"), 1e-8);
}

TEST(IterpcaDiagnostics, DetectsWrongSubspace) {
    const PlantedInstance inst = gen_planted(PlantedParams{1500, 64, 3, 0.3, 1, Geometry::random_cluster});
    const NoisyInstance clean = perturb_gaussian(inst, 0.0, false, 1);
    std::vector<std::pair<Subspace, std::vector<PointId>>> layers;
    layers.emplace_back(Subspace::coordinate(64, 3), std::vector<PointId>{0});
    std::vector<PointId> rest;
    for (PointId i = 1; i < 1500; ++i) rest.push_back(i);
    IterPcaParams p;
    p.epsilon = 0.3;
    p.k = 3;
    const IterPcaIndex index =
        IterPcaIndex::assemble(IterPcaVariant::sampled, p, clean.noisy_points, std::move(layers), std::move(rest));
    EXPECT_FALSE(check_iterpca_diagnostics(clean, index).pass);
}

TEST(PcatreeDiagnostics, ZeroNoiseDirectionsStayInU) {
    const PlantedInstance inst = gen_planted(PlantedParams{800, 48, 3, 0.3, 2, Geometry::random_cluster});
    const NoisyInstance clean = perturb_gaussian(inst, 0.0, false, 1);
    const PcaTree tree = build_tree(clean.noisy_points, PcaTreeParams{0.3, 3, 0});
    const VerifyReport r = check_pcatree_diagnostics(clean, tree);
    EXPECT_TRUE(r.pass) << r.to_json();
    EXPECT_LE(r.statistics.at("max_direction_perp_norm"), 1e-8);
    EXPECT_EQ(r.statistics.at("planted_removed"), 0.0);
}

TEST(Report, JsonCarriesTheFields) {
    const VerifyReport r = check_chi_square_tail(10, 1.0, 1000, 3);
    const auto doc = nlohmann::json::parse(r.to_json());
    EXPECT_EQ(doc.at("check_name"), "chi2");
    EXPECT_EQ(doc.at("pass").get<bool>(), r.pass);
    EXPECT_TRUE(doc.at("statistics").contains("margin_upper"));
    EXPECT_EQ(doc.at("params").at("d").get<double>(), 10.0);
}

TEST(Report, ReproducibleFromSeed) {
    EXPECT_EQ(check_wedin(50, 20, 3, 2, 0.1, 8, 9).to_json(), check_wedin(50, 20, 3, 2, 0.1, 8, 9).to_json());
    EXPECT_EQ(check_chi_square_tail(20, 2.0, 5000, 4).to_json(), check_chi_square_tail(20, 2.0, 5000, 4).to_json());
}
