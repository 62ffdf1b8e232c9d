#include "snns/verify.hpp"

#include "snns/error.hpp"
#include "snns/kdnns.hpp"
#include "snns/parallel.hpp"
#include "snns/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace snns {

namespace {

constexpr double kSlack = 1e-9;

DenseMatrix gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale) {
    DenseMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (auto& x : m.reshaped<Eigen::RowMajor>()) {
        x = scale * rng.normal();
    }
    return m;
}

double log_n(std::size_t n) { return std::log(static_cast<double>(std::max<std::size_t>(n, 2))); }

}  // namespace

std::string VerifyReport::to_json() const {
    nlohmann::ordered_json doc;
    doc["check_name"] = check_name;
    doc["params"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : params) doc["params"][key] = value;
    doc["trials"] = trials;
    doc["failures"] = failures;
    doc["skipped"] = skipped;
    doc["statistics"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : statistics) doc["statistics"][key] = value;
    doc["notes"] = notes;
    doc["inconclusive"] = inconclusive;
    doc["pass"] = pass;
    return doc.dump();
}

double monte_carlo_margin(double p, std::size_t samples) {
    if (samples == 0) return 0.0;
    return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

double sin_theta_bound(double c_sin, double sigma, std::size_t k, std::size_t n, double epsilon) {
    return c_sin * sigma * std::pow(static_cast<double>(k), 1.5) * std::sqrt(log_n(n)) / epsilon;
}

double heaviness_bound(double c_gamma, double sigma, std::size_t k, std::size_t n, double epsilon) {
    return c_gamma * sigma * std::sqrt(log_n(n)) * std::sqrt(static_cast<double>(k)) / epsilon;
}

VerifyReport check_wedin(std::size_t n, std::size_t d, std::size_t k, std::size_t m, double sigma,
                         std::size_t trials, std::uint64_t seed) {
    if (m < 1 || m > k || k > d || n < m) {
        throw InvalidArgument("check_wedin: need 1 <= m <= k <= d and n >= m");
    }
    VerifyReport report;
    report.check_name = "wedin";
    report.params = {{"n", double(n)}, {"d", double(d)}, {"k", double(k)}, {"m", double(m)},
                     {"sigma", sigma}, {"trials", double(trials)}, {"seed", double(seed)}};

    struct Outcome {
        bool skipped = false;
        bool violated = false;
        double sin_theta = 0.0;
        double bound = 0.0;
        double gap = 0.0;
    };
    std::vector<Outcome> outcomes(trials);
    const Rng root(seed);
    parallel_for(trials, [&](std::size_t t) {
        Rng rng = root.derive(t);
        const DenseMatrix left = gaussian_matrix(rng, n, k, 1.0);
        const DenseMatrix right = gaussian_matrix(rng, k, d, 1.0);
        const DenseMatrix x = left * right;
        const DenseMatrix y = gaussian_matrix(rng, n, d, sigma);
        const DenseMatrix z = x + y;

        const SvdResult zs = svd(z, true);
        const Vector xs = singular_values(x);
        const Eigen::MatrixXd right_m = zs.right_vectors.leftCols(static_cast<Eigen::Index>(m));
        const Eigen::MatrixXd left_m = zs.left_vectors->leftCols(static_cast<Eigen::Index>(m));
        const double y_right = singular_values(y * right_m)(0);
        const double y_left = singular_values(left_m.transpose() * y)(0);
        const double tail = k < static_cast<std::size_t>(xs.size()) ? xs(static_cast<Eigen::Index>(k)) : 0.0;
        Outcome& o = outcomes[t];
        o.gap = zs.singular_values(static_cast<Eigen::Index>(m - 1)) - tail;
        if (o.gap <= 0.0) {
            o.skipped = true;
            return;
        }
        o.sin_theta = sin_theta(top_subspace(zs, d, m), top_subspace(x, k));
        o.bound = std::max(y_right, y_left) / o.gap;
        o.violated = o.sin_theta > o.bound + kSlack;
    });

    double max_ratio = 0.0;
    double max_sin = 0.0;
    double min_gap = std::numeric_limits<double>::infinity();
    for (const auto& o : outcomes) {
        if (o.skipped) {
            ++report.skipped;
            continue;
        }
        ++report.trials;
        report.failures += o.violated ? 1 : 0;
        max_sin = std::max(max_sin, o.sin_theta);
        min_gap = std::min(min_gap, o.gap);
        if (o.bound > 0.0) max_ratio = std::max(max_ratio, o.sin_theta / o.bound);
    }
    report.statistics["max_sin_theta"] = max_sin;
    report.statistics["max_ratio_sin_theta_to_bound"] = max_ratio;
    report.statistics["min_gap"] = report.trials > 0 ? min_gap : 0.0;
    report.inconclusive = report.trials == 0;
    report.pass = !report.inconclusive && report.failures == 0;
    return report;
}

VerifyReport check_chi_square_tail(std::size_t d, double x, std::size_t samples, std::uint64_t seed) {
    if (d < 1 || !(x >= 0.0) || samples < 1) {
        throw InvalidArgument("check_chi_square_tail: need d >= 1, x >= 0, samples >= 1");
    }
    VerifyReport report;
    report.check_name = "chi2";
    report.params = {{"d", double(d)}, {"x", x}, {"samples", double(samples)}, {"seed", double(seed)}};

    const double dd = static_cast<double>(d);
    const double upper = dd * (1.0 + 2.0 * std::sqrt(x / dd)) + x;
    const double lower = dd * (1.0 - 2.0 * std::sqrt(x / dd));

    constexpr std::size_t kChunks = 64;
    std::vector<std::size_t> upper_hits(kChunks, 0);
    std::vector<std::size_t> lower_hits(kChunks, 0);
    const Rng root(seed);
    parallel_for(kChunks, [&](std::size_t c) {
        Rng rng = root.derive(c);
        const std::size_t begin = samples * c / kChunks;
        const std::size_t end = samples * (c + 1) / kChunks;
        for (std::size_t s = begin; s < end; ++s) {
            double sum = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double z = rng.normal();
                sum += z * z;
            }
            upper_hits[c] += sum >= upper ? 1 : 0;
            lower_hits[c] += sum <= lower ? 1 : 0;
        }
    });
    const double total = static_cast<double>(samples);
    const double p_upper = static_cast<double>(std::accumulate(upper_hits.begin(), upper_hits.end(), 0ULL)) / total;
    const double p_lower = static_cast<double>(std::accumulate(lower_hits.begin(), lower_hits.end(), 0ULL)) / total;
    const double bound = std::exp(-x);
    const double margin_upper = monte_carlo_margin(p_upper, samples);
    const double margin_lower = monte_carlo_margin(p_lower, samples);

    report.trials = samples;
    report.failures = (p_upper > bound + margin_upper ? 1 : 0) + (p_lower > bound + margin_lower ? 1 : 0);
    report.statistics = {{"upper_threshold", upper},   {"lower_threshold", lower},
                         {"empirical_upper_tail", p_upper}, {"empirical_lower_tail", p_lower},
                         {"bound", bound},             {"margin_upper", margin_upper},
                         {"margin_lower", margin_lower}};
    report.pass = report.failures == 0;
    return report;
}

VerifyReport check_nn_preserved(std::size_t n, std::size_t d, std::size_t k, double epsilon, double sigma,
                                std::size_t trials, std::uint64_t seed) {
    VerifyReport report;
    report.check_name = "nn-preserved";
    report.params = {{"n", double(n)}, {"d", double(d)}, {"k", double(k)}, {"epsilon", epsilon},
                     {"sigma", sigma}, {"trials", double(trials)}, {"seed", double(seed)}};
    const double regime = auto_sigma(n, d, epsilon, 0.05);
    std::vector<char> kept(trials, 0);
    const Rng root(seed);
    parallel_for(trials, [&](std::size_t t) {
        Rng trial = root.derive(t);
        PlantedParams p{n, d, k, epsilon, trial.next_u64(), Geometry::random_cluster};
        const PlantedInstance inst = gen_planted(p);
        const NoisyInstance noisy = perturb_gaussian(inst, sigma, false, trial.next_u64());
        kept[t] = scan_nearest(noisy.noisy_points, noisy.noisy_query).id == inst.planted_index;
    });
    report.trials = trials;
    const auto hits = static_cast<std::size_t>(std::count(kept.begin(), kept.end(), 1));
    report.failures = trials - hits;
    const double fraction = trials > 0 ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0;
    const bool in_regime = sigma <= regime * (1.0 + 1e-12);
    report.statistics = {{"fraction_preserved", fraction},
                         {"regime_sigma", regime},
                         {"sigma_over_regime", regime > 0.0 ? sigma / regime : 0.0},
                         {"in_regime", in_regime ? 1.0 : 0.0},
                         {"required_fraction", 0.95}};
    if (in_regime) {
        report.pass = trials > 0 && fraction >= 0.95;
    } else {
        report.notes.push_back("sigma above the c = 0.05 regime: fraction reported without a pass criterion");
        report.pass = true;
    }
    return report;
}

VerifyReport check_spectral_norm_bound(std::size_t n, std::size_t d, double sigma, std::size_t trials,
                                       std::uint64_t seed, const BoundConstants& constants) {
    if (n < 1 || d < 1 || !(sigma >= 0.0)) {
        throw InvalidArgument("check_spectral_norm_bound: need n, d >= 1 and sigma >= 0");
    }
    VerifyReport report;
    report.check_name = "spectral-norm";
    report.params = {{"n", double(n)}, {"d", double(d)}, {"sigma", sigma}, {"trials", double(trials)},
                     {"seed", double(seed)}, {"c_eta", constants.c_eta}};
    constexpr std::size_t kSubsets = 3;
    const double bound = 3.0 * sigma * std::sqrt(static_cast<double>(std::max(n, d)));

    struct Outcome {
        double norm = 0.0;
        std::size_t subset_checks = 0;
        std::size_t subset_violations = 0;
        double max_subset_ratio = 0.0;
    };
    std::vector<Outcome> outcomes(trials);
    const Rng root(seed);
    parallel_for(trials, [&](std::size_t t) {
        Rng rng = root.derive(t);
        const DenseMatrix noise = gaussian_matrix(rng, n, d, sigma);
        Outcome& o = outcomes[t];
        o.norm = spectral_norm(noise);
        if (n <= d || sigma == 0.0) {
            return;
        }
        for (std::size_t s = 0; s < kSubsets; ++s) {
            const std::size_t size = d + rng.below(n - d + 1);
            std::vector<std::size_t> rows(n);
            std::iota(rows.begin(), rows.end(), std::size_t{0});
            for (std::size_t i = 0; i < size; ++i) {
                std::swap(rows[i], rows[i + rng.below(n - i)]);
            }
            DenseMatrix sub(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(d));
            for (std::size_t i = 0; i < size; ++i) {
                sub.row(static_cast<Eigen::Index>(i)) = noise.row(static_cast<Eigen::Index>(rows[i]));
            }
            const double limit = constants.c_eta * sigma * std::sqrt(static_cast<double>(size) * log_n(n));
            const double norm = spectral_norm(sub);
            ++o.subset_checks;
            o.subset_violations += norm > limit ? 1 : 0;
            o.max_subset_ratio = std::max(o.max_subset_ratio, norm / limit);
        }
    });

    std::size_t subset_checks = 0;
    std::size_t subset_violations = 0;
    double max_ratio = 0.0;
    double max_subset_ratio = 0.0;
    for (const auto& o : outcomes) {
        report.failures += o.norm > bound ? 1 : 0;
        if (bound > 0.0) max_ratio = std::max(max_ratio, o.norm / bound);
        subset_checks += o.subset_checks;
        subset_violations += o.subset_violations;
        max_subset_ratio = std::max(max_subset_ratio, o.max_subset_ratio);
    }
    report.trials = trials;
    const double violation_rate = trials > 0 ? static_cast<double>(report.failures) / static_cast<double>(trials) : 0.0;
    const double subset_rate =
        subset_checks > 0 ? static_cast<double>(subset_violations) / static_cast<double>(subset_checks) : 0.0;
    report.statistics = {{"bound", bound},
                         {"max_ratio_norm_to_bound", max_ratio},
                         {"violation_rate", violation_rate},
                         {"subset_checks", double(subset_checks)},
                         {"subset_violations", double(subset_violations)},
                         {"subset_violation_rate", subset_rate},
                         {"max_subset_ratio", max_subset_ratio}};
    report.pass = violation_rate <= 0.02 && subset_rate <= 0.02;
    return report;
}

VerifyReport check_iterpca_diagnostics(const NoisyInstance& instance, const IterPcaIndex& index,
                                       const BoundConstants& constants) {
    const auto& base = instance.base;
    const auto n = static_cast<std::size_t>(index.points().rows());
    const auto d = static_cast<std::size_t>(index.points().cols());
    const std::size_t k = base.params.k;
    const double eps = base.params.epsilon;
    const double sigma = instance.mode == NoiseMode::adversarial_bounded ? 0.0 : instance.sigma;

    VerifyReport report;
    report.check_name = "iterpca-diagnostics";
    report.params = {{"n", double(n)},         {"d", double(d)},
                     {"k", double(k)},         {"epsilon", eps},
                     {"sigma", sigma},         {"c_sin", constants.c_sin},
                     {"c_iter", constants.c_iter}, {"eta_min_factor", constants.eta_min_factor},
                     {"projection_slack", constants.projection_slack}};

    const double sin_bound = sin_theta_bound(constants.c_sin, sigma, k, n, eps) + 1e-8;
    const double length_bound = static_cast<double>(d) * sigma * sigma + constants.projection_slack * eps * eps;
    const double layer_cap = constants.c_iter * std::sqrt(static_cast<double>(d) * log_n(n));
    const double eta_min = constants.eta_min_factor * std::sqrt(log_n(n) / static_cast<double>(d));
    const bool orthogonal = instance.mode == NoiseMode::orthogonal_gaussian;
    const bool threshold_mode = index.variant() == IterPcaVariant::warmup ||
                                index.params().capture_mode == CaptureMode::threshold_psi;

    std::size_t sin_failures = 0;
    std::size_t length_failures = 0;
    std::size_t noise_failures = 0;
    std::size_t certificate_failures = 0;
    double max_sin = 0.0;
    double max_length_excess = -std::numeric_limits<double>::infinity();
    double max_noise_ratio = 0.0;
    for (const auto& layer : index.layers()) {
        const double s = sin_theta(layer.subspace, base.subspace);
        max_sin = std::max(max_sin, s);
        sin_failures += s > sin_bound ? 1 : 0;
        for (const PointId id : layer.members) {
            const auto row = static_cast<Eigen::Index>(id);
            const Vector noisy = index.points().row(row).transpose();
            const Vector clean = base.points.row(row).transpose();
            const double excess = layer.subspace.coords(noisy).squaredNorm() - clean.squaredNorm();
            max_length_excess = std::max(max_length_excess, excess);
            if (orthogonal) length_failures += excess > length_bound ? 1 : 0;
            if (threshold_mode) {
                const double dist = dist_to_subspace(noisy, layer.subspace);
                certificate_failures += dist * dist > index.capture_radius2() + kSlack ? 1 : 0;
            }
            if (orthogonal) {
                const Vector t = instance.noise.row(row).transpose();
                const double inside = layer.subspace.coords(t).norm();
                const double limit = t.norm() * s + kSlack;
                noise_failures += inside > limit ? 1 : 0;
                if (t.norm() * s > 0.0) max_noise_ratio = std::max(max_noise_ratio, inside / (t.norm() * s));
            }
        }
    }

    std::size_t fraction_failures = 0;
    double min_fraction = 1.0;
    for (const auto& it : index.iterations()) {
        if (it.m == 0 || it.survivors == 0) continue;
        const double fraction = static_cast<double>(it.captured) / static_cast<double>(it.survivors);
        min_fraction = std::min(min_fraction, fraction);
        fraction_failures += fraction < eta_min ? 1 : 0;
    }
    const bool layers_ok = static_cast<double>(index.layers().size()) <= layer_cap;

    report.trials = index.layers().size();
    report.failures = sin_failures + length_failures + noise_failures + certificate_failures + fraction_failures +
                      (layers_ok ? 0 : 1);
    report.statistics = {{"layers", double(index.layers().size())},
                         {"layer_cap", layer_cap},
                         {"leftover", double(index.leftover().size())},
                         {"max_sin_theta", max_sin},
                         {"sin_theta_bound", sin_bound},
                         {"sin_theta_failures", double(sin_failures)},
                         {"max_length_excess", index.layers().empty() ? 0.0 : max_length_excess},
                         {"length_bound", length_bound},
                         {"length_failures", double(length_failures)},
                         {"length_checked", orthogonal ? 1.0 : 0.0},
                         {"certificate_failures", double(certificate_failures)},
                         {"min_capture_fraction", min_fraction},
                         {"eta_min", eta_min},
                         {"capture_fraction_failures", double(fraction_failures)},
                         {"noise_projection_checked", orthogonal ? 1.0 : 0.0},
                         {"noise_projection_failures", double(noise_failures)},
                         {"max_noise_projection_ratio", max_noise_ratio},
                         {"m_capped_iterations", double(index.m_capped_count())}};
    report.notes.push_back("in-subspace length bound uses additive slack " +
                           std::to_string(constants.projection_slack) + " eps^2 in place of 0.0001 eps^2");
    if (!orthogonal) {
        report.notes.push_back("in-subspace length bound reported only: it relies on noise orthogonal to U");
    }
    report.pass = report.failures == 0;
    return report;
}

VerifyReport check_pcatree_diagnostics(const NoisyInstance& instance, const PcaTree& tree,
                                       const BoundConstants& constants) {
    const auto& base = instance.base;
    const auto n = static_cast<std::size_t>(tree.points().rows());
    const std::size_t k = base.params.k;
    const double eps = base.params.epsilon;
    const double sigma = instance.mode == NoiseMode::adversarial_bounded ? 0.0 : instance.sigma;

    VerifyReport report;
    report.check_name = "pcatree-diagnostics";
    report.params = {{"n", double(n)}, {"d", double(tree.points().cols())}, {"k", double(k)},
                     {"epsilon", eps}, {"sigma", sigma}, {"c_gamma", constants.c_gamma}};

    const double gamma = heaviness_bound(constants.c_gamma, sigma, k, n, eps) + 1e-8;
    double max_heaviness = 0.0;
    std::size_t heavy_failures = 0;
    std::size_t internal = 0;
    const DenseMatrix& u = base.subspace.basis();
    for (const auto& node : tree.nodes()) {
        if (node.is_leaf()) continue;
        ++internal;
        const Vector perp = node.direction - u.transpose() * (u * node.direction);
        max_heaviness = std::max(max_heaviness, perp.norm());
        heavy_failures += perp.norm() > gamma ? 1 : 0;
    }

    // Pairwise orthogonality of directions along every root-to-leaf path.
    double max_inner = 0.0;
    std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>> stack{{0, {}}};
    while (!stack.empty()) {
        auto [node_index, path] = std::move(stack.back());
        stack.pop_back();
        const auto& node = tree.nodes()[node_index];
        if (node.is_leaf()) continue;
        for (std::uint32_t ancestor : path) {
            max_inner = std::max(max_inner, std::abs(tree.nodes()[ancestor].direction.dot(node.direction)));
        }
        path.push_back(node_index);
        for (const auto& [slab, child] : node.children) {
            stack.emplace_back(child, path);
        }
    }

    const auto& removed = tree.declump_removed();
    const bool planted_removed = std::binary_search(removed.begin(), removed.end(), base.planted_index);
    const bool depth_ok = tree.depth() <= 2 * k;
    const bool orthogonal_ok = max_inner <= 1e-8;

    report.trials = internal;
    report.failures = heavy_failures + (depth_ok ? 0 : 1) + (planted_removed ? 1 : 0) + (orthogonal_ok ? 0 : 1);
    report.statistics = {{"depth", double(tree.depth())},
                         {"depth_bound", double(2 * k)},
                         {"nodes", double(tree.nodes().size())},
                         {"max_direction_perp_norm", max_heaviness},
                         {"heaviness_bound", gamma},
                         {"heaviness_failures", double(heavy_failures)},
                         {"declump_events", double(tree.declump_events())},
                         {"declump_removed", double(removed.size())},
                         {"planted_removed", planted_removed ? 1.0 : 0.0},
                         {"max_path_inner_product", max_inner}};
    report.pass = report.failures == 0;
    return report;
}

}  // namespace snns
