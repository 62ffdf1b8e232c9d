#pragma once

#include "snns/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace snns {

enum class Geometry { random_cluster, sparse_direction };
enum class NoiseMode { full_gaussian, orthogonal_gaussian, adversarial_bounded };
enum class Adversary { none, toward_query, random_direction };

std::string_view to_string(Geometry g);
std::string_view to_string(NoiseMode m);
std::string_view to_string(Adversary a);
Geometry parse_geometry(std::string_view s);
NoiseMode parse_noise_mode(std::string_view s);
Adversary parse_adversary(std::string_view s);

struct PlantedParams {
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t k = 0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    Geometry geometry = Geometry::random_cluster;
};

/// Clean points P inside a k-dimensional subspace U together with a query q
/// and the index of its planted neighbor: ||q - p*|| <= 1 and every other
/// point is at least 1 + epsilon (plus a 1e-6 margin) away from q.
struct PlantedInstance {
    PlantedParams params;
    Subspace subspace;
    DenseMatrix points;
    Vector query;
    std::size_t planted_index = 0;
};

/// A planted instance after perturbation: noisy_points = points + noise and
/// noisy_query = query + query_noise, exactly.
struct NoisyInstance {
    PlantedInstance base;
    NoiseMode mode = NoiseMode::full_gaussian;
    Adversary adversary = Adversary::none;
    double sigma = 0.0;
    std::uint64_t noise_seed = 0;
    DenseMatrix noisy_points;
    Vector noisy_query;
    DenseMatrix noise;
    Vector query_noise;
};

/// Margin kept between the far points and the 1 + epsilon sphere around q.
inline constexpr double kGapMargin = 1e-6;

PlantedInstance gen_planted(const PlantedParams& params);

NoisyInstance perturb_gaussian(const PlantedInstance& inst, double sigma, bool orthogonal, std::uint64_t seed);

/// Bounded adversarial noise of norm exactly epsilon / 16 on every point and
/// on the query.
NoisyInstance perturb_adversarial(const PlantedInstance& inst, Adversary adversary, std::uint64_t seed);

inline double adversarial_radius(double epsilon) { return epsilon / 16.0; }

/// sigma = c * epsilon / (d ln n)^(1/4): the regime in which the nearest
/// neighbor survives the perturbation.
double auto_sigma(std::size_t n, std::size_t d, double epsilon, double c = 0.05);

/// kappa * min{eps / sqrt(k ln n), eps / (sqrt(k) (d ln n)^(1/4))}.
double tree_sigma_bound(std::size_t n, std::size_t d, std::size_t k, double epsilon, double kappa);

}  // namespace snns
