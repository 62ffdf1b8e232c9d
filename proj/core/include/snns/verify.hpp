#pragma once

#include "snns/genmodel.hpp"
#include "snns/iterpca.hpp"
#include "snns/pcatree.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace snns {

/// Constants standing in for the unstated constants of asymptotic bounds.
/// Defaults were calibrated once on desk-scale planted instances (see
/// README); the checks assert the shape of each bound with these values.
struct BoundConstants {
    /// sin theta(layer subspace, U) <= c_sin * sigma k^1.5 sqrt(ln n) / eps.
    double c_sin = 0.01;
    /// layers <= c_iter * sqrt(d ln n).
    double c_iter = 4.0;
    /// ||P_{U-perp} v_x|| <= c_gamma * sigma sqrt(ln n) sqrt(k) / eps.
    double c_gamma = 0.005;
    /// ||T_A|| <= c_eta * sigma sqrt(|A| ln n) for row subsets |A| >= d.
    double c_eta = 3.0;
    /// Per-iteration capture fraction must reach this multiple of sqrt(ln n / d).
    double eta_min_factor = 0.5;
    /// Additive slack (times eps^2) on the in-subspace length bound; the
    /// unrelaxed constant is 0.0001.
    double projection_slack = 0.01;
};

struct VerifyReport {
    std::string check_name;
    std::map<std::string, double> params;
    std::size_t trials = 0;
    std::size_t failures = 0;
    std::size_t skipped = 0;
    std::map<std::string, double> statistics;
    std::vector<std::string> notes;
    bool pass = false;
    bool inconclusive = false;

    std::string to_json() const;
};

/// 3 * sqrt(p (1 - p) / samples).
double monte_carlo_margin(double p, std::size_t samples);

VerifyReport check_wedin(std::size_t n, std::size_t d, std::size_t k, std::size_t m, double sigma,
                         std::size_t trials, std::uint64_t seed);

VerifyReport check_chi_square_tail(std::size_t d, double x, std::size_t samples, std::uint64_t seed);

VerifyReport check_nn_preserved(std::size_t n, std::size_t d, std::size_t k, double epsilon, double sigma,
                                std::size_t trials, std::uint64_t seed);

VerifyReport check_spectral_norm_bound(std::size_t n, std::size_t d, double sigma, std::size_t trials,
                                       std::uint64_t seed, const BoundConstants& constants = {});

VerifyReport check_iterpca_diagnostics(const NoisyInstance& instance, const IterPcaIndex& index,
                                       const BoundConstants& constants = {});

VerifyReport check_pcatree_diagnostics(const NoisyInstance& instance, const PcaTree& tree,
                                       const BoundConstants& constants = {});

/// Bound of the per-layer subspace check: c_sin * sigma k^1.5 sqrt(ln n) / eps.
double sin_theta_bound(double c_sin, double sigma, std::size_t k, std::size_t n, double epsilon);
/// Bound of the direction-heaviness check: c_gamma * sigma sqrt(ln n) sqrt(k) / eps.
double heaviness_bound(double c_gamma, double sigma, std::size_t k, std::size_t n, double epsilon);

}  // namespace snns
