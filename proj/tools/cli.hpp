#pragma once

#include "snns/genmodel.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace snns::cli {

/// Everything needed to regenerate a dataset deterministically.
struct InstanceConfig {
    std::size_t n = 2000;
    std::size_t d = 512;
    std::size_t k = 6;
    double epsilon = 0.3;
    /// A number or "auto".
    std::string sigma = "auto";
    std::uint64_t seed = 1;
    Geometry geometry = Geometry::random_cluster;
    NoiseMode noise = NoiseMode::full_gaussian;
    Adversary adversary = Adversary::toward_query;
};

double resolve_sigma(const InstanceConfig& config);
std::string sigma_rule(const InstanceConfig& config);

/// Planted instance from `seed`, noise from an independent stream derived
/// from the same seed.
NoisyInstance make_instance(const InstanceConfig& config);

/// Runs one command line (args exclude the program name). JSON or CSV goes
/// to `out`, diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace snns::cli
