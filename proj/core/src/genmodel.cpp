#include "snns/genmodel.hpp"

#include "snns/error.hpp"
#include "snns/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace snns {

namespace {

constexpr int kRestarts = 50;
constexpr int kAttemptsPerPoint = 4000;

Vector gaussian_vector(Rng& rng, std::size_t dim) {
    Vector v(static_cast<Eigen::Index>(dim));
    for (auto& x : v) {
        x = rng.normal();
    }
    return v;
}

Vector unit_vector(Rng& rng, std::size_t dim) {
    while (true) {
        Vector v = gaussian_vector(rng, dim);
        const double norm = v.norm();
        if (norm > 1e-12) {
            return v / norm;
        }
    }
}

// Applies the norm floor (radial push to the unit sphere) and the L = d/2
// ceiling. Returns false when the point must be redrawn.
bool admit_norm(Vector& x, double max_norm) {
    const double norm = x.norm();
    if (norm < 1e-12 || norm > max_norm) {
        return false;
    }
    if (norm < 1.0) {
        x /= norm;
    }
    return true;
}

// Generates points in U-coordinates (R^k). Returns false if the sampler got
// stuck, in which case the caller restarts with fresh randomness.
class CoordinateSampler {
public:
    CoordinateSampler(const PlantedParams& p, Rng& rng) : p_(p), rng_(rng), max_norm_(static_cast<double>(p.d) / 2.0) {
        const double n = static_cast<double>(p.n);
        const double k = static_cast<double>(p.k);
        spread_ = std::min(max_norm_, 2.0 * (1.0 + p.epsilon) * std::pow(n, 1.0 / k));
        if (p.geometry == Geometry::random_cluster) {
            const std::size_t clusters = std::clamp<std::size_t>((p.n + 199) / 200, 1, 16);
            for (std::size_t c = 0; c < clusters; ++c) {
                const double radius = spread_ * std::pow(rng_.uniform(), 1.0 / k);
                centers_.push_back(unit_vector(rng_, p.k) * radius);
            }
        }
    }

    Vector draw_regular() {
        const double width = 1.0 + p_.epsilon;
        if (p_.geometry == Geometry::random_cluster) {
            const Vector& c = centers_[rng_.below(centers_.size())];
            return c + gaussian_vector(rng_, p_.k) * width;
        }
        Vector x = gaussian_vector(rng_, p_.k) * kJitter;
        x(0) = rng_.uniform(-spread_, spread_);
        return x;
    }

    // A point off the dense line: shares the query's first coordinate and
    // lies along one of the remaining directions.
    Vector draw_sparse(const Vector& query, std::size_t which) {
        Vector x = gaussian_vector(rng_, p_.k) * kJitter;
        x(0) = query(0) + rng_.normal() * kJitter;
        const auto axis = static_cast<Eigen::Index>(1 + which % (p_.k - 1));
        const double low = 1.0 + p_.epsilon + 0.01;
        const double high = std::max(low + 1.0, spread_);
        const double magnitude = rng_.uniform(low, high);
        x(axis) += rng_.uniform() < 0.5 ? -magnitude : magnitude;
        return x;
    }

    double max_norm() const { return max_norm_; }

private:
    static constexpr double kJitter = 0.05;
    const PlantedParams& p_;
    Rng& rng_;
    double max_norm_;
    double spread_;
    std::vector<Vector> centers_;
};

bool try_generate(const PlantedParams& p, Rng& rng, std::vector<Vector>& coords, Vector& query) {
    CoordinateSampler sampler(p, rng);
    const double far = 1.0 + p.epsilon + kGapMargin;

    Vector planted;
    bool placed = false;
    for (int a = 0; a < kAttemptsPerPoint && !placed; ++a) {
        planted = sampler.draw_regular();
        placed = admit_norm(planted, sampler.max_norm());
    }
    if (!placed) {
        return false;
    }
    const Vector offset_dir = p.geometry == Geometry::sparse_direction
                                  ? Vector::Unit(static_cast<Eigen::Index>(p.k), 0)
                                  : unit_vector(rng, p.k);
    query = planted + offset_dir * rng.uniform(0.25, 1.0);

    const std::size_t sparse_count =
        p.geometry == Geometry::sparse_direction && p.k > 1
            ? static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(p.n))))
            : 0;
    coords.assign(1, planted);
    for (std::size_t i = 1; i < p.n; ++i) {
        const bool sparse = i <= sparse_count;
        bool ok = false;
        Vector x;
        for (int a = 0; a < kAttemptsPerPoint && !ok; ++a) {
            x = sparse ? sampler.draw_sparse(query, i) : sampler.draw_regular();
            ok = admit_norm(x, sampler.max_norm()) && (x - query).norm() >= far;
        }
        if (!ok) {
            return false;
        }
        coords.push_back(std::move(x));
    }
    return true;
}

}  // namespace

std::string_view to_string(Geometry g) {
    return g == Geometry::random_cluster ? "random-cluster" : "sparse-direction-adversarial";
}

std::string_view to_string(NoiseMode m) {
    switch (m) {
        case NoiseMode::full_gaussian: return "full-gaussian";
        case NoiseMode::orthogonal_gaussian: return "orthogonal-gaussian";
        case NoiseMode::adversarial_bounded: return "adversarial-bounded";
    }
    return "unknown";
}

std::string_view to_string(Adversary a) {
    switch (a) {
        case Adversary::none: return "none";
        case Adversary::toward_query: return "toward-query";
        case Adversary::random_direction: return "random-direction";
    }
    return "unknown";
}

Geometry parse_geometry(std::string_view s) {
    if (s == "random-cluster") return Geometry::random_cluster;
    if (s == "sparse-direction-adversarial" || s == "sparse-direction") return Geometry::sparse_direction;
    throw InvalidArgument("unknown geometry: " + std::string(s));
}

NoiseMode parse_noise_mode(std::string_view s) {
    if (s == "full-gaussian") return NoiseMode::full_gaussian;
    if (s == "orthogonal-gaussian") return NoiseMode::orthogonal_gaussian;
    if (s == "adversarial-bounded") return NoiseMode::adversarial_bounded;
    throw InvalidArgument("unknown noise mode: " + std::string(s));
}

Adversary parse_adversary(std::string_view s) {
    if (s == "none") return Adversary::none;
    if (s == "toward-query") return Adversary::toward_query;
    if (s == "random-direction") return Adversary::random_direction;
    throw InvalidArgument("unknown adversary: " + std::string(s));
}

PlantedInstance gen_planted(const PlantedParams& p) {
    if (p.k < 1 || p.k >= p.d) {
        throw InvalidArgument("gen_planted: need 1 <= k < d");
    }
    if (p.n < 2) {
        throw InvalidArgument("gen_planted: need n >= 2");
    }
    if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) {
        throw InvalidArgument("gen_planted: need 0 < epsilon < 1");
    }

    Rng root(p.seed);
    Rng basis_rng = root.derive(0);
    DenseMatrix raw(static_cast<Eigen::Index>(p.k), static_cast<Eigen::Index>(p.d));
    for (auto& x : raw.reshaped()) {
        x = basis_rng.normal();
    }
    Subspace u = Subspace::span_of(raw);

    std::vector<Vector> coords;
    Vector query_coords;
    bool done = false;
    for (int attempt = 0; attempt < kRestarts && !done; ++attempt) {
        Rng rng = root.derive(1 + static_cast<std::uint64_t>(attempt));
        done = try_generate(p, rng, coords, query_coords);
    }
    if (!done) {
        throw InvalidArgument("gen_planted: could not place points under the gap and norm constraints; "
                              "parameters look infeasible");
    }

    // coords[0] is the planted point; scatter it to a random position.
    Rng order_rng = root.derive(1000);
    std::vector<std::size_t> position(p.n);
    std::iota(position.begin(), position.end(), 0);
    for (std::size_t i = p.n - 1; i > 0; --i) {
        std::swap(position[i], position[order_rng.below(i + 1)]);
    }

    DenseMatrix points(static_cast<Eigen::Index>(p.n), static_cast<Eigen::Index>(p.d));
    for (std::size_t i = 0; i < p.n; ++i) {
        points.row(static_cast<Eigen::Index>(position[i])) = coords[i].transpose() * u.basis();
    }
    Vector query = u.basis().transpose() * query_coords;

    return PlantedInstance{p, std::move(u), std::move(points), std::move(query), position[0]};
}

NoisyInstance perturb_gaussian(const PlantedInstance& inst, double sigma, bool orthogonal, std::uint64_t seed) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw InvalidArgument("perturb_gaussian: sigma must be a finite non-negative number");
    }
    const auto n = inst.points.rows();
    const auto d = inst.points.cols();
    Rng rng(seed);
    Rng point_rng = rng.derive(0);
    Rng query_rng = rng.derive(1);

    NoisyInstance out;
    out.base = inst;
    out.mode = orthogonal ? NoiseMode::orthogonal_gaussian : NoiseMode::full_gaussian;
    out.sigma = sigma;
    out.noise_seed = seed;
    out.noise = DenseMatrix(n, d);
    for (auto& x : out.noise.reshaped<Eigen::RowMajor>()) {
        x = sigma * point_rng.normal();
    }
    out.query_noise = Vector(d);
    for (auto& x : out.query_noise) {
        x = sigma * query_rng.normal();
    }
    if (orthogonal) {
        const DenseMatrix& b = inst.subspace.basis();
        out.noise -= (out.noise * b.transpose()) * b;
        out.query_noise -= b.transpose() * (b * out.query_noise);
    }
    out.noisy_points = inst.points + out.noise;
    out.noisy_query = inst.query + out.query_noise;
    return out;
}

NoisyInstance perturb_adversarial(const PlantedInstance& inst, Adversary adversary, std::uint64_t seed) {
    if (adversary == Adversary::none) {
        throw InvalidArgument("perturb_adversarial: an adversary must be chosen");
    }
    const double alpha = adversarial_radius(inst.params.epsilon);
    const auto n = inst.points.rows();
    const auto d = inst.points.cols();
    const std::size_t ambient = static_cast<std::size_t>(d);

    NoisyInstance out;
    out.base = inst;
    out.mode = NoiseMode::adversarial_bounded;
    out.adversary = adversary;
    out.noise_seed = seed;
    out.noise = DenseMatrix(n, d);

    const Vector fallback = inst.subspace.basis().row(0).transpose();
    auto toward = [&](const Vector& from, const Vector& to) -> Vector {
        const Vector diff = to - from;
        const double norm = diff.norm();
        return norm > 0.0 ? Vector(diff * (alpha / norm)) : Vector(fallback * alpha);
    };

    if (adversary == Adversary::toward_query) {
        const Vector planted = inst.points.row(static_cast<Eigen::Index>(inst.planted_index)).transpose();
        for (Eigen::Index i = 0; i < n; ++i) {
            const Vector p = inst.points.row(i).transpose();
            const bool is_planted = static_cast<std::size_t>(i) == inst.planted_index;
            // Far points approach the query, the planted point retreats.
            out.noise.row(i) = (is_planted ? toward(inst.query, p) : toward(p, inst.query)).transpose();
        }
        out.query_noise = toward(planted, inst.query);
    } else {
        Rng rng(seed);
        Rng point_rng = rng.derive(0);
        for (Eigen::Index i = 0; i < n; ++i) {
            out.noise.row(i) = (unit_vector(point_rng, ambient) * alpha).transpose();
        }
        Rng query_rng = rng.derive(1);
        out.query_noise = unit_vector(query_rng, ambient) * alpha;
    }
    out.noisy_points = inst.points + out.noise;
    out.noisy_query = inst.query + out.query_noise;
    return out;
}

double auto_sigma(std::size_t n, std::size_t d, double epsilon, double c) {
    const double scale = static_cast<double>(d) * std::log(static_cast<double>(n));
    return c * epsilon / std::pow(scale, 0.25);
}

double tree_sigma_bound(std::size_t n, std::size_t d, std::size_t k, double epsilon, double kappa) {
    const double log_n = std::log(static_cast<double>(n));
    const double sqrt_k = std::sqrt(static_cast<double>(k));
    const double first = epsilon / std::sqrt(static_cast<double>(k) * log_n);
    const double second = epsilon / (sqrt_k * std::pow(static_cast<double>(d) * log_n, 0.25));
    return kappa * std::min(first, second);
}

}  // namespace snns
