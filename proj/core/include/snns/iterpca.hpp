#pragma once

#include "snns/kdnns.hpp"
#include "snns/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace snns {

enum class IterPcaVariant { warmup, sampled };
enum class CaptureMode { threshold_psi, fraction_eta };

std::string_view to_string(CaptureMode mode);
CaptureMode parse_capture_mode(std::string_view s);

struct IterPcaParams {
    double epsilon = 0.1;
    double sigma = 0.0;
    std::size_t k = 1;
    /// Points sampled (with replacement) per iteration; 0 selects
    /// default_sample_size().
    std::size_t sample_size = 0;
    /// The constant c of the singular-value threshold c * eps * sqrt(r / k).
    double c_threshold = 0.001;
    /// Iteration cap is ceil(c_iter * sqrt(d ln n)).
    double c_iter = 4.0;
    std::uint64_t seed = 0;
    CaptureMode capture_mode = CaptureMode::threshold_psi;
    /// Captured fraction in fraction_eta mode; 0 selects sqrt(ln n / d).
    double eta = 0.0;
};

/// Psi = d sigma^2 + 0.001 eps^2, the squared capture radius.
double capture_psi(std::size_t d, double sigma, double epsilon);
/// delta(r) = c eps sqrt(r / k).
double singular_threshold(double c, double epsilon, std::size_t r, std::size_t k);
/// max(4k, min(floor(n/2), ceil(k d ln n))).
std::size_t default_sample_size(std::size_t n, std::size_t d, std::size_t k);
std::size_t iteration_cap(std::size_t n, std::size_t d, double c_iter);
std::size_t warmup_layer_cap(std::size_t n);

struct CapturedLayer {
    Subspace subspace;
    std::vector<PointId> members;
    LowDimIndex lowdim;
};

/// What happened in one pass of the construction loop.
struct IterationRecord {
    std::size_t survivors = 0;
    std::size_t sampled_distinct = 0;
    std::size_t m_above_threshold = 0;
    std::size_t m = 0;
    std::size_t captured = 0;
    double max_captured_dist2 = 0.0;
    bool layer_created = false;
};

class IterPcaIndex {
public:
    /// Reassembles an index from stored subspaces and id lists, rebuilding
    /// the low-dimensional structures from `points`. Validates the
    /// partition invariant.
    static IterPcaIndex assemble(IterPcaVariant variant, IterPcaParams params, DenseMatrix points,
                                 std::vector<std::pair<Subspace, std::vector<PointId>>> layers,
                                 std::vector<PointId> leftover);

    SearchResult query(const Vector& q) const;

    IterPcaVariant variant() const { return variant_; }
    const IterPcaParams& params() const { return params_; }
    const std::vector<CapturedLayer>& layers() const { return layers_; }
    const std::vector<PointId>& leftover() const { return leftover_; }
    const DenseMatrix& points() const { return points_; }
    const std::vector<IterationRecord>& iterations() const { return iterations_; }
    /// Iterations where more than k singular values cleared the threshold.
    std::size_t m_capped_count() const { return m_capped_; }
    /// Squared capture radius: 2 alpha^2 (warm-up) or Psi.
    double capture_radius2() const { return capture_radius2_; }
    std::size_t sample_size() const { return sample_size_; }

private:
    friend IterPcaIndex build_warmup(const DenseMatrix&, std::size_t, double);
    friend IterPcaIndex build_iterpca(const DenseMatrix&, const IterPcaParams&);

    IterPcaIndex() = default;
    void add_layer(Subspace subspace, std::vector<PointId> members);

    IterPcaVariant variant_ = IterPcaVariant::sampled;
    IterPcaParams params_;
    DenseMatrix points_;
    std::vector<CapturedLayer> layers_;
    std::vector<PointId> leftover_;
    std::vector<IterationRecord> iterations_;
    std::size_t m_capped_ = 0;
    double capture_radius2_ = 0.0;
    std::size_t sample_size_ = 0;
};

/// Bounded-noise construction: repeatedly take the top-k PCA subspace of the
/// survivors and capture everything within sqrt(2) * eps / 16 of it. Throws
/// ModelViolation when a layer captures fewer than half of its survivors.
IterPcaIndex build_warmup(const DenseMatrix& points, std::size_t k, double epsilon);

/// Sampled construction for Gaussian noise. Subspaces are estimated from
/// with-replacement samples whose points are never captured and end up in
/// the exhaustively scanned leftover set.
IterPcaIndex build_iterpca(const DenseMatrix& points, const IterPcaParams& params);

}  // namespace snns
