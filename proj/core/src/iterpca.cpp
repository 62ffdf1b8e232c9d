#include "snns/iterpca.hpp"

#include "snns/error.hpp"
#include "snns/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace snns {

namespace {

DenseMatrix gather_rows(const DenseMatrix& points, const std::vector<PointId>& ids) {
    DenseMatrix out(static_cast<Eigen::Index>(ids.size()), points.cols());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = points.row(static_cast<Eigen::Index>(ids[i]));
    }
    return out;
}

// Squared distance of each row of `rows` to the subspace.
Vector residual_norms2(const DenseMatrix& rows, const Subspace& s) {
    if (s.dim() == 0) {
        return rows.rowwise().squaredNorm();
    }
    const DenseMatrix coords = rows * s.basis().transpose();
    return (rows - coords * s.basis()).rowwise().squaredNorm();
}

void check_points(const DenseMatrix& points, std::size_t k) {
    if (points.rows() < 1 || points.cols() < 1) {
        throw InvalidArgument("index construction needs at least one point");
    }
    require_finite(points, "dataset");
    if (k < 1 || k > static_cast<std::size_t>(points.cols())) {
        throw InvalidArgument("k must satisfy 1 <= k <= d");
    }
}

}  // namespace

std::string_view to_string(CaptureMode mode) {
    return mode == CaptureMode::threshold_psi ? "threshold-psi" : "fraction-eta";
}

CaptureMode parse_capture_mode(std::string_view s) {
    if (s == "threshold-psi") return CaptureMode::threshold_psi;
    if (s == "fraction-eta") return CaptureMode::fraction_eta;
    throw InvalidArgument("unknown capture mode: " + std::string(s));
}

double capture_psi(std::size_t d, double sigma, double epsilon) {
    return static_cast<double>(d) * sigma * sigma + 0.001 * epsilon * epsilon;
}

double singular_threshold(double c, double epsilon, std::size_t r, std::size_t k) {
    return c * epsilon * std::sqrt(static_cast<double>(r) / static_cast<double>(k));
}

std::size_t default_sample_size(std::size_t n, std::size_t d, std::size_t k) {
    const double kdlogn = static_cast<double>(k) * static_cast<double>(d) * std::log(static_cast<double>(n));
    const auto spectral = static_cast<std::size_t>(std::ceil(kdlogn));
    return std::max(4 * k, std::min(n / 2, spectral));
}

std::size_t iteration_cap(std::size_t n, std::size_t d, double c_iter) {
    const double bound = c_iter * std::sqrt(static_cast<double>(d) * std::log(static_cast<double>(n)));
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(bound)));
}

std::size_t warmup_layer_cap(std::size_t n) {
    std::size_t log2_ceil = 0;
    while ((std::size_t{1} << log2_ceil) < n) {
        ++log2_ceil;
    }
    return log2_ceil + 1;
}

void IterPcaIndex::add_layer(Subspace subspace, std::vector<PointId> members) {
    DenseMatrix coords = project_coords(gather_rows(points_, members), subspace);
    LowDimIndex lowdim(std::move(coords), members);
    layers_.push_back(CapturedLayer{std::move(subspace), std::move(members), std::move(lowdim)});
}

IterPcaIndex IterPcaIndex::assemble(IterPcaVariant variant, IterPcaParams params, DenseMatrix points,
                                    std::vector<std::pair<Subspace, std::vector<PointId>>> layers,
                                    std::vector<PointId> leftover) {
    IterPcaIndex index;
    index.variant_ = variant;
    index.params_ = params;
    index.points_ = std::move(points);
    const auto n = static_cast<std::size_t>(index.points_.rows());
    const auto d = static_cast<std::size_t>(index.points_.cols());

    std::vector<char> seen(n, 0);
    auto claim = [&](PointId id) {
        if (id >= n || seen[id]) {
            throw FormatError("index layers do not partition the point ids");
        }
        seen[id] = 1;
    };
    for (auto& [subspace, members] : layers) {
        if (subspace.ambient_dim() != d) {
            throw FormatError("layer subspace dimension does not match dataset");
        }
        for (PointId id : members) {
            claim(id);
        }
        index.add_layer(std::move(subspace), std::move(members));
    }
    for (PointId id : leftover) {
        claim(id);
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        throw FormatError("index layers do not cover every point id");
    }
    index.leftover_ = std::move(leftover);
    if (variant == IterPcaVariant::warmup) {
        const double alpha = params.epsilon / 16.0;
        index.capture_radius2_ = 2.0 * alpha * alpha;
    } else {
        index.capture_radius2_ = capture_psi(d, params.sigma, params.epsilon);
        index.sample_size_ = params.sample_size;
    }
    return index;
}

SearchResult IterPcaIndex::query(const Vector& q) const {
    if (static_cast<Eigen::Index>(q.size()) != points_.cols()) {
        throw InvalidArgument("query dimension does not match the index");
    }
    SearchResult best;
    bool found = false;
    auto offer = [&](PointId id, double dist) {
        if (!found || dist < best.distance || (dist == best.distance && id < best.id)) {
            best.id = id;
            best.distance = dist;
            found = true;
        }
    };
    for (const auto& layer : layers_) {
        const Neighbor candidate = layer.lowdim.query(layer.subspace.coords(q));
        // Candidates compete on their original d-dimensional distance.
        offer(candidate.id, (points_.row(static_cast<Eigen::Index>(candidate.id)).transpose() - q).norm());
        ++best.visits;
        ++best.scanned;
    }
    if (!leftover_.empty()) {
        const Neighbor scan = scan_nearest(points_, leftover_, q);
        offer(scan.id, scan.distance);
        best.scanned += leftover_.size();
    }
    if (!found) {
        throw InvalidArgument("query on an empty index");
    }
    return best;
}

IterPcaIndex build_warmup(const DenseMatrix& points, std::size_t k, double epsilon) {
    check_points(points, k);
    if (!(epsilon > 0.0)) {
        throw InvalidArgument("epsilon must be positive");
    }
    IterPcaIndex index;
    index.variant_ = IterPcaVariant::warmup;
    index.params_.epsilon = epsilon;
    index.params_.k = k;
    index.points_ = points;
    const double alpha = epsilon / 16.0;
    index.capture_radius2_ = 2.0 * alpha * alpha;

    const auto n = static_cast<std::size_t>(points.rows());
    const std::size_t cap = warmup_layer_cap(n);
    std::vector<PointId> survivors(n);
    std::iota(survivors.begin(), survivors.end(), PointId{0});

    while (!survivors.empty()) {
        if (index.layers_.size() >= cap) {
            throw ModelViolation("model precondition violated: warm-up needs more than " + std::to_string(cap) +
                                 " layers");
        }
        const DenseMatrix rows = gather_rows(points, survivors);
        Subspace subspace = top_subspace(rows, k);
        const Vector dist2 = residual_norms2(rows, subspace);

        IterationRecord record;
        record.survivors = survivors.size();
        record.m_above_threshold = k;
        record.m = k;
        std::vector<PointId> captured;
        std::vector<PointId> rest;
        for (std::size_t i = 0; i < survivors.size(); ++i) {
            if (dist2(static_cast<Eigen::Index>(i)) <= index.capture_radius2_) {
                captured.push_back(survivors[i]);
                record.max_captured_dist2 = std::max(record.max_captured_dist2, dist2(static_cast<Eigen::Index>(i)));
            } else {
                rest.push_back(survivors[i]);
            }
        }
        record.captured = captured.size();
        record.layer_created = true;
        index.iterations_.push_back(record);
        if (captured.empty() || 2 * captured.size() < survivors.size()) {
            throw ModelViolation("model precondition violated: layer " + std::to_string(index.layers_.size()) +
                                 " captured " + std::to_string(captured.size()) + " of " +
                                 std::to_string(survivors.size()) + " points (need at least half)");
        }
        index.add_layer(std::move(subspace), std::move(captured));
        survivors = std::move(rest);
    }
    return index;
}

IterPcaIndex build_iterpca(const DenseMatrix& points, const IterPcaParams& params) {
    check_points(points, params.k);
    if (!(params.epsilon > 0.0) || !(params.sigma >= 0.0) || !(params.c_threshold >= 0.0) || !(params.c_iter > 0.0)) {
        throw InvalidArgument("build_iterpca: epsilon, c_iter must be positive; sigma, c_threshold non-negative");
    }
    const auto n = static_cast<std::size_t>(points.rows());
    const auto d = static_cast<std::size_t>(points.cols());
    const std::size_t k = params.k;

    IterPcaIndex index;
    index.variant_ = IterPcaVariant::sampled;
    index.params_ = params;
    index.points_ = points;
    const std::size_t r = params.sample_size > 0 ? params.sample_size : default_sample_size(n, d, k);
    index.params_.sample_size = r;
    index.sample_size_ = r;
    const double psi = capture_psi(d, params.sigma, params.epsilon);
    index.capture_radius2_ = psi;
    const double delta = singular_threshold(params.c_threshold, params.epsilon, r, k);
    const std::size_t cap = iteration_cap(n, d, params.c_iter);
    double eta = params.eta;
    if (params.capture_mode == CaptureMode::fraction_eta && eta <= 0.0) {
        eta = std::min(1.0, std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(d)));
    }
    index.params_.eta = eta;

    const Rng root(params.seed);
    std::vector<PointId> survivors(n);
    std::iota(survivors.begin(), survivors.end(), PointId{0});
    std::vector<PointId> leftover;
    std::vector<char> in_sample(n, 0);
    int zero_streak = 0;

    while (survivors.size() > r) {
        const std::size_t iteration = index.iterations_.size();
        if (iteration >= cap) {
            throw ModelViolation("model precondition violated: iterative PCA exceeded its iteration cap of " +
                                 std::to_string(cap) + " with " + std::to_string(survivors.size()) +
                                 " points left (layers " + std::to_string(index.layers_.size()) + ")");
        }
        Rng rng = root.derive(iteration);
        DenseMatrix sample(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(d));
        std::vector<PointId> sampled_ids;
        for (std::size_t s = 0; s < r; ++s) {
            const PointId id = survivors[rng.below(survivors.size())];
            sample.row(static_cast<Eigen::Index>(s)) = points.row(static_cast<Eigen::Index>(id));
            if (!in_sample[id]) {
                in_sample[id] = 1;
                sampled_ids.push_back(id);
            }
        }
        std::sort(sampled_ids.begin(), sampled_ids.end());

        IterationRecord record;
        record.survivors = survivors.size();
        record.sampled_distinct = sampled_ids.size();

        const SvdResult decomposition = svd(sample);
        record.m_above_threshold = threshold_count(decomposition.singular_values, delta);
        record.m = std::min(record.m_above_threshold, k);
        if (record.m_above_threshold > k) {
            ++index.m_capped_;
        }

        std::vector<PointId> candidates;
        candidates.reserve(survivors.size() - sampled_ids.size());
        for (PointId id : survivors) {
            if (!in_sample[id]) {
                candidates.push_back(id);
            }
        }
        leftover.insert(leftover.end(), sampled_ids.begin(), sampled_ids.end());

        if (record.m == 0) {
            index.iterations_.push_back(record);
            survivors = std::move(candidates);
            if (++zero_streak == 3) {
                break;
            }
            continue;
        }
        zero_streak = 0;

        Subspace subspace = top_subspace(decomposition, d, record.m);
        const Vector dist2 = residual_norms2(gather_rows(points, candidates), subspace);
        std::vector<char> take(candidates.size(), 0);
        if (params.capture_mode == CaptureMode::threshold_psi) {
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                take[i] = dist2(static_cast<Eigen::Index>(i)) <= psi;
            }
        } else {
            std::vector<std::size_t> order(candidates.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                const double da = dist2(static_cast<Eigen::Index>(a));
                const double db = dist2(static_cast<Eigen::Index>(b));
                return da < db || (da == db && candidates[a] < candidates[b]);
            });
            const auto quota = static_cast<std::size_t>(std::ceil(eta * static_cast<double>(candidates.size())));
            for (std::size_t i = 0; i < std::min(quota, order.size()); ++i) {
                take[order[i]] = 1;
            }
        }

        std::vector<PointId> captured;
        std::vector<PointId> rest;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (take[i]) {
                captured.push_back(candidates[i]);
                record.max_captured_dist2 = std::max(record.max_captured_dist2, dist2(static_cast<Eigen::Index>(i)));
            } else {
                rest.push_back(candidates[i]);
            }
        }
        record.captured = captured.size();
        record.layer_created = !captured.empty();
        index.iterations_.push_back(record);
        if (!captured.empty()) {
            index.add_layer(std::move(subspace), std::move(captured));
        }
        survivors = std::move(rest);
    }

    leftover.insert(leftover.end(), survivors.begin(), survivors.end());
    std::sort(leftover.begin(), leftover.end());
    index.leftover_ = std::move(leftover);
    return index;
}

}  // namespace snns
