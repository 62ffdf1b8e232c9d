#include "snns/linalg.hpp"

#include "snns/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace snns {

namespace {

constexpr double kOrthonormalTolerance = 1e-9;

// Extends the orthonormal rows of `partial` with standard basis vectors
// (Gram-Schmidt, two passes) until it has `target` rows.
DenseMatrix complete_basis(DenseMatrix partial, std::size_t ambient, std::size_t target) {
    const auto have = static_cast<std::size_t>(partial.rows());
    if (have >= target) {
        return partial;
    }
    DenseMatrix out(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(ambient));
    out.topRows(partial.rows()) = partial;
    auto filled = static_cast<Eigen::Index>(have);
    for (std::size_t e = 0; e < ambient && static_cast<std::size_t>(filled) < target; ++e) {
        Vector candidate = Vector::Unit(static_cast<Eigen::Index>(ambient), static_cast<Eigen::Index>(e));
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index r = 0; r < filled; ++r) {
                candidate -= out.row(r).dot(candidate) * out.row(r).transpose();
            }
        }
        const double norm = candidate.norm();
        if (norm > 1e-6) {
            out.row(filled++) = (candidate / norm).transpose();
        }
    }
    return out;
}

}  // namespace

Subspace::Subspace(std::size_t ambient_dim)
    : ambient_dim_(ambient_dim), basis_(0, static_cast<Eigen::Index>(ambient_dim)) {}

Subspace Subspace::from_orthonormal_rows(DenseMatrix basis) {
    const auto m = basis.rows();
    if (m > basis.cols()) {
        throw InvalidArgument("subspace basis has more vectors than the ambient dimension");
    }
    require_finite(basis, "subspace basis");
    if (m > 0) {
        const Eigen::MatrixXd gram = basis * basis.transpose();
        const double err = (gram - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
        if (err > kOrthonormalTolerance) {
            throw InvalidArgument("subspace basis is not orthonormal (error " + std::to_string(err) + ")");
        }
    }
    Subspace s(static_cast<std::size_t>(basis.cols()));
    s.basis_ = std::move(basis);
    return s;
}

Subspace Subspace::span_of(const DenseMatrix& vectors) {
    require_finite(vectors, "spanning vectors");
    const auto m = vectors.rows();
    const auto d = vectors.cols();
    if (m == 0) {
        return Subspace(static_cast<std::size_t>(d));
    }
    if (m > d) {
        throw InvalidArgument("more spanning vectors than the ambient dimension");
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(vectors.transpose());
    const Eigen::MatrixXd r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < m; ++i) {
        if (std::abs(r(i, i)) < 1e-12 * scale) {
            throw InvalidArgument("spanning vectors are linearly dependent");
        }
    }
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, m);
    return from_orthonormal_rows(q.transpose());
}

Subspace Subspace::coordinate(std::size_t ambient_dim, std::size_t m) {
    if (m > ambient_dim) {
        throw InvalidArgument("coordinate subspace larger than ambient dimension");
    }
    const auto d = static_cast<Eigen::Index>(ambient_dim);
    return from_orthonormal_rows(DenseMatrix::Identity(d, d).topRows(static_cast<Eigen::Index>(m)));
}

Vector Subspace::coords(const Vector& x) const {
    if (static_cast<std::size_t>(x.size()) != ambient_dim_) {
        throw InvalidArgument("vector dimension does not match subspace ambient dimension");
    }
    return basis_ * x;
}

Vector Subspace::project(const Vector& x) const {
    return basis_.transpose() * coords(x);
}

void require_finite(const DenseMatrix& m, const char* what) {
    if (!m.allFinite()) {
        throw InvalidArgument(std::string(what) + " contains non-finite entries");
    }
}

SvdResult svd(const DenseMatrix& m, bool with_left) {
    require_finite(m, "svd input");
    const unsigned options = with_left ? unsigned{Eigen::ComputeThinV | Eigen::ComputeThinU} : unsigned{Eigen::ComputeThinV};
    Eigen::BDCSVD<Eigen::MatrixXd> solver(m, options);
    SvdResult out;
    out.singular_values = solver.singularValues();
    out.right_vectors = solver.matrixV();
    if (with_left) {
        out.left_vectors = solver.matrixU();
    }
    return out;
}

Vector singular_values(const DenseMatrix& m) {
    require_finite(m, "svd input");
    if (m.size() == 0) {
        return Vector(0);
    }
    Eigen::BDCSVD<Eigen::MatrixXd> solver(m);
    return solver.singularValues();
}

Subspace top_subspace(const SvdResult& decomposition, std::size_t ambient_dim, std::size_t dim) {
    if (dim > ambient_dim) {
        throw InvalidArgument("requested subspace dimension exceeds column count");
    }
    const auto available = std::min<Eigen::Index>(static_cast<Eigen::Index>(dim),
                                                  decomposition.right_vectors.cols());
    DenseMatrix rows = decomposition.right_vectors.leftCols(available).transpose();
    return Subspace::from_orthonormal_rows(complete_basis(std::move(rows), ambient_dim, dim));
}

Subspace top_subspace(const DenseMatrix& m, std::size_t dim) {
    const auto cols = static_cast<std::size_t>(m.cols());
    if (dim > cols) {
        throw InvalidArgument("requested subspace dimension exceeds column count");
    }
    if (dim == 0) {
        require_finite(m, "svd input");
        return Subspace(cols);
    }
    return top_subspace(svd(m), cols, dim);
}

std::size_t threshold_count(const Vector& singular_values, double delta) {
    if (!(delta >= 0.0)) {
        throw InvalidArgument("threshold must be non-negative");
    }
    return static_cast<std::size_t>(
        std::count_if(singular_values.begin(), singular_values.end(), [delta](double s) { return s >= delta; }));
}

std::size_t threshold_count(const DenseMatrix& m, double delta) {
    return threshold_count(singular_values(m), delta);
}

double sin_theta(const Subspace& b, const Subspace& a) {
    if (b.ambient_dim() != a.ambient_dim()) {
        throw InvalidArgument("sin_theta: ambient dimensions differ");
    }
    if (b.dim() == 0) {
        return 0.0;
    }
    // Rows of `residual` are (I - P_A) applied to each basis vector of B.
    DenseMatrix residual = b.basis();
    if (a.dim() > 0) {
        residual -= (b.basis() * a.basis().transpose()) * a.basis();
    }
    const double s = singular_values(residual)(0);
    return std::clamp(s, 0.0, 1.0);
}

DenseMatrix center(const DenseMatrix& m) {
    if (m.rows() == 0) {
        throw InvalidArgument("center: empty matrix");
    }
    const Eigen::RowVectorXd mean = m.colwise().mean();
    return m.rowwise() - mean;
}

DenseMatrix project_coords(const DenseMatrix& points, const Subspace& s) {
    if (static_cast<std::size_t>(points.cols()) != s.ambient_dim()) {
        throw InvalidArgument("project_coords: ambient dimensions differ");
    }
    return points * s.basis().transpose();
}

double dist_to_subspace(const Vector& x, const Subspace& s) {
    return (x - s.project(x)).norm();
}

double spectral_norm(const DenseMatrix& m) {
    const Vector s = singular_values(m);
    return s.size() == 0 ? 0.0 : s(0);
}

double frobenius_norm(const DenseMatrix& m) {
    return m.norm();
}

}  // namespace snns
