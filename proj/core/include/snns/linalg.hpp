#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>

namespace snns {

/// n x d real matrix, one point per row.
using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Singular values in non-increasing order together with the matching right
/// singular vectors (as columns, d x min(n, d)). Left singular vectors are
/// only filled when requested.
struct SvdResult {
    Vector singular_values;
    Eigen::MatrixXd right_vectors;
    std::optional<Eigen::MatrixXd> left_vectors;
};

/// An orthonormal basis of an m-dimensional subspace of R^d, stored as the
/// rows of an m x d matrix. m may be zero.
class Subspace {
public:
    explicit Subspace(std::size_t ambient_dim = 0);

    /// Takes ownership of `basis`; its rows must be orthonormal to 1e-9.
    static Subspace from_orthonormal_rows(DenseMatrix basis);
    /// Orthonormalizes the rows of `vectors` (which must be independent).
    static Subspace span_of(const DenseMatrix& vectors);
    /// Span of the first `m` standard basis vectors of R^d.
    static Subspace coordinate(std::size_t ambient_dim, std::size_t m);

    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t dim() const { return static_cast<std::size_t>(basis_.rows()); }
    const DenseMatrix& basis() const { return basis_; }

    /// Coordinates of x in this basis (length dim()).
    Vector coords(const Vector& x) const;
    /// Orthogonal projection of x onto the subspace, as a vector of R^d.
    Vector project(const Vector& x) const;

private:
    std::size_t ambient_dim_;
    DenseMatrix basis_;
};

/// Rejects matrices with non-finite entries.
void require_finite(const DenseMatrix& m, const char* what);

SvdResult svd(const DenseMatrix& m, bool with_left = false);
Vector singular_values(const DenseMatrix& m);

/// Span of the m top right singular vectors. When m exceeds min(rows, cols)
/// the basis is completed with a deterministic orthonormal extension.
Subspace top_subspace(const DenseMatrix& m, std::size_t dim);
Subspace top_subspace(const SvdResult& decomposition, std::size_t ambient_dim, std::size_t dim);

/// Number of singular values >= delta (inclusive).
std::size_t threshold_count(const Vector& singular_values, double delta);
std::size_t threshold_count(const DenseMatrix& m, double delta);

/// sin theta(B, A) = max over unit x in B of dist(x, A). Zero for empty B.
double sin_theta(const Subspace& b, const Subspace& a);

DenseMatrix center(const DenseMatrix& m);
DenseMatrix project_coords(const DenseMatrix& points, const Subspace& s);
double dist_to_subspace(const Vector& x, const Subspace& s);

double spectral_norm(const DenseMatrix& m);
double frobenius_norm(const DenseMatrix& m);

}  // namespace snns
