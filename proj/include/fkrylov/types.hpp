#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace fkrylov {

using cx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

// Raised when a recursion detects numerical loss it cannot recover from
// (e.g. |alpha| > 1 + tol), with a human-readable diagnostic.
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// <u|v> with the physics convention: antilinear in the first argument.
inline cx inner(const Vector& u, const Vector& v) { return u.dot(v); }

// A d-dimensional unitary, either dense or given by applicators for U v
// and U^dag v. Spin-chain models use the matrix-free form to avoid
// materializing 2^L x 2^L matrices.
class UnitaryOperator {
  public:
    using Applicator = std::function<Vector(const Vector&)>;

    UnitaryOperator() = default;

    explicit UnitaryOperator(Matrix dense, std::string name = {})
        : dim_(dense.rows()), dense_(std::move(dense)), name_(std::move(name)) {
        if (dense_.rows() != dense_.cols()) throw std::invalid_argument("UnitaryOperator: matrix not square");
    }

    UnitaryOperator(Index dim, Applicator apply, Applicator apply_adjoint, std::string name = {})
        : dim_(dim), apply_(std::move(apply)), apply_adjoint_(std::move(apply_adjoint)),
          name_(std::move(name)) {}

    Index dim() const { return dim_; }
    bool is_dense() const { return dense_.size() > 0; }
    const std::string& name() const { return name_; }

    Vector apply(const Vector& v) const {
        return is_dense() ? Vector(dense_ * v) : apply_(v);
    }
    Vector apply_adjoint(const Vector& v) const {
        return is_dense() ? Vector(dense_.adjoint() * v) : apply_adjoint_(v);
    }

    const Matrix& dense() const {
        if (!is_dense()) throw std::logic_error("UnitaryOperator: no dense storage");
        return dense_;
    }

    // Applies the operator to every basis vector. Only for small dimensions.
    Matrix materialize() const {
        if (is_dense()) return dense_;
        Matrix out(dim_, dim_);
        Vector e = Vector::Zero(dim_);
        for (Index j = 0; j < dim_; ++j) {
            e(j) = 1.0;
            out.col(j) = apply_(e);
            e(j) = 0.0;
        }
        return out;
    }

    // ||U v|| = ||v|| and U^dag U v = v on a random-ish probe vector.
    double unitarity_defect(const Vector& probe) const {
        Vector uv = apply(probe);
        Vector round_trip = apply_adjoint(uv);
        double norm_defect = std::abs(uv.norm() - probe.norm());
        return std::max(norm_defect, (round_trip - probe).norm());
    }

  private:
    Index dim_ = 0;
    Matrix dense_;
    Applicator apply_, apply_adjoint_;
    std::string name_;
};

class HermitianOperator {
  public:
    using Applicator = std::function<Vector(const Vector&)>;

    HermitianOperator() = default;

    explicit HermitianOperator(Matrix dense, std::string name = {})
        : dim_(dense.rows()), dense_(std::move(dense)), name_(std::move(name)) {
        if (dense_.rows() != dense_.cols()) throw std::invalid_argument("HermitianOperator: matrix not square");
    }

    HermitianOperator(Index dim, Applicator apply, std::string name = {})
        : dim_(dim), apply_(std::move(apply)), name_(std::move(name)) {}

    Index dim() const { return dim_; }
    bool is_dense() const { return dense_.size() > 0; }
    const std::string& name() const { return name_; }

    Vector apply(const Vector& v) const {
        return is_dense() ? Vector(dense_ * v) : apply_(v);
    }

    const Matrix& dense() const {
        if (!is_dense()) throw std::logic_error("HermitianOperator: no dense storage");
        return dense_;
    }

    // |<u|Hv> - conj(<v|Hu>)| on a probe pair.
    double hermiticity_defect(const Vector& u, const Vector& v) const {
        return std::abs(inner(u, apply(v)) - std::conj(inner(v, apply(u))));
    }

  private:
    Index dim_ = 0;
    Matrix dense_;
    Applicator apply_;
    std::string name_;
};

} // namespace fkrylov
