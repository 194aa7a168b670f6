#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace scpp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;
using Eigen::Index;

// Contract-failure exceptions, named by the condition they report.
struct InvalidMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidK : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotNormalized : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyData : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateProjection : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateGraph : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateData : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IngestError : std::runtime_error {
  IngestError(const std::string& what, Index row, Index column)
      : std::runtime_error(what), row(row), column(column) {}
  Index row;
  Index column;
};

// Square matrix that is symmetric by construction: the constructor stores
// (M + M^T)/2, so entries(i,j) == entries(j,i) holds bit-exactly.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(const Matrix& m) {
    if (m.rows() != m.cols()) {
      throw DimensionError("SymmetricMatrix: input is not square");
    }
    m_ = 0.5 * (m + m.transpose());
  }

  const Matrix& entries() const { return m_; }
  Index order() const { return m_.rows(); }

  double operator()(Index i, Index j) const { return m_(i, j); }

 private:
  Matrix m_;
};

}  // namespace scpp
