#pragma once

#include <Eigen/Sparse>
#include <memory>

namespace bladepass {

using SparseMat = Eigen::SparseMatrix<double>;

enum class DirectBackend {
  automatic,  // UMFPACK when compiled in, Eigen SparseLU otherwise
  umfpack,
  sparse_lu,
};

// Direct factorization of the mixed saddle operator with a split
// symbolic/numeric interface so Picard iterations re-run only the numeric
// phase on a frozen sparsity pattern.  The matrix passed to analyze() and
// factorize() must outlive the factorization and stay compressed.
class SaddleFactorization {
 public:
  explicit SaddleFactorization(DirectBackend backend = DirectBackend::automatic);
  ~SaddleFactorization();
  SaddleFactorization(SaddleFactorization&&) noexcept;
  SaddleFactorization& operator=(SaddleFactorization&&) noexcept;

  const char* backend_name() const;

  void analyze(const SparseMat& S);
  bool factorize(const SparseMat& S);  // false when the numeric phase fails
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bladepass
