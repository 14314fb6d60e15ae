#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace molgate {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

// Largest entry of |h - h^dagger|.
double hermiticity_residual(const CMatrix& h);

// Frobenius norm of (u^dagger u - I).
double unitarity_residual(const CMatrix& u);

// exp(-i h tau) for Hermitian h, via the spectral decomposition.
CMatrix expm_hermitian(const CMatrix& h, double tau);

CMatrix kron(const CMatrix& a, const CMatrix& b);

// Connected components of the undirected graph whose edges are the
// nonzero entries of any of the given square matrices. Each component is
// returned sorted; components are ordered by their smallest index.
std::vector<std::vector<Index>> connected_blocks(
    const std::vector<const CMatrix*>& patterns);

// A static Hermitian operator stored block-diagonally by its sparsity
// components, so exp(-i h tau) for many tau is cheap to form and apply.
class BlockExponential {
 public:
  explicit BlockExponential(const CMatrix& h);

  class Unitary {
   public:
    // psi <- U psi for a (dimension x k) state matrix.
    void apply(CMatrix& psi) const;
    CMatrix dense() const;

   private:
    friend class BlockExponential;
    Index dimension_ = 0;
    std::vector<Index> scalar_index_;
    std::vector<Complex> scalar_phase_;
    std::vector<std::vector<Index>> block_index_;
    std::vector<CMatrix> block_unitary_;
  };

  Unitary exponential(double tau) const;
  Index dimension() const { return dimension_; }
  std::size_t block_count() const { return blocks_.size(); }
  std::size_t largest_block() const;

 private:
  struct Block {
    std::vector<Index> index;
    Eigen::VectorXd eigenvalues;
    CMatrix eigenvectors;
  };
  Index dimension_ = 0;
  std::vector<Block> blocks_;
};

}  // namespace molgate
