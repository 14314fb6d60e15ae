#include "molgate/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace molgate {

double hermiticity_residual(const CMatrix& h) {
  if (h.rows() != h.cols()) {
    throw std::invalid_argument("hermiticity_residual: matrix is not square");
  }
  if (h.size() == 0) return 0.0;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_residual(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols())).norm();
}

CMatrix expm_hermitian(const CMatrix& h, double tau) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("expm_hermitian: eigensolver failed");
  }
  const CVector phases =
      (-kI * tau * eig.eigenvalues().cast<Complex>()).array().exp();
  return eig.eigenvectors() * phases.asDiagonal() *
         eig.eigenvectors().adjoint();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::vector<std::vector<Index>> connected_blocks(
    const std::vector<const CMatrix*>& patterns) {
  if (patterns.empty()) return {};
  const Index n = patterns.front()->rows();
  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const CMatrix* m : patterns) {
    if (m->rows() != n || m->cols() != n) {
      throw std::invalid_argument("connected_blocks: shape mismatch");
    }
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        if (i != j && (*m)(i, j) != Complex{}) {
          const Index a = find(i);
          const Index b = find(j);
          if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
      }
    }
  }
  std::vector<std::vector<Index>> blocks;
  std::vector<Index> slot(static_cast<std::size_t>(n), -1);
  for (Index i = 0; i < n; ++i) {
    const Index root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<Index>(blocks.size());
      blocks.emplace_back();
    }
    blocks[slot[root]].push_back(i);
  }
  return blocks;
}

BlockExponential::BlockExponential(const CMatrix& h) : dimension_(h.rows()) {
  if (h.rows() != h.cols()) {
    throw std::invalid_argument("BlockExponential: matrix is not square");
  }
  for (auto& index : connected_blocks({&h})) {
    Block block;
    block.index = std::move(index);
    const auto size = static_cast<Index>(block.index.size());
    if (size == 1) {
      const Index i = block.index.front();
      block.eigenvalues = Eigen::VectorXd::Constant(1, h(i, i).real());
      block.eigenvectors = CMatrix::Identity(1, 1);
    } else {
      const CMatrix sub = h(block.index, block.index);
      Eigen::SelfAdjointEigenSolver<CMatrix> eig(sub);
      if (eig.info() != Eigen::Success) {
        throw std::runtime_error("BlockExponential: eigensolver failed");
      }
      block.eigenvalues = eig.eigenvalues();
      block.eigenvectors = eig.eigenvectors();
    }
    blocks_.push_back(std::move(block));
  }
}

std::size_t BlockExponential::largest_block() const {
  std::size_t best = 0;
  for (const auto& b : blocks_) best = std::max(best, b.index.size());
  return best;
}

BlockExponential::Unitary BlockExponential::exponential(double tau) const {
  Unitary u;
  u.dimension_ = dimension_;
  for (const auto& b : blocks_) {
    const CVector phases =
        (-kI * tau * b.eigenvalues.cast<Complex>()).array().exp();
    if (b.index.size() == 1) {
      u.scalar_index_.push_back(b.index.front());
      u.scalar_phase_.push_back(phases(0));
    } else {
      u.block_index_.push_back(b.index);
      u.block_unitary_.push_back(b.eigenvectors * phases.asDiagonal() *
                                 b.eigenvectors.adjoint());
    }
  }
  return u;
}

void BlockExponential::Unitary::apply(CMatrix& psi) const {
  if (psi.rows() != dimension_) {
    throw std::invalid_argument("BlockExponential::Unitary: row mismatch");
  }
  for (std::size_t s = 0; s < scalar_index_.size(); ++s) {
    psi.row(scalar_index_[s]) *= scalar_phase_[s];
  }
  for (std::size_t b = 0; b < block_index_.size(); ++b) {
    const auto& index = block_index_[b];
    const CMatrix rotated = block_unitary_[b] * psi(index, Eigen::all);
    psi(index, Eigen::all) = rotated;
  }
}

CMatrix BlockExponential::Unitary::dense() const {
  CMatrix out = CMatrix::Identity(dimension_, dimension_);
  apply(out);
  return out;
}

}  // namespace molgate
