#include "ebc/linalg.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <Eigen/IterativeLinearSolvers>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ebc {

SparseMatrix from_triplets(int n_rows, int n_cols, std::vector<Triplet> entries,
                           bool symmetric) {
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix A;
  A.n_rows = n_rows;
  A.n_cols = n_cols;
  A.symmetric = symmetric;
  A.row_offsets.assign(n_rows + 1, 0);
  for (std::size_t k = 0; k < entries.size();) {
    const int r = entries[k].row;
    const int c = entries[k].col;
    if (r < 0 || r >= n_rows || c < 0 || c >= n_cols) {
      throw std::invalid_argument("from_triplets: index out of range");
    }
    double v = 0.0;
    while (k < entries.size() && entries[k].row == r && entries[k].col == c) {
      v += entries[k].value;
      ++k;
    }
    A.col_indices.push_back(c);
    A.values.push_back(v);
    ++A.row_offsets[r + 1];
  }
  for (int r = 0; r < n_rows; ++r) A.row_offsets[r + 1] += A.row_offsets[r];
  return A;
}

void validate(const SparseMatrix& A) {
  if (static_cast<int>(A.row_offsets.size()) != A.n_rows + 1) {
    throw std::invalid_argument("sparse matrix: bad row_offsets length");
  }
  for (int r = 0; r < A.n_rows; ++r) {
    if (A.row_offsets[r + 1] < A.row_offsets[r]) {
      throw std::invalid_argument("sparse matrix: row_offsets not nondecreasing");
    }
    for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k) {
      if (A.col_indices[k] < 0 || A.col_indices[k] >= A.n_cols) {
        throw std::invalid_argument("sparse matrix: column index out of range");
      }
      if (k > A.row_offsets[r] && A.col_indices[k] <= A.col_indices[k - 1]) {
        throw std::invalid_argument("sparse matrix: columns not strictly increasing");
      }
    }
  }
}

std::vector<double> matvec(const SparseMatrix& A, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != A.n_cols) {
    throw std::invalid_argument("matvec: dimension mismatch");
  }
  std::vector<double> y(A.n_rows, 0.0);
  for (int r = 0; r < A.n_rows; ++r) {
    double acc = 0.0;
    for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k) {
      acc += A.values[k] * x[A.col_indices[k]];
    }
    y[r] = acc;
  }
  return y;
}

SparseMatrix transpose(const SparseMatrix& A) {
  std::vector<Triplet> t;
  t.reserve(A.values.size());
  for (int r = 0; r < A.n_rows; ++r) {
    for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k) {
      t.push_back({A.col_indices[k], r, A.values[k]});
    }
  }
  return from_triplets(A.n_cols, A.n_rows, std::move(t), A.symmetric);
}

namespace {

using EigenSparse = Eigen::SparseMatrix<double>;

EigenSparse to_eigen(const SparseMatrix& A) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(A.values.size());
  for (int r = 0; r < A.n_rows; ++r) {
    for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k) {
      t.emplace_back(r, A.col_indices[k], A.values[k]);
    }
  }
  EigenSparse M(A.n_rows, A.n_cols);
  M.setFromTriplets(t.begin(), t.end());
  M.makeCompressed();
  return M;
}

double relative_residual(const SparseMatrix& A, const std::vector<double>& x,
                         const std::vector<double>& b) {
  const auto Ax = matvec(A, x);
  double rr = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double d = Ax[i] - b[i];
    rr += d * d;
    bb += b[i] * b[i];
  }
  return bb > 0.0 ? std::sqrt(rr / bb) : std::sqrt(rr);
}

}  // namespace

struct Solver::Impl {
  SparseMatrix A;
  EigenSparse M;
  SolveMethod requested;
  Eigen::SimplicialLLT<EigenSparse> llt;
  Eigen::SparseLU<EigenSparse> lu;
  bool use_lu = false;
  bool factor_ok = false;
};

Solver::Solver(const SparseMatrix& A, SolveMethod method)
    : impl_(std::make_shared<Impl>()) {
  if (A.n_rows != A.n_cols) {
    throw std::invalid_argument("Solver: matrix must be square");
  }
  validate(A);
  impl_->A = A;
  impl_->M = to_eigen(A);
  impl_->requested = method;
  if (method != SolveMethod::cg) {
    if (A.symmetric) {
      impl_->llt.compute(impl_->M);
      impl_->factor_ok = impl_->llt.info() == Eigen::Success;
    }
    if (!impl_->factor_ok) {
      impl_->lu.compute(impl_->M);
      impl_->use_lu = true;
      impl_->factor_ok = impl_->lu.info() == Eigen::Success;
    }
    if (!impl_->factor_ok && method == SolveMethod::direct) {
      throw std::runtime_error("Solver: direct factorization failed");
    }
  }
}

std::pair<std::vector<double>, SolveReport> Solver::solve(
    const std::vector<double>& b, double tol) const {
  const auto& A = impl_->A;
  if (static_cast<int>(b.size()) != A.n_rows) {
    throw std::invalid_argument("solve: dimension mismatch");
  }
  SolveReport report;
  double bnorm = 0.0;
  for (double v : b) bnorm += v * v;
  if (bnorm == 0.0) {
    report.iterations = 0;
    report.final_residual = 0.0;
    report.method = impl_->requested == SolveMethod::cg ? SolveMethod::cg
                                                        : SolveMethod::direct;
    return {std::vector<double>(A.n_rows, 0.0), report};
  }

  Eigen::Map<const Eigen::VectorXd> bvec(b.data(), b.size());
  std::vector<double> x(A.n_rows, 0.0);

  if (impl_->requested != SolveMethod::cg && impl_->factor_ok) {
    Eigen::VectorXd xe = impl_->use_lu ? impl_->lu.solve(bvec).eval()
                                       : impl_->llt.solve(bvec).eval();
    std::copy(xe.data(), xe.data() + xe.size(), x.begin());
    report.iterations = 1;
    report.method = SolveMethod::direct;
    report.final_residual = relative_residual(A, x, b);
    if (report.final_residual <= tol) return {x, report};
    if (impl_->requested == SolveMethod::direct) {
      std::ostringstream os;
      os << "solve: direct residual " << report.final_residual
         << " exceeds tol " << tol;
      throw std::runtime_error(os.str());
    }
  }

  Eigen::ConjugateGradient<EigenSparse, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>> cg;
  cg.setMaxIterations(20 * A.n_rows);
  cg.setTolerance(tol);
  cg.compute(impl_->M);
  Eigen::VectorXd xe = cg.solve(bvec);
  std::copy(xe.data(), xe.data() + xe.size(), x.begin());
  report.iterations = static_cast<int>(cg.iterations());
  report.method = SolveMethod::cg;
  report.final_residual = relative_residual(A, x, b);
  if (cg.info() != Eigen::Success && report.final_residual > tol) {
    std::ostringstream os;
    os << "solve: CG failed to converge in " << report.iterations
       << " iterations, residual " << report.final_residual;
    throw std::runtime_error(os.str());
  }
  return {x, report};
}

std::pair<std::vector<double>, SolveReport> solve(const SparseMatrix& A,
                                                  const std::vector<double>& b,
                                                  double tol,
                                                  SolveMethod method) {
  return Solver(A, method).solve(b, tol);
}

std::pair<std::vector<double>, SolveReport> solve_transpose(
    const SparseMatrix& A, const std::vector<double>& b, double tol,
    SolveMethod method) {
  if (A.symmetric) return solve(A, b, tol, method);
  return solve(transpose(A), b, tol, method);
}

}  // namespace ebc
