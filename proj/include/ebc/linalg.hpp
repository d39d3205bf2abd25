#pragma once

#include <memory>
#include <utility>
#include <vector>

namespace ebc {

/// Compressed-sparse-row matrix. Column indices are strictly increasing
/// within each row.
struct SparseMatrix {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<int> row_offsets;  // length n_rows+1, nondecreasing
  std::vector<int> col_indices;
  std::vector<double> values;
  bool symmetric = false;
};

struct Triplet {
  int row;
  int col;
  double value;
};

SparseMatrix from_triplets(int n_rows, int n_cols, std::vector<Triplet> entries,
                           bool symmetric = false);

void validate(const SparseMatrix& A);

std::vector<double> matvec(const SparseMatrix& A, const std::vector<double>& x);

SparseMatrix transpose(const SparseMatrix& A);

enum class SolveMethod { automatic, direct, cg };

struct SolveReport {
  int iterations = 0;
  double final_residual = 0.0;  // relative 2-norm
  SolveMethod method = SolveMethod::direct;
};

/// Cached factorization of an SPD matrix (sparse Cholesky); CG with a
/// Jacobi preconditioner is selectable for tolerance studies. Build once,
/// solve many times.
class Solver {
 public:
  Solver(const SparseMatrix& A, SolveMethod method = SolveMethod::automatic);
  std::pair<std::vector<double>, SolveReport> solve(
      const std::vector<double>& b, double tol) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// One-shot solve of Ax=b to relative residual tol.
std::pair<std::vector<double>, SolveReport> solve(
    const SparseMatrix& A, const std::vector<double>& b, double tol,
    SolveMethod method = SolveMethod::automatic);

/// Solve A^T x = b. Symmetric matrices delegate to solve(); general
/// matrices go through an explicit transpose.
std::pair<std::vector<double>, SolveReport> solve_transpose(
    const SparseMatrix& A, const std::vector<double>& b, double tol,
    SolveMethod method = SolveMethod::automatic);

}  // namespace ebc
