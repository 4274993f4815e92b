#pragma once

#include <cstddef>
#include <span>
#include <tuple>
#include <vector>

#include "perfsde/errors.hpp"

namespace perfsde {

/// Compressed-row square matrix. Column indices are sorted and unique within
/// each row. Immutable after construction.
class SparseMatrix {
  public:
    SparseMatrix() = default;
    SparseMatrix(int n, std::vector<std::size_t> row_offsets, std::vector<int> cols, std::vector<double> vals);

    static SparseMatrix from_triplets(int n, std::vector<std::tuple<int, int, double>> triplets);
    static SparseMatrix identity(int n);

    int size() const { return n_; }
    std::size_t nnz() const { return vals_.size(); }

    void matvec(std::span<const double> x, std::span<double> y) const;
    std::vector<double> matvec(std::span<const double> x) const;

    double coeff(int row, int col) const;

    const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }
    const std::vector<int>& cols() const { return cols_; }
    const std::vector<double>& values() const { return vals_; }

    /// A + alpha * B, matching or merged sparsity.
    static SparseMatrix axpy(const SparseMatrix& a, double alpha, const SparseMatrix& b);

  private:
    int n_ = 0;
    std::vector<std::size_t> row_offsets_;
    std::vector<int> cols_;
    std::vector<double> vals_;
};

struct CgResult {
    std::vector<double> x;
    int iterations = 0;
    double residual = 0.0;  // final relative residual ||Ax-b||/||b||
};

struct CgOptions {
    double tol = 1e-10;  // relative residual
    int max_iter = 100000;
    bool jacobi = false;                     // diagonal preconditioning
    const std::vector<double>* x0 = nullptr; // warm start
};

/// Conjugate gradients for SPD systems. b = 0 returns x = 0 in 0 iterations.
/// Throws MaxIterations / NotFinite (the latter signals non-SPD input).
CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, const CgOptions& opts = {});

}  // namespace perfsde
