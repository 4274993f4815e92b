#include "perfsde/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace perfsde {

SparseMatrix::SparseMatrix(int n, std::vector<std::size_t> row_offsets, std::vector<int> cols,
                           std::vector<double> vals)
    : n_(n), row_offsets_(std::move(row_offsets)), cols_(std::move(cols)), vals_(std::move(vals)) {
    if (row_offsets_.size() != static_cast<std::size_t>(n_) + 1 || cols_.size() != vals_.size() ||
        row_offsets_.back() != cols_.size())
        throw DimensionMismatch("sparse: inconsistent CSR arrays");
}

SparseMatrix SparseMatrix::from_triplets(int n, std::vector<std::tuple<int, int, double>> triplets) {
    std::sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    std::vector<std::size_t> counts(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> cols;
    std::vector<double> vals;
    cols.reserve(triplets.size());
    vals.reserve(triplets.size());
    int last_r = -1;
    int last_c = -1;
    for (const auto& [r, c, v] : triplets) {
        if (r < 0 || r >= n || c < 0 || c >= n) throw DimensionMismatch("sparse: triplet index out of range");
        if (r == last_r && c == last_c) {
            vals.back() += v;  // duplicate entry: accumulate
            continue;
        }
        cols.push_back(c);
        vals.push_back(v);
        ++counts[static_cast<std::size_t>(r) + 1];
        last_r = r;
        last_c = c;
    }
    for (int r = 0; r < n; ++r) counts[static_cast<std::size_t>(r) + 1] += counts[static_cast<std::size_t>(r)];
    return SparseMatrix(n, std::move(counts), std::move(cols), std::move(vals));
}

SparseMatrix SparseMatrix::identity(int n) {
    std::vector<std::size_t> offsets(static_cast<std::size_t>(n) + 1);
    std::vector<int> cols(static_cast<std::size_t>(n));
    std::vector<double> vals(static_cast<std::size_t>(n), 1.0);
    for (int i = 0; i <= n; ++i) offsets[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
    for (int i = 0; i < n; ++i) cols[static_cast<std::size_t>(i)] = i;
    return SparseMatrix(n, std::move(offsets), std::move(cols), std::move(vals));
}

void SparseMatrix::matvec(std::span<const double> x, std::span<double> y) const {
    if (x.size() != static_cast<std::size_t>(n_) || y.size() != static_cast<std::size_t>(n_))
        throw DimensionMismatch("sparse: matvec length mismatch, expected " + std::to_string(n_));
    for (int r = 0; r < n_; ++r) {
        double s = 0.0;
        const std::size_t lo = row_offsets_[static_cast<std::size_t>(r)];
        const std::size_t hi = row_offsets_[static_cast<std::size_t>(r) + 1];
        for (std::size_t k = lo; k < hi; ++k) s += vals_[k] * x[static_cast<std::size_t>(cols_[k])];
        y[static_cast<std::size_t>(r)] = s;
    }
}

std::vector<double> SparseMatrix::matvec(std::span<const double> x) const {
    std::vector<double> y(static_cast<std::size_t>(n_));
    matvec(x, y);
    return y;
}

double SparseMatrix::coeff(int row, int col) const {
    const std::size_t lo = row_offsets_[static_cast<std::size_t>(row)];
    const std::size_t hi = row_offsets_[static_cast<std::size_t>(row) + 1];
    for (std::size_t k = lo; k < hi; ++k)
        if (cols_[k] == col) return vals_[k];
    return 0.0;
}

SparseMatrix SparseMatrix::axpy(const SparseMatrix& a, double alpha, const SparseMatrix& b) {
    if (a.n_ != b.n_) throw DimensionMismatch("sparse: axpy size mismatch");
    std::vector<std::size_t> offsets(static_cast<std::size_t>(a.n_) + 1, 0);
    std::vector<int> cols;
    std::vector<double> vals;
    cols.reserve(a.nnz() + b.nnz());
    vals.reserve(a.nnz() + b.nnz());
    for (int r = 0; r < a.n_; ++r) {
        std::size_t ia = a.row_offsets_[static_cast<std::size_t>(r)];
        std::size_t ib = b.row_offsets_[static_cast<std::size_t>(r)];
        const std::size_t ea = a.row_offsets_[static_cast<std::size_t>(r) + 1];
        const std::size_t eb = b.row_offsets_[static_cast<std::size_t>(r) + 1];
        while (ia < ea || ib < eb) {
            int ca = ia < ea ? a.cols_[ia] : a.n_;
            int cb = ib < eb ? b.cols_[ib] : a.n_;
            if (ca < cb) {
                cols.push_back(ca);
                vals.push_back(a.vals_[ia++]);
            } else if (cb < ca) {
                cols.push_back(cb);
                vals.push_back(alpha * b.vals_[ib++]);
            } else {
                cols.push_back(ca);
                vals.push_back(a.vals_[ia++] + alpha * b.vals_[ib++]);
            }
        }
        offsets[static_cast<std::size_t>(r) + 1] = cols.size();
    }
    return SparseMatrix(a.n_, std::move(offsets), std::move(cols), std::move(vals));
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    // Sequential accumulation: solve results are deterministic.
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, const CgOptions& opts) {
    const auto n = static_cast<std::size_t>(a.size());
    if (b.size() != n) throw DimensionMismatch("cg: rhs length mismatch");
    if (!(opts.tol > 0.0 && opts.tol < 1.0)) throw InvalidSpec("cg: tol must be in (0,1)");

    CgResult out;
    const double bnorm2 = dot(b, b);
    if (bnorm2 == 0.0) {
        out.x.assign(n, 0.0);
        return out;
    }

    std::vector<double> diag_inv;
    if (opts.jacobi) {
        diag_inv.resize(n);
        for (int i = 0; i < a.size(); ++i) {
            const double d = a.coeff(i, i);
            if (!(d > 0.0)) throw NotFinite("cg: nonpositive diagonal with Jacobi preconditioning");
            diag_inv[static_cast<std::size_t>(i)] = 1.0 / d;
        }
    }

    std::vector<double> x(n, 0.0);
    std::vector<double> r(b.begin(), b.end());
    if (opts.x0 != nullptr) {
        if (opts.x0->size() != n) throw DimensionMismatch("cg: warm start length mismatch");
        x = *opts.x0;
        std::vector<double> ax = a.matvec(x);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ax[i];
    }

    const double stop2 = opts.tol * opts.tol * bnorm2;
    double rr = dot(r, r);
    if (rr <= stop2) {
        out.x = std::move(x);
        out.residual = std::sqrt(rr / bnorm2);
        return out;
    }

    std::vector<double> z(n), p(n), ap(n);
    auto apply_precond = [&](const std::vector<double>& rin, std::vector<double>& zout) {
        if (opts.jacobi)
            for (std::size_t i = 0; i < n; ++i) zout[i] = diag_inv[i] * rin[i];
        else
            zout = rin;
    };
    apply_precond(r, z);
    p = z;
    double rz = dot(r, z);

    for (int it = 1; it <= opts.max_iter; ++it) {
        a.matvec(p, ap);
        const double pap = dot(p, ap);
        if (!std::isfinite(pap) || pap <= 0.0) throw NotFinite("cg: breakdown, matrix not SPD");
        const double alpha = rz / pap;
        for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
        for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * ap[i];
        rr = dot(r, r);
        if (!std::isfinite(rr)) throw NotFinite("cg: non-finite residual");
        if (rr <= stop2) {
            out.x = std::move(x);
            out.iterations = it;
            out.residual = std::sqrt(rr / bnorm2);
            return out;
        }
        apply_precond(r, z);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw MaxIterations("cg: no convergence within " + std::to_string(opts.max_iter) + " iterations");
}

}  // namespace perfsde
