#include "rabi/banded.hpp"

#include "rabi/params.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace rabi {

SymmetricBandMatrix::SymmetricBandMatrix(std::size_t dim, std::size_t bandwidth)
    : dim_(dim), bandwidth_(bandwidth), bands_(bandwidth + 1) {
    for (std::size_t k = 0; k <= bandwidth; ++k) {
        bands_[k].assign(dim > k ? dim - k : 0, 0.0);
    }
}

double SymmetricBandMatrix::operator()(std::size_t i, std::size_t j) const {
    if (i < j) std::swap(i, j);
    const std::size_t k = i - j;
    return k <= bandwidth_ ? bands_[k][j] : 0.0;
}

void SymmetricBandMatrix::set(std::size_t i, std::size_t j, double value) {
    if (i < j) std::swap(i, j);
    if (i - j > bandwidth_ || i >= dim_) {
        throw DomainError("band matrix entry outside storage");
    }
    bands_[i - j][j] = value;
}

void SymmetricBandMatrix::add(std::size_t i, std::size_t j, double value) {
    if (i < j) std::swap(i, j);
    if (i - j > bandwidth_ || i >= dim_) {
        throw DomainError("band matrix entry outside storage");
    }
    bands_[i - j][j] += value;
}

Eigen::MatrixXd SymmetricBandMatrix::to_dense() const {
    const auto n = static_cast<Eigen::Index>(dim_);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = 0; k <= bandwidth_; ++k) {
        for (std::size_t j = 0; j + k < dim_; ++j) {
            out(j + k, j) = bands_[k][j];
            out(j, j + k) = bands_[k][j];
        }
    }
    return out;
}

namespace {

Eigenpairs dense_solve(const SymmetricBandMatrix& matrix, std::size_t count) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    if (matrix.bandwidth() == 1) {
        const auto& d = matrix.band(0);
        const auto& e = matrix.band(1);
        Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size()));
        Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(e.data(), static_cast<Eigen::Index>(e.size()));
        solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    } else {
        solver.compute(matrix.to_dense(), Eigen::ComputeEigenvectors);
    }
    if (solver.info() != Eigen::Success) {
        throw NumericalError("dense symmetric eigensolver failed");
    }
    const auto k = static_cast<Eigen::Index>(count);
    return {solver.eigenvalues().head(k), solver.eigenvectors().leftCols(k)};
}

Eigenpairs tridiagonal_solve(const SymmetricBandMatrix& matrix, std::size_t count) {
    const auto n = static_cast<lapack_int>(matrix.dim());
    const auto m_req = static_cast<lapack_int>(count);
    std::vector<double> d = matrix.band(0);
    std::vector<double> e = matrix.band(1);
    e.resize(static_cast<std::size_t>(n), 0.0);
    std::vector<double> w(static_cast<std::size_t>(n));
    std::vector<double> z(static_cast<std::size_t>(n) * static_cast<std::size_t>(m_req));
    std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
    lapack_int found = 0;
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    const lapack_int info = LAPACKE_dstevx(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, m_req,
                                           abstol, &found, w.data(), z.data(), n, ifail.data());
    if (info != 0 || found != m_req) {
        throw NumericalError("tridiagonal eigensolver failed (info=" + std::to_string(info) + ")");
    }
    Eigenpairs out;
    out.values = Eigen::Map<Eigen::VectorXd>(w.data(), m_req);
    out.vectors = Eigen::Map<Eigen::MatrixXd>(z.data(), n, m_req);
    return out;
}

// Eigenvalues from LAPACK's banded solver (no n x n workspace), eigenvectors
// by shifted inverse iteration on the band LU factorization.
Eigenpairs banded_solve(const SymmetricBandMatrix& matrix, std::size_t count) {
    const auto n = static_cast<lapack_int>(matrix.dim());
    const auto kd = static_cast<lapack_int>(matrix.bandwidth());
    const lapack_int ldab = kd + 1;
    const auto un = static_cast<std::size_t>(n);

    // Column-major lower band storage: ab[(i - j) + j * ldab] = A(i, j).
    std::vector<double> ab(static_cast<std::size_t>(ldab) * un, 0.0);
    for (lapack_int k = 0; k <= kd; ++k) {
        const auto& band = matrix.band(static_cast<std::size_t>(k));
        for (std::size_t j = 0; j < band.size(); ++j) {
            ab[static_cast<std::size_t>(k) + j * static_cast<std::size_t>(ldab)] = band[j];
        }
    }

    const auto m_req = static_cast<lapack_int>(count);
    std::vector<double> w(un);
    std::vector<lapack_int> ifail(un);
    double q_dummy = 0.0;
    double z_dummy = 0.0;
    lapack_int found = 0;
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    lapack_int info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', 'I', 'L', n, kd, ab.data(), ldab, &q_dummy, 1, 0.0,
                                     0.0, 1, m_req, abstol, &found, w.data(), &z_dummy, 1, ifail.data());
    if (info != 0 || found != m_req) {
        throw NumericalError("banded eigensolver failed (info=" + std::to_string(info) + ")");
    }

    // General band storage for dgbtrf: kl = ku = kd, ldgb = 3 kd + 1, A(i, j) at gb[kl + ku + i - j + j * ldgb].
    const lapack_int ldgb = 3 * kd + 1;
    Eigenpairs out;
    out.values = Eigen::Map<Eigen::VectorXd>(w.data(), m_req);
    out.vectors.resize(n, m_req);
    std::vector<double> gb(static_cast<std::size_t>(ldgb) * un);
    std::vector<lapack_int> ipiv(un);
    double scale = 0.0;
    for (double v : matrix.band(0)) scale = std::max(scale, std::abs(v));
    for (lapack_int c = 0; c < m_req; ++c) {
        // Tiny offset keeps the factorization nonsingular.
        const double shift = w[static_cast<std::size_t>(c)] - 1e-14 * std::max(1.0, scale);
        std::fill(gb.begin(), gb.end(), 0.0);
        for (std::size_t j = 0; j < un; ++j) {
            for (std::size_t k = 0; k <= static_cast<std::size_t>(kd) && j + k < un; ++k) {
                const double a = matrix.band(k)[j] - (k == 0 ? shift : 0.0);
                const std::size_t i = j + k;
                gb[static_cast<std::size_t>(2 * kd) + i - j + j * static_cast<std::size_t>(ldgb)] = a;
                gb[static_cast<std::size_t>(2 * kd) + j - i + i * static_cast<std::size_t>(ldgb)] = a;
            }
        }
        info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kd, kd, gb.data(), ldgb, ipiv.data());
        if (info < 0) throw NumericalError("band LU factorization failed");
        Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
        for (lapack_int j = 0; j < c; ++j) x -= out.vectors.col(j).dot(x) * out.vectors.col(j);
        x.normalize();
        for (int it = 0; it < 3; ++it) {
            info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, kd, kd, 1, gb.data(), ldgb, ipiv.data(), x.data(), n);
            if (info != 0) throw NumericalError("band LU solve failed");
            for (lapack_int j = 0; j < c; ++j) x -= out.vectors.col(j).dot(x) * out.vectors.col(j);
            x.normalize();
        }
        out.vectors.col(c) = x;
    }
    return out;
}

}  // namespace

Eigenpairs lowest_eigenpairs(const SymmetricBandMatrix& matrix, std::size_t count,
                             const SolverOptions& options) {
    count = std::min(count, matrix.dim());
    if (count == 0) {
        return {};
    }
    if (matrix.dim() <= options.dense_limit) {
        return dense_solve(matrix, count);
    }
    return matrix.bandwidth() == 1 ? tridiagonal_solve(matrix, count) : banded_solve(matrix, count);
}

}  // namespace rabi
