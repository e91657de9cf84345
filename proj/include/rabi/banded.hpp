#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace rabi {

/// Real symmetric matrix stored by its lower bands: band(k)[j] = A(j + k, j).
class SymmetricBandMatrix {
public:
    SymmetricBandMatrix(std::size_t dim, std::size_t bandwidth);

    std::size_t dim() const { return dim_; }
    std::size_t bandwidth() const { return bandwidth_; }

    /// Entry (i, j); zero outside the band.
    double operator()(std::size_t i, std::size_t j) const;

    /// Sets A(i, j) = A(j, i) = value. |i - j| must not exceed the bandwidth.
    void set(std::size_t i, std::size_t j, double value);
    void add(std::size_t i, std::size_t j, double value);

    const std::vector<double>& band(std::size_t k) const { return bands_[k]; }

    Eigen::MatrixXd to_dense() const;

private:
    std::size_t dim_;
    std::size_t bandwidth_;
    std::vector<std::vector<double>> bands_;
};

struct SolverOptions {
    /// Matrices up to this dimension are solved densely; larger ones go to
    /// LAPACK selective solvers (tridiagonal or banded) for the lowest pairs.
    std::size_t dense_limit = 512;
};

struct Eigenpairs {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // column i belongs to values(i)
};

/// Lowest `count` eigenpairs (count is clipped to the dimension).
Eigenpairs lowest_eigenpairs(const SymmetricBandMatrix& matrix, std::size_t count,
                             const SolverOptions& options = {});

}  // namespace rabi
