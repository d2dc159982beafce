#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// `smoothrisk::serial` and an OpenMP version in `smoothrisk::parallel` with
// the same signature. Each output element is produced by the same inline
// routine in both, so results are bit-identical for any thread count.

#include <cstddef>
#include <functional>
#include <span>

#include <Eigen/Dense>

#include "smoothrisk/kernel.hpp"

namespace smoothrisk {

namespace serial {

/// out[i] = f(i) for i < out.size().
void tabulate(const std::function<double(std::size_t)>& f, std::span<double> out);

/// K[i][j] = kernel(points_i, points_j).
Eigen::MatrixXd gram_matrix(const Points& points, const KernelSpec& kernel);

/// K * v for a symmetric K (column-major columns are read as rows).
Eigen::VectorXd gram_apply(const Eigen::MatrixXd& gram, const Eigen::VectorXd& v);

/// f(q) = sum_i coeffs[i] kernel(points_i, q) for every row q of `queries`.
Eigen::VectorXd predict_batch(const Points& points, const Eigen::VectorXd& coeffs,
                              const KernelSpec& kernel, const Points& queries);

}  // namespace serial

namespace parallel {

void tabulate(const std::function<double(std::size_t)>& f, std::span<double> out);
Eigen::MatrixXd gram_matrix(const Points& points, const KernelSpec& kernel);
Eigen::VectorXd gram_apply(const Eigen::MatrixXd& gram, const Eigen::VectorXd& v);
Eigen::VectorXd predict_batch(const Points& points, const Eigen::VectorXd& coeffs,
                              const KernelSpec& kernel, const Points& queries);

}  // namespace parallel

/// Sets the OpenMP thread count; 0 keeps the runtime default.
void set_thread_count(int threads);
int thread_count();

}  // namespace smoothrisk
