#include "smoothrisk/parallel_kernels.hpp"

#include <omp.h>

namespace smoothrisk {
namespace {

inline double gram_entry(const Points& points, const KernelSpec& kernel, Eigen::Index i,
                         Eigen::Index j) {
  return kernel(points.row(i).data(), points.row(j).data(),
                static_cast<std::size_t>(points.cols()));
}

inline double gram_row_dot(const Eigen::MatrixXd& gram, const Eigen::VectorXd& v, Eigen::Index i) {
  const double* col = gram.col(i).data();
  const double* x = v.data();
  double s = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) s += col[j] * x[j];
  return s;
}

inline double predict_one(const Points& points, const Eigen::VectorXd& coeffs,
                          const KernelSpec& kernel, const double* q) {
  const auto dim = static_cast<std::size_t>(points.cols());
  double s = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double c = coeffs[i];
    if (c != 0.0) s += c * kernel(points.row(i).data(), q, dim);
  }
  return s;
}

}  // namespace

namespace serial {

void tabulate(const std::function<double(std::size_t)>& f, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(i);
}

Eigen::MatrixXd gram_matrix(const Points& points, const KernelSpec& kernel) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      const double k = gram_entry(points, kernel, i, j);
      gram(i, j) = k;
      gram(j, i) = k;
    }
  }
  return gram;
}

Eigen::VectorXd gram_apply(const Eigen::MatrixXd& gram, const Eigen::VectorXd& v) {
  Eigen::VectorXd out(gram.cols());
  for (Eigen::Index i = 0; i < gram.cols(); ++i) out[i] = gram_row_dot(gram, v, i);
  return out;
}

Eigen::VectorXd predict_batch(const Points& points, const Eigen::VectorXd& coeffs,
                              const KernelSpec& kernel, const Points& queries) {
  Eigen::VectorXd out(queries.rows());
  for (Eigen::Index q = 0; q < queries.rows(); ++q) {
    out[q] = predict_one(points, coeffs, kernel, queries.row(q).data());
  }
  return out;
}

}  // namespace serial

namespace parallel {

void tabulate(const std::function<double(std::size_t)>& f, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
}

Eigen::MatrixXd gram_matrix(const Points& points, const KernelSpec& kernel) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd gram(n, n);
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) gram(i, j) = gram_entry(points, kernel, i, j);
  }
  // mirror after the parallel pass so no two threads write the same column
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) gram(j, i) = gram(i, j);
  }
  return gram;
}

Eigen::VectorXd gram_apply(const Eigen::MatrixXd& gram, const Eigen::VectorXd& v) {
  const Eigen::Index n = gram.cols();
  Eigen::VectorXd out(n);
#pragma omp parallel for schedule(static) if (n >= 256)
  for (Eigen::Index i = 0; i < n; ++i) out[i] = gram_row_dot(gram, v, i);
  return out;
}

Eigen::VectorXd predict_batch(const Points& points, const Eigen::VectorXd& coeffs,
                              const KernelSpec& kernel, const Points& queries) {
  const Eigen::Index m = queries.rows();
  Eigen::VectorXd out(m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index q = 0; q < m; ++q) {
    out[q] = predict_one(points, coeffs, kernel, queries.row(q).data());
  }
  return out;
}

}  // namespace parallel

void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace smoothrisk
