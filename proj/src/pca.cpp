#include "cubeproto/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cubeproto/errors.hpp"
#include "cubeproto/random.hpp"

namespace cubeproto {

namespace {

double norm(const std::vector<double>& v) {
    return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

void fix_sign(std::vector<double>& v) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    if (v[arg] < 0)
        for (auto& e : v) e = -e;
}

std::vector<double> multiply(const Matrix& a, const std::vector<double>& v) {
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto r = a.row(i);
        out[i] = std::inner_product(r.begin(), r.end(), v.begin(), 0.0);
    }
    return out;
}

std::vector<double> column_means(const Matrix& x) {
    std::vector<double> mean(x.cols(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) mean[j] += x(i, j);
    for (auto& m : mean) m /= static_cast<double>(x.rows());
    return mean;
}

// Power iteration on a symmetric PSD matrix.
std::vector<double> dominant_eigenvector(const Matrix& cov, const PcaOptions& options, std::uint64_t stream,
                                         std::size_t& iterations) {
    const auto d = cov.rows();
    auto rng = Rng::stream(options.seed, stream);
    // All-ones start with a small seeded perturbation, so the start is never
    // exactly orthogonal to the dominant eigenvector.
    std::vector<double> v(d);
    for (auto& e : v) e = 1.0 + 1e-3 * (2.0 * rng.uniform() - 1.0);
    double nv = norm(v);
    for (auto& e : v) e /= nv;

    double residual = 0.0;
    for (iterations = 1; iterations <= options.max_iter; ++iterations) {
        auto w = multiply(cov, v);
        double nw = norm(w);
        if (nw == 0.0) {
            // v lies in the null space: the matrix is zero on this subspace.
            for (auto& e : w) e = 2.0 * rng.uniform() - 1.0;
            nw = norm(w);
            if (std::all_of(cov.data().begin(), cov.data().end(), [](double c) { return c == 0.0; })) {
                for (auto& e : w) e /= nw;
                fix_sign(w);
                return w;
            }
        }
        for (auto& e : w) e /= nw;
        fix_sign(w);
        residual = 0.0;
        for (std::size_t i = 0; i < d; ++i) residual += (w[i] - v[i]) * (w[i] - v[i]);
        residual = std::sqrt(residual);
        v = std::move(w);
        if (residual < options.tol) return v;
    }
    throw ConvergenceError("power iteration did not converge after " + std::to_string(options.max_iter) +
                               " iterations (residual " + std::to_string(residual) + ")",
                           residual);
}

}  // namespace

Matrix sample_covariance(const Matrix& x) {
    const auto n = x.rows();
    const auto d = x.cols();
    if (n < 2) throw ArgumentError("covariance needs at least two rows");
    const auto mean = column_means(x);
    Matrix cov(d, d);
    std::vector<double> c(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) c[j] = x(i, j) - mean[j];
        for (std::size_t a = 0; a < d; ++a) {
            if (c[a] == 0.0) continue;
            auto row = cov.row(a);
            for (std::size_t b = a; b < d; ++b) row[b] += c[a] * c[b];
        }
    }
    const double denom = static_cast<double>(n - 1);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) {
            cov(a, b) /= denom;
            cov(b, a) = cov(a, b);
        }
    return cov;
}

std::vector<ComponentScores> principal_components(const Matrix& x, std::size_t count, const PcaOptions& options) {
    if (x.rows() < 2) throw ArgumentError("PCA needs at least two rows");
    if (x.cols() < 1) throw ArgumentError("PCA needs at least one column");
    if (count > x.cols()) throw ArgumentError("more components requested than columns");

    auto cov = sample_covariance(x);
    double trace = 0.0;
    for (std::size_t j = 0; j < cov.rows(); ++j) trace += cov(j, j);
    const auto mean = column_means(x);

    std::vector<ComponentScores> out;
    for (std::size_t k = 0; k < count; ++k) {
        ComponentScores comp;
        comp.axis = dominant_eigenvector(cov, options, k, comp.iterations);
        const auto cv = multiply(cov, comp.axis);
        comp.eigenvalue = std::inner_product(comp.axis.begin(), comp.axis.end(), cv.begin(), 0.0);
        comp.explained_variance_ratio = trace > 0.0 ? std::clamp(comp.eigenvalue / trace, 0.0, 1.0) : 0.0;
        comp.scores.resize(x.rows());
        for (std::size_t i = 0; i < x.rows(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < x.cols(); ++j) s += (x(i, j) - mean[j]) * comp.axis[j];
            comp.scores[i] = s;
        }
        // Hotelling deflation.
        for (std::size_t a = 0; a < cov.rows(); ++a)
            for (std::size_t b = 0; b < cov.cols(); ++b) cov(a, b) -= comp.eigenvalue * comp.axis[a] * comp.axis[b];
        out.push_back(std::move(comp));
    }
    return out;
}

ComponentScores first_component(const Matrix& x, const PcaOptions& options) {
    return std::move(principal_components(x, 1, options).front());
}

}  // namespace cubeproto
