#include "qcx/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcx {

double frobenius_norm(const std::vector<double>& m) {
    double s = 0;
    for (double v : m) s += v * v;
    return std::sqrt(s);
}

namespace {

double offdiag_norm(const std::vector<double>& a, int n) {
    double s = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) s += a[static_cast<size_t>(i) * n + j] * a[static_cast<size_t>(i) * n + j];
    return std::sqrt(s);
}

}  // namespace

EigResult eig_symmetric(const std::vector<double>& m, int n) {
    if (n < 0 || m.size() != static_cast<size_t>(n) * n)
        throw std::invalid_argument("matrix storage does not match order");
    std::vector<double> a = m;
    std::vector<double> v(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i) * n + i] = 1.0;

    const double norm = frobenius_norm(m);
    const double target = 1e-12 * norm;
    auto at = [&](std::vector<double>& mat, int i, int j) -> double& {
        return mat[static_cast<size_t>(i) * n + j];
    };

    int sweep = 0;
    for (; sweep < 30; ++sweep) {
        if (offdiag_norm(a, n) <= target) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = at(a, p, q);
                if (apq == 0.0) continue;
                double theta = (at(a, q, q) - at(a, p, p)) / (2 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int i = 0; i < n; ++i) {
                    double aip = at(a, i, p), aiq = at(a, i, q);
                    at(a, i, p) = c * aip - s * aiq;
                    at(a, i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    double api = at(a, p, i), aqi = at(a, q, i);
                    at(a, p, i) = c * api - s * aqi;
                    at(a, q, i) = s * api + c * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    double vip = at(v, i, p), viq = at(v, i, q);
                    at(v, i, p) = c * vip - s * viq;
                    at(v, i, q) = s * vip + c * viq;
                }
            }
        }
    }
    double residual = offdiag_norm(a, n);
    if (residual > target)
        throw NumericError("Jacobi eigensolver did not converge in 30 sweeps (off-diagonal residual " +
                           std::to_string(residual) + ")");

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return a[static_cast<size_t>(i) * n + i] < a[static_cast<size_t>(j) * n + j];
    });

    EigResult r;
    r.values.resize(static_cast<size_t>(n));
    r.vectors.resize(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        int i = order[static_cast<size_t>(k)];
        r.values[static_cast<size_t>(k)] = a[static_cast<size_t>(i) * n + i];
        r.vectors[static_cast<size_t>(k)].resize(static_cast<size_t>(n));
        for (int row = 0; row < n; ++row)
            r.vectors[static_cast<size_t>(k)][static_cast<size_t>(row)] =
                v[static_cast<size_t>(row) * n + i];
    }
    return r;
}

std::vector<double> eig_hermitian(const std::vector<std::complex<double>>& m, int n) {
    if (n < 0 || m.size() != static_cast<size_t>(n) * n)
        throw std::invalid_argument("matrix storage does not match order");
    int N = 2 * n;
    std::vector<double> emb(static_cast<size_t>(N) * N, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double re = m[static_cast<size_t>(i) * n + j].real();
            double im = m[static_cast<size_t>(i) * n + j].imag();
            emb[static_cast<size_t>(i) * N + j] = re;
            emb[static_cast<size_t>(i + n) * N + (j + n)] = re;
            emb[static_cast<size_t>(i) * N + (j + n)] = -im;
            emb[static_cast<size_t>(i + n) * N + j] = im;
        }
    }
    EigResult er = eig_symmetric(emb, N);
    double scale = 1.0;
    for (double v : er.values) scale = std::max(scale, std::fabs(v));
    std::vector<double> out;
    out.reserve(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        double a = er.values[static_cast<size_t>(2 * k)];
        double b = er.values[static_cast<size_t>(2 * k + 1)];
        if (std::fabs(a - b) > 1e-9 * scale)
            throw NumericError("Hermitian embedding pairing failure (gap " +
                               std::to_string(std::fabs(a - b)) + ")");
        out.push_back(0.5 * (a + b));
    }
    return out;
}

Inertia inertia(const std::vector<double>& eigenvalues, double scale, double tol) {
    Inertia r;
    double band = tol * scale;
    for (double v : eigenvalues) {
        if (v < -band)
            ++r.neg;
        else if (v <= band)
            ++r.zero;
        else
            ++r.pos;
    }
    return r;
}

Inertia inertia_auto(const std::vector<double>& eigenvalues, double tol) {
    double scale = 1.0;
    for (double v : eigenvalues) scale = std::max(scale, std::fabs(v));
    return inertia(eigenvalues, scale, tol);
}

}  // namespace qcx
