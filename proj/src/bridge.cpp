#include "svpath/bridge.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace svpath::bridge {

namespace {

void require_bridge_model(const ModelParams& params)
{
    require_valid(params);
    if (!params.is_log_normal_variance()) {
        throw std::invalid_argument("variance bridge requires alpha = 1 and lambda = 0");
    }
}

void require_matching(const GridSpec& grid, const SpectralBridge& spectral)
{
    if (grid.n != spectral.n()) throw std::invalid_argument("grid and spectral bridge disagree on n");
}

struct Frame {
    double scale;       // sqrt(eps) * xi
    double drift_step;  // eps * (mu - xi^2 / 2)
};

Frame make_frame(const GridSpec& grid, double maturity, const ModelParams& params)
{
    const double eps = grid.step(maturity);
    return {std::sqrt(eps) * params.xi, eps * params.log_variance_drift()};
}

// Deterministic part of interior point i (1-based): y_today + drift*eps*(n+1-i).
inline double anchor(double y_today, const Frame& f, int n, int i)
{
    return y_today + f.drift_step * (n + 1 - i);
}

}  // namespace

SpectralBridge::SpectralBridge(int n) : n_(n), log_det_m_(0.0)
{
    if (n < 1) throw std::invalid_argument("spectral bridge needs n >= 1");
    const double h = std::numbers::pi / (n + 1);
    const double norm = std::sqrt(2.0 / (n + 1));
    eigenvalues_.resize(n);
    for (int j = 1; j <= n; ++j) {
        // 2 - 2cos(theta) = 4 sin^2(theta/2), without cancellation for small j.
        const double s = std::sin(0.5 * j * h);
        eigenvalues_[j - 1] = 4.0 * s * s;
        log_det_m_ += std::log(eigenvalues_[j - 1]);
    }
    basis_.resize(static_cast<std::size_t>(n) * n);
    scaled_basis_.resize(basis_.size());
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            // Reduce i*j mod 2(n+1) so the sine argument stays in [0, 2 pi).
            const long long phase = (static_cast<long long>(i) * j) % (2LL * (n + 1));
            const double o = norm * std::sin(static_cast<double>(phase) * h);
            const std::size_t at = static_cast<std::size_t>(i - 1) * n + (j - 1);
            basis_[at] = o;
            scaled_basis_[at] = o / std::sqrt(eigenvalues_[j - 1]);
        }
    }
}

SpectralBridge build_spectral(int n) { return SpectralBridge(n); }

double tridiagonal_determinant(int n)
{
    if (n < 1) throw std::invalid_argument("n >= 1 required");
    double prev = 1.0;  // D_0
    double cur = 2.0;   // D_1
    for (int k = 2; k <= n; ++k) {
        const double next = 2.0 * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

BridgeCoefficients bridge_coefficients(double y_today, double y0, const GridSpec& grid, double maturity,
                                       const ModelParams& params, const SpectralBridge& spectral)
{
    require_valid(grid);
    require_bridge_model(params);
    require_matching(grid, spectral);
    const int n = grid.n;
    const Frame f = make_frame(grid, maturity, params);

    BridgeCoefficients out;
    out.eta_start = 0.0;
    out.eta_end = (y0 - y_today - f.drift_step * (n + 1)) / f.scale;
    out.g.resize(n);
    double reduction = 0.0;
    const auto m = spectral.eigenvalues();
    for (int j = 1; j <= n; ++j) {
        const double g = out.eta_end * spectral.basis(1, j) + out.eta_start * spectral.basis(n, j);
        out.g[j - 1] = g;
        reduction += g * g / m[j - 1];
    }
    const double quad = out.eta_start * out.eta_start + out.eta_end * out.eta_end - reduction;
    const double eps = grid.step(maturity);
    out.endpoint_weight_log = -0.5 * quad -
                              0.5 * (std::log(2.0 * std::numbers::pi * eps * params.xi * params.xi) +
                                     spectral.log_det_m());
    return out;
}

void sample_variance_path(std::span<const double> zeta, const BridgeCoefficients& coeffs,
                          const SpectralBridge& spectral, const GridSpec& grid, double maturity,
                          const ModelParams& params, double y_today, double y0, std::span<double> path)
{
    const int n = spectral.n();
    if (static_cast<int>(zeta.size()) != n || static_cast<int>(coeffs.g.size()) != n) {
        throw std::invalid_argument("zeta and coefficients must have length n");
    }
    if (static_cast<int>(path.size()) != n + 2) throw std::invalid_argument("path must have length n+2");
    require_matching(grid, spectral);
    const Frame f = make_frame(grid, maturity, params);
    const auto m = spectral.eigenvalues();
    const auto sb = spectral.scaled_basis();

    path[0] = y0;
    path[n + 1] = y_today;
    for (int i = 1; i <= n; ++i) {
        const double* row = sb.data() + static_cast<std::size_t>(i - 1) * n;
        double eta = 0.0;
        for (int j = 0; j < n; ++j) {
            // O_ij (zeta_j / sqrt(m_j) + g_j / m_j) = (O_ij / sqrt(m_j)) (zeta_j + g_j / sqrt(m_j))
            eta += row[j] * (zeta[j] + coeffs.g[j] / std::sqrt(m[j]));
        }
        path[i] = anchor(y_today, f, n, i) + f.scale * eta;
    }
}

std::vector<double> sample_variance_path(std::span<const double> zeta, const BridgeCoefficients& coeffs,
                                         const SpectralBridge& spectral, const GridSpec& grid, double maturity,
                                         const ModelParams& params, double y_today, double y0)
{
    std::vector<double> path(static_cast<std::size_t>(spectral.n()) + 2);
    sample_variance_path(zeta, coeffs, spectral, grid, maturity, params, y_today, y0, path);
    return path;
}

std::vector<double> mean_path(const BridgeCoefficients& coeffs, const SpectralBridge& spectral,
                              const GridSpec& grid, double maturity, const ModelParams& params, double y_today,
                              double y0)
{
    const std::vector<double> zero(static_cast<std::size_t>(spectral.n()), 0.0);
    return sample_variance_path(zero, coeffs, spectral, grid, maturity, params, y_today, y0);
}

std::vector<double> recover_normals(std::span<const double> path, const BridgeCoefficients& coeffs,
                                    const SpectralBridge& spectral, const GridSpec& grid, double maturity,
                                    const ModelParams& params, double y_today)
{
    const int n = spectral.n();
    if (static_cast<int>(path.size()) != n + 2) throw std::invalid_argument("path must have length n+2");
    const Frame f = make_frame(grid, maturity, params);
    const auto m = spectral.eigenvalues();
    std::vector<double> eta(n);
    for (int i = 1; i <= n; ++i) eta[i - 1] = (path[i] - anchor(y_today, f, n, i)) / f.scale;
    std::vector<double> zeta(n);
    for (int j = 1; j <= n; ++j) {
        double omega = 0.0;  // (O^T eta)_j
        for (int i = 1; i <= n; ++i) omega += spectral.basis(i, j) * eta[i - 1];
        zeta[j - 1] = std::sqrt(m[j - 1]) * (omega - coeffs.g[j - 1] / m[j - 1]);
    }
    return zeta;
}

double log_interior_density(std::span<const double> path, const BridgeCoefficients& coeffs,
                            const SpectralBridge& spectral, const GridSpec& grid, double maturity,
                            const ModelParams& params, double y_today)
{
    const int n = spectral.n();
    const auto zeta = recover_normals(path, coeffs, spectral, grid, maturity, params, y_today);
    const Frame f = make_frame(grid, maturity, params);
    double log_phi = 0.0;
    for (double z : zeta) log_phi += -0.5 * z * z;
    log_phi -= 0.5 * n * std::log(2.0 * std::numbers::pi);
    // |d zeta / d y| = prod sqrt(m_j) / scale^n
    return log_phi + 0.5 * spectral.log_det_m() - n * std::log(f.scale);
}

}  // namespace svpath::bridge
