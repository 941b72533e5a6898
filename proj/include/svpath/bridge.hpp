#pragma once

#include "svpath/model.hpp"

#include <span>
#include <vector>

namespace svpath::bridge {

/// Eigen-decomposition of the interior quadratic form of a Gaussian random walk
/// pinned at both ends: M = tridiag(-1, 2, -1) of size n.
///
///   m_j  = 2 - 2 cos(j pi / (n+1))
///   O_ij = sqrt(2/(n+1)) sin(i j pi / (n+1))
///
/// Row i of O belongs to interior point i, so row 1 is the neighbour of the
/// maturity end (index 0) and row n the neighbour of the valuation end (n+1).
/// Immutable once built; share one instance across nodes and threads.
class SpectralBridge {
public:
    explicit SpectralBridge(int n);

    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
    /// O(i, j) with 1-based indices i, j in [1, n].
    [[nodiscard]] double basis(int i, int j) const noexcept { return basis_[(i - 1) * n_ + (j - 1)]; }
    /// O(i, j) / sqrt(m_j), row-major, 0-based.
    [[nodiscard]] std::span<const double> scaled_basis() const noexcept { return scaled_basis_; }
    [[nodiscard]] double log_det_m() const noexcept { return log_det_m_; }

private:
    int n_;
    std::vector<double> eigenvalues_;
    std::vector<double> basis_;
    std::vector<double> scaled_basis_;
    double log_det_m_;
};

SpectralBridge build_spectral(int n);

/// det M of the (2, -1) tridiagonal by the three-term recurrence D_k = 2 D_{k-1} - D_{k-2}.
double tridiagonal_determinant(int n);

/// Endpoint data for one (y_today, y0) pair.
///
/// Interior log-variances are written y_i = y_today + drift*eps*(n+1-i) + sqrt(eps) xi eta_i,
/// which turns the increments into unit Gaussian steps of eta. eta_{n+1} = 0 and
/// eta_0 carries the terminal value.
struct BridgeCoefficients {
    std::vector<double> g;  // g_j = eta_0 O_{1j} + eta_{n+1} O_{nj}
    double eta_start = 0.0;   // eta_{n+1}
    double eta_end = 0.0;     // eta_0
    /// ln of the marginal density of y0 given y_today after integrating out the interior.
    double endpoint_weight_log = 0.0;
};

BridgeCoefficients bridge_coefficients(double y_today, double y0, const GridSpec& grid, double maturity,
                                       const ModelParams& params, const SpectralBridge& spectral);

/// Conditional mean path (zeta = 0), length n+2, index 0 is maturity.
std::vector<double> mean_path(const BridgeCoefficients& coeffs, const SpectralBridge& spectral,
                              const GridSpec& grid, double maturity, const ModelParams& params,
                              double y_today, double y0);

/// Writes a log-variance path (length n+2, index 0 is maturity) for n standard normals.
/// Endpoints are assigned exactly; interior points follow the mode expansion.
void sample_variance_path(std::span<const double> zeta, const BridgeCoefficients& coeffs,
                          const SpectralBridge& spectral, const GridSpec& grid, double maturity,
                          const ModelParams& params, double y_today, double y0, std::span<double> path);

std::vector<double> sample_variance_path(std::span<const double> zeta, const BridgeCoefficients& coeffs,
                                         const SpectralBridge& spectral, const GridSpec& grid, double maturity,
                                         const ModelParams& params, double y_today, double y0);

/// Inverse map: the normals that produce a given interior path.
std::vector<double> recover_normals(std::span<const double> path, const BridgeCoefficients& coeffs,
                                    const SpectralBridge& spectral, const GridSpec& grid, double maturity,
                                    const ModelParams& params, double y_today);

/// ln of the density of the interior points (y_1..y_n) under the bridge given both endpoints.
double log_interior_density(std::span<const double> path, const BridgeCoefficients& coeffs,
                            const SpectralBridge& spectral, const GridSpec& grid, double maturity,
                            const ModelParams& params, double y_today);

}  // namespace svpath::bridge
