#include "svpath/bridge.hpp"
#include "svpath/cli.hpp"
#include "svpath/config.hpp"
#include "svpath/kernel.hpp"
#include "svpath/payoff.hpp"
#include "svpath/pricer.hpp"
#include "svpath/reference.hpp"
#include "svpath/rng.hpp"
#include "svpath/smile.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace svpath;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double time_limit;  // seconds
    std::function<Outcome()> body;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ModelParams params(double xi, double rho, double mu = 0.0, double r = 0.04)
{
    ModelParams p;
    p.r = r;
    p.mu = mu;
    p.xi = xi;
    p.rho = rho;
    return p;
}

GridSpec grid_of(int n)
{
    GridSpec g;
    g.n = n;
    g.y0_nodes = 101;
    return g;
}

McConfig budget(std::int64_t variance_paths, std::int64_t price_paths)
{
    McConfig mc;
    mc.variance_paths = variance_paths;
    mc.price_paths = price_paths;
    mc.seed = kSeed;
    return mc;
}

McConfig full_budget() { return budget(1000, 10); }

Contract make(PayoffKind kind, double strike = 1.0)
{
    Contract c;
    c.kind = kind;
    c.strike = strike;
    c.maturity = 1.0;
    if (kind == PayoffKind::UpAndOutCall) c.barrier = 1.3;
    return c;
}

Contract custom(TrajectoryFunctional f)
{
    Contract c;
    c.kind = PayoffKind::Custom;
    c.custom_payoff = std::move(f);
    c.maturity = 1.0;
    return c;
}

const std::vector<double> kSmileStrikes{0.8, 0.85, 0.9, 0.95, 1.0, 1.05, 1.1, 1.15, 1.2};

smile::SmileFit fitted_smile(const ModelParams& p, double v0)
{
    const auto s = smile::compute_smile(kSmileStrikes, 1.0, MarketState::from_levels(1.0, v0), p, grid_of(32), full_budget());
    return smile::fit_smile(s);
}

Outcome discount_identity()
{
    Outcome o;
    double worst = 0.0;
    for (int n : {16, 64}) {
        for (double xi : {0.1, 0.5}) {
            for (double rho : {-0.3, 0.0, 0.3}) {
                const auto res = pricer::price(custom(payoff::constant(1.0)), MarketState::from_levels(1.0, 0.09),
                                               params(xi, rho), grid_of(n), budget(10, 1));
                const double rel = std::abs(res.price / std::exp(-0.04) - 1.0);
                worst = std::max(worst, rel);
                if (rel > 1e-3) o.pass = false;
            }
        }
    }
    o.detail = fmt("worst relative error %.2e over 12 cases", worst);
    return o;
}

Outcome martingale()
{
    Outcome o;
    double worst = 0.0;
    for (int n : {16, 64}) {
        for (double xi : {0.1, 0.5}) {
            for (double rho : {-0.3, 0.0, 0.3}) {
                const auto res = pricer::price(custom(payoff::forward(0.0)), MarketState::from_levels(1.0, 0.09),
                                               params(xi, rho), grid_of(n), budget(100, 10));
                const double z = std::abs(res.price - 1.0) / res.std_error;
                worst = std::max(worst, z);
                if (z > 3.0) {
                    o.pass = false;
                    o.detail += fmt("[n=%d xi=%.1f rho=%.1f: %.6f +- %.6f] ", n, xi, rho, res.price, res.std_error);
                }
            }
        }
    }
    o.detail += fmt("worst |price - S0| = %.2f SE over 12 cases", worst);
    return o;
}

Outcome constant_vol_limit()
{
    Outcome o;
    std::vector<Contract> calls;
    for (double k : {0.8, 0.9, 1.0, 1.1, 1.2}) calls.push_back(make(PayoffKind::EuropeanCall, k));
    const auto strip = pricer::price_strip(calls, MarketState::from_levels(1.0, 0.09), params(1e-4, 0.0), grid_of(32),
                                           full_budget());
    for (std::size_t i = 0; i < calls.size(); ++i) {
        const double bs = reference::bs_price(1.0, calls[i].strike, 0.04, 0.3, 1.0, true);
        const auto& r = strip.results[i];
        const double tol = std::max(3 * r.std_error, 0.005 * bs);
        if (std::abs(r.price - bs) > tol) o.pass = false;
        o.detail += fmt("K=%.1f %.5f/%.5f ", calls[i].strike, r.price, bs);
    }
    return o;
}

Outcome oracle_agreement()
{
    Outcome o;
    const int n = 64;
    const auto state = MarketState::from_levels(1.0, 0.09);
    const auto p = params(0.5, -0.3);
    const std::vector<Contract> contracts{make(PayoffKind::AsianArithmeticCall), make(PayoffKind::UpAndOutCall)};
    const auto strip = pricer::price_strip(contracts, state, p, grid_of(n), full_budget());
    reference::EulerConfig cfg;
    cfg.steps = 250;
    cfg.paths = 100000;
    cfg.seed = kSeed;
    // Monitor the Euler paths on the pricer's n+2 dates.
    cfg.observation_intervals = n + 1;
    for (std::size_t i = 0; i < contracts.size(); ++i) {
        const auto e = reference::euler_oracle(contracts[i], state, p, cfg);
        const auto& r = strip.results[i];
        const double z = std::abs(r.price - e.price) / std::hypot(r.std_error, e.std_error);
        if (z > 3.0) o.pass = false;
        o.detail += fmt("%s %.5f+-%.5f vs %.5f+-%.5f (%.2f SE) ", to_string(contracts[i].kind).c_str(), r.price,
                        r.std_error, e.price, e.std_error, z);
    }
    return o;
}

Outcome factorization()
{
    Outcome o;
    const auto state = MarketState::from_levels(1.0, 0.09);
    const auto p = params(0.5, -0.3);
    const std::vector<Contract> contracts{make(PayoffKind::EuropeanCall), make(PayoffKind::AsianArithmeticCall),
                                          make(PayoffKind::AsianGeometricCall), make(PayoffKind::LookbackFixedCall),
                                          make(PayoffKind::UpAndOutCall)};
    const auto a = pricer::price_strip(contracts, state, p, grid_of(64), full_budget());
    auto mc = full_budget();
    mc.seed = kSeed + 1;
    const auto b = pricer::price_sequential_strip(contracts, state, p, grid_of(64), mc);
    for (std::size_t i = 0; i < contracts.size(); ++i) {
        const auto& x = a.results[i];
        const auto& y = b.results[i];
        const double z = std::abs(x.price - y.price) / std::hypot(x.std_error, y.std_error);
        if (z > 3.0) o.pass = false;
        o.detail += fmt("%s %.2f SE; ", to_string(contracts[i].kind).c_str(), z);
    }
    return o;
}

Outcome density_identity()
{
    Outcome o;
    NormalStream rng(kSeed, {StreamDomain::Test, 6, 0, 0});
    double worst = 0.0;
    for (int n = 1; n <= 6; ++n) {
        const auto s = bridge::build_spectral(n);
        GridSpec g;
        g.n = n;
        for (int trial = 0; trial < 100; ++trial) {
            const auto p = params(0.2 + rng.next_uniform(), -0.5 + rng.next_uniform());
            const double tau = 0.2 + 2 * rng.next_uniform();
            const double y_today = std::log(0.09) + 0.5 * rng.next();
            const double y0 = y_today + p.log_variance_drift() * tau + p.xi * std::sqrt(tau) * rng.next();
            const auto c = bridge::bridge_coefficients(y_today, y0, g, tau, p, s);
            std::vector<double> zeta(n);
            rng.fill(zeta);
            const auto path = bridge::sample_variance_path(zeta, c, s, g, tau, p, y_today, y0);
            const double bridge_density =
                std::exp(bridge::log_interior_density(path, c, s, g, tau, p, y_today) + c.endpoint_weight_log);
            double log_seq = 0.0;
            for (int i = 0; i <= n; ++i) log_seq += kernel::log_variance_step_density(path[i + 1], path[i], tau / (n + 1), p);
            const double rel = std::abs(bridge_density / std::exp(log_seq) - 1.0);
            worst = std::max(worst, rel);
            if (rel > 1e-8) o.pass = false;
        }
    }
    o.detail = fmt("worst relative error %.2e over 600 paths", worst);
    return o;
}

Outcome spectral_correctness()
{
    Outcome o;
    double worst = 0.0;
    for (int n = 1; n <= 8; ++n) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            m(i, i) = 2.0;
            if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = -1.0;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
        const auto s = bridge::build_spectral(n);
        for (int j = 0; j < n; ++j) {
            worst = std::max(worst, std::abs(s.eigenvalues()[j] - solver.eigenvalues()(j)));
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += s.basis(i + 1, j + 1) * solver.eigenvectors()(i, j);
            const double sign = dot < 0 ? -1.0 : 1.0;
            for (int i = 0; i < n; ++i) {
                worst = std::max(worst, std::abs(s.basis(i + 1, j + 1) - sign * solver.eigenvectors()(i, j)));
            }
        }
    }
    if (worst > 1e-10) o.pass = false;
    int bad_det = 0;
    for (int n = 1; n <= 10000; ++n) {
        if (bridge::tridiagonal_determinant(n) != n + 1.0) ++bad_det;
    }
    if (bad_det != 0) o.pass = false;
    o.detail = fmt("max eigen deviation %.2e (n<=8); determinant mismatches %d (n<=10000)", worst, bad_det);
    return o;
}

Outcome level_effect()
{
    Outcome o;
    std::vector<smile::SmileFit> fits;
    for (double mu : {-0.5, 0.0, 0.5}) {
        fits.push_back(fitted_smile(params(0.5, 0.0, mu), 0.3));
        o.detail += fmt("mu=%.1f level %.4f+-%.4f slope %.4f+-%.4f; ", mu, fits.back().level, fits.back().level_se,
                        fits.back().slope, fits.back().slope_se);
    }
    if (!(fits[0].level < fits[1].level && fits[1].level < fits[2].level)) o.pass = false;
    for (std::size_t a = 0; a < fits.size(); ++a) {
        for (std::size_t b = a + 1; b < fits.size(); ++b) {
            // The two 3-SE slope bands must overlap.
            if (std::abs(fits[a].slope - fits[b].slope) > 3 * (fits[a].slope_se + fits[b].slope_se)) o.pass = false;
        }
    }
    return o;
}

Outcome slope_effect()
{
    Outcome o;
    const auto pos = fitted_smile(params(0.5, 0.3), 0.3);
    const auto neg = fitted_smile(params(0.5, -0.3), 0.3);
    const auto low = fitted_smile(params(0.3, -0.3), 0.3);
    const auto high = fitted_smile(params(0.8, -0.3), 0.3);
    if (!(pos.slope > 3 * pos.slope_se)) o.pass = false;
    if (!(neg.slope < -3 * neg.slope_se)) o.pass = false;
    const double gap = std::abs(high.slope) - std::abs(low.slope);
    if (!(gap > 3 * std::hypot(high.slope_se, low.slope_se))) o.pass = false;
    o.detail = fmt("rho=+0.3 slope %.4f+-%.4f; rho=-0.3 slope %.4f+-%.4f; xi=0.3 slope %.4f+-%.4f; xi=0.8 slope %.4f+-%.4f",
                   pos.slope, pos.slope_se, neg.slope, neg.slope_se, low.slope, low.slope_se, high.slope, high.slope_se);
    return o;
}

Outcome determinism()
{
    auto cfg = config::Config::parse(
        "r = 0.04\nxi = 0.5\nrho = -0.3\nspot = 1\nv0 = 0.3\nmaturity = 1\nseed = 7\n"
        "strikes = 0.8,0.9,1.0,1.1,1.2\nn = 32\nvariance_paths = 100\nprice_paths = 10\n");
    cfg.set("threads", "1");
    const auto one = cli::cmd_smile(cfg);
    cfg.set("threads", "8");
    const auto eight = cli::cmd_smile(cfg);
    const auto a = cli::render_smile_csv(one.at(0).smile);
    const auto b = cli::render_smile_csv(eight.at(0).smile);
    Outcome o;
    o.pass = a == b;
    o.detail = fmt("%zu bytes, %s", a.size(), o.pass ? "identical" : "DIFFERENT");
    return o;
}

}  // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "discount identity", 30, discount_identity},
        {2, "martingale", 60, martingale},
        {3, "constant-vol limit", 120, constant_vol_limit},
        {4, "Euler oracle agreement", 300, oracle_agreement},
        {5, "factorization identity", 300, factorization},
        {6, "bridge density identity", 1, density_identity},
        {7, "spectral correctness", 1, spectral_correctness},
        {8, "drift moves smile level, not slope", 15 * 60, level_effect},
        {9, "correlation and vol-of-vol tilt the smile", 15 * 60, slope_effect},
        {10, "thread-count determinism", 600, determinism},
    };
    int failures = 0;
    double smile_seconds = 0.0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.id == 8 || c.id == 9) smile_seconds += seconds;
        bool on_time = seconds < c.time_limit;
        if (c.id == 9 && smile_seconds >= 15 * 60) on_time = false;
        const bool pass = o.pass && on_time;
        if (!pass) ++failures;
        std::printf("%s %2d %s (%.2f s%s): %s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), seconds,
                    on_time ? "" : ", over time limit", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
