#include "svpath/pricer.hpp"

#include "parallel.hpp"
#include "svpath/kernel.hpp"
#include "svpath/payoff.hpp"
#include "svpath/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace svpath::pricer {

namespace {

// Sample mean and covariance-of-the-mean over independent units (rows).
struct MeanEstimate {
    std::vector<double> mean;
    std::vector<double> covariance;  // k x k
};

MeanEstimate estimate_mean(const std::vector<double>& units, std::size_t count, std::size_t k)
{
    MeanEstimate out{std::vector<double>(k, 0.0), std::vector<double>(k * k, 0.0)};
    for (std::size_t u = 0; u < count; ++u) {
        for (std::size_t c = 0; c < k; ++c) out.mean[c] += units[u * k + c];
    }
    for (double& m : out.mean) m /= static_cast<double>(count);
    if (count < 2) return out;
    for (std::size_t u = 0; u < count; ++u) {
        const double* row = units.data() + u * k;
        for (std::size_t a = 0; a < k; ++a) {
            const double da = row[a] - out.mean[a];
            for (std::size_t b = 0; b < k; ++b) out.covariance[a * k + b] += da * (row[b] - out.mean[b]);
        }
    }
    const double denom = static_cast<double>(count) * static_cast<double>(count - 1);
    for (double& v : out.covariance) v /= denom;
    return out;
}

void require_common_inputs(std::span<const Contract> contracts, const MarketState& state,
                           const ModelParams& params, const GridSpec& grid, const McConfig& mc)
{
    if (contracts.empty()) throw std::invalid_argument("no contracts to price");
    for (const auto& c : contracts) {
        require_valid(c);
        if (c.maturity != contracts.front().maturity) {
            throw std::invalid_argument("contracts in a strip must share a maturity");
        }
    }
    require_valid(state);
    require_valid(params);
    require_valid(grid);
    require_valid(mc);
    if (!params.is_log_normal_variance()) {
        throw std::invalid_argument("path-integral pricer requires alpha = 1 and lambda = 0");
    }
    if (mc.price_paths >= (1 << 24)) throw std::invalid_argument("price_paths must be below 2^24");
    if (mc.variance_paths * static_cast<std::int64_t>(grid.y0_nodes) >= (std::int64_t{1} << 32)) {
        throw std::invalid_argument("variance path budget exceeds 2^32");
    }
}

// Simulates log-price paths conditional on one log-variance path and
// accumulates payoffs for every contract.
class PriceSimulator {
public:
    PriceSimulator(std::span<const Contract> contracts, const MarketState& state, const ModelParams& params,
                   const GridSpec& grid, const McConfig& mc, const NormalSource& source)
        : contracts_(contracts), params_(params), mc_(mc), source_(source), n_(grid.n),
          eps_(grid.step(contracts.front().maturity)), x_today_(state.spot_log_price),
          shift_(n_ + 1), sd_(n_ + 1), normals_(n_ + 1), x_(n_ + 2), payoffs_(contracts.size())
    {
    }

    int signs() const noexcept { return mc_.antithetic ? 2 : 1; }

    // Step i+1 -> i. Index n+1 is today.
    void prepare(std::span<const double> y)
    {
        for (int i = n_; i >= 0; --i) {
            const auto law = kernel::conditional_price_step(0.0, y[i + 1], y[i] - y[i + 1], eps_, params_);
            shift_[i] = law.mean;
            sd_[i] = law.std;
        }
    }

    // Adds sum of payoffs over all price paths of this variance path to `acc`;
    // returns the number of samples. When `per_sample` is set, every sample
    // is appended there as its own row instead.
    std::int64_t run(StreamAddress address, std::span<double> acc, std::vector<double>* per_sample)
    {
        std::int64_t samples = 0;
        for (std::int64_t p = 0; p < mc_.price_paths; ++p) {
            address.c = static_cast<std::uint32_t>(p);
            source_(address, normals_);
            for (int s = 0; s < signs(); ++s) {
                const double sign = s == 0 ? 1.0 : -1.0;
                x_[n_ + 1] = x_today_;
                for (int i = n_; i >= 0; --i) x_[i] = x_[i + 1] + shift_[i] + sd_[i] * sign * normals_[n_ - i];
                const auto summary = payoff::summarize(x_);
                for (std::size_t c = 0; c < contracts_.size(); ++c) {
                    payoffs_[c] = payoff::evaluate(contracts_[c], summary, x_);
                }
                if (per_sample != nullptr) {
                    per_sample->insert(per_sample->end(), payoffs_.begin(), payoffs_.end());
                } else {
                    for (std::size_t c = 0; c < contracts_.size(); ++c) acc[c] += payoffs_[c];
                }
                ++samples;
            }
        }
        return samples;
    }

private:
    std::span<const Contract> contracts_;
    const ModelParams& params_;
    const McConfig& mc_;
    const NormalSource& source_;
    int n_;
    double eps_;
    double x_today_;
    std::vector<double> shift_;
    std::vector<double> sd_;
    std::vector<double> normals_;
    std::vector<double> x_;
    std::vector<double> payoffs_;
};

struct NodeOutput {
    MeanEstimate estimate;
    std::int64_t evaluations = 0;
};

// Monte-Carlo estimate of chi(y0) for every contract at one quadrature node.
// Units are variance paths (with their antithetic partner and all price paths);
// a single variance path falls back to per-sample units.
NodeOutput simulate_node(std::uint32_t node, double y0, std::span<const Contract> contracts,
                         const MarketState& state, const ModelParams& params, const GridSpec& grid,
                         const McConfig& mc, const bridge::SpectralBridge& spectral, const NormalSource& source)
{
    const int n = grid.n;
    const double maturity = contracts.front().maturity;
    const double y_today = state.spot_log_variance;
    const auto coeffs = bridge::bridge_coefficients(y_today, y0, grid, maturity, params, spectral);
    const auto mean = bridge::mean_path(coeffs, spectral, grid, maturity, params, y_today, y0);
    const double scale = std::sqrt(grid.step(maturity)) * params.xi;
    const auto sb = spectral.scaled_basis();
    const std::size_t k = contracts.size();

    PriceSimulator sim(contracts, state, params, grid, mc, source);
    std::vector<double> zeta(n);
    std::vector<double> fluct(n);
    std::vector<double> y(n + 2);
    const bool per_sample = mc.variance_paths == 1;
    std::vector<double> units;
    units.reserve(per_sample ? static_cast<std::size_t>(mc.price_paths) * 4 * k
                             : static_cast<std::size_t>(mc.variance_paths) * k);
    std::vector<double> acc(k);
    NodeOutput out;

    for (std::int64_t v = 0; v < mc.variance_paths; ++v) {
        source({StreamDomain::Bridge, node, static_cast<std::uint32_t>(v), 0}, zeta);
        for (int i = 0; i < n; ++i) {
            const double* row = sb.data() + static_cast<std::size_t>(i) * n;
            double sum = 0.0;
            for (int j = 0; j < n; ++j) sum += row[j] * zeta[j];
            fluct[i] = scale * sum;
        }
        std::fill(acc.begin(), acc.end(), 0.0);
        std::int64_t samples = 0;
        for (int s = 0; s < sim.signs(); ++s) {
            const double sign = s == 0 ? 1.0 : -1.0;
            y[0] = y0;
            y[n + 1] = y_today;
            for (int i = 1; i <= n; ++i) y[i] = mean[i] + sign * fluct[i - 1];
            sim.prepare(y);
            samples += sim.run({StreamDomain::Price, node, static_cast<std::uint32_t>(v), 0}, acc,
                               per_sample ? &units : nullptr);
        }
        out.evaluations += samples;
        if (!per_sample) {
            for (std::size_t c = 0; c < k; ++c) units.push_back(acc[c] / static_cast<double>(samples));
        }
    }
    const std::size_t count = units.size() / k;
    out.estimate = estimate_mean(units, count, k);
    out.evaluations *= static_cast<std::int64_t>(k);
    return out;
}

StripResult assemble(std::span<const Contract> contracts, const std::vector<double>& y0s,
                     const std::vector<double>& weights, const std::vector<NodeOutput>& nodes, double discount)
{
    const std::size_t k = contracts.size();
    StripResult out;
    out.results.resize(k);
    out.covariance.assign(k * k, 0.0);
    for (std::size_t node = 0; node < nodes.size(); ++node) {
        const double w = weights[node];
        out.mass += w;
        const auto& est = nodes[node].estimate;
        for (std::size_t c = 0; c < k; ++c) {
            auto& r = out.results[c];
            r.price += w * est.mean[c];
            r.n_evaluations += nodes[node].evaluations / static_cast<std::int64_t>(k);
            r.diagnostics.push_back({y0s[node], w, est.mean[c], est.covariance[c * k + c]});
        }
        for (std::size_t i = 0; i < k * k; ++i) out.covariance[i] += w * w * est.covariance[i];
    }
    for (std::size_t c = 0; c < k; ++c) out.results[c].price *= discount;
    for (double& v : out.covariance) v *= discount * discount;
    for (std::size_t c = 0; c < k; ++c) out.results[c].std_error = std::sqrt(out.covariance[c * k + c]);
    return out;
}

}  // namespace

NormalSource philox_source(std::uint64_t seed)
{
    return [seed](StreamAddress address, std::span<double> out) { NormalStream(seed, address).fill(out); };
}

std::pair<double, double> terminal_log_variance_bounds(const MarketState& state, const ModelParams& params,
                                                       const GridSpec& grid, double maturity)
{
    const double centre = state.spot_log_variance + params.log_variance_drift() * maturity;
    const double half = grid.y0_halfwidth_sigmas * params.xi * std::sqrt(maturity);
    return {centre - half, centre + half};
}

ChiEstimate chi(double y0, const MarketState& state, const ModelParams& params, const Contract& contract,
                const GridSpec& grid, const McConfig& mc, const bridge::SpectralBridge& spectral, std::uint32_t node,
                const NormalSource& source)
{
    const std::span<const Contract> one(&contract, 1);
    require_common_inputs(one, state, params, grid, mc);
    const auto out = simulate_node(node, y0, one, state, params, grid, mc, spectral, source);
    return {out.estimate.mean[0], out.estimate.covariance[0]};
}

ChiEstimate chi(double y0, const MarketState& state, const ModelParams& params, const Contract& contract,
                const GridSpec& grid, const McConfig& mc, const bridge::SpectralBridge& spectral, std::uint32_t node)
{
    return chi(y0, state, params, contract, grid, mc, spectral, node, philox_source(mc.seed));
}

StripResult price_strip(std::span<const Contract> contracts, const MarketState& state, const ModelParams& params,
                        const GridSpec& grid, const McConfig& mc)
{
    require_common_inputs(contracts, state, params, grid, mc);
    const double maturity = contracts.front().maturity;
    const auto spectral = bridge::build_spectral(grid.n);
    const auto [lo, hi] = terminal_log_variance_bounds(state, params, grid, maturity);
    const auto rule = make_rule(mc.rule, lo, hi, grid.y0_nodes);
    const auto source = philox_source(mc.seed);

    std::vector<double> weights(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const auto coeffs =
            bridge::bridge_coefficients(state.spot_log_variance, rule.nodes[i], grid, maturity, params, spectral);
        weights[i] = rule.weights[i] * std::exp(coeffs.endpoint_weight_log);
    }

    std::vector<NodeOutput> nodes(rule.nodes.size());
    detail::parallel_for(nodes.size(), mc.threads, [&](std::size_t i) {
        nodes[i] = simulate_node(static_cast<std::uint32_t>(i), rule.nodes[i], contracts, state, params, grid, mc,
                                 spectral, source);
    });
    return assemble(contracts, rule.nodes, weights, nodes, std::exp(-params.r * maturity));
}

PriceResult price(const Contract& contract, const MarketState& state, const ModelParams& params,
                  const GridSpec& grid, const McConfig& mc)
{
    return std::move(price_strip(std::span<const Contract>(&contract, 1), state, params, grid, mc).results[0]);
}

StripResult price_sequential_strip(std::span<const Contract> contracts, const MarketState& state,
                                   const ModelParams& params, const GridSpec& grid, const McConfig& mc)
{
    require_common_inputs(contracts, state, params, grid, mc);
    const int n = grid.n;
    const double maturity = contracts.front().maturity;
    const double eps = grid.step(maturity);
    const std::size_t k = contracts.size();
    const auto total = static_cast<std::size_t>(mc.variance_paths) * static_cast<std::size_t>(grid.y0_nodes);
    const auto source = philox_source(mc.seed);

    // Fixed-size blocks of variance paths; each block writes its own slice.
    constexpr std::size_t kBlock = 256;
    const std::size_t blocks = (total + kBlock - 1) / kBlock;
    std::vector<double> units(total * k, 0.0);
    std::vector<std::int64_t> evaluations(blocks, 0);

    detail::parallel_for(blocks, mc.threads, [&](std::size_t b) {
        PriceSimulator sim(contracts, state, params, grid, mc, source);
        std::vector<double> normals(n + 1);
        std::vector<double> y(n + 2);
        const double step_sd = std::sqrt(eps) * params.xi;
        const std::size_t end = std::min(total, (b + 1) * kBlock);
        for (std::size_t v = b * kBlock; v < end; ++v) {
            const auto v32 = static_cast<std::uint32_t>(v);
            source({StreamDomain::SequentialVariance, 0, v32, 0}, normals);
            std::span<double> acc(units.data() + v * k, k);
            std::int64_t samples = 0;
            for (int s = 0; s < sim.signs(); ++s) {
                const double sign = s == 0 ? 1.0 : -1.0;
                y[n + 1] = state.spot_log_variance;
                for (int i = n; i >= 0; --i) {
                    y[i] = y[i + 1] + eps * params.log_variance_drift() + step_sd * sign * normals[n - i];
                }
                sim.prepare(y);
                samples += sim.run({StreamDomain::Price, 0xffffffffu, v32, 0}, acc, nullptr);
            }
            for (double& a : acc) a /= static_cast<double>(samples);
            evaluations[b] += samples * static_cast<std::int64_t>(k);
        }
    });

    const auto est = estimate_mean(units, total, k);
    const double discount = std::exp(-params.r * maturity);
    StripResult out;
    out.mass = 1.0;
    out.covariance = est.covariance;
    for (double& v : out.covariance) v *= discount * discount;
    std::int64_t evals = 0;
    for (auto e : evaluations) evals += e;
    for (std::size_t c = 0; c < k; ++c) {
        PriceResult r;
        r.price = discount * est.mean[c];
        r.std_error = std::sqrt(out.covariance[c * k + c]);
        r.n_evaluations = evals / static_cast<std::int64_t>(k);
        out.results.push_back(std::move(r));
    }
    return out;
}

PriceResult price_sequential(const Contract& contract, const MarketState& state, const ModelParams& params,
                             const GridSpec& grid, const McConfig& mc)
{
    return std::move(
        price_sequential_strip(std::span<const Contract>(&contract, 1), state, params, grid, mc).results[0]);
}

}  // namespace svpath::pricer
