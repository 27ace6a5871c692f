#include "egpf/info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace egpf {

namespace {

constexpr double kLn2 = 0.6931471805599453;

double shannon_bits(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

} // namespace

ValidationReport validate_channel(const ChannelMatrix& channel) {
    ValidationReport report;
    if (channel.num_inputs == 0 || channel.num_outputs == 0) {
        report.fail("empty channel");
        return report;
    }
    for (std::size_t x = 0; x < channel.num_inputs; ++x) {
        double sum = 0.0;
        for (std::size_t y = 0; y < channel.num_outputs; ++y) {
            const double v = channel(x, y);
            if (v < 0.0 || v > 1.0)
                report.fail("entry (" + std::to_string(x) + "," + std::to_string(y) +
                            ") out of [0,1]");
            sum += v;
        }
        if (std::abs(sum - 1.0) > defaults::kSimplexTol)
            report.fail("row " + std::to_string(x) + " sums to " + std::to_string(sum));
    }
    return report;
}

TypeChannels qre_channels(const GameSpec& game) {
    TypeChannels channels;
    channels.per_type.reserve(game.num_types());
    for (std::size_t k = 0; k < game.num_types(); ++k) {
        ChannelMatrix c(game.num_actions(), game.num_responses());
        for (std::size_t a = 0; a < game.num_actions(); ++a) {
            const auto row = qre_distribution(game, static_cast<int>(a), static_cast<int>(k));
            for (std::size_t d = 0; d < row.size(); ++d) c(a, d) = row[d];
        }
        channels.per_type.push_back(std::move(c));
    }
    return channels;
}

ChannelMatrix mixture_channel(const TypeChannels& channels, const Belief& mu) {
    if (channels.num_types() != mu.size())
        throw Error("mixture_channel: belief length != number of type channels");
    ChannelMatrix mix(channels.num_inputs(), channels.num_outputs());
    for (std::size_t k = 0; k < channels.num_types(); ++k)
        for (std::size_t i = 0; i < mix.p.size(); ++i)
            mix.p[i] += mu[k] * channels.per_type[k].p[i];
    return mix;
}

double mutual_information(const std::vector<double>& input_dist,
                          const ChannelMatrix& channel) {
    if (input_dist.size() != channel.num_inputs)
        throw Error("mutual_information: input distribution length != channel rows");
    std::vector<double> output(channel.num_outputs, 0.0);
    for (std::size_t x = 0; x < channel.num_inputs; ++x)
        for (std::size_t y = 0; y < channel.num_outputs; ++y)
            output[y] += input_dist[x] * channel(x, y);

    double info = 0.0;
    for (std::size_t x = 0; x < channel.num_inputs; ++x) {
        if (input_dist[x] == 0.0) continue;
        for (std::size_t y = 0; y < channel.num_outputs; ++y) {
            const double pxy = channel(x, y);
            if (pxy > 0.0 && output[y] > 0.0)
                info += input_dist[x] * pxy * std::log2(pxy / output[y]);
        }
    }
    return std::max(0.0, info);
}

CapacityResult channel_capacity(const ChannelMatrix& channel, double tol, int max_iters) {
    require_valid(validate_channel(channel), "channel_capacity");
    const std::size_t m = channel.num_inputs;
    const std::size_t l = channel.num_outputs;

    CapacityResult result;
    std::vector<double> input(m, 1.0 / static_cast<double>(m));
    std::vector<double> output(l, 0.0);
    std::vector<double> relative_info(m, 0.0); // D(P(.|x) || q) in nats

    for (int iter = 1; iter <= max_iters; ++iter) {
        std::fill(output.begin(), output.end(), 0.0);
        for (std::size_t x = 0; x < m; ++x)
            for (std::size_t y = 0; y < l; ++y) output[y] += input[x] * channel(x, y);

        double lower = 0.0; // I(input; channel), nats
        double upper = -std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < m; ++x) {
            double d = 0.0;
            for (std::size_t y = 0; y < l; ++y) {
                const double pxy = channel(x, y);
                if (pxy > 0.0) d += pxy * std::log(pxy / output[y]);
            }
            relative_info[x] = d;
            lower += input[x] * d;
            upper = std::max(upper, d);
        }

        result.capacity_bits = lower / kLn2;
        result.input_dist = input;
        result.iterations = iter;
        result.lower_bounds.push_back(lower / kLn2);
        if ((upper - lower) / kLn2 < tol) return result;

        double z = 0.0;
        for (std::size_t x = 0; x < m; ++x) {
            input[x] *= std::exp(relative_info[x]);
            z += input[x];
        }
        for (auto& v : input) v /= z;
    }
    result.converged = false;
    return result;
}

double information_gain(const Belief& mu, int action, const TypeChannels& channels) {
    if (channels.num_types() != mu.size())
        throw Error("information_gain: belief length != number of type channels");
    const std::size_t l = channels.num_outputs();

    std::vector<double> predictive(l, 0.0);
    for (std::size_t k = 0; k < mu.size(); ++k)
        for (std::size_t d = 0; d < l; ++d)
            predictive[d] += mu[k] * channels.per_type[k](action, d);

    double expected_posterior_entropy = 0.0;
    std::vector<double> posterior(mu.size());
    for (std::size_t d = 0; d < l; ++d) {
        if (predictive[d] <= 0.0) continue;
        for (std::size_t k = 0; k < mu.size(); ++k)
            posterior[k] = mu[k] * channels.per_type[k](action, d) / predictive[d];
        expected_posterior_entropy += predictive[d] * shannon_bits(posterior);
    }
    return std::max(0.0, shannon_bits(mu.weights) - expected_posterior_entropy);
}

bool FisherMatrix::symmetric(double tol) const {
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

double FisherMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    return solver.eigenvalues().minCoeff();
}

namespace {

// Orthonormal basis of the subspace tangent to the influence-weight simplex:
// zero-sum directions in the first four coordinates plus the free axes.
Eigen::MatrixXd simplex_tangent_basis() {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(8, 7);
    b.col(0).head(4) << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0, 0.0;
    b.col(1).head(4) << 1.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0),
        -2.0 / std::sqrt(6.0), 0.0;
    b.col(2).head(4) << 1.0 / std::sqrt(12.0), 1.0 / std::sqrt(12.0),
        1.0 / std::sqrt(12.0), -3.0 / std::sqrt(12.0);
    for (int j = 0; j < 4; ++j) b(4 + j, 3 + j) = 1.0;
    return b;
}

} // namespace

double FisherMatrix::projected_determinant(double tol) const {
    Eigen::MatrixXd reduced;
    if (m.rows() == 8 && m.cols() == 8) {
        const Eigen::MatrixXd b = simplex_tangent_basis();
        reduced = b.transpose() * m * b;
    } else {
        reduced = m;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(reduced);
    const auto eigenvalues = solver.eigenvalues();
    const double scale = std::max(1.0, eigenvalues.cwiseAbs().maxCoeff());
    double det = 1.0;
    bool any = false;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        if (eigenvalues[i] > tol * scale) {
            det *= eigenvalues[i];
            any = true;
        }
    }
    return any ? det : 0.0;
}

FisherMatrix fisher_information(const TypeVector& theta, const LikelihoodFamily& likelihood,
                                double step) {
    const auto base = likelihood(theta);
    const std::size_t l = base.size();
    for (double v : base)
        if (v <= 0.0) throw Error("non-positive likelihood");

    constexpr std::size_t n = TypeVector::kDim;
    const auto center = theta.as_array();

    // scores[j][d] = d log P(d) / d theta_j, central differences
    std::vector<std::vector<double>> scores(n, std::vector<double>(l, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        const double h = step * std::max(1.0, std::abs(center[j]));
        auto plus = center, minus = center;
        plus[j] += h;
        minus[j] -= h;
        const auto p_plus = likelihood(TypeVector::from_array(plus));
        const auto p_minus = likelihood(TypeVector::from_array(minus));
        if (p_plus.size() != l || p_minus.size() != l)
            throw Error("fisher_information: likelihood dimension changed");
        for (std::size_t d = 0; d < l; ++d) {
            if (p_plus[d] <= 0.0 || p_minus[d] <= 0.0)
                throw Error("non-positive likelihood");
            scores[j][d] = (std::log(p_plus[d]) - std::log(p_minus[d])) / (2.0 * h);
        }
    }

    FisherMatrix fisher;
    fisher.m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j; k < n; ++k) {
            double sum = 0.0;
            for (std::size_t d = 0; d < l; ++d)
                sum += base[d] * scores[j][d] * scores[k][d];
            fisher.m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = sum;
            fisher.m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = sum;
        }
    return fisher;
}

int d_optimal_action(const TypeVector& theta_hat,
                     const std::vector<LikelihoodFamily>& per_action_likelihoods,
                     DesignMode mode, const Eigen::MatrixXd* sigma, double fd_step) {
    if (per_action_likelihoods.empty())
        throw Error("d_optimal_action: empty action set");
    if (mode == DesignMode::kTraceApprox && sigma == nullptr)
        throw Error("d_optimal_action: trace mode requires a posterior covariance");

    int best_action = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < per_action_likelihoods.size(); ++a) {
        const FisherMatrix fisher =
            fisher_information(theta_hat, per_action_likelihoods[a], fd_step);
        const double score = (mode == DesignMode::kDeterminant)
                                 ? fisher.projected_determinant()
                                 : 0.5 * (fisher.m * (*sigma)).trace();
        if (score > best_score) {
            best_score = score;
            best_action = static_cast<int>(a);
        }
    }
    return best_action;
}

std::vector<double> personalization_distortion(const std::vector<double>& relevance,
                                               const std::vector<double>& regulatory,
                                               const std::vector<double>& privacy,
                                               std::size_t num_types,
                                               std::size_t num_contents,
                                               double lambda_r, double lambda_p) {
    if (relevance.size() != num_types * num_contents ||
        privacy.size() != num_types * num_contents ||
        regulatory.size() != num_contents)
        throw Error("personalization_distortion: component size mismatch");
    std::vector<double> d(num_types * num_contents, 0.0);
    for (std::size_t k = 0; k < num_types; ++k)
        for (std::size_t c = 0; c < num_contents; ++c) {
            const std::size_t i = k * num_contents + c;
            d[i] = (1.0 - relevance[i]) + lambda_r * regulatory[c] + lambda_p * privacy[i];
        }
    return d;
}

std::vector<RateDistortionPoint> rate_distortion_curve(
    const Belief& type_dist, std::size_t num_contents,
    const std::vector<double>& distortion, const std::vector<double>& slope_grid,
    double tol, int max_iters) {
    const std::size_t k = type_dist.size();
    if (distortion.size() != k * num_contents)
        throw Error("rate_distortion_curve: distortion matrix must be K x C");
    for (double v : distortion)
        if (!std::isfinite(v) || v < 0.0)
            throw Error("rate_distortion_curve: distortion must be finite and nonnegative");

    auto d_at = [&](std::size_t t, std::size_t c) { return distortion[t * num_contents + c]; };

    std::vector<RateDistortionPoint> points;
    points.reserve(slope_grid.size());
    for (double lambda : slope_grid) {
        std::vector<double> marginal(num_contents, 1.0 / static_cast<double>(num_contents));
        std::vector<double> conditional(k * num_contents, 0.0); // Q(c | theta)
        bool converged = false;
        for (int iter = 0; iter < max_iters && !converged; ++iter) {
            for (std::size_t t = 0; t < k; ++t) {
                double z = 0.0;
                for (std::size_t c = 0; c < num_contents; ++c) {
                    const double w = marginal[c] * std::exp(-lambda * d_at(t, c));
                    conditional[t * num_contents + c] = w;
                    z += w;
                }
                if (z <= 0.0) throw Error("rate_distortion_curve: degenerate weights");
                for (std::size_t c = 0; c < num_contents; ++c)
                    conditional[t * num_contents + c] /= z;
            }
            double delta = 0.0;
            for (std::size_t c = 0; c < num_contents; ++c) {
                double q = 0.0;
                for (std::size_t t = 0; t < k; ++t)
                    q += type_dist[t] * conditional[t * num_contents + c];
                delta = std::max(delta, std::abs(q - marginal[c]));
                marginal[c] = q;
            }
            converged = delta < tol;
        }

        RateDistortionPoint point;
        point.lambda = lambda;
        point.converged = converged;
        for (std::size_t t = 0; t < k; ++t) {
            if (type_dist[t] == 0.0) continue;
            for (std::size_t c = 0; c < num_contents; ++c) {
                const double q = conditional[t * num_contents + c];
                if (q > 0.0 && marginal[c] > 0.0)
                    point.rate_bits += type_dist[t] * q * std::log2(q / marginal[c]);
                point.distortion += type_dist[t] * q * d_at(t, c);
            }
        }
        point.rate_bits = std::max(0.0, point.rate_bits);
        points.push_back(point);
    }
    std::sort(points.begin(), points.end(),
              [](const RateDistortionPoint& a, const RateDistortionPoint& b) {
                  return a.distortion < b.distortion;
              });
    return points;
}

} // namespace egpf
