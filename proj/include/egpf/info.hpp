#pragma once

#include <Eigen/Dense>
#include <vector>

#include "egpf/core.hpp"
#include "egpf/game.hpp"

namespace egpf {

// Row-stochastic conditional distribution P(output | input) with
// `num_inputs` rows and `num_outputs` columns, stored row-major.
struct ChannelMatrix {
    std::size_t num_inputs = 0;
    std::size_t num_outputs = 0;
    std::vector<double> p;

    ChannelMatrix() = default;
    ChannelMatrix(std::size_t m, std::size_t l)
        : num_inputs(m), num_outputs(l), p(m * l, 0.0) {}

    double operator()(std::size_t x, std::size_t y) const {
        return p[x * num_outputs + y];
    }
    double& operator()(std::size_t x, std::size_t y) {
        return p[x * num_outputs + y];
    }
    std::vector<double> row(std::size_t x) const {
        return {p.begin() + static_cast<long>(x * num_outputs),
                p.begin() + static_cast<long>((x + 1) * num_outputs)};
    }
};

ValidationReport validate_channel(const ChannelMatrix& channel);

// One engagement channel per physician type, all with identical shape.
struct TypeChannels {
    std::vector<ChannelMatrix> per_type;

    std::size_t num_types() const { return per_type.size(); }
    std::size_t num_inputs() const { return per_type.empty() ? 0 : per_type[0].num_inputs; }
    std::size_t num_outputs() const { return per_type.empty() ? 0 : per_type[0].num_outputs; }
};

// QRE observation channels P(d | a, theta_k) of a game.
TypeChannels qre_channels(const GameSpec& game);

// Belief-weighted mixture channel P(d | a) = sum_k mu_k P(d | a, theta_k).
ChannelMatrix mixture_channel(const TypeChannels& channels, const Belief& mu);

// I(X;Y) in bits for an input distribution and channel, with 0*log 0 = 0.
double mutual_information(const std::vector<double>& input_dist,
                          const ChannelMatrix& channel);

struct CapacityResult {
    double capacity_bits = 0.0;
    std::vector<double> input_dist;
    int iterations = 0;
    bool converged = true;
    std::vector<double> lower_bounds; // per-iteration mutual information, bits
};

// Blahut-Arimoto capacity iteration. Terminates when the upper/lower bound
// gap drops below `tol` (bits); sets converged=false and returns the best
// iterate when max_iters is exhausted. The lower-bound sequence is
// monotone non-decreasing.
CapacityResult channel_capacity(const ChannelMatrix& channel,
                                double tol = defaults::kCapacityTol,
                                int max_iters = defaults::kCapacityMaxIters);

// Expected entropy drop about the type from observing the response to
// `action`: H(mu) - E_d[H(posterior | d)]. Equals I(Theta; D) >= 0.
double information_gain(const Belief& mu, int action, const TypeChannels& channels);

// Symmetric n x n Fisher information matrix over the type parameters.
struct FisherMatrix {
    Eigen::MatrixXd m;

    bool symmetric(double tol = 1e-9) const;
    double min_eigenvalue() const;
    // Determinant restricted to the simplex-constraint tangent space;
    // pseudo-determinant (product of eigenvalues above tol) when the
    // restriction is still singular.
    double projected_determinant(double tol = 1e-12) const;
};

// Expected outer product of score vectors, with scores from central finite
// differences of the log-likelihood. `step` is relative to max(1, |theta_j|).
// Throws Error("non-positive likelihood") if any perturbed evaluation fails.
FisherMatrix fisher_information(const TypeVector& theta, const LikelihoodFamily& likelihood,
                                double step = 1e-5);

enum class DesignMode { kDeterminant, kTraceApprox };

// Most informative action for type identification: argmax of the projected
// Fisher determinant, or of 0.5*tr(I_a * Sigma) in trace mode. Ties break
// to the lowest action index.
int d_optimal_action(const TypeVector& theta_hat,
                     const std::vector<LikelihoodFamily>& per_action_likelihoods,
                     DesignMode mode = DesignMode::kDeterminant,
                     const Eigen::MatrixXd* sigma = nullptr, double fd_step = 1e-5);

// Content-personalization distortion d(theta, c) = (1 - Rel) + lambda_r*Reg
// + lambda_p*Priv, assembled from caller-supplied component matrices
// (relevance and privacy are K x C row-major, regulatory is per content).
std::vector<double> personalization_distortion(const std::vector<double>& relevance,
                                               const std::vector<double>& regulatory,
                                               const std::vector<double>& privacy,
                                               std::size_t num_types,
                                               std::size_t num_contents,
                                               double lambda_r, double lambda_p);

struct RateDistortionPoint {
    double lambda = 0.0;      // Lagrange slope used for this point
    double rate_bits = 0.0;
    double distortion = 0.0;
    bool converged = true;
};

// Blahut-Arimoto rate-distortion sweep over `slope_grid`. `distortion`
// is a K x C matrix d(theta, c) flattened row-major. Returned points are
// sorted by ascending distortion.
std::vector<RateDistortionPoint> rate_distortion_curve(
    const Belief& type_dist, std::size_t num_contents,
    const std::vector<double>& distortion, const std::vector<double>& slope_grid,
    double tol = 1e-10, int max_iters = defaults::kCapacityMaxIters);

} // namespace egpf
