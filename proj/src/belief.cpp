#include "egpf/belief.hpp"

#include <algorithm>
#include <cmath>

namespace egpf {

void InteractionHistory::append(int action, int response, std::int64_t time) {
    if (!records.empty() && time <= records.back().time)
        throw Error("interaction history: timestamps must be strictly increasing");
    records.push_back({action, response, time});
}

Belief bayes_update(const Belief& mu, const std::vector<double>& likelihoods) {
    if (likelihoods.size() != mu.size())
        throw Error("bayes_update: likelihood length != belief length");
    std::vector<double> posterior(mu.size());
    double z = 0.0;
    for (std::size_t k = 0; k < mu.size(); ++k) {
        if (likelihoods[k] < 0.0) throw Error("bayes_update: negative likelihood");
        posterior[k] = mu[k] * likelihoods[k];
        z += posterior[k];
    }
    if (z <= 0.0) throw Error("zero evidence");
    for (auto& w : posterior) w /= z;
    return Belief(std::move(posterior));
}

double entropy(const Belief& mu, double alpha) {
    if (alpha < 0.0) throw Error("entropy: alpha must be >= 0");
    if (std::abs(alpha - 1.0) < 1e-9) {
        double h = 0.0;
        for (double w : mu.weights)
            if (w > 0.0) h -= w * std::log2(w);
        return h;
    }
    double sum = 0.0;
    for (double w : mu.weights)
        if (w > 0.0) sum += std::pow(w, alpha);
    return std::log2(sum) / (1.0 - alpha);
}

double divergence(const std::vector<double>& p, const std::vector<double>& q,
                  double alpha) {
    if (p.size() != q.size()) throw Error("divergence: support size mismatch");
    if (alpha < 0.0) throw Error("divergence: alpha must be >= 0");

    if (std::abs(alpha - 1.0) < 1e-9) {
        double d = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] <= 0.0) continue;
            if (q[i] <= 0.0) throw Error("absolute continuity violated");
            d += p[i] * std::log2(p[i] / q[i]);
        }
        return std::max(0.0, d);
    }

    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) {
            if (alpha > 1.0) throw Error("absolute continuity violated");
            continue; // q^(1-alpha) -> 0 for alpha < 1
        }
        sum += std::pow(p[i], alpha) * std::pow(q[i], 1.0 - alpha);
    }
    if (sum <= 0.0) throw Error("divergence: empty overlap");
    return std::max(0.0, std::log2(sum) / (alpha - 1.0));
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw Error("total_variation: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

DriftReport drift_detect(const InteractionHistory& history, const TypeChannels& model,
                         const Belief& mu, int window, double tau_drift, double alpha) {
    if (window < 1) throw Error("drift_detect: window must be >= 1");
    if (history.size() < static_cast<std::size_t>(window))
        throw Error("drift_detect: history shorter than window");

    const std::size_t m = model.num_inputs();
    const std::size_t l = model.num_outputs();
    const ChannelMatrix predicted = mixture_channel(model, mu);

    std::vector<double> action_count(m, 0.0);
    std::vector<std::vector<double>> response_count(m, std::vector<double>(l, 0.0));
    const std::size_t start = history.size() - static_cast<std::size_t>(window);
    for (std::size_t i = start; i < history.size(); ++i) {
        const auto& rec = history.records[i];
        if (rec.action < 0 || rec.action >= static_cast<int>(m) || rec.response < 0 ||
            rec.response >= static_cast<int>(l))
            throw Error("drift_detect: record outside channel alphabet");
        action_count[rec.action] += 1.0;
        response_count[rec.action][rec.response] += 1.0;
    }

    const double w = static_cast<double>(window);
    const double smoothing = 1.0 / w;
    double statistic = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        if (action_count[a] == 0.0) continue;
        std::vector<double> empirical(l);
        for (std::size_t d = 0; d < l; ++d) {
            const double raw = response_count[a][d] / action_count[a];
            empirical[d] = (raw + smoothing) / (1.0 + static_cast<double>(l) * smoothing);
        }
        statistic += (action_count[a] / w) * divergence(empirical, predicted.row(a), alpha);
    }

    DriftReport report;
    report.statistic = statistic;
    report.threshold = tau_drift;
    report.triggered = statistic > tau_drift;
    report.window = window;
    return report;
}

} // namespace egpf
