#include "secondwild/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "secondwild/errors.hpp"

namespace secondwild {

double KernelSpec::operator()(double x) const {
    switch (kind) {
        case KernelKind::gaussian:
            return std::exp(-0.5 * x * x);
    }
    return 0.0;
}

double KernelSpec::support_radius(double threshold) const {
    if (threshold <= 0.0) return std::numeric_limits<double>::infinity();
    if (threshold >= 1.0) return 0.0;
    switch (kind) {
        case KernelKind::gaussian:
            return std::sqrt(-2.0 * std::log(threshold));
    }
    return std::numeric_limits<double>::infinity();
}

double kernel_eval(const KernelSpec& spec, double x) { return spec(x); }

std::string kernel_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::gaussian:
            return "gaussian";
    }
    return "unknown";
}

KernelKind parse_kernel(const std::string& name) {
    if (name == "gaussian") return KernelKind::gaussian;
    throw DomainError("unknown kernel '" + name + "' (valid: gaussian)");
}

std::size_t kernel_window(const KernelSpec& spec, double bandwidth, std::size_t n, double cutoff) {
    if (n == 0) return 0;
    const double radius = spec.support_radius(cutoff) * bandwidth;
    if (!std::isfinite(radius) || radius >= static_cast<double>(n - 1)) return n - 1;
    auto w = static_cast<std::size_t>(std::floor(radius));
    // floor() of a product can land one either side of the exact boundary
    while (w + 1 <= n - 1 && spec(static_cast<double>(w + 1) / bandwidth) >= cutoff) ++w;
    while (w > 0 && spec(static_cast<double>(w) / bandwidth) < cutoff) --w;
    return w;
}

Eigen::MatrixXd KernelGram::dense() const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index s = 0; s < n; ++s) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m(s, j) = (*this)(static_cast<std::size_t>(s), static_cast<std::size_t>(j));
        }
    }
    return m;
}

KernelGram kernel_gram(const KernelSpec& spec, std::size_t T, double bandwidth) {
    if (T == 0) throw DomainError("Gram matrix needs T >= 1");
    if (!(bandwidth > 0.0)) throw DomainError("bandwidth must be positive");
    KernelGram g;
    g.first_row.resize(T);
    for (std::size_t h = 0; h < T; ++h) g.first_row[h] = spec(static_cast<double>(h) / bandwidth);
    return g;
}

BandwidthChoice select_bandwidth(const TimeSeries& x, const BandwidthRule& rule) {
    if (const auto* fixed = std::get_if<FixedBandwidth>(&rule)) {
        if (!(fixed->k_T > 0.0) || !std::isfinite(fixed->k_T)) {
            throw DomainError("fixed bandwidth must be a positive finite number");
        }
        return {fixed->k_T, std::nullopt};
    }
    const auto& autobw = std::get<AutoBandwidth>(rule);
    const std::size_t T = x.size();
    if (T < kAutoBandwidthMinT) {
        throw DomainError("automatic bandwidth needs T >= " + std::to_string(kAutoBandwidthMinT) +
                          "; use a fixed bandwidth (--kt) for shorter series");
    }
    const double n = static_cast<double>(T);
    const double log10T = std::log10(n);
    const auto max_q = static_cast<std::size_t>(std::floor(std::sqrt(n)));
    const auto run = std::max<std::size_t>(5, static_cast<std::size_t>(std::ceil(std::sqrt(log10T))));
    const double threshold = autobw.c * std::sqrt(log10T / n);

    const std::size_t max_lag = std::min(T - 1, max_q + run);
    const auto sigma = sample_autocovs(x.values(), max_lag);
    if (!(sigma[0] > 0.0)) throw DegenerateVarianceError("sample variance is zero");

    std::size_t q_hat = max_q;
    for (std::size_t q = 0; q <= max_q; ++q) {
        if (q + run > max_lag) break;
        bool all_small = true;
        for (std::size_t j = q + 1; j <= q + run; ++j) {
            if (!(std::abs(sigma[j] / sigma[0]) < threshold)) {
                all_small = false;
                break;
            }
        }
        if (all_small) {
            q_hat = q;
            break;
        }
    }
    return {std::max(1.0, 2.0 * static_cast<double>(q_hat)), q_hat};
}

std::string describe(const BandwidthRule& rule) {
    std::ostringstream os;
    os.precision(17);
    if (const auto* fixed = std::get_if<FixedBandwidth>(&rule)) {
        os << "fixed(" << fixed->k_T << ")";
    } else {
        os << "auto(c=" << std::get<AutoBandwidth>(rule).c << ")";
    }
    return os.str();
}

}  // namespace secondwild
