#include "secondwild/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "secondwild/errors.hpp"
#include "secondwild/yule_walker.hpp"

namespace secondwild {

namespace {

std::size_t parse_index(std::string_view token, const std::string& whole) {
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    std::size_t value = 0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (token.empty() || ec != std::errc{} || ptr != end) {
        throw DomainError("malformed lag set '" + whole + "'");
    }
    return value;
}

void normalize(LagSet& lags) {
    std::sort(lags.begin(), lags.end());
    lags.erase(std::unique(lags.begin(), lags.end()), lags.end());
}

}  // namespace

LagSet lag_range(std::size_t first, std::size_t last) {
    if (last < first) throw DomainError("lag range end precedes start");
    LagSet out(last - first + 1);
    std::iota(out.begin(), out.end(), first);
    return out;
}

LagSet parse_lag_set(const std::string& text) {
    LagSet out;
    std::string_view rest = text;
    while (true) {
        const auto comma = rest.find(',');
        const auto item = rest.substr(0, comma);
        const auto dash = item.find('-');
        if (dash == std::string_view::npos) {
            out.push_back(parse_index(item, text));
        } else {
            const auto lo = parse_index(item.substr(0, dash), text);
            const auto hi = parse_index(item.substr(dash + 1), text);
            if (hi < lo) throw DomainError("descending lag range in '" + text + "'");
            for (auto j = lo; j <= hi; ++j) out.push_back(j);
        }
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    normalize(out);
    return out;
}

std::string format_lag_set(const LagSet& lags) {
    std::ostringstream os;
    for (std::size_t k = 0; k < lags.size();) {
        std::size_t m = k;
        while (m + 1 < lags.size() && lags[m + 1] == lags[m] + 1) ++m;
        if (k > 0) os << ',';
        os << lags[k];
        if (m > k) os << '-' << lags[m];
        k = m + 1;
    }
    return os.str();
}

TimeSeries::TimeSeries(std::vector<double> values, bool center)
    : values_(std::move(values)), centered_(center) {
    if (values_.size() < 2) {
        throw DomainError("time series needs at least 2 observations, got " +
                          std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DomainError("non-finite observation at position " + std::to_string(i + 1));
        }
    }
    if (center) {
        const double mean = std::accumulate(values_.begin(), values_.end(), 0.0) /
                            static_cast<double>(values_.size());
        for (auto& v : values_) v -= mean;
    }
}

double sample_autocov(std::span<const double> x, std::size_t lag) {
    const std::size_t T = x.size();
    if (lag >= T) {
        throw DomainError("lag " + std::to_string(lag) + " out of range for T = " +
                          std::to_string(T));
    }
    double sum = 0.0;
    for (std::size_t i = lag; i < T; ++i) sum += x[i] * x[i - lag];
    return sum / static_cast<double>(T);
}

double sample_autocov(const TimeSeries& x, std::size_t lag) { return sample_autocov(x.values(), lag); }

std::vector<double> sample_autocovs(std::span<const double> x, std::size_t max_lag) {
    std::vector<double> out(max_lag + 1);
    for (std::size_t j = 0; j <= max_lag; ++j) out[j] = sample_autocov(x, j);
    return out;
}

double sample_autocorr(const TimeSeries& x, std::size_t lag) {
    if (lag == 0) return 1.0;
    const double s0 = sample_autocov(x, 0);
    const double sj = sample_autocov(x, lag);
    if (!(s0 > 0.0)) throw DegenerateVarianceError("sample variance is zero");
    return sj / s0;
}

SecondOrderEstimates estimate_second_order(const TimeSeries& x, std::size_t d, std::size_t p,
                                           LagSet H, LagSet I) {
    const std::size_t T = x.size();
    if (d >= T) throw DomainError("max lag d = " + std::to_string(d) + " must be < T");
    if (p > d) throw DomainError("AR order p = " + std::to_string(p) + " exceeds d");
    normalize(H);
    normalize(I);
    if (!H.empty() && H.back() > d) throw DomainError("H contains a lag above d");
    if (!I.empty() && (I.front() == 0 || I.back() > d)) {
        throw DomainError("I must be a subset of {1..d}");
    }

    SecondOrderEstimates est;
    est.T = T;
    est.d = d;
    est.p = p;
    est.sigma = sample_autocovs(x.values(), d);
    if (!(est.sigma[0] > 0.0)) throw DegenerateVarianceError("sample variance is zero");
    est.rho.resize(d + 1);
    for (std::size_t j = 0; j <= d; ++j) est.rho[j] = est.sigma[j] / est.sigma[0];
    if (p > 0) {
        auto fit = yule_walker_fit(est.sigma, p);
        est.a = std::move(fit.coefficients);
        est.ar_pseudo_inverse = fit.used_pseudo_inverse;
    }
    est.H = std::move(H);
    est.I = std::move(I);
    return est;
}

}  // namespace secondwild
