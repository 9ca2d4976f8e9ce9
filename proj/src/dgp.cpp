#include "secondwild/dgp.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "secondwild/errors.hpp"
#include "secondwild/yule_walker.hpp"

namespace secondwild {

namespace {

constexpr std::uint64_t kDgpStreamTag = 0x64677073;  // "dgps"
constexpr std::uint64_t kBurnInStreamTag = 0x6275726e;  // "burn"
constexpr std::uint64_t kTruthStreamTag = 0x74727468;

// Written by tools/calibrate_nlar2.cpp.
constexpr double kNlar2MeanIndependent = 0.55566112210936214;
constexpr double kNlar2MeanProduct = 0.7014090021871775;
constexpr double kNlar2MeanNonStationary = 0.62606350169435987;

}  // namespace

std::string innovation_name(InnovationKind kind) {
    switch (kind) {
        case InnovationKind::independent: return "independent";
        case InnovationKind::product_of_normals: return "product";
        case InnovationKind::non_stationary: return "nonstationary";
    }
    return "unknown";
}

InnovationKind parse_innovation(const std::string& name) {
    if (name == "independent" || name == "iid") return InnovationKind::independent;
    if (name == "product" || name == "product_of_normals") return InnovationKind::product_of_normals;
    if (name == "nonstationary" || name == "non_stationary") return InnovationKind::non_stationary;
    throw DomainError("unknown innovation '" + name + "' (valid: independent, product, nonstationary)");
}

std::string model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::ar1: return "ar1";
        case ModelKind::ar2: return "ar2";
        case ModelKind::ar4: return "ar4";
        case ModelKind::ma3: return "ma3";
        case ModelKind::nlar2: return "nlar2";
    }
    return "unknown";
}

ModelKind parse_model(const std::string& name) {
    if (name == "ar1") return ModelKind::ar1;
    if (name == "ar2") return ModelKind::ar2;
    if (name == "ar4") return ModelKind::ar4;
    if (name == "ma3") return ModelKind::ma3;
    if (name == "nlar2" || name == "nonlinear") return ModelKind::nlar2;
    throw DomainError("unknown model '" + name + "' (valid: ar1, ar2, ar4, ma3, nlar2)");
}

InnovationStream::InnovationStream(InnovationKind kind, RngStream stream)
    : kind_(kind), stream_(std::move(stream)) {
    previous_latent_ = stream_.normal();  // e_0
}

double InnovationStream::next() {
    ++index_;
    const double e = stream_.normal();
    const double prev = previous_latent_;
    previous_latent_ = e;
    switch (kind_) {
        case InnovationKind::independent: return e;
        case InnovationKind::product_of_normals: return e * prev;
        case InnovationKind::non_stationary: return index_ % 2 == 0 ? e : e * prev;
    }
    return e;
}

std::vector<double> gen_innovations(InnovationKind kind, std::size_t n, RngStream stream) {
    if (n == 0) throw DomainError("gen_innovations: n must be at least 1");
    InnovationStream gen(kind, std::move(stream));
    std::vector<double> out(n);
    for (auto& v : out) v = gen.next();
    return out;
}

std::vector<double> ar_coefficients(ModelKind model, double rho) {
    switch (model) {
        case ModelKind::ar1: return {rho};
        case ModelKind::ar2: return {0.5, 0.2};
        case ModelKind::ar4: return {0.3, 0.2, 0.2, 0.1};
        default: return {};
    }
}

std::vector<double> ma_coefficients(ModelKind model) {
    if (model == ModelKind::ma3) return {0.6, 0.4, 0.1};
    return {};
}

void DgpSpec::validate() const {
    if (model == ModelKind::ar1 && !(std::abs(rho) < 1.0))
        throw DomainError("AR(1) coefficient must satisfy |rho| < 1");
    if (T < 10) throw DomainError("T must be at least 10");
}

DgpProcess::DgpProcess(ModelKind model, double rho, InnovationKind innovation, RngStream stream)
    : model_(model),
      ar_(ar_coefficients(model, rho)),
      ma_(ma_coefficients(model)),
      innovations_(innovation, std::move(stream)) {
    const std::size_t x_order = model == ModelKind::nlar2 ? 2 : ar_.size();
    x_lags_.assign(x_order, 0.0);
    eps_lags_.assign(ma_.size(), 0.0);
    if (model == ModelKind::nlar2) offset_ = nlar2_mean_offset(innovation);
}

double DgpProcess::next() {
    const double eps = innovations_.next();
    double x = eps;
    if (model_ == ModelKind::nlar2) {
        x += std::sin(x_lags_[0]) + std::cos(x_lags_[1]);
    } else {
        for (std::size_t k = 0; k < ar_.size(); ++k) x += ar_[k] * x_lags_[k];
        for (std::size_t k = 0; k < ma_.size(); ++k) x += ma_[k] * eps_lags_[k];
    }
    for (std::size_t k = x_lags_.size(); k-- > 1;) x_lags_[k] = x_lags_[k - 1];
    if (!x_lags_.empty()) x_lags_[0] = x;
    for (std::size_t k = eps_lags_.size(); k-- > 1;) eps_lags_[k] = eps_lags_[k - 1];
    if (!eps_lags_.empty()) eps_lags_[0] = eps;
    return x - offset_;
}

TimeSeries gen_series(const DgpSpec& spec) {
    spec.validate();
    DgpProcess process(spec.model, spec.rho, spec.innovation,
                       RngStream(derive_seed(spec.seed, kBurnInStreamTag), spec.stream));
    for (std::size_t t = 0; t < spec.burn_in; ++t) (void)process.next();
    process.switch_stream(RngStream(derive_seed(spec.seed, kDgpStreamTag), spec.stream));
    std::vector<double> x(spec.T);
    for (auto& v : x) v = process.next();
    return TimeSeries(std::move(x));
}

double nlar2_mean_offset(InnovationKind kind) {
    switch (kind) {
        case InnovationKind::independent: return kNlar2MeanIndependent;
        case InnovationKind::product_of_normals: return kNlar2MeanProduct;
        case InnovationKind::non_stationary: return kNlar2MeanNonStationary;
    }
    return 0.0;
}

namespace {

std::vector<double> linear_autocovariances(const std::vector<double>& ar, const std::vector<double>& ma,
                                           std::size_t d) {
    // psi-weights of the causal representation, truncated once negligible
    constexpr std::size_t kMaxTerms = 200000;
    std::vector<double> psi{1.0};
    std::size_t small_run = 0;
    for (std::size_t k = 1; k < kMaxTerms; ++k) {
        double v = k <= ma.size() ? ma[k - 1] : 0.0;
        for (std::size_t j = 1; j <= ar.size() && j <= k; ++j) v += ar[j - 1] * psi[k - j];
        psi.push_back(v);
        small_run = std::abs(v) < 1e-18 ? small_run + 1 : 0;
        if (small_run > ar.size() + ma.size() + 1 && k > d) break;
    }
    std::vector<double> sigma(d + 1, 0.0);
    for (std::size_t h = 0; h <= d; ++h) {
        double s = 0.0;
        for (std::size_t k = 0; k + h < psi.size(); ++k) s += psi[k] * psi[k + h];
        sigma[h] = s;
    }
    return sigma;
}

std::vector<double> nlar2_plugin_autocovariances(InnovationKind innovation, std::size_t d) {
    static std::mutex mutex;
    static std::map<std::pair<int, std::size_t>, std::vector<double>> memo;
    const auto key = std::make_pair(static_cast<int>(innovation), d);
    {
        std::lock_guard lock(mutex);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
    }
    DgpProcess process(ModelKind::nlar2, 0.0, innovation,
                       RngStream(derive_seed(kNlar2CalibrationSeed, kTruthStreamTag),
                                 static_cast<std::uint64_t>(innovation)));
    for (std::size_t t = 0; t < kNlar2CalibrationBurnIn; ++t) (void)process.next();
    std::vector<double> x(kPluginTruthLength);
    for (auto& v : x) v = process.next();
    // the calibrated offset is only approximately the mean of this run, so
    // center on the run itself
    const TimeSeries series(std::move(x), true);
    std::vector<double> sigma = sample_autocovs(series.values(), d);
    std::lock_guard lock(mutex);
    memo.emplace(key, sigma);
    return sigma;
}

}  // namespace

TrueParameters true_parameters(ModelKind model, double rho, InnovationKind innovation, std::size_t d,
                               std::size_t p) {
    if (p > d) throw DomainError("true_parameters: p must not exceed d");
    TrueParameters truth;
    if (model == ModelKind::nlar2) {
        truth.sigma = nlar2_plugin_autocovariances(innovation, d);
        truth.approximate = true;
    } else {
        truth.sigma = linear_autocovariances(ar_coefficients(model, rho), ma_coefficients(model), d);
    }
    truth.rho.resize(d + 1);
    for (std::size_t j = 0; j <= d; ++j) truth.rho[j] = truth.sigma[j] / truth.sigma[0];
    if (p > 0) truth.a = yule_walker_fit(truth.sigma, p).coefficients;
    return truth;
}

}  // namespace secondwild
