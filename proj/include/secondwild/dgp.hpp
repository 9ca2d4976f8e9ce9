#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "secondwild/gaussian.hpp"
#include "secondwild/series.hpp"

namespace secondwild {

/// White-noise innovation families. All have mean 0, variance 1 and are
/// uncorrelated; they differ in fourth-order structure.
///   independent         eps_i = e_i
///   product_of_normals  eps_i = e_i e_{i-1}
///   non_stationary      eps_i = e_i (i even), e_i e_{i-1} (i odd)
enum class InnovationKind { independent, product_of_normals, non_stationary };

enum class ModelKind { ar1, ar2, ar4, ma3, nlar2 };

[[nodiscard]] std::string innovation_name(InnovationKind kind);
[[nodiscard]] InnovationKind parse_innovation(const std::string& name);
[[nodiscard]] std::string model_name(ModelKind kind);
[[nodiscard]] ModelKind parse_model(const std::string& name);

inline constexpr InnovationKind kAllInnovations[] = {
    InnovationKind::independent, InnovationKind::product_of_normals, InnovationKind::non_stationary};
inline constexpr ModelKind kAllModels[] = {ModelKind::ar1, ModelKind::ar2, ModelKind::ar4,
                                           ModelKind::ma3, ModelKind::nlar2};

/// Generator of innovations eps_1, eps_2, ... from the latent normals e_0, e_1, ...
/// Parity for the non-stationary family is that of the absolute index i, so it
/// does not depend on how much of the stream is later discarded.
class InnovationStream {
public:
    InnovationStream(InnovationKind kind, RngStream stream);

    double next();
    [[nodiscard]] std::uint64_t index() const noexcept { return index_; }

    /// Continue from `stream`'s latent normals, keeping the index and the last latent.
    void switch_stream(RngStream stream) { stream_ = std::move(stream); }

private:
    InnovationKind kind_;
    RngStream stream_;
    double previous_latent_;
    std::uint64_t index_ = 0;  ///< absolute index of the last innovation returned
};

[[nodiscard]] std::vector<double> gen_innovations(InnovationKind kind, std::size_t n, RngStream stream);

/// Linear-model coefficients of the built-in models.
[[nodiscard]] std::vector<double> ar_coefficients(ModelKind model, double rho);
[[nodiscard]] std::vector<double> ma_coefficients(ModelKind model);

struct DgpSpec {
    ModelKind model = ModelKind::ar1;
    double rho = 0.9;  ///< AR(1) coefficient; ignored by the other models
    InnovationKind innovation = InnovationKind::independent;
    std::size_t T = 1000;
    std::size_t burn_in = 1000;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;

    void validate() const;
};

/// Streaming form of a DGP started from zero initial values. The nonlinear
/// model's output has its calibrated mean subtracted.
class DgpProcess {
public:
    DgpProcess(ModelKind model, double rho, InnovationKind innovation, RngStream stream);

    double next();
    void switch_stream(RngStream stream) { innovations_.switch_stream(std::move(stream)); }

private:
    ModelKind model_;
    std::vector<double> ar_;
    std::vector<double> ma_;
    InnovationStream innovations_;
    std::vector<double> x_lags_;    ///< x_{t-1}, x_{t-2}, ... (uncentered)
    std::vector<double> eps_lags_;  ///< eps_{t-1}, eps_{t-2}, ...
    double offset_ = 0.0;
};

/// Runs burn_in + T steps and returns the last T. The burn-in and the kept
/// segment draw their latent normals from separate streams, so the kept
/// innovations do not depend on burn_in.
[[nodiscard]] TimeSeries gen_series(const DgpSpec& spec);

/// Mean of X_t = sin(X_{t-1}) + cos(X_{t-2}) + eps_t for each innovation family,
/// subtracted from generated nonlinear series. Regenerate with
/// `secondwild-calibrate` (tools/calibrate_nlar2.cpp).
[[nodiscard]] double nlar2_mean_offset(InnovationKind kind);

/// Length and seed of the calibration run behind nlar2_mean_offset.
inline constexpr std::size_t kNlar2CalibrationLength = 100000;
inline constexpr std::size_t kNlar2CalibrationBurnIn = 1000;
inline constexpr std::uint64_t kNlar2CalibrationSeed = 20240601;

/// Population second-order parameters of a DGP.
struct TrueParameters {
    std::vector<double> sigma;  ///< lags 0..d
    std::vector<double> rho;    ///< lags 0..d
    std::vector<double> a;      ///< order-p AR coefficients (Yule-Walker on sigma)
    bool approximate = false;   ///< estimated by a long plug-in run
};

/// Length of the plug-in run used when no closed form exists (nonlinear model).
inline constexpr std::size_t kPluginTruthLength = 10'000'000;

/// Linear models: autocovariances from the MA(infinity) weights (unit innovation
/// variance). Nonlinear model: sample autocovariances of a kPluginTruthLength
/// run, memoized per (innovation, d).
[[nodiscard]] TrueParameters true_parameters(ModelKind model, double rho, InnovationKind innovation,
                                             std::size_t d, std::size_t p);

}  // namespace secondwild
