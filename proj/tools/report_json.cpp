#include "report_json.hpp"

namespace secondwild::cli {

namespace {

ordered_json bands_json(const std::vector<Band>& bands) {
    ordered_json out = ordered_json::array();
    for (const auto& b : bands) {
        out.push_back({{"lag", b.lag}, {"estimate", b.estimate}, {"lower", b.lower}, {"upper", b.upper}});
    }
    return out;
}

ordered_json family_json(const std::optional<FamilyTest>& t) {
    if (!t) return nullptr;
    return {{"statistic", t->statistic},
            {"critical", t->critical},
            {"reject", t->reject},
            {"p_value", t->p_value}};
}

}  // namespace

ordered_json to_json(const InferenceReport& r) {
    const auto& e = r.estimates;
    ordered_json j;
    j["method"] = r.method;
    j["T"] = e.T;
    j["d"] = e.d;
    j["p"] = e.p;
    j["H"] = e.H;
    j["I"] = e.I;
    j["estimates"] = {{"sigma", e.sigma}, {"rho", e.rho}, {"a", e.a}};
    j["ar_pseudo_inverse"] = e.ar_pseudo_inverse;
    j["radius"] = {{"sigma", r.radius_sigma}, {"rho", r.radius_rho}, {"a", r.radius_a}};
    j["bands"] = {{"autocovariance", bands_json(r.sigma_bands)},
                  {"autocorrelation", bands_json(r.rho_bands)},
                  {"ar_coefficients", bands_json(r.a_bands)}};
    if (r.method == "wild") {
        j["kernel"] = r.kernel;
        j["bandwidth_rule"] = r.bandwidth_rule;
        j["k_T"] = r.k_T;
        j["q_hat"] = r.q_hat ? ordered_json(*r.q_hat) : ordered_json(nullptr);
    } else {
        j["sieve_order"] = r.sieve_order;
    }
    j["B"] = r.B;
    j["alpha"] = r.alpha;
    j["seed"] = r.seed;
    j["degenerate_resamples"] = r.degenerate_resamples;
    return j;
}

ordered_json to_json(const HypothesisTests& t) {
    return {{"autocovariance", family_json(t.sigma)},
            {"autocorrelation", family_json(t.rho)},
            {"ar_coefficients", family_json(t.a)}};
}

ordered_json to_json(const VarianceStudyReport& r) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"innovation", innovation_name(row.innovation)},
                        {"n", row.n},
                        {"reps", row.reps},
                        {"mean_rho", row.mean_rho},
                        {"var_rho", row.var_rho},
                        {"mean_gamma1", row.mean_gamma},
                        {"var_gamma1", row.var_gamma}});
    }
    return {{"rho", r.rho}, {"gamma1", r.gamma1}, {"rows", rows}};
}

ordered_json to_json(const CoverageReport& r) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"model", row.model},
                        {"innovation", row.innovation},
                        {"target", row.target},
                        {"method", row.method},
                        {"order", row.order},
                        {"mean_k_T", row.mean_k_T},
                        {"coverage", row.coverage},
                        {"se", row.se},
                        {"reps", row.reps},
                        {"T", row.T},
                        {"truth_approximate", row.truth_approximate}});
    }
    return {{"rows", rows}};
}

ordered_json to_json(const ApproxCheckReport& r) {
    return {{"scenario", r.scenario},       {"T", r.T},
            {"reps", r.reps},               {"oracle_length", r.oracle_length},
            {"n_mc", r.n_mc},               {"oracle_k_T", r.oracle_k_T},
            {"ks_distance", r.ks_distance}};
}

}  // namespace secondwild::cli
