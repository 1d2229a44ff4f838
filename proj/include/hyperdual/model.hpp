#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "special.hpp"
#include "types.hpp"

namespace hyperdual {

inline constexpr double kBalanceTol = 1e-12;
inline constexpr double kGenericityTol = 1e-8;

/// The parameter tuple (m1, m2, l1, l2) with kappa.  m2, l2 are module
/// dimensions (nonnegative integers); m1 + m2 = l1 + l2.
struct WeightData {
    cplx m1;
    int m2 = 0;
    cplx l1;
    int l2 = 0;
    double kappa = 1.0;

    /// (m1, m2, l1, l2) -> (l1, l2, m1, m2).
    [[nodiscard]] WeightData swapped() const { return {l1, l2, m1, m2, kappa}; }
    /// Largest admissible index, min(m2, l2).
    [[nodiscard]] int dim() const { return std::min(m2, l2); }
};

inline int admissible_range(int m2, int l2) {
    if (m2 < 0 || l2 < 0) throw NegativeDimension("m2 and l2 must be nonnegative");
    return std::min(m2, l2);
}

struct AdmissibleIndex {
    int a = 0;

    static AdmissibleIndex make(int a, int m2, int l2) {
        if (a < 0 || a > admissible_range(m2, l2))
            throw IndexOutOfRange("index " + std::to_string(a) + " not admissible");
        return {a};
    }
};

inline std::string format_complex(cplx v) {
    std::ostringstream os;
    os.precision(17);
    os << v.real() << (v.imag() < 0 || std::signbit(v.imag()) ? "-" : "+") << std::abs(v.imag()) << "i";
    return os.str();
}

/// Resonances of kappa visible in C_b, J_l and the asymptotic constants.
inline void check_generic_kappa(const WeightData& wd) {
    const double k = wd.kappa;
    for (int j = 0; j < std::max(wd.m2, wd.l2); ++j) {
        if (std::abs(std::sin(pi * (j + 1) / k)) <= kGenericityTol)
            throw NonGenericKappa("sin(pi*" + std::to_string(j + 1) + "/kappa) vanishes");
    }
    for (int j = 0; j < wd.l2; ++j) {
        if (is_gamma_pole(1.0 + (wd.m1 - double(j)) / k, kGenericityTol))
            throw NonGenericKappa("Gamma(1+(m1-" + std::to_string(j) + ")/kappa) at a pole");
    }
    for (int j = 0; j < wd.m2; ++j) {
        if (is_gamma_pole(1.0 + (wd.l1 - double(j)) / k, kGenericityTol))
            throw NonGenericKappa("Gamma(1+(l1-" + std::to_string(j) + ")/kappa) at a pole");
    }
}

inline WeightData validate_weight_data(cplx m1, int m2, cplx l1, int l2, double kappa) {
    if (m2 < 0 || l2 < 0) throw NegativeDimension("m2=" + std::to_string(m2) + ", l2=" + std::to_string(l2));
    if (std::abs(m1 + double(m2) - l1 - double(l2)) > kBalanceTol)
        throw BalanceViolation("m1+m2 != l1+l2 (" + format_complex(m1 + double(m2)) + " vs " +
                               format_complex(l1 + double(l2)) + ")");
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw NonGenericKappa("kappa must be positive");
    WeightData wd{m1, m2, l1, l2, kappa};
    check_generic_kappa(wd);
    return wd;
}

inline nlohmann::json to_json(const WeightData& wd) {
    return {{"m1", format_complex(wd.m1)}, {"m2", wd.m2}, {"l1", format_complex(wd.l1)},
            {"l2", wd.l2},                 {"kappa", wd.kappa}};
}

/// One labelled value of a check.
struct CheckValue {
    std::string label;
    cplx value;
    double err = 0.0;
};

/// Outcome of one numerical verification.  pass <=> max_rel_err <= tolerance.
struct CheckReport {
    std::string check;
    nlohmann::json params = nlohmann::json::object();
    std::vector<CheckValue> values;
    double max_rel_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double runtime_ms = 0.0;

    void add(std::string label, cplx v, double err = 0.0) { values.push_back({std::move(label), v, err}); }

    /// Records a relative error sample and keeps pass consistent.
    void update(double rel_err) {
        if (std::isnan(rel_err)) rel_err = std::numeric_limits<double>::infinity();
        max_rel_err = std::max(max_rel_err, rel_err);
        pass = max_rel_err <= tolerance;
    }
    void finalize() { pass = max_rel_err <= tolerance; }
};

}  // namespace hyperdual
