#include "mmheat/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace mmheat {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::NonexistenceSubcritical:
            return "NonexistenceSubcritical";
        case Verdict::NonexistenceCritical:
            return "NonexistenceCritical";
        case Verdict::NonexistenceAlphaLeBeta:
            return "NonexistenceAlphaLeBeta";
        case Verdict::NonexistenceIntermediate:
            return "NonexistenceIntermediate";
        case Verdict::GlobalExistenceSmallData:
            return "GlobalExistenceSmallData";
        case Verdict::Indeterminate:
            return "Indeterminate";
    }
    return "Indeterminate";
}

RegimeConditions RegimeConditions::from(const ProfilePredicateReport& report, bool conservative) {
    RegimeConditions c;
    c.general1 = report.general1.holds;
    c.general4 = report.general4.holds;
    c.general2 = report.general2.holds;
    c.phi_integrable = report.phi.finite;
    c.conservative = conservative;
    return c;
}

namespace {

// -1, 0, +1 for p below, at, above the critical value c.
int compare(double p, double c) {
    if (std::abs(p - c) <= kExponentTolerance * std::max(1.0, std::abs(c))) return 0;
    return p < c ? -1 : 1;
}

}  // namespace

RegimeVerdict classify_regime(double alpha, double beta, double p, bool phi_nonzero, bool f_nonzero,
                              const RegimeConditions& conditions) {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(p))
        throw std::invalid_argument("classify_regime: inputs must be finite");
    if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("classify_regime: alpha, beta must be positive");
    if (!(p > 1.0)) throw std::invalid_argument("classify_regime: p must exceed 1");

    const double fujita = 1.0 + beta / alpha;
    const bool data = phi_nonzero || f_nonzero;
    RegimeVerdict v;

    if (f_nonzero && alpha <= beta) {
        v.verdict = Verdict::NonexistenceAlphaLeBeta;
        v.cited_case = "thm2.3(ii)";
        v.required_conditions = {"f_nonzero", "alpha<=beta"};
        return v;
    }
    if (f_nonzero && alpha > beta && compare(p, alpha / (alpha - beta)) < 0) {
        v.verdict = Verdict::NonexistenceIntermediate;
        v.cited_case = "thm2.3(iii)";
        if (compare(p, fujita) < 0) v.also_cited.push_back("thm2.3(i)");
        v.required_conditions = {"f_nonzero", "alpha>beta", "p<alpha/(alpha-beta)"};
        return v;
    }
    if (data && compare(p, fujita) < 0) {
        v.verdict = Verdict::NonexistenceSubcritical;
        v.cited_case = "thm2.3(i)";
        v.required_conditions = {"data_nonzero", "p<1+beta/alpha"};
        return v;
    }
    if (data && compare(p, fujita) == 0 && conditions.general1 && conditions.general4 && conditions.general2 &&
        conditions.conservative) {
        v.verdict = Verdict::NonexistenceCritical;
        v.cited_case = "thm2.4";
        v.required_conditions = {"data_nonzero", "p=1+beta/alpha", "general1", "general4", "general2",
                                 "conservative"};
        return v;
    }
    if (alpha > beta && compare(p, alpha / (alpha - beta)) > 0 && conditions.phi_integrable &&
        conditions.conservative) {
        v.verdict = Verdict::GlobalExistenceSmallData;
        v.cited_case = "thm3.4";
        v.conditional = true;
        v.required_conditions = {"alpha>beta", "p>alpha/(alpha-beta)", "phi", "conservative", "small_data"};
        return v;
    }
    v.verdict = Verdict::Indeterminate;
    v.cited_case = "none";
    return v;
}

}  // namespace mmheat
