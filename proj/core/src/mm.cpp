#include "logitmm/mm.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace logitmm {

Eigen::VectorXd InitPolicy::initial_beta(Eigen::Index p) const
{
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    if (mode == Mode::Boost && p > 0) beta[0] = intercept;
    return beta;
}

InitPolicy parse_init_policy(std::string_view text)
{
    if (text == "zeros") return InitPolicy::zeros();
    if (text == "boost") return InitPolicy::boost();
    constexpr std::string_view prefix = "boost=";
    if (text.substr(0, prefix.size()) == prefix) {
        const std::string value(text.substr(prefix.size()));
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != value.size() || value.empty() || !std::isfinite(v)) {
            throw std::invalid_argument("bad boost value in init policy '" + std::string(text) + "'");
        }
        return InitPolicy::boost(v);
    }
    throw std::invalid_argument("unknown init policy '" + std::string(text) + "' (expected zeros or boost=V)");
}

std::string format_init_policy(const InitPolicy& init)
{
    if (init.mode == InitPolicy::Mode::Zeros) return "zeros";
    std::ostringstream os;
    os << "boost=" << init.intercept;
    return os.str();
}

void SolverConfig::validate() const
{
    if (!(tol > 0.0)) throw std::invalid_argument("solver: tol must be > 0");
    if (max_iter < 1) throw std::invalid_argument("solver: max_iter must be >= 1");
    if (!(epsilon_intercept > 0.0)) throw std::invalid_argument("solver: epsilon must be > 0");
}

std::string_view to_string(MMStatus status)
{
    return status == MMStatus::Converged ? "converged" : "max_iter_reached";
}

std::string_view to_string(StopRule rule)
{
    return rule == StopRule::RelativeObjective ? "objective" : "gradient";
}

StopRule parse_stop_rule(std::string_view text)
{
    if (text == "objective") return StopRule::RelativeObjective;
    if (text == "gradient") return StopRule::GradientNorm;
    throw std::invalid_argument("unknown stopping rule '" + std::string(text) + "' (expected objective or gradient)");
}

bool trace_is_ascending(const std::vector<TraceEntry>& trace, double slack)
{
    for (std::size_t t = 1; t < trace.size(); ++t) {
        const double prev = trace[t - 1].objective;
        if (trace[t].objective < prev - slack * (1.0 + std::abs(prev))) return false;
    }
    return true;
}

}  // namespace logitmm
