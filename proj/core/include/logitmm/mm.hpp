#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "logitmm/bounds.hpp"
#include "logitmm/box_qp.hpp"

namespace logitmm {

/// Starting point of an MM run: all zeros, or zeros with a large intercept
/// so every tangent location starts far from the origin.
struct InitPolicy {
    enum class Mode { Zeros, Boost };
    Mode mode = Mode::Zeros;
    double intercept = 10.0;

    static InitPolicy zeros() { return {}; }
    static InitPolicy boost(double intercept = 10.0) { return {Mode::Boost, intercept}; }

    Eigen::VectorXd initial_beta(Eigen::Index p) const;
};

/// Parses "zeros", "boost" or "boost=V". Throws std::invalid_argument.
InitPolicy parse_init_policy(std::string_view text);
std::string format_init_policy(const InitPolicy& init);

/// When an MM run stops.
///   RelativeObjective: |F[t+1] - F[t]| <= tol (1 + |F[t]|).
///   GradientNorm: optimality residual <= tol (max-norm of the ridge
///   gradient, or kkt_check() for the elastic net). The ridge iteration
///   settles where the intercept gradient equals epsilon_intercept * beta_0,
///   so tol must stay above that floor.
enum class StopRule { RelativeObjective, GradientNorm };

std::string_view to_string(StopRule rule);
StopRule parse_stop_rule(std::string_view text);

struct SolverConfig {
    BoundKind kind = BoundKind::PG;
    InitPolicy init{};
    StopRule stop = StopRule::RelativeObjective;
    double tol = 1e-10;
    long max_iter = 100'000;
    double epsilon_intercept = 1e-8;
    BoxQpConfig qp{};              ///< dual solver settings for PQ ridge steps

    /// Throws std::invalid_argument unless tol > 0, max_iter >= 1, epsilon > 0.
    void validate() const;
};

struct TraceEntry {
    long iter = 0;
    double objective = 0.0;
    double time_s = 0.0;
};

enum class MMStatus { Converged, MaxIterReached };

std::string_view to_string(MMStatus status);

struct MMResult {
    Eigen::VectorXd beta_hat;
    std::vector<TraceEntry> trace;  ///< entry 0 is the starting point
    long n_iter = 0;
    MMStatus status = MMStatus::MaxIterReached;

    double final_objective() const { return trace.empty() ? 0.0 : trace.back().objective; }
    bool converged() const { return status == MMStatus::Converged; }
};

/// Stopping rule shared by every MM driver.
inline bool objective_converged(double previous, double current, double tol)
{
    const double diff = current - previous;
    const double scale = 1.0 + (previous < 0 ? -previous : previous);
    return (diff < 0 ? -diff : diff) <= tol * scale;
}

/// True when every consecutive pair satisfies F[t+1] >= F[t] - slack (1 + |F[t]|).
bool trace_is_ascending(const std::vector<TraceEntry>& trace, double slack = 1e-10);

}  // namespace logitmm
