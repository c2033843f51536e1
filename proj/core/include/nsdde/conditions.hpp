#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nsdde/condition_spec.hpp"
#include "nsdde/grid.hpp"
#include "nsdde/model.hpp"
#include "nsdde/types.hpp"

namespace nsdde {

enum class Verdict { Pass, Fail, Inconclusive };

const char* to_string(Verdict verdict);

/// One failed inequality. `inputs` concatenates the sampled points in the
/// order the checker documents (x, y for C2/H; x, y, x_bar, y_bar for C3;
/// x, y for C4; t for rate checks).
struct Violation {
    std::uint64_t sample_index = 0;
    std::string kind;
    std::vector<double> inputs;
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct ConditionReport {
    std::string condition_id;
    std::uint64_t samples_requested = 0;
    std::uint64_t samples_tested = 0;
    /// Total violations found; `violations` keeps the first kMaxViolations
    /// by sample index.
    std::uint64_t violation_count = 0;
    std::vector<Violation> violations;
    Verdict verdict = Verdict::Inconclusive;
    std::map<std::string, double> estimates;
};

inline constexpr std::size_t kMaxViolations = 100;
/// Absolute slack on rhs - lhs before a sample counts as a violation.
inline constexpr double kInequalitySlack = 1e-9;

/// |D(x) - D(y)| <= kappa |x - y| on uniform pairs in [-box, box]^n, plus
/// D(0) = 0. Deterministic probes: (box e1, 0), (box 1, -box 1) and a
/// coincident pair are always tested before the random draws.
ConditionReport check_c4(const NeutralFn& neutral, int state_dim, double kappa, double box,
                         std::uint64_t samples, std::uint64_t seed);

/// Coercivity:
///   2<x - D(y), b(x, y, t)> + |sigma(x, y, t)|^2 <= K1(t)(1 + |x|^2) + K1~(t - tau)(1 + |y|^2)
/// for (x, y) uniform in [-R, R]^n (R = spec.box_radius) and t on the grid,
/// plus K1(t) <= C1(tau) K1(t - tau) and K1(t) >= K1~(t) at every grid time.
ConditionReport check_c2(const NsddeModel& model, const ConditionSpec& spec, const DelayGrid& grid,
                         std::uint64_t samples, std::uint64_t seed);

/// Local monotonicity on the ball of radius R:
///   2<x - D(y) - x_bar + D(y_bar), b - b_bar> + |sigma - sigma_bar|^2
///       <= KR(t)|x - x_bar|^2 + KR~(t - tau)|y - y_bar|^2
/// plus KR(t) <= CR(tau) KR(t - tau) and KR(t) >= KR~(t) at every grid time.
ConditionReport check_c3(const NsddeModel& model, const ConditionSpec& spec, const DelayGrid& grid,
                         std::uint64_t samples, std::uint64_t seed);

/// Integrability of sup_{|x|,|y| <= box}(|b| + |sigma|^2) over [0, T]:
/// the supremum is maximized over `samples` draws per grid time and summed
/// with weight step (left endpoints). Fails only on non-finite values.
/// The quadrature is reported as estimates["integral"].
ConditionReport check_h(const NsddeModel& model, const DelayGrid& grid, double box,
                        std::uint64_t samples, std::uint64_t seed);

/// Empirical Lipschitz constant of D: max |D(x) - D(y)| / |x - y| over
/// sampled pairs in [-box, box]^n, skipping pairs closer than 1e-9.
/// Throws DegenerateSampling when every pair was skipped.
double estimate_kappa(const NeutralFn& neutral, int state_dim, double box, std::uint64_t samples,
                      std::uint64_t seed);

/// Heuristic constant rates fitted from samples. Not a certificate: the
/// values are sample maxima of lhs / rhs-shape and should be padded before
/// being fed back into check_c2 / check_c3.
struct FittedRates {
    double k1 = 0.0;  ///< proposed K1 = K1~
    double kr = 0.0;  ///< proposed KR = KR~
};

FittedRates fit_constant_rates(const NsddeModel& model, const DelayGrid& grid, double box,
                               std::uint64_t samples, std::uint64_t seed);

}  // namespace nsdde
