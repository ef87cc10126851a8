#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "chtheta/config.hpp"
#include "chtheta/validate.hpp"

namespace chtheta {

inline constexpr double kWarnThreshold = 1e-6;

/// Curve, points and solution constants described by a config.
CHParams setup_from_config(const RunConfig& cfg);

SolutionField solve_from_config(const CHParams& params, const RunConfig& cfg);

/// `t,y,x,u,ux,uxx,m,cusp`, one row per grid point, t outer, 17 digits.
std::string field_csv(const SolutionField& field);

struct ResidualStats {
  double max = 0.0;
  double median = 0.0;
  /// Samples at which the identity was scored.
  int samples = 0;
};

struct FayStats {
  ResidualStats fay1, fay2, ch1, ch2;
  int points = 0;
  /// Redrawn because a denominator vanished.
  int resampled = 0;
  /// Identity evaluations left unscored at the truncation floor.
  int unresolved = 0;
  double max() const;
};

/// Fay residuals at z = V_e y + V_b t - d with (y, t) drawn uniformly from the
/// config grid box. Points where a denominator vanishes are redrawn.
FayStats fay_statistics(const CHParams& params, const RunConfig& cfg, int samples,
                        std::uint64_t seed = 20240501);

/// JSON of B, C, condition numbers and invariant residuals.
std::string periods_json(const PeriodData& periods);

/// Runs one subcommand: solve | periods | check-fay | check-pde.
/// Reports go to `out`, errors to `err`. Returns the process exit code.
int run(const std::string& subcommand, const std::filesystem::path& config_path,
        const std::optional<std::filesystem::path>& out_dir, std::ostream& out,
        std::ostream& err);

}  // namespace chtheta
