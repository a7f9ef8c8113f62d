#pragma once

// Measurement-axis misalignment and white-noise tolerance curves.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edlkit/witness.hpp"

namespace edl {

enum class MisalignmentMode { AllAxes, YOnly };

MisalignmentMode parse_misalignment_mode(std::string_view text);  ///< "all", "all_axes", "y", "y_only"
std::string to_string(MisalignmentMode mode);

struct MisalignmentSpec {
  double theta = 0.0;
  MisalignmentMode mode = MisalignmentMode::AllAxes;
  /// Sweeps expect theta in [0, pi/2]; other values are accepted but flagged here.
  bool out_of_sweep_range() const;
};

/// Termwise letter substitution: X -> cX + sY, Y -> cY + sZ, Z -> cZ + sX (Y only in YOnly mode).
ObservableExpr misalign_expr(const ObservableExpr& expr, const MisalignmentSpec& spec);

struct ToleranceCurve {
  std::vector<double> thetas;
  std::vector<std::optional<double>> tolerances;
  std::string witness_label;
};

/// Inclusive grid start, start + step, ... up to stop (with a 1e-9 slack on the last point).
std::vector<double> theta_grid(double start, double stop, double step);
/// Parses "start:stop:step".
std::vector<double> parse_theta_grid(std::string_view text);
/// 0 : 0.6 : 0.005.
std::vector<double> default_theta_grid();

/// p_noise of the misaligned witness on rho at every grid point (parallel over the grid).
ToleranceCurve tolerance_curve(const Witness& w, const DensityMatrix& rho, const std::vector<double>& grid,
                               MisalignmentMode mode);
/// Single-threaded reference.
ToleranceCurve tolerance_curve_serial(const Witness& w, const DensityMatrix& rho, const std::vector<double>& grid,
                                      MisalignmentMode mode);

/// Difference of tolerances with absent values read as 0.
double tolerance_difference(const Witness& a, const Witness& b, const DensityMatrix& rho, double theta,
                            MisalignmentMode mode);

/// Theta in (0, pi/4) where the tolerances of a and b cross, located by bisection to 1e-4.
/// Throws std::domain_error if there is no sign change or more than one on the scan grid.
double crossover(const Witness& a, const Witness& b, const DensityMatrix& rho, MisalignmentMode mode);

/// CSV with header theta,tolerance_a,tolerance_b; empty field where a tolerance is absent.
std::string curves_to_csv(const ToleranceCurve& a, const ToleranceCurve& b);

}  // namespace edl
