#pragma once

// The sixteen published EDL witnesses, transcribed at their printed precision.

#include <string>
#include <vector>

#include "edlkit/witness.hpp"

namespace edl {

struct PaperWitnessEntry {
  NamedState state;
  int id;
  /// Bracketed Pauli expression as printed, e.g. "-0.1748(Z1+Z3)-0.415Z2"; the
  /// implicit leading identity and the overall 1/2^n factor are not included.
  std::string expression;
  /// Subset family listed in the summary table.
  SubsetFamily table_family;
  /// Printed Tr(W rho) on the target state.
  double alpha;
  /// Printed white-noise tolerance.
  double p_noise;
};

const std::vector<PaperWitnessEntry>& paper_witness_entries();

/// Throws std::invalid_argument for pairs outside the published set.
const PaperWitnessEntry& paper_witness_entry(NamedState state, int id);

/// Parses the printed bracket body into [I + body] / 2^n.
ObservableExpr parse_witness_expression(const std::string& body, int num_qubits);

/// Witness with coefficients as printed and family computed by support().
Witness load_paper_witness(NamedState state, int id);

/// Standard label such as "D4_W5".
std::string paper_witness_label(NamedState state, int id);

}  // namespace edl
