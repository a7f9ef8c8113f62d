#include "edlkit/catalog.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace edl {

const std::vector<PaperWitnessEntry>& paper_witness_entries() {
  using S = NamedState;
  static const std::vector<PaperWitnessEntry> entries = {
      {S::W3, 1, "-0.1748(Z1+Z3)-0.415Z2-0.3426(X1X2+Y1Y2+X2X3+Y2Y3)+0.0898(Z1Z2+Z2Z3)",
       SubsetFamily::parse("12,23"), -0.0285, 0.1859},
      {S::W3, 2, "-0.2516(Z1+Z2+Z3)-0.2377(X1X2+Y1Y2+X2X3+Y2Y3+X1X3+Y1Y3)+0.2342(Z1Z2+Z2Z3+Z1Z3)",
       SubsetFamily::parse("12,23,13"), -0.0546, 0.3039},
      {S::W4, 1,
       "-0.2515(Z2+Z3)-0.1341(Z1+Z4)-0.2176(X1X2+Y1Y2+X3X4+Y3Y4)-0.2542(X2X3+Y2Y3)-0.0052(Z1Z2+Z3Z4)"
       "-0.0885Z2Z3",
       SubsetFamily::parse("12,23,34"), -0.0047, 0.0696},
      {S::W4, 2,
       "-0.4166Z2-0.1428Z1-0.1782(Z3+Z4)-0.2788(X1X2+Y1Y2)-0.0104Z1Z2-0.1561(X2X3+Y2Y3+X2X4+Y2Y4)"
       "+0.0429(Z2Z3+Z2Z4)-0.0623(X3X4+Y3Y4)+0.061Z3Z4",
       SubsetFamily::parse("12,23,34,24"), -0.0070, 0.1001},
      {S::W4, 3,
       "-0.2626(Z1+Z2+Z3+Z4)-0.1548(X1X2+Y1Y2+X2X3+Y2Y3+X3X4+Y3Y4+X1X4+Y1Y4)+0.078(Z1Z2+Z2Z3+Z3Z4+Z1Z4)",
       SubsetFamily::parse("12,23,34,14"), -0.0090, 0.1261},
      {S::W4, 4,
       "-0.303(Z2+Z4)-0.219(Z1+Z3)-0.1634(X1X2+Y1Y2+X2X3+Y2Y3+X3X4+Y3Y4+X1X4+Y1Y4)"
       "+0.0503(Z1Z2+Z2Z3+Z3Z4+Z1Z4)+0.0238(X2X4+Y2Y4)+0.1544Z2Z4",
       SubsetFamily::parse("12,23,34,24,14"), -0.0095, 0.1319},
      {S::W4, 5,
       "-0.2801(Z1+Z2+Z3+Z4)-0.1037(X1X2+Y1Y2+X2X3+Y2Y3+X3X4+Y3Y4+X1X4+Y1Y4+X1X3+Y1Y3+X2X4+Y2Y4)"
       "+0.0919(Z1Z2+Z2Z3+Z3Z4+Z1Z4+Z1Z3+Z2Z4)",
       SubsetFamily::parse("12,23,34,14,13,24"), -0.0114, 0.1541},
      {S::D4, 1, "-0.13(X1X2+Y1Y2+X3X4+Y3Y4)-0.5659(X2X3+Y2Y3)+0.1838(Z1Z2+Z3Z4)-0.3579Z2Z3",
       SubsetFamily::parse("12,23,34"), -0.0065, 0.0946},
      {S::D4, 2, "-0.2711(X1X2+Y1Y2+X1X3+Y1Y3+X1X4+Y1Y4)+0.0641(Z1Z2+Z1Z3+Z1Z4)",
       SubsetFamily::parse("12,13,14"), -0.0093, 0.1293},
      {S::D4, 3, "-0.216(X1X2+Y1Y2+X2X3+Y2Y3+X3X4+Y3Y4+X1X4+Y1Y4)+0.0266(Z1Z2+Z2Z3+Z3Z4+Z1Z4)",
       SubsetFamily::parse("12,23,34,14"), -0.0117, 0.1577},
      {S::D4, 4,
       "-0.1287(X1X2+Y1Y2+X2X3+Y2Y3+X3X4+Y3Y4+X1X4+Y1Y4)+0.2403(Z1Z2+Z2Z3+Z3Z4+Z1Z4)"
       "-0.1551(X2X4+Y2Y4)+0.3132Z2Z4",
       SubsetFamily::parse("12,23,34,24,14"), -0.0199, 0.2413},
      {S::D4, 5,
       "-0.1228(X1X2+Y1Y2+X2X3+Y2Y3+X3X4+Y3Y4+X1X4+Y1Y4+X1X3+Y1Y3+X2X4+Y2Y4)"
       "+0.2368(Z1Z2+Z2Z3+Z3Z4+Z1Z4+Z1Z3+Z2Z4)",
       SubsetFamily::parse("12,23,34,14,13,24"), -0.0285, 0.3131},
      {S::C4, 1, "-0.25(X1X2Z4-Y1Y2Z4+Z3Z4+Z1X3X4-Z1Y3Y4)", SubsetFamily::parse("123,134"), -0.0156, 1.0 / 5},
      {S::C4, 2, "-0.25(X1X2Z4-Y1Y2Z4+Z1Z2+Z3Z4+Z1X3X4-Z1Y3Y4)", SubsetFamily::parse("123,134"), -0.0312,
       1.0 / 3},
      {S::C4, 3, "+0.1153Z1Z2-0.218Z3Z4+0.2243(Z1Y3Y4-Z1X3X4+Z2Y3Y4-Z2X3X4)+0.3333(Y1Y2Z4-X1X2Z4)",
       SubsetFamily::parse("123,134,234"), -0.0417, 2.0 / 5},
      {S::C4, 4,
       "+0.0942(Z1Z2+Z3Z4)+0.2736(Y1Y2Z3-X1X2Z3+Y1Y2Z4-X1X2Z4+Z1Y3Y4-Z1X3X4+Z2Y3Y4-Z2X3X4)",
       SubsetFamily::parse("123,124,134,234"), -0.0625, 1.0 / 2},
  };
  return entries;
}

const PaperWitnessEntry& paper_witness_entry(NamedState state, int id) {
  for (const auto& e : paper_witness_entries()) {
    if (e.state == state && e.id == id) return e;
  }
  throw std::invalid_argument("no published witness " + paper_witness_label(state, id));
}

std::string paper_witness_label(NamedState state, int id) { return to_string(state) + "_W" + std::to_string(id); }

namespace {

// Recursive-descent reader for sums of signed coefficient * (term list) groups.
class ExpressionReader {
 public:
  ExpressionReader(const std::string& text, int n) : text_(text), n_(n) {}

  ObservableExpr read() {
    ObservableExpr out(n_);
    skip_space();
    while (pos_ < text_.size()) {
      const double sign = read_sign(pos_ == 0);
      skip_space();
      const double coeff = sign * read_number_or_one();
      skip_space();
      if (peek() == '(') {
        ++pos_;
        bool first = true;
        while (true) {
          skip_space();
          if (peek() == ')') {
            ++pos_;
            break;
          }
          const double inner = read_sign(first);
          first = false;
          out.add(read_word(), coeff * inner);
        }
      } else {
        out.add(read_word(), coeff);
      }
      skip_space();
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("witness expression, position " + std::to_string(pos_) + ": " + what);
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  double read_sign(bool optional) {
    if (peek() == '+') {
      ++pos_;
      return 1.0;
    }
    if (peek() == '-') {
      ++pos_;
      return -1.0;
    }
    if (!optional) fail("expected '+' or '-'");
    return 1.0;
  }
  double read_number_or_one() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (start == pos_) return 1.0;
    return std::stod(text_.substr(start, pos_ - start));
  }
  PauliString read_word() {
    std::vector<PauliLetter> letters(static_cast<std::size_t>(n_), PauliLetter::I);
    bool any = false;
    while (peek() == 'X' || peek() == 'Y' || peek() == 'Z') {
      const PauliLetter l = pauli_letter_from_char(text_[pos_++]);
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a qubit index");
      const int q = text_[pos_++] - '0';
      if (q < 1 || q > n_) fail("qubit index out of range");
      if (letters[static_cast<std::size_t>(q - 1)] != PauliLetter::I) fail("qubit listed twice in one term");
      letters[static_cast<std::size_t>(q - 1)] = l;
      any = true;
    }
    if (!any) fail("expected a Pauli term");
    return PauliString(std::move(letters));
  }

  const std::string& text_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

ObservableExpr parse_witness_expression(const std::string& body, int num_qubits) {
  ObservableExpr e = ExpressionReader(body, num_qubits).read();
  e.add(PauliString::identity(num_qubits), 1.0);
  e *= std::ldexp(1.0, -num_qubits);
  return e;
}

Witness load_paper_witness(NamedState state, int id) {
  const PaperWitnessEntry& entry = paper_witness_entry(state, id);
  Witness w;
  w.expr = parse_witness_expression(entry.expression, num_qubits(state));
  w.target_state = state;
  w.family = support(w.expr);
  w.alpha = entry.alpha;
  w.p_noise = entry.p_noise;
  w.label = paper_witness_label(state, id);
  return w;
}

}  // namespace edl
