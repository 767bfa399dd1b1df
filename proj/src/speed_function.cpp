#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include "esf.hpp"
#include "flowlab/errors.hpp"
#include "flowlab/symfun.hpp"

namespace flowlab::symfun {

namespace {

double term_degree(const Term& t) {
  double d = 0.0;
  for (const Factor& f : t.factors) d += f.k * f.exponent;
  return d;
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string factor_string(const Factor& f) {
  std::string s = (f.basis == Basis::Sigma ? "sigma(" : "S(") + std::to_string(f.k) + ")";
  if (f.exponent != 1.0) s += "^" + (f.exponent < 0 ? "(" + format_number(f.exponent) + ")"
                                                    : format_number(f.exponent));
  return s;
}

std::string term_string(const Term& t) {
  std::string s;
  if (t.coefficient != 1.0 || t.factors.empty()) s = format_number(t.coefficient);
  for (const Factor& f : t.factors) {
    if (!s.empty()) s += "*";
    s += factor_string(f);
  }
  return s;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  std::vector<Term> parse() {
    std::vector<Term> terms;
    skip_ws();
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') {
      sign = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
    }
    while (true) {
      skip_ws();
      const std::size_t start = pos_;
      Term t = parse_term();
      t.coefficient *= sign;
      t.source = trimmed(s_.substr(start, pos_ - start));
      if (sign < 0) t.source = "-" + t.source;
      terms.push_back(std::move(t));
      skip_ws();
      if (pos_ >= s_.size()) break;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
        continue;
      }
      fail("expected '+', '-' or end of expression");
    }
    return terms;
  }

 private:
  Term parse_term() {
    Term t;
    bool any = false;
    while (true) {
      skip_ws();
      const char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        t.coefficient *= parse_number();
      } else if (match_word("sigma")) {
        t.factors.push_back(parse_factor(Basis::Sigma));
      } else if (match_word("S")) {
        t.factors.push_back(parse_factor(Basis::PowerSum));
      } else {
        fail(any ? "expected a number, sigma(k) or S(k) after '*'"
                 : "expected a number, sigma(k) or S(k)");
      }
      any = true;
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        continue;
      }
      break;
    }
    return t;
  }

  Factor parse_factor(Basis basis) {
    Factor f;
    f.basis = basis;
    skip_ws();
    expect('(');
    skip_ws();
    const double k = parse_number();
    if (k != std::floor(k) || k < 1 || k > 64) fail("basis order must be an integer in [1, 64]");
    f.k = static_cast<int>(k);
    skip_ws();
    expect(')');
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      f.exponent = parse_exponent();
    }
    if (!std::isfinite(f.exponent)) fail("exponent is not finite");
    return f;
  }

  double parse_exponent() {
    skip_ws();
    if (peek() == '(') {
      ++pos_;
      const double num = parse_signed();
      skip_ws();
      double value = num;
      if (peek() == '/') {
        ++pos_;
        const double den = parse_signed();
        if (den == 0.0) fail("zero denominator in exponent");
        value = num / den;
      }
      skip_ws();
      expect(')');
      return value;
    }
    return parse_signed();
  }

  double parse_signed() {
    skip_ws();
    double sign = 1.0;
    if (peek() == '-' || peek() == '+') {
      sign = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
      skip_ws();
    }
    return sign * parse_number();
  }

  double parse_number() {
    const char* begin = s_.c_str() + pos_;
    if (!std::isdigit(static_cast<unsigned char>(*begin)) && *begin != '.') fail("expected a number");
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  bool match_word(const char* w) {
    const std::string word(w);
    if (s_.compare(pos_, word.size(), word) != 0) return false;
    const std::size_t after = pos_ + word.size();
    if (after < s_.size() && std::isalnum(static_cast<unsigned char>(s_[after]))) return false;
    pos_ = after;
    return true;
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  static std::string trimmed(const std::string& x) {
    const auto b = x.find_first_not_of(" \t\n\r");
    if (b == std::string::npos) return {};
    const auto e = x.find_last_not_of(" \t\n\r");
    return x.substr(b, e - b + 1);
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ArgumentError("cannot parse speed function \"" + s_ + "\" at column " +
                        std::to_string(pos_ + 1) + ": " + what);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

SpeedFunction::SpeedFunction(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw ArgumentError("speed function needs at least one term");
  for (Term& t : terms_) {
    if (!std::isfinite(t.coefficient)) throw ArgumentError("non-finite coefficient");
    for (const Factor& f : t.factors) {
      if (f.k < 1) throw ArgumentError("basis order must be >= 1");
      if (f.k > 64) throw ArgumentError("basis order must be <= 64");
    }
    if (t.source.empty()) t.source = term_string(t);
  }
  beta_ = term_degree(terms_.front());
  const double tol = 1e-12 * std::max(1.0, std::abs(beta_));
  bool mixed = false;
  for (const Term& t : terms_) mixed = mixed || std::abs(term_degree(t) - beta_) > tol;
  if (mixed) {
    std::string msg = "mixed homogeneity degrees:";
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      msg += " term " + std::to_string(i + 1) + " '" + terms_[i].source + "' has degree " +
             format_number(term_degree(terms_[i]));
      msg += i + 1 < terms_.size() ? ";" : "";
    }
    throw ArgumentError(msg);
  }
}

SpeedFunction SpeedFunction::parse(const std::string& text) {
  Parser p(text);
  return SpeedFunction(p.parse());
}

SpeedFunction SpeedFunction::sigma_power(int k, double alpha) {
  return SpeedFunction({Term{1.0, {Factor{Basis::Sigma, k, alpha}}, {}}});
}

SpeedFunction SpeedFunction::power_sum_power(int k, double alpha) {
  return SpeedFunction({Term{1.0, {Factor{Basis::PowerSum, k, alpha}}, {}}});
}

bool SpeedFunction::is_condition_family() const {
  if (terms_.size() != 1) return false;
  const Term& t = terms_.front();
  if (!(t.coefficient > 0.0) || t.factors.empty()) return false;
  return std::all_of(t.factors.begin(), t.factors.end(),
                     [](const Factor& f) { return f.exponent > 0.0; });
}

namespace {
std::optional<std::pair<int, double>> single_power(const std::vector<Term>& terms, Basis basis) {
  if (terms.size() != 1) return std::nullopt;
  const Term& t = terms.front();
  if (!(t.coefficient > 0.0) || t.factors.size() != 1) return std::nullopt;
  if (t.factors.front().basis != basis) return std::nullopt;
  return std::make_pair(t.factors.front().k, t.factors.front().exponent);
}
}  // namespace

std::optional<std::pair<int, double>> SpeedFunction::as_sigma_power() const {
  return single_power(terms_, Basis::Sigma);
}

std::optional<std::pair<int, double>> SpeedFunction::as_power_sum_power() const {
  return single_power(terms_, Basis::PowerSum);
}

int SpeedFunction::max_order() const {
  int m = 0;
  for (const Term& t : terms_)
    for (const Factor& f : t.factors) m = std::max(m, f.k);
  return m;
}

double SpeedFunction::value(std::span<const double> values) const {
  const int n = static_cast<int>(values.size());
  double total = 0.0;
  for (const Term& t : terms_) {
    double p = t.coefficient;
    for (const Factor& f : t.factors) {
      double b;
      if (f.basis == Basis::Sigma) {
        if (f.k > n) {
          throw ArgumentError("sigma(" + std::to_string(f.k) + ") vanishes identically for n=" +
                              std::to_string(n));
        }
        b = detail::esf(values.data(), n, f.k);
      } else {
        b = 0.0;
        for (double x : values) b += detail::ipow(x, f.k);
      }
      p *= f.exponent == 1.0 ? b : std::pow(b, f.exponent);
    }
    total += p;
  }
  return total;
}

std::pair<double, Vec> SpeedFunction::value_gradient(std::span<const double> values) const {
  const int n = static_cast<int>(values.size());
  const double* v = values.data();
  double total = 0.0;
  Vec grad = Vec::Zero(n);
  for (const Term& t : terms_) {
    double P = t.coefficient;
    Vec gP = Vec::Zero(n);
    for (const Factor& f : t.factors) {
      double b = 0.0;
      Vec gb(n);
      if (f.basis == Basis::Sigma) {
        if (f.k > n) {
          throw ArgumentError("sigma(" + std::to_string(f.k) + ") vanishes identically for n=" +
                              std::to_string(n));
        }
        b = detail::esf(v, n, f.k);
        for (int i = 0; i < n; ++i) gb[i] = detail::esf(v, n, f.k - 1, i);
      } else {
        for (int i = 0; i < n; ++i) {
          b += detail::ipow(v[i], f.k);
          gb[i] = f.k * detail::ipow(v[i], f.k - 1);
        }
      }
      const double e = f.exponent;
      const double fv = e == 1.0 ? b : std::pow(b, e);
      const double c1 = e == 1.0 ? 1.0 : e * std::pow(b, e - 1.0);
      gP = fv * gP + (P * c1) * gb;
      P *= fv;
    }
    total += P;
    grad += gP;
  }
  return {total, grad};
}

std::string SpeedFunction::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const Term& t = terms_[i];
    std::string s = term_string(t);
    if (i > 0) {
      if (t.coefficient < 0) {
        Term pos = t;
        pos.coefficient = -pos.coefficient;
        s = " - " + term_string(pos);
      } else {
        s = " + " + s;
      }
    }
    out += s;
  }
  return out;
}

}  // namespace flowlab::symfun
