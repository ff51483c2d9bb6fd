#include "tauber/density.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <sstream>

#include "tauber/errors.hpp"

namespace tauber {

namespace {

constexpr double kTailFloor = 1e-12;

double parse_number(std::string_view text, std::string_view token) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  double out = 0;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end)
    raise(Errc::ParseError, "bad number in token \"" + std::string(token) + "\"");
  return out;
}

}  // namespace

const char* kind_name(DensityKind kind) {
  switch (kind) {
    case DensityKind::Uniform: return "uniform";
    case DensityKind::Exponential: return "exp";
    case DensityKind::Power: return "power";
    case DensityKind::PiecewiseConstant: return "pc";
  }
  return "?";
}

Density Density::uniform(double T) {
  if (!(T > 0) || !std::isfinite(T)) raise(Errc::NonPositiveParameter, "uniform T must be > 0");
  Density d;
  d.kind_ = DensityKind::Uniform;
  d.p0_ = T;
  return d;
}

Density Density::exponential(double lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda))
    raise(Errc::NonPositiveParameter, "exponential rate must be > 0");
  Density d;
  d.kind_ = DensityKind::Exponential;
  d.p0_ = lambda;
  return d;
}

Density Density::power(double alpha, double beta, double gamma) {
  if (!(alpha > 0) || !(beta > 0) || !std::isfinite(alpha) || !std::isfinite(beta) ||
      !std::isfinite(gamma))
    raise(Errc::NonPositiveParameter, "power alpha and beta must be > 0");
  if (!(gamma > 1)) raise(Errc::GammaNotGreaterThanOne, "power exponent must exceed 1");
  Density d;
  d.kind_ = DensityKind::Power;
  d.p0_ = alpha;
  d.p1_ = beta;
  d.p2_ = gamma;
  return d;
}

Density Density::piecewise_constant(std::vector<double> breakpoints, std::vector<double> levels,
                                    bool renormalize) {
  if (breakpoints.size() < 2 || levels.size() + 1 != breakpoints.size())
    raise(Errc::MassNotOne, "piecewise density needs k+1 breakpoints for k levels");
  if (breakpoints.front() < 0)
    raise(Errc::NegativeTime, "piecewise support must start at a nonnegative time");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1]) || !std::isfinite(breakpoints[i + 1]))
      raise(Errc::MassNotOne, "breakpoints must be finite and strictly increasing");
  }
  double total = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] >= 0) || !std::isfinite(levels[i]))
      raise(Errc::NonPositiveParameter, "piecewise levels must be finite and nonnegative");
    total += levels[i] * (breakpoints[i + 1] - breakpoints[i]);
  }
  if (!(total > 0)) raise(Errc::MassNotOne, "piecewise density has zero mass");
  if (std::abs(total - 1.0) > 1e-9) {
    if (!renormalize)
      raise(Errc::MassNotOne, "piecewise mass is " + std::to_string(total) + ", not 1");
    for (auto& level : levels) level /= total;
  }

  Density d;
  d.kind_ = DensityKind::PiecewiseConstant;
  d.breaks_ = std::move(breakpoints);
  d.levels_ = std::move(levels);
  d.cum_.assign(d.breaks_.size(), 0.0);
  for (std::size_t i = 0; i < d.levels_.size(); ++i)
    d.cum_[i + 1] = d.cum_[i] + d.levels_[i] * (d.breaks_[i + 1] - d.breaks_[i]);
  return d;
}

double Density::value_at(double t) const {
  if (t < 0) return 0;
  switch (kind_) {
    case DensityKind::Uniform:
      return t < p0_ ? 1.0 / p0_ : 0.0;
    case DensityKind::Exponential:
      return p0_ * std::exp(-p0_ * t);
    case DensityKind::Power: {
      const double norm = (p2_ - 1.0) * p1_ * std::pow(p0_, p2_ - 1.0);
      return norm / std::pow(p0_ + p1_ * t, p2_);
    }
    case DensityKind::PiecewiseConstant: {
      if (t < breaks_.front() || t >= breaks_.back()) return 0;
      const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
      const std::size_t idx = static_cast<std::size_t>(it - breaks_.begin()) - 1;
      return levels_[std::min(idx, levels_.size() - 1)];
    }
  }
  return 0;
}

double Density::cdf(double t) const {
  if (t < 0) raise(Errc::NegativeTime, "cdf argument must be >= 0");
  if (std::isinf(t)) return 1.0;
  switch (kind_) {
    case DensityKind::Uniform:
      return std::min(t / p0_, 1.0);
    case DensityKind::Exponential:
      return -std::expm1(-p0_ * t);
    case DensityKind::Power:
      // tail(t) = (alpha / (alpha + beta t))^(gamma - 1)
      return 1.0 - std::pow(p0_ / (p0_ + p1_ * t), p2_ - 1.0);
    case DensityKind::PiecewiseConstant: {
      if (t <= breaks_.front()) return 0;
      if (t >= breaks_.back()) return 1.0;  // mass is 1 up to construction tolerance
      const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
      const std::size_t idx = static_cast<std::size_t>(it - breaks_.begin()) - 1;
      return std::min(cum_[idx] + levels_[idx] * (t - breaks_[idx]), 1.0);
    }
  }
  return 0;
}

double Density::quantile(double r) const {
  if (!(r > 0) || !(r < 1)) raise(Errc::QuantileOutOfRange, "quantile level must lie in (0,1)");
  switch (kind_) {
    case DensityKind::Uniform:
      return r * p0_;
    case DensityKind::Exponential:
      return -std::log1p(-r) / p0_;
    case DensityKind::Power:
      return (p0_ / p1_) * (std::pow(1.0 - r, -1.0 / (p2_ - 1.0)) - 1.0);
    case DensityKind::PiecewiseConstant: {
      // First breakpoint index whose cumulative mass reaches r; the mass
      // accrues inside the cell just before it. On plateaus (zero levels)
      // lower_bound lands on the plateau's left edge, which is exactly the
      // minimal-preimage rule.
      const auto it = std::lower_bound(cum_.begin(), cum_.end(), r);
      if (it != cum_.end() && it != cum_.begin()) {
        const std::size_t j = static_cast<std::size_t>(it - cum_.begin());
        return breaks_[j - 1] + (r - cum_[j - 1]) / levels_[j - 1];
      }
      // r exceeds the accumulated mass by rounding; land in the last
      // positive cell.
      for (std::size_t i = levels_.size(); i-- > 0;)
        if (levels_[i] > 0) return breaks_[i] + (r - cum_[i]) / levels_[i];
      raise(Errc::QuantileOutOfRange, "density has no mass");
    }
  }
  return 0;
}

double Density::sup_value() const {
  switch (kind_) {
    case DensityKind::Uniform: return 1.0 / p0_;
    case DensityKind::Exponential: return p0_;
    case DensityKind::Power: return (p2_ - 1.0) * p1_ / p0_;
    case DensityKind::PiecewiseConstant:
      return *std::max_element(levels_.begin(), levels_.end());
  }
  return 0;
}

double Density::support_end() const {
  switch (kind_) {
    case DensityKind::Uniform: return p0_;
    case DensityKind::PiecewiseConstant: return breaks_.back();
    default: return kInfinity;
  }
}

double Density::mass() const {
  return kind_ == DensityKind::PiecewiseConstant ? cum_.back() : 1.0;
}

Density Density::shift(double T) const {
  if (!(T > 0)) raise(Errc::NonPositiveParameter, "shift offset must be > 0");
  const double tail_mass = tail(T);
  // Exponential and Power tails are analytically positive for every T; only
  // the compact-support kinds can genuinely run out of mass.
  if (tail_mass <= kTailFloor && support_end() < kInfinity)
    raise(Errc::ZeroTailMass, "shift exhausts the support");
  switch (kind_) {
    case DensityKind::Uniform:
      return uniform(p0_ - T);
    case DensityKind::Exponential:
      return exponential(p0_);  // memoryless
    case DensityKind::Power:
      return power(p0_ + p1_ * T, p1_, p2_);
    case DensityKind::PiecewiseConstant: {
      std::vector<double> nb, nl;
      for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (breaks_[i + 1] <= T) continue;
        nb.push_back(std::max(breaks_[i] - T, 0.0));
        nl.push_back(levels_[i] / tail_mass);
      }
      nb.push_back(breaks_.back() - T);
      return piecewise_constant(std::move(nb), std::move(nl), /*renormalize=*/true);
    }
  }
  raise(Errc::ZeroTailMass, "unreachable");
}

Density Density::scale(double lambda) const {
  if (!(lambda > 0) || !std::isfinite(lambda))
    raise(Errc::NonPositiveParameter, "scale factor must be > 0");
  switch (kind_) {
    case DensityKind::Uniform:
      return uniform(p0_ / lambda);
    case DensityKind::Exponential:
      return exponential(p0_ * lambda);
    case DensityKind::Power:
      return power(p0_, p1_ * lambda, p2_);
    case DensityKind::PiecewiseConstant: {
      std::vector<double> nb(breaks_), nl(levels_);
      for (auto& b : nb) b /= lambda;
      for (auto& l : nl) l *= lambda;
      return piecewise_constant(std::move(nb), std::move(nl), /*renormalize=*/true);
    }
  }
  raise(Errc::NonPositiveParameter, "unreachable");
}

namespace {
[[noreturn]] void wrong_kind(const char* want) {
  raise(Errc::NonPositiveParameter, std::string("density is not of kind ") + want);
}
}  // namespace

double Density::uniform_T() const {
  if (kind_ != DensityKind::Uniform) wrong_kind("uniform");
  return p0_;
}
double Density::exp_lambda() const {
  if (kind_ != DensityKind::Exponential) wrong_kind("exp");
  return p0_;
}
double Density::power_alpha() const {
  if (kind_ != DensityKind::Power) wrong_kind("power");
  return p0_;
}
double Density::power_beta() const {
  if (kind_ != DensityKind::Power) wrong_kind("power");
  return p1_;
}
double Density::power_gamma() const {
  if (kind_ != DensityKind::Power) wrong_kind("power");
  return p2_;
}
double Density::canonical_power_beta() const {
  if (kind_ != DensityKind::Power) wrong_kind("power");
  return p1_ / p0_;
}
const std::vector<double>& Density::breakpoints() const {
  if (kind_ != DensityKind::PiecewiseConstant) wrong_kind("pc");
  return breaks_;
}
const std::vector<double>& Density::levels() const {
  if (kind_ != DensityKind::PiecewiseConstant) wrong_kind("pc");
  return levels_;
}

bool Density::same_parameters(const Density& other, double tol) const {
  if (kind_ != other.kind_) return false;
  auto close = [tol](double a, double b) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
  };
  switch (kind_) {
    case DensityKind::Uniform:
    case DensityKind::Exponential:
      return close(p0_, other.p0_);
    case DensityKind::Power:
      return close(canonical_power_beta(), other.canonical_power_beta()) && close(p2_, other.p2_);
    case DensityKind::PiecewiseConstant: {
      if (breaks_.size() != other.breaks_.size()) return false;
      for (std::size_t i = 0; i < breaks_.size(); ++i)
        if (!close(breaks_[i], other.breaks_[i])) return false;
      for (std::size_t i = 0; i < levels_.size(); ++i)
        if (!close(levels_[i], other.levels_[i])) return false;
      return true;
    }
  }
  return false;
}

std::string Density::describe() const {
  std::ostringstream out;
  out.precision(12);
  switch (kind_) {
    case DensityKind::Uniform: out << "uniform:" << p0_; break;
    case DensityKind::Exponential: out << "exp:" << p0_; break;
    case DensityKind::Power: out << "power:" << p0_ << "," << p1_ << "," << p2_; break;
    case DensityKind::PiecewiseConstant:
      out << "pc[" << levels_.size() << " cells on [" << breaks_.front() << ","
          << breaks_.back() << ")]";
      break;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Mini-grammar
// ---------------------------------------------------------------------------

namespace {

Density load_pc_csv(const std::string& path, std::string_view token) {
  std::ifstream in(path);
  if (!in) raise(Errc::ParseError, "cannot open \"" + path + "\" in token \"" + std::string(token) + "\"");
  std::vector<double> breaks, levels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      raise(Errc::ParseError, path + ":" + std::to_string(lineno) + " expected breakpoint,level");
    breaks.push_back(parse_number(std::string_view(line).substr(0, comma), token));
    levels.push_back(parse_number(std::string_view(line).substr(comma + 1), token));
  }
  if (breaks.size() < 2)
    raise(Errc::ParseError, path + ": needs at least two breakpoint,level rows");
  if (levels.back() != 0)
    raise(Errc::ParseError, path + ":" + std::to_string(lineno) +
                                " last row marks the support end; its level must be 0");
  levels.pop_back();
  return Density::piecewise_constant(std::move(breaks), std::move(levels));
}

}  // namespace

Density Density::parse(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto bar = text.find('|', pos);
    if (bar == std::string_view::npos) {
      tokens.push_back(text.substr(pos));
      break;
    }
    tokens.push_back(text.substr(pos, bar - pos));
    pos = bar + 1;
  }
  if (tokens.empty() || tokens.front().empty())
    raise(Errc::ParseError, "empty density expression");

  auto split = [](std::string_view token) {
    const auto colon = token.find(':');
    if (colon == std::string_view::npos)
      raise(Errc::ParseError, "missing ':' in token \"" + std::string(token) + "\"");
    return std::pair{token.substr(0, colon), token.substr(colon + 1)};
  };

  auto [head, args] = split(tokens.front());
  Density result = [&, head = head, args = args]() -> Density {
    try {
      if (head == "uniform") return uniform(parse_number(args, tokens.front()));
      if (head == "exp") return exponential(parse_number(args, tokens.front()));
      if (head == "power") {
        const auto c1 = args.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : args.find(',', c1 + 1);
        if (c1 == std::string_view::npos || c2 == std::string_view::npos)
          raise(Errc::ParseError, "power needs ALPHA,BETA,GAMMA in token \"" +
                                      std::string(tokens.front()) + "\"");
        return power(parse_number(args.substr(0, c1), tokens.front()),
                     parse_number(args.substr(c1 + 1, c2 - c1 - 1), tokens.front()),
                     parse_number(args.substr(c2 + 1), tokens.front()));
      }
      if (head == "pc") return load_pc_csv(std::string(args), tokens.front());
    } catch (const Error& err) {
      if (err.code() == Errc::ParseError) throw;
      raise(Errc::ParseError,
            "token \"" + std::string(tokens.front()) + "\": " + err.what());
    }
    raise(Errc::ParseError, "unknown density kind in token \"" + std::string(tokens.front()) + "\"");
  }();

  for (std::size_t i = 1; i < tokens.size(); ++i) {
    auto [verb, arg] = split(tokens[i]);
    try {
      if (verb == "shift")
        result = result.shift(parse_number(arg, tokens[i]));
      else if (verb == "scale")
        result = result.scale(parse_number(arg, tokens[i]));
      else
        raise(Errc::ParseError, "unknown modifier in token \"" + std::string(tokens[i]) + "\"");
    } catch (const Error& err) {
      if (err.code() == Errc::ParseError) throw;
      raise(Errc::ParseError, "token \"" + std::string(tokens[i]) + "\": " + err.what());
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Total variation
// ---------------------------------------------------------------------------

double total_variation(const Density& rho, double a, double b) {
  if (a < 0) raise(Errc::NegativeTime, "variation window must start at a nonnegative time");
  if (!(a < b)) raise(Errc::EmptyInterval, "variation window [a,b) is empty");
  switch (rho.kind()) {
    case DensityKind::Uniform: {
      const double T = rho.uniform_T();
      return (a < T && T < b) ? 1.0 / T : 0.0;
    }
    case DensityKind::Exponential:
    case DensityKind::Power: {
      const double at_b = std::isinf(b) ? 0.0 : rho.value_at(b);
      return rho.value_at(a) - at_b;
    }
    case DensityKind::PiecewiseConstant: {
      const auto& bp = rho.breakpoints();
      const auto& lv = rho.levels();
      const auto first = std::upper_bound(bp.begin(), bp.end(), a);
      double tv = 0;
      for (auto it = first; it != bp.end() && *it < b; ++it) {
        const std::size_t i = static_cast<std::size_t>(it - bp.begin());
        const double before = i == 0 ? 0.0 : lv[i - 1];
        const double after = i + 1 == bp.size() ? 0.0 : lv[i];
        tv += std::abs(after - before);
      }
      return tv;
    }
  }
  return 0;
}

double log_total_variation(const Density& rho, double a, double b) {
  if (a < 0) raise(Errc::NegativeTime, "variation window must start at a nonnegative time");
  if (!(a < b)) raise(Errc::EmptyInterval, "variation window [a,b) is empty");
  const double end = rho.support_end();
  if (end < b && !(std::isinf(b) && std::isinf(end)))
    raise(Errc::NonPositiveDensityOnSupport, "density vanishes inside the window");
  switch (rho.kind()) {
    case DensityKind::Uniform:
      return 0.0;
    case DensityKind::Exponential:
      return rho.exp_lambda() * (b - a);
    case DensityKind::Power:
      return rho.power_gamma() *
             std::log((rho.power_alpha() + rho.power_beta() * b) /
                      (rho.power_alpha() + rho.power_beta() * a));
    case DensityKind::PiecewiseConstant: {
      const auto& bp = rho.breakpoints();
      const auto& lv = rho.levels();
      if (a < bp.front()) raise(Errc::NonPositiveDensityOnSupport, "density vanishes before its support");
      const std::size_t lo_cell = static_cast<std::size_t>(
          std::upper_bound(bp.begin(), bp.end(), a) - bp.begin() - 1);
      double tv = 0;
      for (std::size_t i = lo_cell; i < lv.size() && bp[i] < b; ++i) {
        if (lv[i] <= 0)
          raise(Errc::NonPositiveDensityOnSupport, "zero level inside the window");
        if (i > lo_cell) tv += std::abs(std::log(lv[i]) - std::log(lv[i - 1]));
      }
      return tv;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// L1 distance — exact piecewise sign analysis
// ---------------------------------------------------------------------------

namespace {

bool is_step_kind(const Density& d) {
  return d.kind() == DensityKind::Uniform || d.kind() == DensityKind::PiecewiseConstant;
}

struct StepView {
  std::vector<double> breaks;
  std::vector<double> levels;  // zero outside [breaks.front(), breaks.back())
};

StepView to_step(const Density& d) {
  if (d.kind() == DensityKind::Uniform) return {{0.0, d.uniform_T()}, {1.0 / d.uniform_T()}};
  return {d.breakpoints(), d.levels()};
}

// Unique t with rho(t) = level for a strictly decreasing smooth density.
double smooth_inverse(const Density& d, double level) {
  if (d.kind() == DensityKind::Exponential) {
    const double lambda = d.exp_lambda();
    return std::log(lambda / level) / lambda;
  }
  const double alpha = d.power_alpha(), beta = d.power_beta(), gamma = d.power_gamma();
  const double norm = (gamma - 1.0) * beta * std::pow(alpha, gamma - 1.0);
  return (std::pow(norm / level, 1.0 / gamma) - alpha) / beta;
}

double step_step_l1(const StepView& r, const StepView& n) {
  std::vector<double> cuts;
  cuts.reserve(r.breaks.size() + n.breaks.size());
  cuts.insert(cuts.end(), r.breaks.begin(), r.breaks.end());
  cuts.insert(cuts.end(), n.breaks.begin(), n.breaks.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto level_at = [](const StepView& s, double t) -> double {
    if (t < s.breaks.front() || t >= s.breaks.back()) return 0;
    const auto it = std::upper_bound(s.breaks.begin(), s.breaks.end(), t);
    return s.levels[static_cast<std::size_t>(it - s.breaks.begin()) - 1];
  };

  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = cuts[i];
    total += std::abs(level_at(r, mid) - level_at(n, mid)) * (cuts[i + 1] - cuts[i]);
  }
  return total;
}

double step_smooth_l1(const StepView& step, const Density& smooth) {
  double total = smooth.cdf(step.breaks.front());  // before the step support
  for (std::size_t i = 0; i < step.levels.size(); ++i) {
    const double u = step.breaks[i], v = step.breaks[i + 1];
    const double level = step.levels[i];
    double c = v;  // crossing of the decreasing smooth density with `level`
    if (level > 0) {
      const double inv = smooth_inverse(smooth, level);
      c = std::clamp(inv, u, v);
    }
    // smooth >= level on [u,c), smooth <= level on [c,v)
    const double mass_uc = smooth.cdf(c) - smooth.cdf(u);
    const double mass_cv = smooth.cdf(v) - smooth.cdf(c);
    total += std::abs(mass_uc - level * (c - u)) + std::abs(level * (v - c) - mass_cv);
  }
  total += smooth.tail(step.breaks.back());
  return total;
}

double signed_piece(const Density& r, const Density& n, double u, double v) {
  const double ru = r.cdf(u), rv = std::isinf(v) ? 1.0 : r.cdf(v);
  const double nu = n.cdf(u), nv = std::isinf(v) ? 1.0 : n.cdf(v);
  return std::abs((rv - ru) - (nv - nu));
}

// Bisection in log1p(t): heavy-tailed supports put `hi` astronomically far
// out, and only a scale-free parameterization localizes moderate crossings.
double bisect_crossing(const Density& r, const Density& n, double lo, double hi) {
  auto diff = [&](double t) { return r.value_at(t) - n.value_at(t); };
  double ulo = std::log1p(lo), uhi = std::log1p(hi);
  double flo = diff(lo);
  for (int it = 0; it < 200 && uhi - ulo > 1e-15; ++it) {
    const double umid = 0.5 * (ulo + uhi);
    const double fmid = diff(std::expm1(umid));
    if ((flo <= 0) == (fmid <= 0)) {
      ulo = umid;
      flo = fmid;
    } else {
      uhi = umid;
    }
  }
  return std::expm1(0.5 * (ulo + uhi));
}

double smooth_smooth_l1(const Density& r, const Density& n) {
  // log rho - log nu is monotone (exp/exp) or unimodal (any pair involving a
  // power density), so there are at most two crossings; locate the stationary
  // point of the log-ratio, then bisect each monotone piece.
  const double far = std::max(r.quantile(1.0 - 1e-14), n.quantile(1.0 - 1e-14));
  std::vector<double> knots{0.0};

  auto log_slope_knot = [&]() -> double {
    // Root of d/dt (log r - log n).
    const bool re = r.kind() == DensityKind::Exponential;
    const bool ne = n.kind() == DensityKind::Exponential;
    if (re && ne) return -1;  // log-ratio is linear
    if (re != ne) {
      const Density& e = re ? r : n;
      const Density& p = re ? n : r;
      return p.power_gamma() / e.exp_lambda() - p.power_alpha() / p.power_beta();
    }
    // power/power: gamma2*beta2/(alpha2+beta2 t) = gamma1*beta1/(alpha1+beta1 t)
    const double a1 = r.power_alpha(), b1 = r.power_beta(), g1 = r.power_gamma();
    const double a2 = n.power_alpha(), b2 = n.power_beta(), g2 = n.power_gamma();
    const double denom = g2 * b2 * b1 - g1 * b1 * b2;
    if (denom == 0) return -1;
    return (g1 * b1 * a2 - g2 * b2 * a1) / denom;
  }();

  if (log_slope_knot > 0 && log_slope_knot < far) knots.push_back(log_slope_knot);
  knots.push_back(far);

  std::vector<double> cuts{0.0};
  auto diff = [&](double t) { return r.value_at(t) - n.value_at(t); };
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if ((diff(knots[i]) <= 0) != (diff(knots[i + 1]) <= 0))
      cuts.push_back(bisect_crossing(r, n, knots[i], knots[i + 1]));
  }
  cuts.push_back(far);

  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += signed_piece(r, n, cuts[i], cuts[i + 1]);
  total += signed_piece(r, n, far, kInfinity);  // constant sign past the last crossing
  return total;
}

}  // namespace

double l1_distance(const Density& rho, const Density& nu) {
  if (rho.same_parameters(nu, 0.0)) return 0.0;
  const bool rs = is_step_kind(rho), ns = is_step_kind(nu);
  if (rs && ns) return step_step_l1(to_step(rho), to_step(nu));
  if (rs) return step_smooth_l1(to_step(rho), nu);
  if (ns) return step_smooth_l1(to_step(nu), rho);
  return smooth_smooth_l1(rho, nu);
}

StageWeights stage_weights(const Density& rho, std::size_t n) {
  StageWeights out;
  out.weights.resize(n);
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double next = rho.cdf(static_cast<double>(i + 1));
    out.weights[i] = next - prev;
    prev = next;
  }
  out.tail = 1.0 - prev;
  return out;
}

}  // namespace tauber
