#include "gelfand/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gelfand {

namespace {

double poly_eval(const Vector& c, double s) {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * s + c[k];
  return v;
}

Vector poly_derivative(const Vector& c) {
  if (c.size() <= 1) return {0.0};
  Vector d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * static_cast<double>(k);
  return d;
}

Vector poly_primitive(const Vector& c) {
  Vector p(c.size() + 1, 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) p[k + 1] = c[k] / static_cast<double>(k + 1);
  return p;
}

}  // namespace

Nonlinearity Nonlinearity::exponential() {
  Nonlinearity f;
  f.kind_ = Kind::Exp;
  f.spec_ = "exp";
  f.classify();
  return f;
}

Nonlinearity Nonlinearity::power(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("Nonlinearity::power: exponent must be >= 1");
  Nonlinearity f;
  f.kind_ = Kind::Power;
  f.p_ = p;
  std::ostringstream os;
  os << "power:" << p;
  f.spec_ = os.str();
  f.classify();
  return f;
}

Nonlinearity Nonlinearity::affine() {
  Nonlinearity f;
  f.kind_ = Kind::Affine;
  f.spec_ = "affine";
  f.classify();
  return f;
}

Nonlinearity Nonlinearity::allen_cahn() {
  Nonlinearity f;
  f.kind_ = Kind::AllenCahn;
  f.spec_ = "allen-cahn";
  f.classify();
  return f;
}

Nonlinearity Nonlinearity::polynomial(Vector coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
  if (coeffs.empty()) throw std::invalid_argument("Nonlinearity::polynomial: empty coefficients");
  Nonlinearity f;
  f.kind_ = Kind::Polynomial;
  f.coeffs_ = std::move(coeffs);
  std::ostringstream os;
  os << "poly:";
  for (std::size_t k = 0; k < f.coeffs_.size(); ++k) os << (k ? "," : "") << f.coeffs_[k];
  f.spec_ = os.str();
  f.classify();
  return f;
}

Nonlinearity Nonlinearity::piecewise(std::vector<Segment> segments) {
  if (segments.empty()) throw std::invalid_argument("Nonlinearity::piecewise: no segments");
  if (segments.front().knot != 0.0)
    throw std::invalid_argument("Nonlinearity::piecewise: first knot must be 0");
  for (std::size_t k = 1; k < segments.size(); ++k) {
    if (!(segments[k].knot > segments[k - 1].knot))
      throw std::invalid_argument("Nonlinearity::piecewise: knots must be ascending");
    const double s = segments[k].knot;
    const double v0 = poly_eval(segments[k - 1].coefficients, s);
    const double v1 = poly_eval(segments[k].coefficients, s);
    const double d0 = poly_eval(poly_derivative(segments[k - 1].coefficients), s);
    const double d1 = poly_eval(poly_derivative(segments[k].coefficients), s);
    if (std::abs(v0 - v1) > 1e-12 * std::max(1.0, std::abs(v0)) ||
        std::abs(d0 - d1) > 1e-12 * std::max(1.0, std::abs(d0)))
      throw std::invalid_argument("Nonlinearity::piecewise: segments are not C^1 at knot " +
                                  std::to_string(s));
  }
  Nonlinearity f;
  f.kind_ = Kind::PiecewiseC1;
  f.segments_ = std::move(segments);
  f.spec_ = "piecewise";
  f.classify();
  return f;
}

Nonlinearity Nonlinearity::log_sublinear() {
  Nonlinearity f;
  f.kind_ = Kind::LogSublinear;
  f.spec_ = "log1p";
  f.classify();
  return f;
}

Nonlinearity Nonlinearity::truncated(double lo, double hi) const {
  if (!(lo < hi)) throw std::invalid_argument("Nonlinearity::truncated: need lo < hi");
  Nonlinearity f;
  f.kind_ = Kind::Truncated;
  f.trunc_lo_ = lo;
  f.trunc_hi_ = hi;
  f.inner_ = std::make_shared<Nonlinearity>(*this);
  f.spec_ = spec_ + "|trunc";
  f.classify();
  return f;
}

double Nonlinearity::raw_value(double s) const {
  switch (kind_) {
    case Kind::Exp: return std::exp(s);
    case Kind::Power: return std::pow(1.0 + s, p_);
    case Kind::Affine: return 1.0 + s;
    case Kind::AllenCahn: return s - s * s * s;
    case Kind::Polynomial: return poly_eval(coeffs_, s);
    case Kind::LogSublinear: return 1.0 + std::log1p(s);
    case Kind::PiecewiseC1: {
      std::size_t k = segments_.size() - 1;
      while (k > 0 && s < segments_[k].knot) --k;
      return poly_eval(segments_[k].coefficients, s);
    }
    case Kind::Truncated: return inner_->value_extended(std::clamp(s, trunc_lo_, trunc_hi_));
  }
  return 0.0;
}

double Nonlinearity::raw_derivative(double s) const {
  switch (kind_) {
    case Kind::Exp: return std::exp(s);
    case Kind::Power: return p_ * std::pow(1.0 + s, p_ - 1.0);
    case Kind::Affine: return 1.0;
    case Kind::AllenCahn: return 1.0 - 3.0 * s * s;
    case Kind::Polynomial: return poly_eval(poly_derivative(coeffs_), s);
    case Kind::LogSublinear: return 1.0 / (1.0 + s);
    case Kind::PiecewiseC1: {
      std::size_t k = segments_.size() - 1;
      while (k > 0 && s < segments_[k].knot) --k;
      return poly_eval(poly_derivative(segments_[k].coefficients), s);
    }
    case Kind::Truncated:
      return (s < trunc_lo_ || s > trunc_hi_) ? 0.0 : inner_->derivative_extended(s);
  }
  return 0.0;
}

double Nonlinearity::raw_second(double s) const {
  switch (kind_) {
    case Kind::Exp: return std::exp(s);
    case Kind::Power: return p_ * (p_ - 1.0) * std::pow(1.0 + s, p_ - 2.0);
    case Kind::Affine: return 0.0;
    case Kind::AllenCahn: return -6.0 * s;
    case Kind::Polynomial: return poly_eval(poly_derivative(poly_derivative(coeffs_)), s);
    case Kind::LogSublinear: return -1.0 / ((1.0 + s) * (1.0 + s));
    case Kind::PiecewiseC1: {
      std::size_t k = segments_.size() - 1;
      while (k > 0 && s < segments_[k].knot) --k;
      return poly_eval(poly_derivative(poly_derivative(segments_[k].coefficients)), s);
    }
    case Kind::Truncated:
      return (s < trunc_lo_ || s > trunc_hi_) ? 0.0 : inner_->second_derivative_extended(s);
  }
  return 0.0;
}

double Nonlinearity::value(double s) const {
  if (s < 0.0 && admissible_)
    throw std::invalid_argument("Nonlinearity: negative argument for an admissible kind");
  return raw_value(s);
}

double Nonlinearity::derivative(double s) const {
  if (s < 0.0 && admissible_)
    throw std::invalid_argument("Nonlinearity: negative argument for an admissible kind");
  return raw_derivative(s);
}

std::pair<double, double> Nonlinearity::evaluate(double s) const {
  return {value(s), derivative(s)};
}

double Nonlinearity::second_derivative(double s) const {
  if (s < 0.0 && admissible_)
    throw std::invalid_argument("Nonlinearity: negative argument for an admissible kind");
  return raw_second(s);
}

double Nonlinearity::primitive(double s) const {
  switch (kind_) {
    case Kind::Exp: return std::exp(s) - 1.0;
    case Kind::Power: return (std::pow(1.0 + s, p_ + 1.0) - 1.0) / (p_ + 1.0);
    case Kind::Affine: return s + 0.5 * s * s;
    case Kind::AllenCahn: return 0.5 * s * s - 0.25 * s * s * s * s;
    case Kind::Polynomial: return poly_eval(poly_primitive(coeffs_), s);
    case Kind::LogSublinear: return (1.0 + s) * std::log1p(s);
    case Kind::PiecewiseC1: {
      // accumulate exact segment integrals up to the hosting segment
      double acc = 0.0;
      std::size_t k = 0;
      while (k + 1 < segments_.size() && s >= segments_[k + 1].knot) {
        const Vector prim = poly_primitive(segments_[k].coefficients);
        acc += poly_eval(prim, segments_[k + 1].knot) - poly_eval(prim, segments_[k].knot);
        ++k;
      }
      const Vector prim = poly_primitive(segments_[k].coefficients);
      return acc + poly_eval(prim, std::max(s, segments_[k].knot)) -
             poly_eval(prim, segments_[k].knot);
    }
    case Kind::Truncated: {
      if (s <= trunc_lo_) return inner_->value_extended(trunc_lo_) * s;
      double acc = inner_->value_extended(trunc_lo_) * trunc_lo_;
      const double mid_hi = std::min(s, trunc_hi_);
      acc += inner_->primitive(mid_hi) - inner_->primitive(trunc_lo_);
      if (s > trunc_hi_) acc += inner_->value_extended(trunc_hi_) * (s - trunc_hi_);
      return acc;
    }
  }
  return 0.0;
}

double Nonlinearity::value_extended(double s) const {
  if (s >= 0.0 || kind_ == Kind::AllenCahn || kind_ == Kind::Truncated) return raw_value(s);
  return raw_value(0.0) + raw_derivative(0.0) * s;
}

double Nonlinearity::derivative_extended(double s) const {
  if (s >= 0.0 || kind_ == Kind::AllenCahn || kind_ == Kind::Truncated) return raw_derivative(s);
  return raw_derivative(0.0);
}

double Nonlinearity::second_derivative_extended(double s) const {
  if (s >= 0.0 || kind_ == Kind::AllenCahn || kind_ == Kind::Truncated) return raw_second(s);
  return 0.0;
}

void Nonlinearity::classify() {
  switch (kind_) {
    case Kind::Exp:
      convexity_ = Convexity::StrictlyConvex;
      superlinear_ = true;
      admissible_ = true;
      return;
    case Kind::Power:
      convexity_ = p_ > 1.0 ? Convexity::StrictlyConvex : Convexity::Convex;
      superlinear_ = p_ > 1.0;
      admissible_ = true;
      return;
    case Kind::Affine:
      convexity_ = Convexity::Convex;
      superlinear_ = false;
      admissible_ = true;
      return;
    case Kind::AllenCahn:
      convexity_ = Convexity::NonConvex;
      superlinear_ = false;
      admissible_ = false;  // f(0) = 0
      return;
    case Kind::LogSublinear:
      convexity_ = Convexity::NonConvex;
      superlinear_ = false;
      admissible_ = true;
      return;
    case Kind::Truncated:
      convexity_ = Convexity::NonConvex;
      superlinear_ = false;
      admissible_ = false;  // provenance: search aid, not a Gelfand term
      return;
    case Kind::Polynomial:
    case Kind::PiecewiseC1:
      break;
  }

  // sampled classification for polynomial / piecewise kinds
  if (!(raw_value(0.0) > 0.0)) {
    admissible_ = false;
  } else {
    admissible_ = true;
    for (int i = 0; i <= 2000 && admissible_; ++i) {
      const double s = 0.1 * i;
      if (raw_derivative(s) < -1e-12) admissible_ = false;
    }
  }

  double min_second = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 2000; ++i) min_second = std::min(min_second, raw_second(0.1 * i));
  if (min_second > 1e-12)
    convexity_ = Convexity::StrictlyConvex;
  else if (min_second >= -1e-12)
    convexity_ = Convexity::Convex;
  else
    convexity_ = Convexity::NonConvex;

  const Vector& lead =
      kind_ == Kind::Polynomial ? coeffs_ : segments_.back().coefficients;
  superlinear_ = lead.size() >= 3 && lead.back() > 0.0;
}

namespace {

// scanned maximum of g(s) = s/f(s): (value, argument)
struct GMax {
  double value;
  double arg;
};

}  // namespace

static GMax scan_g_max(const Nonlinearity& f) {
  auto g = [&f](double s) { return s / f.value(s); };
  const int n_pts = 6000;
  double best_s = 1.0, best_g = g(1.0);
  for (int i = 0; i <= n_pts; ++i) {
    const double s = std::pow(10.0, -8.0 + 16.0 * i / n_pts);
    const double v = g(s);
    if (v > best_g) {
      best_g = v;
      best_s = s;
    }
  }
  double a = best_s / 1.01, b = best_s * 1.01;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a); f2 = g(x2);
    } else {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a); f1 = g(x1);
    }
    if (b - a < 1e-13 * std::max(1.0, a)) break;
  }
  const double mid = 0.5 * (a + b);
  if (g(mid) >= best_g) return {g(mid), mid};
  return {best_g, best_s};
}

double Nonlinearity::sup_g() const {
  if (!admissible_) throw std::invalid_argument("sup_g: nonlinearity does not satisfy (H)(a)-(b)");
  switch (kind_) {
    case Kind::Exp: return 1.0 / M_E;
    case Kind::Power:
      if (p_ == 1.0) return 1.0;
      return std::pow(p_ - 1.0, p_ - 1.0) / std::pow(p_, p_);
    case Kind::Affine: return 1.0;
    case Kind::LogSublinear: return std::numeric_limits<double>::infinity();
    default: break;
  }
  return scan_g_max(*this).value;
}

bool Nonlinearity::sup_g_attained() const {
  if (!admissible_) throw std::invalid_argument("sup_g_attained: (H)(a)-(b) required");
  switch (kind_) {
    case Kind::Exp: return true;
    case Kind::Power: return p_ > 1.0;
    case Kind::Affine: return false;
    case Kind::LogSublinear: return false;
    default: break;
  }
  return scan_g_max(*this).arg < 1e7;  // interior of the scan range
}

Nonlinearity parse_nonlinearity(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);

  if (head == "exp") return Nonlinearity::exponential();
  if (head == "affine") return Nonlinearity::affine();
  if (head == "allen-cahn") return Nonlinearity::allen_cahn();
  if (head == "log1p") return Nonlinearity::log_sublinear();
  if (head == "power") {
    if (args.empty()) throw std::invalid_argument("parse_nonlinearity: power needs an exponent");
    return Nonlinearity::power(std::stod(args));
  }
  if (head == "poly") {
    Vector coeffs;
    std::stringstream ss(args);
    std::string tok;
    while (std::getline(ss, tok, ',')) coeffs.push_back(std::stod(tok));
    return Nonlinearity::polynomial(std::move(coeffs));
  }
  if (head == "piecewise") {
    if (args.empty()) throw std::invalid_argument("parse_nonlinearity: piecewise needs a file");
    return parse_piecewise_file(args);
  }
  throw std::invalid_argument("parse_nonlinearity: unknown spec '" + spec + "'");
}

Nonlinearity parse_piecewise_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("parse_piecewise_file: cannot open '" + path + "'");
  std::vector<Nonlinearity::Segment> segments;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag != "segment")
      throw std::invalid_argument("parse_piecewise_file: line " + std::to_string(line_no) +
                                  ": expected 'segment'");
    Nonlinearity::Segment seg;
    if (!(ls >> seg.knot))
      throw std::invalid_argument("parse_piecewise_file: line " + std::to_string(line_no) +
                                  ": missing knot");
    double c;
    while (ls >> c) seg.coefficients.push_back(c);
    if (seg.coefficients.empty())
      throw std::invalid_argument("parse_piecewise_file: line " + std::to_string(line_no) +
                                  ": missing coefficients");
    segments.push_back(std::move(seg));
  }
  return Nonlinearity::piecewise(std::move(segments));
}

}  // namespace gelfand
