#include "bt/series.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <sstream>

#include "bt/error.hpp"

namespace bt {

namespace {

int initial_precision() {
  if (const char* env = std::getenv("BT_PRECISION")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 32;
}

std::atomic<int> g_precision{initial_precision()};
thread_local int t_override = -1;

}  // namespace

int sat_add(int a, int b) {
  if (a >= kExact || b >= kExact) return kExact;
  long s = static_cast<long>(a) + b;
  if (s >= kExact) return kExact;
  if (s < -kExact) return -kExact;
  return static_cast<int>(s);
}

int working_precision() { return t_override > 0 ? t_override : g_precision.load(); }

void set_working_precision(int n) {
  if (n <= 0) raise(Errc::InvalidArgument, "set_working_precision", "precision must be positive");
  g_precision.store(n);
}

PrecisionScope::PrecisionScope(int n) : saved_(t_override) { t_override = n; }
PrecisionScope::~PrecisionScope() { t_override = saved_; }

Series::Series(const GQ& c) {
  if (!c.is_zero()) c_.push_back(c);
}

Series Series::monomial(const GQ& c, int e) {
  Series s;
  if (!c.is_zero()) {
    s.val_ = e;
    s.c_.push_back(c);
  }
  return s;
}

Series Series::from_coeffs(int val, std::vector<GQ> coeffs, int prec) {
  Series s;
  s.val_ = val;
  s.c_ = std::move(coeffs);
  s.prec_ = prec;
  s.normalize();
  return s;
}

Series Series::zero_at(int prec) {
  Series s;
  s.prec_ = prec;
  return s;
}

void Series::normalize() {
  if (prec_ < kExact) {
    long room = static_cast<long>(prec_) - val_;
    if (room <= 0)
      c_.clear();
    else if (static_cast<long>(c_.size()) > room)
      c_.resize(static_cast<size_t>(room));
  }
  size_t lead = 0;
  while (lead < c_.size() && c_[lead].is_zero()) ++lead;
  if (lead == c_.size()) {
    c_.clear();
    val_ = 0;
    return;
  }
  if (lead) {
    c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
    val_ += static_cast<int>(lead);
  }
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

int Series::valuation() const {
  if (c_.empty()) raise(Errc::ZeroAtPrecision, "Series::valuation", is_exact() ? "exact zero" : "no nonzero coefficient below precision " + std::to_string(prec_));
  return val_;
}

int Series::top() const {
  if (c_.empty()) raise(Errc::ZeroAtPrecision, "Series::top");
  return val_ + static_cast<int>(c_.size()) - 1;
}

GQ Series::coeff(int e) const {
  long i = static_cast<long>(e) - val_;
  if (i < 0 || i >= static_cast<long>(c_.size())) return GQ();
  return c_[static_cast<size_t>(i)];
}

GQ Series::leading() const {
  if (c_.empty()) raise(Errc::ZeroAtPrecision, "Series::leading");
  return c_.front();
}

Series Series::truncated(int prec) const {
  Series s = *this;
  s.prec_ = std::min(prec_, prec);
  s.normalize();
  return s;
}

Series Series::polynomial_part(int below) const {
  Series s = *this;
  s.prec_ = below;
  s.normalize();
  s.prec_ = kExact;
  return s;
}

Series Series::shifted(int k) const {
  Series s = *this;
  if (!s.c_.empty()) s.val_ += k;
  s.prec_ = sat_add(prec_, k);
  return s;
}

Series Series::theta() const {
  Series s = *this;
  for (size_t i = 0; i < s.c_.size(); ++i) s.c_[i] *= GQ(static_cast<long>(val_ + static_cast<int>(i)));
  s.normalize();
  return s;
}

Series Series::derivative() const { return theta().shifted(-1); }

Series Series::scaled(const GQ& a) const {
  if (a.is_zero()) return is_exact() ? Series() : zero_at(sat_add(prec_, 0));
  Series s = *this;
  for (auto& x : s.c_) x *= a;
  return s;
}

Series Series::inv() const {
  if (is_exact_zero()) raise(Errc::NonUnit, "Series::inv", "inverse of exact zero");
  if (c_.empty())
    raise(Errc::PrecisionExhausted, "Series::inv", "operand is zero at precision " + std::to_string(prec_));
  const int v = val_;
  const GQ c0inv = c_.front().inv();
  if (is_exact() && c_.size() == 1) return monomial(c0inv, -v);
  const int r = is_exact() ? working_precision() : prec_ - v;
  std::vector<GQ> d(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) d[i] = c_[i] * c0inv;
  std::vector<GQ> w(static_cast<size_t>(r));
  if (r > 0) w[0] = GQ(1);
  for (int k = 1; k < r; ++k) {
    GQ acc;
    const int top = std::min<int>(k, static_cast<int>(d.size()) - 1);
    for (int i = 1; i <= top; ++i) {
      if (d[static_cast<size_t>(i)].is_zero()) continue;
      acc += d[static_cast<size_t>(i)] * w[static_cast<size_t>(k - i)];
    }
    w[static_cast<size_t>(k)] = -acc;
  }
  for (auto& x : w) x *= c0inv;
  return from_coeffs(-v, std::move(w), -v + r);
}

GQ Series::eval(const GQ& x) const {
  if (!is_exact()) raise(Errc::PrecisionExhausted, "Series::eval", "evaluation needs an exact Laurent polynomial");
  GQ acc;
  for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  if (val_ != 0 && !c_.empty()) acc *= pow(x, val_);
  return acc;
}

Series Series::reflected() const {
  if (!is_exact()) raise(Errc::PrecisionExhausted, "Series::reflected", "needs an exact Laurent polynomial");
  if (c_.empty()) return Series();
  std::vector<GQ> r(c_.rbegin(), c_.rend());
  return from_coeffs(-top(), std::move(r));
}

Tri Series::equals(const Series& o) const {
  Series d = *this - o;
  if (!d.c_.empty()) return Tri::False;
  return d.is_exact() ? Tri::True : Tri::Unknown;
}

bool Series::equals_exactly(const Series& o) const {
  return prec_ == o.prec_ && c_ == o.c_ && (c_.empty() || val_ == o.val_);
}

Series& Series::operator+=(const Series& o) {
  const int prec = std::min(prec_, o.prec_);
  if (o.c_.empty()) {
    prec_ = prec;
    normalize();
    return *this;
  }
  if (c_.empty()) {
    Series r = o;
    r.prec_ = prec;
    r.normalize();
    return *this = r;
  }
  const int lo = std::min(val_, o.val_);
  const int hi = std::max(top(), o.top());
  std::vector<GQ> out(static_cast<size_t>(hi - lo + 1));
  for (size_t i = 0; i < c_.size(); ++i) out[static_cast<size_t>(val_ - lo) + i] = c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) out[static_cast<size_t>(o.val_ - lo) + i] += o.c_[i];
  val_ = lo;
  c_ = std::move(out);
  prec_ = prec;
  normalize();
  return *this;
}

Series& Series::operator-=(const Series& o) { return *this += -o; }

Series& Series::operator*=(const Series& o) {
  if (is_exact_zero() || o.is_exact_zero()) return *this = Series();
  const int prec = std::min(sat_add(prec_, o.lower_bound()), sat_add(o.prec_, lower_bound()));
  if (c_.empty() || o.c_.empty()) return *this = zero_at(prec);
  const int v = val_ + o.val_;
  long room = static_cast<long>(c_.size() + o.c_.size() - 1);
  if (prec < kExact) room = std::min<long>(room, static_cast<long>(prec) - v);
  if (room <= 0) return *this = zero_at(prec);
  std::vector<GQ> out(static_cast<size_t>(room));
  for (size_t i = 0; i < c_.size() && static_cast<long>(i) < room; ++i) {
    if (c_[i].is_zero()) continue;
    for (size_t j = 0; j < o.c_.size() && static_cast<long>(i + j) < room; ++j) {
      if (o.c_[j].is_zero()) continue;
      out[i + j] += c_[i] * o.c_[j];
    }
  }
  val_ = v;
  c_ = std::move(out);
  prec_ = prec;
  normalize();
  return *this;
}

Series operator+(const Series& a, const Series& b) {
  Series r = a;
  r += b;
  return r;
}
Series operator-(const Series& a, const Series& b) {
  Series r = a;
  r -= b;
  return r;
}
Series operator-(const Series& a) { return a.scaled(GQ(-1)).truncated(a.prec()); }
Series operator*(const Series& a, const Series& b) {
  Series r = a;
  r *= b;
  return r;
}
Series operator*(const GQ& a, const Series& b) { return b.scaled(a); }

Series geometric(const GQ& a, int prec) {
  if (a.is_zero()) return Series(GQ(1));
  std::vector<GQ> c(static_cast<size_t>(std::max(prec, 0)));
  GQ p(1);
  for (auto& x : c) {
    x = p;
    p *= a;
  }
  return Series::from_coeffs(0, std::move(c), prec);
}

std::string Series::str() const {
  std::ostringstream os;
  if (c_.empty()) {
    os << "0";
  } else {
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i].is_zero()) continue;
      if (!first) os << " + ";
      first = false;
      int e = val_ + static_cast<int>(i);
      os << "(" << c_[i] << ")";
      if (e != 0) os << "z^" << e;
    }
  }
  if (!is_exact()) os << " + O(z^" << prec_ << ")";
  return os.str();
}

}  // namespace bt
