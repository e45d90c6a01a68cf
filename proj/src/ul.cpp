#include "polya/ul.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polya/quadrature.hpp"
#include "polya/special_functions.hpp"

namespace polya {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr size_t kPsiHeadSize = 64;
constexpr int kCachedMoments = 12;

// E B^k for B ~ Beta(v, v beta + 1): the k-th moment ratio product. The
// geometric-coefficient density is that Beta scaled by alpha, which gives the
// closed forms used for tail bounds.
double beta_moment(double v, double vbeta1, int k) {
  double m = 1.0;
  for (int i = 0; i < k; ++i)
    m *= (v + static_cast<double>(i)) / (v + vbeta1 + static_cast<double>(i));
  return m;
}

// log of sum_{j >= J} of those Beta moments (the partial sums telescope).
double log_beta_moment_tail(double v, double vbeta, int64_t j) {
  return log_gamma(v + vbeta + 1.0) + log_gamma(v + static_cast<double>(j)) -
         std::log(vbeta) - log_gamma(v) - log_gamma(v + vbeta + static_cast<double>(j));
}

}  // namespace

// ---- construction -----------------------------------------------------------

ULSpec::ULSpec(double v, ULCoefficients coefficients)
    : v_(v), coeffs_(std::move(coefficients)) {
  if (!(v_ > 0.0)) throw ConfigError("shape parameter v must be > 0");
  if (auto* poly = std::get_if<PolynomialCoefficients>(&coeffs_)) {
    while (!poly->a.empty() && poly->a.back() == 0.0) poly->a.pop_back();
    if (poly->a.empty()) throw ConfigError("need at least one positive coefficient");
    for (const double a : poly->a)
      if (!(a >= 0.0)) throw ConfigError("coefficients must be >= 0");
    rho_ = kInf;
  } else {
    const auto& geo = std::get<GeometricCoefficients>(coeffs_);
    if (!(geo.alpha > 0.0) || !(geo.beta > 0.0))
      throw ConfigError("geometric coefficients need alpha > 0 and beta > 0");
    rho_ = geo.alpha;
  }
  const double norm = moment_integral(0);
  c_ = 1.0 / norm;
  moments_.resize(kCachedMoments + 1);
  moments_[0] = 1.0;
  for (int k = 1; k <= kCachedMoments; ++k) moments_[static_cast<size_t>(k)] = moment(k);
  build_cdf_table();
}

double ULSpec::coefficient(int k) const {
  if (k < 1) return 0.0;
  if (const auto* poly = std::get_if<PolynomialCoefficients>(&coeffs_)) {
    if (k > static_cast<int>(poly->a.size())) return 0.0;
    return poly->a[static_cast<size_t>(k - 1)];
  }
  const auto& geo = std::get<GeometricCoefficients>(coeffs_);
  return geo.beta * std::pow(geo.alpha, -static_cast<double>(k));
}

int ULSpec::max_polynomial_index() const {
  if (const auto* poly = std::get_if<PolynomialCoefficients>(&coeffs_))
    return static_cast<int>(poly->a.size());
  return 0;
}

double ULSpec::series(double x) const {
  if (x < 0.0 || x >= rho_) throw DomainError("series argument outside [0, rho)");
  if (const auto* poly = std::get_if<PolynomialCoefficients>(&coeffs_)) {
    double s = 0.0;
    for (size_t i = poly->a.size(); i-- > 0;) s = s * x + poly->a[i];
    return s * x;
  }
  const auto& geo = std::get<GeometricCoefficients>(coeffs_);
  return geo.beta * x / (geo.alpha - x);
}

double ULSpec::phi(double x) const {
  if (x < 0.0 || x >= rho_) throw DomainError("phi argument outside [0, rho)");
  if (const auto* poly = std::get_if<PolynomialCoefficients>(&coeffs_)) {
    double s = 0.0;
    for (size_t i = poly->a.size(); i-- > 0;)
      s = s * x + poly->a[i] / static_cast<double>(i + 1);
    return s * x;
  }
  const auto& geo = std::get<GeometricCoefficients>(coeffs_);
  return -geo.beta * std::log1p(-x / geo.alpha);
}

double ULSpec::density(double x) const {
  if (!(x > 0.0) || x >= rho_) return 0.0;
  return c_ * std::exp((v_ - 1.0) * std::log(x) - v_ * phi(x));
}

// ---- integrals ----------------------------------------------------------------

namespace {

// Log of the unnormalized integrand x^{v+k-1} exp(-v Phi(x)).
double log_integrand(const ULSpec& spec, int k, double x) {
  return (spec.v() + static_cast<double>(k) - 1.0) * std::log(x) - spec.v() * spec.phi(x);
}

// Upper integration limit for infinite rho: walk a doubling grid past the
// integrand's peak until it has fallen 70 e-folds below it.
double find_cutoff(const ULSpec& spec, int k) {
  double peak = -kInf;
  double x = 1e-3;
  for (int step = 0; step < 4000; ++step) {
    const double g = log_integrand(spec, k, x);
    peak = std::max(peak, g);
    if (g < peak - 70.0 && step > 0) return x;
    x *= 1.25;
  }
  throw QuadratureError("could not locate an integrable tail for the density");
}

}  // namespace

double ULSpec::moment_integral(int k) const {
  const double hi = std::isinf(rho_) ? find_cutoff(*this, k) : rho_;
  const double p = v_ + static_cast<double>(k);  // integrand power plus one
  if (p < 1.0) {
    // Substitute x = s^{1/p} to flatten the x^{p-1} endpoint singularity.
    const double inv_p = 1.0 / p;
    auto f = [&](double s) {
      const double x = std::pow(s, inv_p);
      return inv_p * std::exp(-v_ * phi(std::min(x, rho_ * (1.0 - 1e-16))));
    };
    return integrate_rel(f, 0.0, std::pow(hi, p), 1e-11).value;
  }
  auto f = [&](double x) { return std::exp(log_integrand(*this, k, x)); };
  return integrate_rel(f, 0.0, hi, 1e-11).value;
}

double ULSpec::moment(int k) const {
  if (k < 0) throw DomainError("moment order must be >= 0");
  if (k <= kCachedMoments && static_cast<size_t>(k) < moments_.size() &&
      moments_[static_cast<size_t>(k)] != 0.0)
    return moments_[static_cast<size_t>(k)];
  return c_ * moment_integral(k);
}

// ---- CDF table ------------------------------------------------------------------

namespace {

double hermite_eval(double x0, double x1, double f0, double f1, double d0, double d1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return f0 * (2 * t3 - 3 * t2 + 1) + h * d0 * (t3 - 2 * t2 + t) + f1 * (-2 * t3 + 3 * t2) +
         h * d1 * (t3 - t2);
}

}  // namespace

void ULSpec::build_cdf_table() {
  const double hi = std::isinf(rho_) ? find_cutoff(*this, 0) : rho_;

  // Initial nodes; cluster toward 0 when the density blows up there.
  const int initial = 64;
  std::vector<double> xs;
  xs.reserve(initial + 1);
  const double cluster = v_ < 1.0 ? 1.0 / std::min(1.0, v_) : 1.0;
  for (int i = 0; i <= initial; ++i)
    xs.push_back(hi * std::pow(static_cast<double>(i) / initial, std::min(cluster, 3.0)));

  auto segment_mass = [&](double lo_x, double hi_x) {
    if (lo_x == 0.0 && v_ < 1.0) {
      const double inv_v = 1.0 / v_;
      auto f = [&](double s) {
        const double x = std::pow(s, inv_v);
        return inv_v * std::exp(-v_ * phi(std::min(x, rho_ * (1.0 - 1e-16))));
      };
      return c_ * integrate(f, 0.0, std::pow(hi_x, v_), 1e-12).value;
    }
    return integrate([&](double x) { return density(x); }, lo_x, hi_x, 1e-12).value;
  };

  std::vector<double> fs(xs.size());
  fs[0] = 0.0;
  for (size_t i = 1; i < xs.size(); ++i) fs[i] = fs[i - 1] + segment_mass(xs[i - 1], xs[i]);

  // Refine until the monotone cubic reproduces the true CDF at each segment
  // midpoint to 1e-6.
  for (int pass = 0; pass < 24 && xs.size() < 2000; ++pass) {
    std::vector<double> nx, nf;
    bool split_any = false;
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
      nx.push_back(xs[i]);
      nf.push_back(fs[i]);
      const double mid = 0.5 * (xs[i] + xs[i + 1]);
      const double true_mid = fs[i] + segment_mass(xs[i], mid);
      const double interp =
          hermite_eval(xs[i], xs[i + 1], fs[i], fs[i + 1], density(xs[i]), density(xs[i + 1]), mid);
      if (std::abs(true_mid - interp) > 1e-6) {
        nx.push_back(mid);
        nf.push_back(true_mid);
        split_any = true;
      }
    }
    nx.push_back(xs.back());
    nf.push_back(fs.back());
    xs.swap(nx);
    fs.swap(nf);
    if (!split_any) break;
  }

  const double total = fs.back();
  if (!(total > 0.0) || std::abs(total - 1.0) > 1e-6)
    throw QuadratureError("CDF tabulation failed to accumulate unit mass");
  grid_x_ = std::move(xs);
  grid_f_.resize(grid_x_.size());
  grid_d_.resize(grid_x_.size());
  for (size_t i = 0; i < grid_x_.size(); ++i) {
    grid_f_[i] = fs[i] / total;
    grid_d_[i] = density(grid_x_[i]) / total;
  }
  grid_f_.back() = 1.0;
  // Limit slopes so each cubic segment stays monotone.
  for (size_t i = 0; i + 1 < grid_x_.size(); ++i) {
    const double h = grid_x_[i + 1] - grid_x_[i];
    const double delta = (grid_f_[i + 1] - grid_f_[i]) / h;
    if (delta <= 0.0) {
      grid_d_[i] = std::min(grid_d_[i], 0.0);
      grid_d_[i + 1] = 0.0;
      continue;
    }
    grid_d_[i] = std::min(grid_d_[i], 3.0 * delta);
    grid_d_[i + 1] = std::min(grid_d_[i + 1], 3.0 * delta);
  }
}

double ULSpec::upper_support() const { return grid_x_.back(); }

double ULSpec::cdf(double x) const {
  if (x <= grid_x_.front()) return 0.0;
  if (x >= grid_x_.back()) return 1.0;
  const auto it = std::upper_bound(grid_x_.begin(), grid_x_.end(), x);
  const size_t i = static_cast<size_t>(it - grid_x_.begin()) - 1;
  return hermite_eval(grid_x_[i], grid_x_[i + 1], grid_f_[i], grid_f_[i + 1], grid_d_[i],
                      grid_d_[i + 1], x);
}

double ULSpec::quantile(double u) const {
  if (!(u > 0.0) || !(u < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
  const auto it = std::lower_bound(grid_f_.begin(), grid_f_.end(), u);
  size_t i = static_cast<size_t>(it - grid_f_.begin());
  if (i > 0) --i;
  if (i + 1 >= grid_x_.size()) i = grid_x_.size() - 2;
  double lo = grid_x_[i], hi = grid_x_[i + 1];
  if (grid_f_[i + 1] - grid_f_[i] < 1e-15) return 0.5 * (lo + hi);
  for (int iter = 0; iter < 80 && hi - lo > 1e-13 * (1.0 + hi); ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fm = hermite_eval(grid_x_[i], grid_x_[i + 1], grid_f_[i], grid_f_[i + 1],
                                   grid_d_[i], grid_d_[i + 1], mid);
    if (fm < u)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double ULSpec::tail_probability(double x) const {
  if (x <= 0.0) return 1.0;
  double hi = std::isinf(rho_) ? find_cutoff(*this, 0) : rho_;
  if (x >= hi) {
    if (!std::isinf(rho_)) return 0.0;
    hi = 2.0 * x;
    while (log_integrand(*this, 0, hi) > log_integrand(*this, 0, x) - 70.0) hi *= 2.0;
  }
  if (density(x) == 0.0) return 0.0;
  return std::min(1.0, integrate_rel([&](double t) { return density(t); }, x, hi, 1e-9).value);
}

// ---- derived objects ---------------------------------------------------------------

ResidualReport moment_recursion_residual(const ULSpec& spec, int k, int truncation) {
  if (k < 0) throw DomainError("moment order must be >= 0");
  ResidualReport rep;
  const bool finite = std::holds_alternative<PolynomialCoefficients>(spec.coefficients());
  int cut = truncation;
  if (finite) {
    cut = spec.max_polynomial_index();  // exact: coefficients vanish beyond K
  } else if (cut <= 0) {
    cut = 40;
  }
  double sum = 0.0;
  for (int l = 1; l <= cut; ++l) sum += spec.coefficient(l) * spec.moment(k + l);
  const double vk = spec.v() / (spec.v() + static_cast<double>(k));
  if (!finite) {
    const auto& geo = std::get<GeometricCoefficients>(spec.coefficients());
    const double vbeta = spec.v() * geo.beta;
    // The sum beyond the cut collapses in closed form:
    // sum_{l>cut} a_l mu_{k+l} = beta alpha^k sum_{j>k+cut} m_B(j).
    const double tail = geo.beta * std::pow(geo.alpha, k) *
                        std::exp(log_beta_moment_tail(spec.v(), vbeta, k + cut + 1));
    sum += tail;
    rep.tail_bound = vk * tail;
  }
  rep.residual = spec.moment(k) - vk * sum;
  return rep;
}

PsiDistribution psi_from_ul(const ULSpec& spec) {
  PsiDistribution psi;
  double mass = 0.0;
  if (const auto* poly = std::get_if<PolynomialCoefficients>(&spec.coefficients())) {
    psi.finite_ = true;
    for (int k = 1; k <= static_cast<int>(poly->a.size()); ++k) {
      const double a = poly->a[static_cast<size_t>(k - 1)];
      if (a == 0.0) continue;
      const double p = a * spec.moment(k);
      psi.ks_.push_back(k);
      psi.probs_.push_back(p);
      mass += p;
      psi.cum_.push_back(mass);
    }
  } else {
    const auto& geo = std::get<GeometricCoefficients>(spec.coefficients());
    psi.finite_ = false;
    psi.v_ = spec.v();
    psi.vbeta_ = spec.v() * geo.beta;
    for (int k = 1; k <= static_cast<int>(kPsiHeadSize); ++k) {
      // a_k mu_k = beta E B^k exactly; alpha cancels.
      const double p = geo.beta * beta_moment(psi.v_, psi.vbeta_ + 1.0, k);
      psi.ks_.push_back(k);
      psi.probs_.push_back(p);
      mass += p;
      psi.cum_.push_back(mass);
    }
    mass += std::exp(psi.log_tail(static_cast<int>(kPsiHeadSize) + 1));
  }
  if (std::abs(mass - 1.0) > 1e-8)
    throw NormalizationError("weight distribution does not sum to 1");
  return psi;
}

PsiDistribution make_finite_psi(std::vector<std::pair<int, double>> atoms) {
  if (atoms.empty()) throw ConfigError("weight distribution needs at least one atom");
  std::sort(atoms.begin(), atoms.end());
  PsiDistribution psi;
  psi.finite_ = true;
  double mass = 0.0;
  for (const auto& [k, p] : atoms) {
    if (k < 1) throw ConfigError("weight support must be positive integers");
    if (!(p > 0.0)) throw ConfigError("weight probabilities must be > 0");
    if (!psi.ks_.empty() && psi.ks_.back() == k)
      throw ConfigError("duplicate weight support point");
    psi.ks_.push_back(k);
    psi.probs_.push_back(p);
    mass += p;
    psi.cum_.push_back(mass);
  }
  if (std::abs(mass - 1.0) > 1e-12)
    throw NormalizationError("weight probabilities must sum to 1");
  psi.cum_.back() = 1.0;
  return psi;
}

double PsiDistribution::pmf(int64_t k) const {
  if (k < 1) return 0.0;
  const auto it = std::lower_bound(ks_.begin(), ks_.end(), static_cast<int>(std::min<int64_t>(
                                                               k, 1 << 30)));
  if (it != ks_.end() && *it == k) return probs_[static_cast<size_t>(it - ks_.begin())];
  if (finite_) return 0.0;
  // log psi_k = log(v beta) - log v + log B(v+k, vbeta+1) - log B(v, vbeta+1)
  const double lk = std::log(vbeta_ / v_) + log_gamma(v_ + static_cast<double>(k)) +
                    log_gamma(v_ + vbeta_ + 1.0) - log_gamma(v_) -
                    log_gamma(v_ + vbeta_ + 1.0 + static_cast<double>(k));
  return std::exp(lk);
}

double PsiDistribution::log_tail(int64_t k) const {
  if (finite_) throw DomainError("tail requested for a finite weight distribution");
  if (k <= 1) return 0.0;
  // psi_k = beta * E B^k with B ~ Beta(v, v beta + 1), and beta = vbeta_/v_.
  return std::log(vbeta_ / v_) + log_beta_moment_tail(v_, vbeta_, k);
}

int64_t PsiDistribution::sample(Rng& rng) const {
  const double u = rng.uniform();
  if (u <= cum_.back()) {
    const auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
    return ks_[static_cast<size_t>(it - cum_.begin())];
  }
  if (finite_) return ks_.back();
  // Invert the analytic tail, conditioned on landing beyond the head; the
  // analytic tail at the join is rescaled onto the head's residual mass so the
  // two pieces meet continuously.
  const int64_t head_end = ks_.back();
  const double residual = 1.0 - cum_.back();
  const double log_join = log_tail(head_end + 1);
  const double target = log_join + std::log1p(-(u - cum_.back()) / residual);
  int64_t lo = head_end;  // tail(lo+1) > target by construction
  int64_t hi = 2 * lo;
  while (log_tail(hi + 1) > target) {
    lo = hi;
    hi *= 2;
    if (hi > (int64_t{1} << 50)) return hi;  // beyond any representable mass
  }
  while (hi - lo > 1) {
    const int64_t mid = lo + (hi - lo) / 2;
    if (log_tail(mid + 1) <= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::vector<std::pair<int, double>> PsiDistribution::atoms() const {
  if (!finite_) throw TooLargeError("weight distribution has infinite support");
  std::vector<std::pair<int, double>> out;
  out.reserve(ks_.size());
  for (size_t i = 0; i < ks_.size(); ++i) out.emplace_back(ks_[i], probs_[i]);
  return out;
}

ULSpec scale_ul(const ULSpec& spec, double theta) {
  if (!(theta > 0.0)) throw DomainError("scale factor must be > 0");
  if (const auto* poly = std::get_if<PolynomialCoefficients>(&spec.coefficients())) {
    PolynomialCoefficients scaled;
    scaled.a.resize(poly->a.size());
    double f = 1.0;
    for (size_t i = 0; i < poly->a.size(); ++i) {
      f /= theta;
      scaled.a[i] = poly->a[i] * f;
    }
    return ULSpec(spec.v(), std::move(scaled));
  }
  const auto& geo = std::get<GeometricCoefficients>(spec.coefficients());
  return ULSpec(spec.v(), GeometricCoefficients{theta * geo.alpha, geo.beta});
}

std::vector<double> sample_ul(const ULSpec& spec, int64_t n, Rng& rng) {
  if (n < 1) throw ConfigError("sample count must be >= 1");
  std::vector<double> out(static_cast<size_t>(n));
  for (auto& x : out) x = spec.quantile(rng.uniform());
  return out;
}

ULSpec ul_from_urn_limit(int64_t b, int64_t w, const InterArrival& pi,
                         const std::vector<MomentEstimate>& estimates) {
  if (b < 1 || w < 1) throw ConfigError("need b >= 1 and w >= 1");
  if (!pi.has_finite_support())
    throw MissingMomentError("construction needs a finite-support gap law");
  const auto pi_atoms = pi.atoms();
  std::vector<double> raw_by_k;
  for (const auto& est : estimates) {
    if (est.kind != MomentKind::raw) continue;
    if (est.k > static_cast<int>(raw_by_k.size())) raw_by_k.resize(static_cast<size_t>(est.k), 0.0);
    raw_by_k[static_cast<size_t>(est.k - 1)] = est.value;
  }
  PolynomialCoefficients coeffs;
  for (const auto& [j, p] : pi_atoms) {
    const int k = static_cast<int>(j) + 1;
    if (k > static_cast<int>(raw_by_k.size()) || !(raw_by_k[static_cast<size_t>(k - 1)] > 0.0))
      throw MissingMomentError("no usable moment estimate for a required order");
    if (k > static_cast<int>(coeffs.a.size())) coeffs.a.resize(static_cast<size_t>(k), 0.0);
    coeffs.a[static_cast<size_t>(k - 1)] = p / raw_by_k[static_cast<size_t>(k - 1)];
  }
  return ULSpec(static_cast<double>(b + w - 1), std::move(coeffs));
}

double moment_upper_bound(const ULSpec& spec, int m) {
  if (m < 0) throw DomainError("moment order must be >= 0");
  const double v = spec.v();
  const double c = spec.normalizing_constant();
  double best = kInf;
  const int l_max = std::holds_alternative<PolynomialCoefficients>(spec.coefficients())
                        ? spec.max_polynomial_index()
                        : 200;
  for (int l = 1; l <= l_max; ++l) {
    const double a = spec.coefficient(l);
    if (!(a > 0.0)) continue;
    const double ld = static_cast<double>(l);
    const double s = (v + static_cast<double>(m)) / ld;
    const double log_term = std::log(c / ld) - s * std::log(v * a / ld) + log_gamma(s);
    best = std::min(best, std::exp(log_term));
  }
  return best;
}

MillsReport mills_check(const ULSpec& spec, double alpha, int grid_points) {
  if (!(alpha > 0.0) || alpha >= spec.rho())
    throw DomainError("threshold must lie inside the support");
  if (grid_points < 1) throw DomainError("need at least one grid point");
  MillsReport rep;
  const double u_alpha = spec.density(alpha);
  if (!(u_alpha > 0.0)) throw DomainError("density vanishes at the threshold");
  rep.c_alpha = spec.tail_probability(alpha) / u_alpha;
  const double f_lo = spec.cdf(alpha);
  const double f_hi = 1.0 - 1e-9;
  rep.max_ratio = 0.0;
  for (int i = 1; i <= grid_points; ++i) {
    const double u = f_lo + (f_hi - f_lo) * static_cast<double>(i) / (grid_points + 1);
    const double x = spec.quantile(u);
    if (x <= alpha) continue;
    const double dens = spec.density(x);
    if (!(dens > 0.0)) continue;
    const double ratio = spec.tail_probability(x) / (rep.c_alpha * dens);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  rep.holds = rep.max_ratio <= 1.0 + 1e-6;
  return rep;
}

}  // namespace polya
