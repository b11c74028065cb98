#include "pf/phase_space.hpp"

#include "pf/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pf {

namespace {

double jb(double s) { return std::sqrt(1.0 + s); }  // <.> of |.|^2

double jb_norm(const Vec& v) { return std::sqrt(1.0 + v.squaredNorm()); }

}  // namespace

PhasePoint::PhasePoint(Vec x_, Vec xi_) : x(std::move(x_)), xi(std::move(xi_)) {
  if (x.size() != xi.size() || x.size() < 1)
    throw std::invalid_argument("PhasePoint: x and xi must have equal size >= 1");
}

PhasePoint::PhasePoint(double x_, double xi_) {
  x = Vec::Constant(1, x_);
  xi = Vec::Constant(1, xi_);
}

bool PhasePoint::finite() const { return x.allFinite() && xi.allFinite(); }

Vec PhasePoint::flat() const {
  Vec v(2 * dim());
  v << x, xi;
  return v;
}

PhasePoint PhasePoint::from_flat(const Vec& v) {
  const int n = static_cast<int>(v.size()) / 2;
  return PhasePoint(v.head(n), v.tail(n));
}

PhasePoint PhasePoint::operator+(const PhasePoint& o) const {
  return PhasePoint(x + o.x, xi + o.xi);
}
PhasePoint PhasePoint::operator-(const PhasePoint& o) const {
  return PhasePoint(x - o.x, xi - o.xi);
}
PhasePoint PhasePoint::operator*(double c) const { return PhasePoint(x * c, xi * c); }

double symplectic_form(const PhasePoint& X, const PhasePoint& Y) {
  if (X.dim() != Y.dim()) throw std::invalid_argument("symplectic_form: dimension mismatch");
  return X.xi.dot(Y.x) - Y.xi.dot(X.x);
}

Mat symplectic_matrix(int n) {
  Mat s = Mat::Zero(2 * n, 2 * n);
  s.topRightCorner(n, n) = Mat::Identity(n, n);
  s.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return s;
}

QuadraticForm::QuadraticForm(Mat m) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() % 2 != 0)
    throw std::invalid_argument("QuadraticForm: matrix must be square of even size");
  const double scale = std::max(1.0, mat_.cwiseAbs().maxCoeff());
  if ((mat_ - mat_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("QuadraticForm: matrix not symmetric");
  Eigen::LLT<Mat> llt(mat_);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("QuadraticForm: matrix not positive-definite");
}

QuadraticForm symplectic_dual(const QuadraticForm& q) {
  const Mat s = symplectic_matrix(q.dim());
  Mat dual = s.transpose() * q.mat().inverse() * s;
  dual = 0.5 * (dual + dual.transpose());
  return QuadraticForm(dual);
}

double HormanderMetric::eval(const PhasePoint& X, const PhasePoint& T) const {
  const double fv = f(X);
  const double Fv = F(X);
  return T.x.squaredNorm() / (fv * fv) + T.xi.squaredNorm() / (Fv * Fv);
}

double HormanderMetric::dual_eval(const PhasePoint& X, const PhasePoint& T) const {
  const double fv = f(X);
  const double Fv = F(X);
  return Fv * Fv * T.x.squaredNorm() + fv * fv * T.xi.squaredNorm();
}

QuadraticForm HormanderMetric::form_at(const PhasePoint& X) const {
  const double fv = f(X);
  const double Fv = F(X);
  Vec d(2 * n);
  d.head(n).setConstant(1.0 / (fv * fv));
  d.tail(n).setConstant(1.0 / (Fv * Fv));
  return QuadraticForm(d.asDiagonal());
}

QuadraticForm HormanderMetric::dual_form_at(const PhasePoint& X) const {
  return symplectic_dual(form_at(X));
}

std::pair<double, double> HormanderMetric::det_pair(const PhasePoint& X) const {
  const QuadraticForm q = form_at(X);
  return {q.det(), symplectic_dual(q).det()};
}

double HormanderMetric::det_g(const PhasePoint& X) const {
  return std::pow(f(X) * F(X), -2.0 * n);
}

double eval_metric(const HormanderMetric& g, const PhasePoint& X, const PhasePoint& T) {
  return g.eval(X, T);
}

QuadraticForm dual_metric(const HormanderMetric& g, const PhasePoint& X) {
  return g.dual_form_at(X);
}

std::pair<double, double> det_symplectic(const HormanderMetric& g, const PhasePoint& X) {
  return g.det_pair(X);
}

HormanderMetric euclidean_metric(int n) {
  HormanderMetric g;
  g.n = n;
  g.f = [](const PhasePoint&) { return 1.0; };
  g.F = [](const PhasePoint&) { return 1.0; };
  g.preset_tag = "euclidean";
  g.constants = {1.0, 1.0, 0.0, MetricConstants::Provenance::asserted};
  g.symplectic = true;
  g.translation_invariant = true;
  return g;
}

HormanderMetric srd_metric(double rho, double delta, int n) {
  HormanderMetric g;
  g.n = n;
  g.f = [delta](const PhasePoint& X) { return std::pow(jb_norm(X.xi), -delta); };
  g.F = [rho](const PhasePoint& X) { return std::pow(jb_norm(X.xi), rho); };
  std::ostringstream tag;
  tag << "srd:" << rho << ":" << delta;
  g.preset_tag = tag.str();
  g.constants = {4.0, 0.5, 2.0, MetricConstants::Provenance::fitted};
  g.symplectic = (rho == delta);
  return g;
}

HormanderMetric shubin_metric(double rho, int n) {
  HormanderMetric g;
  g.n = n;
  auto scale = [rho](const PhasePoint& X) {
    return std::pow(jb(X.x.squaredNorm() + X.xi.squaredNorm()), rho);
  };
  g.f = scale;
  g.F = scale;
  std::ostringstream tag;
  tag << "shubin:" << rho;
  g.preset_tag = tag.str();
  g.constants = {4.0, 0.5, 2.0, MetricConstants::Provenance::fitted};
  g.symplectic = (rho == 0.0);
  return g;
}

HormanderMetric sg_metric(int n) {
  HormanderMetric g;
  g.n = n;
  g.f = [](const PhasePoint& X) { return jb_norm(X.x); };
  g.F = [](const PhasePoint& X) { return jb_norm(X.xi); };
  g.preset_tag = "sg";
  g.constants = {4.0, 0.5, 2.0, MetricConstants::Provenance::fitted};
  g.symplectic = false;
  return g;
}

HormanderMetric metric_from_tag(const std::string& tag, int n) {
  if (tag == "euclidean") return euclidean_metric(n);
  if (tag == "sg") return sg_metric(n);
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= s.size()) {
      auto next = s.find(':', pos);
      if (next == std::string::npos) {
        parts.push_back(s.substr(pos));
        break;
      }
      parts.push_back(s.substr(pos, next - pos));
      pos = next + 1;
    }
    return parts;
  };
  const auto parts = split(tag);
  if (parts.size() == 3 && parts[0] == "srd")
    return srd_metric(std::stod(parts[1]), std::stod(parts[2]), n);
  if (parts.size() == 2 && parts[0] == "shubin") return shubin_metric(std::stod(parts[1]), n);
  throw std::invalid_argument("unknown metric tag: " + tag);
}

// --- metric-ball projections ------------------------------------------------

BallProjection project_to_ball(const QuadraticForm& constraint, const PhasePoint& center,
                               double r, const QuadraticForm& objective,
                               const PhasePoint& target) {
  if (r <= 0.0) throw std::invalid_argument("project_to_ball: radius must be positive");
  const Vec d = target.flat() - center.flat();
  if (d.dot(constraint.mat() * d) <= r * r) {
    return {0.0, target, 0};
  }

  // Pencil diagonalisation: B v = lambda A v with A = constraint, B = objective.
  // Eigenvectors Phi satisfy Phi^T A Phi = I; in these coordinates the problem
  // is min sum lambda_i (u_i - w_i)^2 over |u| <= r, solved on the boundary by
  // the secular equation sum (lambda_i w_i / (lambda_i + mu))^2 = r^2.
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> solver(objective.mat(), constraint.mat());
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("project_to_ball: pencil diagonalisation failed");
  const Vec lambda = solver.eigenvalues();
  const Mat phi = solver.eigenvectors();
  const Vec w = phi.transpose() * constraint.mat() * d;

  auto h = [&](double mu) {
    double s = 0.0;
    for (int i = 0; i < lambda.size(); ++i) {
      const double t = lambda[i] * w[i] / (lambda[i] + mu);
      s += t * t;
    }
    return s - r * r;
  };
  auto dh = [&](double mu) {
    double s = 0.0;
    for (int i = 0; i < lambda.size(); ++i) {
      const double li = lambda[i];
      const double t = li * w[i] / (li + mu);
      s += -2.0 * t * t / (li + mu);
    }
    return s;
  };

  double lo = 0.0;
  double hi = std::max(1.0, lambda.maxCoeff()) * std::max(1.0, w.norm() / r);
  int guard = 0;
  while (h(hi) > 0.0) {
    hi *= 2.0;
    if (++guard > 200)
      throw std::runtime_error("project_to_ball: failed to bracket the secular root");
  }

  double mu = 0.5 * (lo + hi);
  int iter = 0;
  for (; iter < 200; ++iter) {
    const double hv = h(mu);
    if (hv > 0.0)
      lo = mu;
    else
      hi = mu;
    const double dv = dh(mu);
    double next = (dv != 0.0) ? mu - hv / dv : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - mu) <= 1e-10 * (1.0 + std::abs(mu))) {
      mu = next;
      break;
    }
    mu = next;
  }
  if (iter >= 200) {
    std::ostringstream msg;
    msg << "project_to_ball: secular solver did not converge (mu=" << mu
        << ", h=" << h(mu) << ")";
    throw std::runtime_error(msg.str());
  }

  Vec u(lambda.size());
  double dist = 0.0;
  for (int i = 0; i < lambda.size(); ++i) {
    u[i] = lambda[i] * w[i] / (lambda[i] + mu);
    const double diff = u[i] - w[i];
    dist += lambda[i] * diff * diff;
  }
  const Vec z = center.flat() + phi * u;
  return {dist, PhasePoint::from_flat(z), iter + 1};
}

double ball_distance(const HormanderMetric& g, const PhasePoint& X, double r,
                     const PhasePoint& Y) {
  if (r <= 0.0) throw std::invalid_argument("ball_distance: radius must be positive");
  return project_to_ball(g.form_at(X), X, r, g.dual_form_at(X), Y).distance;
}

double ball_ball_distance(const HormanderMetric& g, const PhasePoint& X, double rX,
                          const PhasePoint& Yc, double rY) {
  if (rX <= 0.0 || rY <= 0.0)
    throw std::invalid_argument("ball_ball_distance: radii must be positive");
  const QuadraticForm objective = g.dual_form_at(X);
  const QuadraticForm ballX = g.form_at(X);
  const QuadraticForm ballY = g.form_at(Yc);

  // Alternate projections between the two convex ellipsoids; the objective is
  // a fixed positive form, so the alternation is a descent and converges to
  // the joint minimiser.
  PhasePoint zY = Yc;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 100; ++k) {
    const BallProjection pX = project_to_ball(ballX, X, rX, objective, zY);
    const BallProjection pY = project_to_ball(ballY, Yc, rY, objective, pX.closest);
    zY = pY.closest;
    if (pY.distance == 0.0) return 0.0;
    if (std::abs(prev - pY.distance) <= 1e-8 * (1.0 + pY.distance)) return pY.distance;
    prev = pY.distance;
  }
  throw std::runtime_error("ball_ball_distance: alternating projections did not converge");
}

// --- weights ----------------------------------------------------------------

AdmissibleWeight const_weight() {
  AdmissibleWeight w;
  w.M = [](const PhasePoint&) { return 1.0; };
  w.r_slow = 1e9;
  w.N_temp = 0.0;
  w.tag = "const1";
  return w;
}

AdmissibleWeight jb_xi_weight(double power) {
  AdmissibleWeight w;
  w.M = [power](const PhasePoint& X) { return std::pow(jb_norm(X.xi), power); };
  w.r_slow = 0.5;
  w.N_temp = std::abs(power);
  std::ostringstream tag;
  tag << "jb_xi:" << power;
  w.tag = tag.str();
  return w;
}

AdmissibleWeight weight_from_tag(const std::string& tag) {
  if (tag == "const1") return const_weight();
  if (tag == "jb_xi") return jb_xi_weight(1.0);
  if (tag.rfind("jb_xi:", 0) == 0) return jb_xi_weight(std::stod(tag.substr(6)));
  throw std::invalid_argument("unknown weight tag: " + tag);
}

// --- sampled structure checks -----------------------------------------------

namespace {

struct PairSet {
  std::vector<PhasePoint> X;        // base points
  std::vector<PhasePoint> Y_near;   // g_X-ball mates (slow variation)
  std::vector<PhasePoint> Y_far;    // unconstrained mates (temperance)
  std::vector<PhasePoint> Y_axis;   // axis-aligned mates (per-coordinate probes)
};

PairSet draw_pairs(const HormanderMetric& g, const AxiomSampleSpec& spec) {
  PairSet ps;
  HaltonSeq seq(4 * g.n + 2, spec.seed);
  for (int i = 0; i < spec.pair_count; ++i) {
    const auto p = seq.next();
    Vec x(g.n), xi(g.n), yx(g.n), yxi(g.n);
    for (int j = 0; j < g.n; ++j) {
      x[j] = (2.0 * p[j] - 1.0) * spec.extent;
      xi[j] = (2.0 * p[g.n + j] - 1.0) * spec.extent;
      yx[j] = (2.0 * p[2 * g.n + j] - 1.0) * spec.extent;
      yxi[j] = (2.0 * p[3 * g.n + j] - 1.0) * spec.extent;
    }
    PhasePoint X(x, xi);
    PhasePoint Yf(yx, yxi);
    // Mate inside the slow-variation ball: scale the far mate's offset so that
    // g_X(X - Y) = s^2 r0^2 with s in (0,1].
    PhasePoint off = Yf - X;
    const double gn = std::sqrt(g.eval(X, off));
    const double s = 0.1 + 0.9 * p[4 * g.n];
    PhasePoint Yn = (gn > 0) ? X + off * (s * g.constants.r0 / gn) : X;
    // Mate differing in a single coordinate, resampled within the box.
    Vec aflat = X.flat();
    aflat[i % (2 * g.n)] = (2.0 * p[4 * g.n + 1] - 1.0) * spec.extent;
    PhasePoint Ya = PhasePoint::from_flat(aflat);
    ps.X.push_back(X);
    ps.Y_near.push_back(Yn);
    ps.Y_far.push_back(Yf);
    ps.Y_axis.push_back(Ya);
  }
  return ps;
}

// Extreme ratio sup_T g_X(T)/g_Y(T) = lambda_max of the pencil (Q_X, Q_Y);
// both directions via max(lmax, 1/lmin).
double extreme_form_ratio(const QuadraticForm& a, const QuadraticForm& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> solver(a.mat(), b.mat());
  const double lmax = solver.eigenvalues().maxCoeff();
  const double lmin = solver.eigenvalues().minCoeff();
  return std::max(lmax, 1.0 / lmin);
}

// Fit max of values over the sample subset with |X| <= extent filter.
double fit_max(const std::vector<double>& vals, const std::vector<double>& radius,
               double cutoff) {
  double m = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (radius[i] <= cutoff) m = std::max(m, vals[i]);
  return m;
}

}  // namespace

std::vector<StructureReport> check_axioms(const HormanderMetric& g,
                                          const AxiomSampleSpec& spec) {
  const PairSet ps = draw_pairs(g, spec);
  std::vector<StructureReport> reports;

  // Uncertainty principle: g_X <= g^sigma_X pointwise, i.e. the pencil
  // (Q^sigma, Q) has all eigenvalues >= 1. Hard pass/fail.
  {
    StructureReport rep;
    rep.axiom = "uncertainty";
    rep.sample_count = static_cast<long>(ps.X.size());
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& X : ps.X) {
      Eigen::GeneralizedSelfAdjointEigenSolver<Mat> solver(g.dual_form_at(X).mat(),
                                                           g.form_at(X).mat());
      worst = std::max(worst, 1.0 - solver.eigenvalues().minCoeff());
    }
    rep.worst_violation = worst;
    rep.pass = worst <= 1e-12;
    rep.fitted_constants["min_dual_ratio"] = 1.0 - worst;
    reports.push_back(rep);
  }

  // Slow variation: fitted C0 over pairs with g_X(X-Y) <= r0^2.
  {
    StructureReport rep;
    rep.axiom = "slow_variation";
    rep.sample_count = static_cast<long>(ps.X.size());
    std::vector<double> vals, radii;
    for (std::size_t i = 0; i < ps.X.size(); ++i) {
      vals.push_back(extreme_form_ratio(g.form_at(ps.X[i]), g.form_at(ps.Y_near[i])));
      radii.push_back(ps.X[i].flat().lpNorm<Eigen::Infinity>());
    }
    const double full = fit_max(vals, radii, spec.extent);
    const double half = fit_max(vals, radii, spec.extent / 2);
    rep.fitted_constants["C0"] = full;
    rep.fitted_constants["C0_half_range"] = half;
    rep.worst_violation = (half > 0 ? full / half : 1.0) - 10.0;
    rep.pass = rep.worst_violation <= 0.0;
    reports.push_back(rep);
  }

  // Temperance: fitted C0 at the preset's N0 over unconstrained pairs, with a
  // range-doubling stability check standing in for "finite fit".
  {
    StructureReport rep;
    rep.axiom = "temperance";
    rep.sample_count = static_cast<long>(ps.X.size());
    std::vector<double> vals, radii;
    for (std::size_t i = 0; i < ps.X.size(); ++i) {
      for (const PhasePoint& Y : {ps.Y_far[i], ps.Y_axis[i]}) {
        const double ratio = extreme_form_ratio(g.form_at(ps.X[i]), g.form_at(Y));
        const double dist = g.dual_eval(ps.X[i], ps.X[i] - Y);
        vals.push_back(ratio / std::pow(1.0 + dist, g.constants.N0));
        radii.push_back(std::max(ps.X[i].flat().lpNorm<Eigen::Infinity>(),
                                 Y.flat().lpNorm<Eigen::Infinity>()));
      }
    }
    const double full = fit_max(vals, radii, spec.extent);
    const double half = fit_max(vals, radii, spec.extent / 2);
    rep.fitted_constants["C0"] = full;
    rep.fitted_constants["C0_half_range"] = half;
    rep.fitted_constants["N0"] = g.constants.N0;
    rep.worst_violation = (half > 0 ? full / half : 1.0) - 10.0;
    rep.pass = rep.worst_violation <= 0.0;
    reports.push_back(rep);
  }

  return reports;
}

StructureReport check_weight(const AdmissibleWeight& M, const HormanderMetric& g,
                             const AxiomSampleSpec& spec) {
  const PairSet ps = draw_pairs(g, spec);
  StructureReport rep;
  rep.axiom = "weight_admissibility";
  rep.sample_count = static_cast<long>(ps.X.size());

  std::vector<double> sv_vals, tmp_vals, radii;
  for (std::size_t i = 0; i < ps.X.size(); ++i) {
    const PhasePoint& X = ps.X[i];
    // slow variation mate rescaled to the weight's own radius
    PhasePoint off = ps.Y_near[i] - X;
    const double gn = std::sqrt(g.eval(X, off));
    const double rw = std::min(M.r_slow, spec.extent);
    const PhasePoint Yn = (gn > 0) ? X + off * (0.9 * rw / gn) : X;
    const double mX = M(X);
    const double mYn = M(Yn);
    sv_vals.push_back(std::max(mX / mYn, mYn / mX));

    for (const PhasePoint& Yf : {ps.Y_far[i], ps.Y_axis[i]}) {
      const double mYf = M(Yf);
      const double dist = g.dual_eval(X, X - Yf);
      tmp_vals.push_back(std::max(mX / mYf, mYf / mX) / std::pow(1.0 + dist, M.N_temp));
      radii.push_back(std::max(X.flat().lpNorm<Eigen::Infinity>(),
                               Yf.flat().lpNorm<Eigen::Infinity>()));
    }
  }
  double c_sv = 0.0;
  for (double v : sv_vals) c_sv = std::max(c_sv, v);
  const double c_tmp_full = fit_max(tmp_vals, radii, spec.extent);
  const double c_tmp_half = fit_max(tmp_vals, radii, spec.extent / 2);
  rep.fitted_constants["C_slow"] = c_sv;
  rep.fitted_constants["C_temp"] = c_tmp_full;
  rep.fitted_constants["C_temp_half_range"] = c_tmp_half;
  rep.fitted_constants["N"] = M.N_temp;
  // Divergence heuristic: a genuinely tempered weight gives a fitted constant
  // that saturates as the sample range doubles; growth past 4x flags a weight
  // whose ratio outruns the declared polynomial bound.
  rep.worst_violation = (c_tmp_half > 0 ? c_tmp_full / c_tmp_half : 1.0) - 4.0;
  rep.pass = rep.worst_violation <= 0.0;
  return rep;
}

std::vector<StructureReport> lemma_inequality_suite(const HormanderMetric& g, double r,
                                                    const AxiomSampleSpec& spec) {
  if (r <= 0.0 || r > g.constants.r0)
    throw std::invalid_argument("lemma_inequality_suite: need 0 < r <= r0");
  const PairSet ps = draw_pairs(g, spec);
  const double C0 = g.constants.C0;
  const double N0 = g.constants.N0;
  const int n = g.n;
  std::vector<StructureReport> reports;

  auto fitted_report = [&](const std::string& name, const std::vector<double>& lhs_over_rhs,
                           double stated) {
    StructureReport rep;
    rep.axiom = name;
    rep.sample_count = static_cast<long>(lhs_over_rhs.size());
    double fitted = 0.0;
    for (double v : lhs_over_rhs) fitted = std::max(fitted, v);
    rep.fitted_constants["fitted"] = fitted;
    rep.fitted_constants["stated"] = stated;
    rep.worst_violation = fitted - stated;
    rep.pass = rep.worst_violation <= 1e-9 * stated;
    return rep;
  };

  std::vector<double> v1, v2, v3, v5, v6;
  for (std::size_t i = 0; i < ps.X.size(); ++i) {
    const PhasePoint& X = ps.X[i];
    const PhasePoint& Y = ps.Y_far[i];
    const double dist = ball_distance(g, X, r, Y);
    const double ratio = extreme_form_ratio(g.form_at(X), g.form_at(Y));
    v1.push_back(ratio / std::pow(1.0 + dist, N0));
    v2.push_back((1.0 + g.eval(Y, X - Y)) / std::pow(1.0 + dist, N0 + 1));
    if (dist > 1e-12) {
      const double lhs3 = project_to_ball(g.form_at(X), X, r, g.dual_form_at(Y), Y).distance;
      v3.push_back(lhs3 / (dist * std::pow(1.0 + dist, N0)));
    }
    const auto [dX, dsX] = g.det_pair(X);
    const auto [dY, dsY] = g.det_pair(Y);
    const double det_ratio =
        std::max({dX / dY, dY / dX, dsX / dsY, dsY / dsX});
    v6.push_back(det_ratio / std::pow(1.0 + dist, 2.0 * n * N0));

    const PhasePoint& Yn = ps.Y_near[i];
    const auto [dYn, dsYn] = g.det_pair(Yn);
    v5.push_back(std::max({dX / dYn, dYn / dX, dsX / dsYn, dsYn / dsX}));
  }
  reports.push_back(fitted_report("ineq-p1", v1, std::pow(C0, N0 + 2)));
  reports.push_back(
      fitted_report("ineq-p2", v2, 2.0 * (1.0 + r * r) * std::pow(C0, N0 + 2)));
  reports.push_back(fitted_report("ineq-p3", v3, std::pow(C0, N0 + 2)));
  reports.push_back(fitted_report("ineq-p5", v5, std::pow(C0, 2.0 * n)));
  reports.push_back(fitted_report("ineq-p6", v6, std::pow(C0, 2.0 * n * N0 + 4.0 * n)));

  // Determinant identity (p4): exact, in the standard symplectic basis.
  {
    StructureReport rep;
    rep.axiom = "ineq-p4";
    rep.sample_count = static_cast<long>(ps.X.size());
    double worst = 0.0;
    for (const auto& X : ps.X) {
      const auto [dX, dsX] = g.det_pair(X);
      worst = std::max(worst, std::abs(dX * dsX - 1.0));
      worst = std::max(worst, dX - 1.0);
      worst = std::max(worst, 1.0 - dsX);
    }
    rep.worst_violation = worst - 1e-12;
    rep.fitted_constants["max_product_error"] = worst;
    rep.pass = rep.worst_violation <= 0.0;
    reports.push_back(rep);
  }

  // Integral bound (p3-1): quadrature over a truncated grid, a handful of Y.
  {
    StructureReport rep;
    rep.axiom = "ineq-p3-1";
    const double expo = (N0 + 1.0) * (n + 1.0) + n * N0;
    const double ext = spec.extent;
    const int pts = 121;
    const double h = 2.0 * ext / pts;
    double sup = 0.0;
    if (n == 1) {
      const std::vector<PhasePoint> ys = {PhasePoint(0.0, 0.0), PhasePoint(2.0, 1.0),
                                          PhasePoint(-3.0, 4.0)};
      for (const auto& Y : ys) {
        double acc = 0.0;
        for (int ix = 0; ix < pts; ++ix) {
          for (int ik = 0; ik < pts; ++ik) {
            const PhasePoint X(-ext + (ix + 0.5) * h, -ext + (ik + 0.5) * h);
            const double dist = ball_distance(g, X, r, Y);
            acc += std::pow(1.0 + dist, -expo) * std::sqrt(g.det_pair(X).first) * h * h;
          }
        }
        sup = std::max(sup, acc);
      }
    }
    rep.sample_count = (n == 1) ? 3 : 0;
    rep.fitted_constants["sup_estimate"] = sup;
    rep.fitted_constants["exponent"] = expo;
    rep.pass = std::isfinite(sup);
    rep.worst_violation = rep.pass ? -1.0 : 1.0;
    reports.push_back(rep);
  }

  // p7: polynomial envelope of the determinants.
  {
    StructureReport rep;
    rep.axiom = "ineq-p7";
    rep.sample_count = static_cast<long>(ps.X.size());
    double c = 1.0;
    for (const auto& X : ps.X) {
      const auto [dX, dsX] = g.det_pair(X);
      const double env = std::pow(1.0 + X.flat().norm(), 4.0 * n * N0);
      c = std::max({c, 1.0 / (dX * env), dsX / env});
    }
    rep.fitted_constants["C"] = c;
    rep.pass = std::isfinite(c);
    rep.worst_violation = rep.pass ? -1.0 : 1.0;
    reports.push_back(rep);
  }

  return reports;
}

}  // namespace pf
