#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace pf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A point X = (x, xi) of phase space W = R^n x R^n.
struct PhasePoint {
  Vec x;
  Vec xi;

  PhasePoint() = default;
  PhasePoint(Vec x_, Vec xi_);
  // n = 1 convenience.
  PhasePoint(double x_, double xi_);

  int dim() const { return static_cast<int>(x.size()); }
  bool finite() const;
  // Coordinates (x_1..x_n, xi_1..xi_n).
  Vec flat() const;
  static PhasePoint from_flat(const Vec& v);

  PhasePoint operator+(const PhasePoint& o) const;
  PhasePoint operator-(const PhasePoint& o) const;
  PhasePoint operator*(double c) const;
};

// [X,Y] = <xi, y> - <eta, x>.
double symplectic_form(const PhasePoint& X, const PhasePoint& Y);

// Matrix of the map sigma : W -> W', (x, xi) |-> (xi, -x), in the standard
// symplectic basis; [X,Y] = <sigma X, Y>.
Mat symplectic_matrix(int n);

// A positive-definite quadratic form on W, stored as its symmetric matrix in
// coordinates (x_1..x_n, xi_1..xi_n).
class QuadraticForm {
 public:
  explicit QuadraticForm(Mat m);

  double operator()(const Vec& t) const { return t.dot(mat_ * t); }
  double operator()(const PhasePoint& T) const { return (*this)(T.flat()); }
  const Mat& mat() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()) / 2; }
  double det() const { return mat_.determinant(); }

 private:
  Mat mat_;
};

// Symplectic dual form: Q^sigma = ^t sigma Q^{-1} sigma.
QuadraticForm symplectic_dual(const QuadraticForm& q);

struct MetricConstants {
  double C0 = 1.0;
  double r0 = 0.5;
  double N0 = 0.0;
  enum class Provenance { asserted, fitted };
  Provenance provenance = Provenance::asserted;
};

// Hormander metric in Beals-Fefferman split form
//   g_{(x,xi)} = f(x,xi)^{-2} |dx|^2 + F(x,xi)^{-2} |dxi|^2.
struct HormanderMetric {
  int n = 1;
  std::function<double(const PhasePoint&)> f;
  std::function<double(const PhasePoint&)> F;
  std::string preset_tag;
  MetricConstants constants;
  bool symplectic = false;            // F == 1/f pointwise
  bool translation_invariant = false; // f, F constant (euclidean)

  // g_X(T)
  double eval(const PhasePoint& X, const PhasePoint& T) const;
  // g^sigma_X(T); for split metrics the dual swaps f <-> 1/F, F <-> 1/f.
  double dual_eval(const PhasePoint& X, const PhasePoint& T) const;
  QuadraticForm form_at(const PhasePoint& X) const;
  QuadraticForm dual_form_at(const PhasePoint& X) const;
  // (|g_X|, |g^sigma_X|) in the standard symplectic basis, via the matrix
  // determinants.
  std::pair<double, double> det_pair(const PhasePoint& X) const;
  // |g_X| = (f F)^{-2n} in closed form (cheap path for inner loops).
  double det_g(const PhasePoint& X) const;
};

double eval_metric(const HormanderMetric& g, const PhasePoint& X, const PhasePoint& T);
QuadraticForm dual_metric(const HormanderMetric& g, const PhasePoint& X);
std::pair<double, double> det_symplectic(const HormanderMetric& g, const PhasePoint& X);

// Presets. Tags: "euclidean", "srd:rho:delta", "shubin:rho", "sg".
HormanderMetric euclidean_metric(int n = 1);
HormanderMetric srd_metric(double rho, double delta, int n = 1);
HormanderMetric shubin_metric(double rho, int n = 1);
HormanderMetric sg_metric(int n = 1);
HormanderMetric metric_from_tag(const std::string& tag, int n = 1);

// Distance from target to the ellipsoid {z : constraint(z - center) <= r^2},
// measured in the objective form: simultaneous diagonalisation of the two
// forms plus a safeguarded Newton solve of the secular equation.
struct BallProjection {
  double distance = 0.0;
  PhasePoint closest;
  int iterations = 0;
};
BallProjection project_to_ball(const QuadraticForm& constraint, const PhasePoint& center,
                               double r, const QuadraticForm& objective,
                               const PhasePoint& target);

// g^sigma_X(Y - U_{X,r}) with U_{X,r} = {Z : g_X(X-Z) <= r^2}.
double ball_distance(const HormanderMetric& g, const PhasePoint& X, double r,
                     const PhasePoint& Y);

// g^sigma_X(U_{Yc,rY} - U_{X,rX}) by alternating projections.
double ball_ball_distance(const HormanderMetric& g, const PhasePoint& X, double rX,
                          const PhasePoint& Yc, double rY);

struct AdmissibleWeight {
  std::function<double(const PhasePoint&)> M;
  double r_slow = 0.5;
  double N_temp = 0.0;
  std::string tag;

  double operator()(const PhasePoint& X) const { return M(X); }
};

AdmissibleWeight const_weight();
AdmissibleWeight jb_xi_weight(double power = 1.0);  // <xi>^power
AdmissibleWeight weight_from_tag(const std::string& tag);

struct StructureReport {
  std::string axiom;
  long sample_count = 0;
  std::map<std::string, double> fitted_constants;
  double worst_violation = 0.0;  // signed slack; pass <=> worst_violation <= 0
  bool pass = false;
};

struct AxiomSampleSpec {
  int pair_count = 400;
  double extent = 10.0;
  std::uint64_t seed = 0x5EED;
};

std::vector<StructureReport> check_axioms(const HormanderMetric& g,
                                          const AxiomSampleSpec& spec);
StructureReport check_weight(const AdmissibleWeight& M, const HormanderMetric& g,
                             const AxiomSampleSpec& spec);
std::vector<StructureReport> lemma_inequality_suite(const HormanderMetric& g, double r,
                                                    const AxiomSampleSpec& spec);

}  // namespace pf
