#include "spacelike/lagrangian.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "spacelike/errors.hpp"
#include "spacelike/jet.hpp"

namespace spacelike {

namespace {

using D = Dual<kMaxJetDim>;

// det of a Dual-valued matrix by elimination with partial pivoting on values.
D dual_det(std::vector<D> a, int m) {
  D det(1.0, 0);
  for (int c = 0; c < m; ++c) {
    int piv = c;
    for (int r = c + 1; r < m; ++r)
      if (std::abs(a[r * m + c].value()) > std::abs(a[piv * m + c].value())) piv = r;
    if (a[piv * m + c].value() == 0.0) return D(0.0, 0);
    if (piv != c) {
      for (int k = 0; k < m; ++k) std::swap(a[c * m + k], a[piv * m + k]);
      det = -det;
    }
    det *= a[c * m + c];
    for (int r = c + 1; r < m; ++r) {
      const D f = a[r * m + c] / a[c * m + c];
      for (int k = c; k < m; ++k) a[r * m + k] -= f * a[c * m + k];
    }
  }
  return det;
}

double min_eig(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void require_convex(const PotentialJet& j) {
  const double e = min_eig(j.hess);
  if (!(e > 0.0)) throw NotConvexError("potential is not convex here (min Hessian eigenvalue " + std::to_string(e) + ")");
}

}  // namespace

Potential Potential::parse(int m, const std::string& text, double c) {
  if (m < 1 || m > kMaxJetDim) throw Error("potential: m must be in [1, 8]");
  return Potential{m, spacelike::parse(text, m), c};
}

PotentialJet potential_jet(const Potential& p, std::span<const double> x) {
  const int m = p.m;
  if (static_cast<int>(x.size()) != m) throw Error("potential_jet: point has wrong dimension");
  const Jet3 jet = evaluate_jet(p.F, x);
  PotentialJet j;
  j.m = m;
  j.x = Eigen::Map<const Eigen::VectorXd>(x.data(), m);
  j.value = jet.value();
  j.grad.resize(m);
  j.hess.resize(m, m);
  j.third = Tensor3(m, m, m);
  for (int i = 0; i < m; ++i) {
    j.grad(i) = jet.grad(i);
    for (int k = 0; k < m; ++k) {
      j.hess(i, k) = jet.hess(i, k);
      for (int l = 0; l < m; ++l) j.third(i, k, l) = jet.third(i, k, l);
    }
  }
  return j;
}

GradientPoint gradient_graph(const PotentialJet& j) {
  GradientPoint gp;
  gp.x = j.x;
  gp.y = j.grad;
  gp.g = j.hess;
  gp.min_eig = min_eig(j.hess);
  if (!(gp.min_eig > 0.0))
    throw NotConvexError("potential is not convex here (min Hessian eigenvalue " + std::to_string(gp.min_eig) + ")");
  return gp;
}

GradientPoint gradient_graph(const Potential& p, std::span<const double> x) {
  return gradient_graph(potential_jet(p, x));
}

LagrangianForms lagrangian_forms(const PotentialJet& j) {
  require_convex(j);
  const int m = j.m;
  LagrangianForms lf;
  lf.g = j.hess;
  lf.g_inv = j.hess.inverse();

  std::vector<D> a(static_cast<std::size_t>(m * m));
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      D v(j.hess(r, c), m);
      for (int l = 0; l < m; ++l) v.d(l) = j.third(r, c, l);
      a[r * m + c] = v;
    }
  const D det = dual_det(std::move(a), m);
  lf.det_g = det.value();
  lf.d_det_g.resize(m);
  for (int l = 0; l < m; ++l) {
    lf.d_det_g(l) = det.d(l);
    double tr = 0.0;
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) tr += lf.g_inv(r, c) * j.third(r, c, l);
    lf.log_det_defect = std::max(lf.log_det_defect, std::abs(det.d(l) / lf.det_g - tr));
  }

  lf.B = Tensor3(m, m, m);
  for (int k = 0; k < m; ++k)
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        double v = 0.0;
        for (int l = 0; l < m; ++l) v += j.third(r, c, l) * lf.g_inv(l, k);
        lf.B(k, r, c) = -0.5 * v;
      }
  lf.H = -(1.0 / (2.0 * m * lf.det_g)) * (lf.g_inv * lf.d_det_g);
  lf.H_norm = std::sqrt(std::max(0.0, lf.H.dot(lf.g * lf.H)));

  double s = 0.0;
  for (int i = 0; i < m; ++i)
    for (int jj = 0; jj < m; ++jj)
      for (int p = 0; p < m; ++p)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l)
            for (int q = 0; q < m; ++q)
              s += lf.g_inv(i, k) * lf.g_inv(jj, l) * lf.g_inv(p, q) * j.third(i, jj, p) * j.third(k, l, q);
  lf.S = 0.25 * s;
  return lf;
}

LagrangianForms lagrangian_forms(const Potential& p, std::span<const double> x) {
  return lagrangian_forms(potential_jet(p, x));
}

double ma_residual(const PotentialJet& j, double c) { return j.hess.determinant() - c; }

double ma_residual(const Potential& p, std::span<const double> x) { return ma_residual(potential_jet(p, x), p.c); }

ModuliCurvature moduli_curvature(const PotentialJet& j) {
  const LagrangianForms lf = lagrangian_forms(j);
  const int m = j.m;
  const Eigen::MatrixXd& gi = lf.g_inv;
  const Tensor3& f = j.third;

  // W_{ik,jl} = g^{st} F_sik F_tjl
  Tensor4 w(m, m, m, m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k)
      for (int jj = 0; jj < m; ++jj)
        for (int l = 0; l < m; ++l) {
          double v = 0.0;
          for (int s = 0; s < m; ++s)
            for (int t = 0; t < m; ++t) v += gi(s, t) * f(s, i, k) * f(t, jj, l);
          w(i, k, jj, l) = v;
        }

  ModuliCurvature mc;
  mc.riemann = Tensor4(m, m, m, m);
  for (int i = 0; i < m; ++i)
    for (int jj = 0; jj < m; ++jj)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) mc.riemann(i, jj, k, l) = -0.25 * w(i, k, jj, l) + 0.25 * w(i, l, jj, k);

  mc.ricci = Eigen::MatrixXd::Zero(m, m);
  const Eigen::VectorXd dlog = lf.d_det_g / lf.det_g;
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      double a = 0.0, b = 0.0;
      for (int s = 0; s < m; ++s)
        for (int t = 0; t < m; ++t) a += gi(s, t) * f(s, i, k) * dlog(t);
      for (int jj = 0; jj < m; ++jj)
        for (int l = 0; l < m; ++l) b += gi(jj, l) * w(i, l, jj, k);
      mc.ricci(i, k) = -0.25 * a + 0.25 * b;
    }

  double a = 0.0, b = 0.0;
  for (int s = 0; s < m; ++s)
    for (int t = 0; t < m; ++t) a += gi(s, t) * dlog(s) * dlog(t);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k)
      for (int jj = 0; jj < m; ++jj)
        for (int l = 0; l < m; ++l) b += gi(jj, l) * gi(i, k) * w(i, l, jj, k);
  mc.scalar = -0.25 * a + 0.25 * b;

  const Eigen::MatrixXd ric_sym = 0.5 * (mc.ricci + mc.ricci.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(ric_sym, lf.g, Eigen::EigenvaluesOnly);
  mc.min_ricci_eig = ges.eigenvalues().minCoeff();
  return mc;
}

ModuliCurvature moduli_curvature(const Potential& p, std::span<const double> x) {
  return moduli_curvature(potential_jet(p, x));
}

double curvature_symmetry_defect(const Tensor4& r) {
  const int m = r.dim(0);
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          const double v = r(i, j, k, l);
          worst = std::max({worst, std::abs(v + r(j, i, k, l)), std::abs(v + r(i, j, l, k)),
                            std::abs(v - r(k, l, i, j)), std::abs(v + r(i, k, l, j) + r(i, l, j, k))});
        }
  return worst;
}

// u = (x + y)/2, v = (x - y)/2 turns Q into diag(I, -I). Along M,
// du = P dx and dv = N dx with P = (I + g)/2, N = (I - g)/2, so the slope
// is N P^{-1}. Differentiating once more, using I + N P^{-1} = P^{-1}:
//   d^2 v^k / du^l du^a = -1/2 (P^{-1})_kc F_cdb (P^{-1})_dl (P^{-1})_ba.
StandardForm to_standard(const PotentialJet& j) {
  require_convex(j);
  const int m = j.m;
  const Eigen::MatrixXd im = Eigen::MatrixXd::Identity(m, m);
  StandardForm sf;
  sf.T.resize(2 * m, 2 * m);
  sf.T << 0.5 * im, 0.5 * im, 0.5 * im, -0.5 * im;

  const Eigen::MatrixXd p = 0.5 * (im + j.hess);
  const Eigen::MatrixXd nmat = 0.5 * (im - j.hess);
  const Eigen::MatrixXd pinv = p.inverse();

  LocalGraph& lg = sf.graph;
  lg.m = m;
  lg.n = m;
  lg.x = 0.5 * (j.x + j.grad);
  lg.y = 0.5 * (j.x - j.grad);
  lg.jac = nmat * pinv;

  // G_{k d b} = sum_c Pinv_kc F_cdb, then contract d and b.
  Tensor3 g1(m, m, m);
  for (int k = 0; k < m; ++k)
    for (int d = 0; d < m; ++d)
      for (int b = 0; b < m; ++b) {
        double v = 0.0;
        for (int c = 0; c < m; ++c) v += pinv(k, c) * j.third(c, d, b);
        g1(k, d, b) = v;
      }
  Tensor3 g2(m, m, m);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l)
      for (int b = 0; b < m; ++b) {
        double v = 0.0;
        for (int d = 0; d < m; ++d) v += g1(k, d, b) * pinv(d, l);
        g2(k, l, b) = v;
      }
  lg.second = Tensor3(m, m, m);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l)
      for (int a = 0; a < m; ++a) {
        double v = 0.0;
        for (int b = 0; b < m; ++b) v += g2(k, l, b) * pinv(b, a);
        lg.second(k, l, a) = -0.5 * v;
      }
  return sf;
}

StandardForm to_standard(const Potential& p, std::span<const double> x) { return to_standard(potential_jet(p, x)); }

Tensor4 hessian_metric_riemann(const Potential& p, std::span<const double> x, double h) {
  const int m = p.m;
  const PotentialJet j = potential_jet(p, x);
  require_convex(j);
  MetricDerivatives md;
  md.g = j.hess;
  md.dg.assign(m, Eigen::MatrixXd::Zero(m, m));
  for (int k = 0; k < m; ++k)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) md.dg[k](a, b) = j.third(a, b, k);

  md.ddg.assign(m, std::vector<Eigen::MatrixXd>(m, Eigen::MatrixXd::Zero(m, m)));
  std::vector<double> y(x.begin(), x.end());
  for (int l = 0; l < m; ++l) {
    y[l] = x[l] + h;
    const Jet3 jp = evaluate_jet(p.F, y);
    y[l] = x[l] - h;
    const Jet3 jm = evaluate_jet(p.F, y);
    y[l] = x[l];
    for (int k = 0; k < m; ++k)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) md.ddg[k][l](a, b) = (jp.third(a, b, k) - jm.third(a, b, k)) / (2 * h);
  }
  // Symmetrize in (k, l) to remove the finite-difference asymmetry.
  for (int k = 0; k < m; ++k)
    for (int l = k + 1; l < m; ++l) {
      const Eigen::MatrixXd avg = 0.5 * (md.ddg[k][l] + md.ddg[l][k]);
      md.ddg[k][l] = md.ddg[l][k] = avg;
    }
  return coordinate_riemann(md);
}

}  // namespace spacelike
