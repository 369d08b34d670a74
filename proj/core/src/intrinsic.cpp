#include "spacelike/intrinsic.hpp"

#include <cmath>

#include "spacelike/errors.hpp"

namespace spacelike {

namespace {

// Gamma_{b, jl} = 1/2 (d_j g_bl + d_l g_bj - d_b g_jl)
Tensor3 christoffel_first_kind(const MetricDerivatives& md) {
  const int m = static_cast<int>(md.g.rows());
  Tensor3 c(m, m, m);
  for (int b = 0; b < m; ++b)
    for (int j = 0; j < m; ++j)
      for (int l = 0; l < m; ++l)
        c(b, j, l) = 0.5 * (md.dg[j](b, l) + md.dg[l](b, j) - md.dg[b](j, l));
  return c;
}

}  // namespace

Tensor3 christoffel(const MetricDerivatives& md) {
  const int m = static_cast<int>(md.g.rows());
  const Eigen::MatrixXd gi = md.g.inverse();
  const Tensor3 c1 = christoffel_first_kind(md);
  Tensor3 gam(m, m, m);
  for (int a = 0; a < m; ++a)
    for (int j = 0; j < m; ++j)
      for (int l = 0; l < m; ++l) {
        double s = 0.0;
        for (int b = 0; b < m; ++b) s += gi(a, b) * c1(b, j, l);
        gam(a, j, l) = s;
      }
  return gam;
}

Tensor4 coordinate_riemann(const MetricDerivatives& md) {
  const int m = static_cast<int>(md.g.rows());
  if (md.ddg.size() != static_cast<std::size_t>(m))
    throw Error("coordinate_riemann: second metric derivatives are required");
  const Eigen::MatrixXd gi = md.g.inverse();
  const Tensor3 gam = christoffel(md);

  // d_i Gamma^a_jl = -g^{ac} (d_i g_cd) Gamma^d_jl + g^{ab} d_i Gamma_{b,jl}
  Tensor4 dgam(m, m, m, m);  // (i, a, j, l)
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < m; ++a)
      for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l) {
          double s = 0.0;
          for (int c = 0; c < m; ++c)
            for (int d = 0; d < m; ++d) s -= gi(a, c) * md.dg[i](c, d) * gam(d, j, l);
          for (int b = 0; b < m; ++b) {
            const double dc1 =
                0.5 * (md.ddg[i][j](b, l) + md.ddg[i][l](b, j) - md.ddg[i][b](j, l));
            s += gi(a, b) * dc1;
          }
          dgam(i, a, j, l) = s;
        }

  // R(d_i, d_j) d_l = R^a_{l i j} d_a
  //   R^a_{lij} = d_i Gamma^a_jl - d_j Gamma^a_il + Gamma^a_ip Gamma^p_jl - Gamma^a_jp Gamma^p_il
  Tensor4 r(m, m, m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int l = 0; l < m; ++l)
        for (int a = 0; a < m; ++a) {
          double up = dgam(i, a, j, l) - dgam(j, a, i, l);
          for (int p = 0; p < m; ++p) up += gam(a, i, p) * gam(p, j, l) - gam(a, j, p) * gam(p, i, l);
          for (int k = 0; k < m; ++k) r(i, j, k, l) += md.g(k, a) * up;
        }
  return r;
}

Tensor4 change_frame(const Tensor4& r, const Eigen::MatrixXd& c) {
  const int m = r.dim(0);
  // Contract one index at a time: O(m^5).
  Tensor4 t1(m, m, m, m), t2(m, m, m, m), t3(m, m, m, m), t4(m, m, m, m);
  for (int a = 0; a < m; ++a)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double s = 0.0;
          for (int i = 0; i < m; ++i) s += c(a, i) * r(i, j, k, l);
          t1(a, j, k, l) = s;
        }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double s = 0.0;
          for (int j = 0; j < m; ++j) s += c(b, j) * t1(a, j, k, l);
          t2(a, b, k, l) = s;
        }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int cc = 0; cc < m; ++cc)
        for (int l = 0; l < m; ++l) {
          double s = 0.0;
          for (int k = 0; k < m; ++k) s += c(cc, k) * t2(a, b, k, l);
          t3(a, b, cc, l) = s;
        }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int cc = 0; cc < m; ++cc)
        for (int d = 0; d < m; ++d) {
          double s = 0.0;
          for (int l = 0; l < m; ++l) s += c(d, l) * t3(a, b, cc, l);
          t4(a, b, cc, d) = s;
        }
  return t4;
}

Eigen::MatrixXd coordinate_ricci(const Tensor4& r, const Eigen::MatrixXd& gi) {
  const int m = r.dim(0);
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l) ric(i, k) += gi(j, l) * r(i, j, k, l);
  return ric;
}

MetricDerivatives graph_metric_derivatives(const LocalGraph& lg) {
  const int m = lg.m, n = lg.n;
  MetricDerivatives md;
  md.g = Eigen::MatrixXd::Identity(m, m) - lg.jac.transpose() * lg.jac;
  md.dg.assign(m, Eigen::MatrixXd::Zero(m, m));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int t = 0; t < n; ++t)
          s += lg.second(t, i, k) * lg.jac(t, j) + lg.jac(t, i) * lg.second(t, j, k);
        md.dg[k](i, j) = -s;
      }
  if (lg.third) {
    const Tensor4& f3 = *lg.third;
    md.ddg.assign(m, std::vector<Eigen::MatrixXd>(m, Eigen::MatrixXd::Zero(m, m)));
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l)
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) {
            double s = 0.0;
            for (int t = 0; t < n; ++t)
              s += f3(t, i, k, l) * lg.jac(t, j) + lg.second(t, i, k) * lg.second(t, j, l) +
                   lg.second(t, i, l) * lg.second(t, j, k) + lg.jac(t, i) * f3(t, j, k, l);
            md.ddg[k][l](i, j) = -s;
          }
  }
  return md;
}

double first_bianchi_defect(const Tensor4& r) {
  const int m = r.dim(0);
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
          worst = std::max(worst, std::abs(r(i, j, k, l) + r(i, k, l, j) + r(i, l, j, k)));
  return worst;
}

}  // namespace spacelike
