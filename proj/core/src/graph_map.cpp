#include "spacelike/graph_map.hpp"

#include "spacelike/jet.hpp"

namespace spacelike {

Eigen::VectorXd LocalGraph::position() const {
  Eigen::VectorXd X(m + n);
  X << x, y;
  return X;
}

GraphMap::GraphMap(int m, std::vector<Expr> components)
    : m_(m), components_(std::move(components)), offset_(Eigen::VectorXd::Zero(components_.size())) {
  if (m < 1 || m > kMaxJetDim) throw Error("graph map: m must be in [1, 8]");
  if (components_.empty()) throw Error("graph map: at least one component is required");
  for (std::size_t s = 0; s < components_.size(); ++s) {
    if (components_[s].max_variable() > m)
      throw Error("graph map: component " + std::to_string(s + 1) + " references a variable beyond x" +
                  std::to_string(m));
  }
}

GraphMap GraphMap::parse(int m, const std::vector<std::string>& components) {
  std::vector<Expr> exprs;
  exprs.reserve(components.size());
  for (const auto& c : components) exprs.push_back(spacelike::parse(c, m));
  return GraphMap(m, std::move(exprs));
}

GraphMap GraphMap::with_origin_offset() const {
  GraphMap r(*this);
  const std::vector<double> origin(static_cast<std::size_t>(m_), 0.0);
  r.offset_.setZero();
  r.offset_ = r.value(origin);
  r.has_offset_ = true;
  return r;
}

Eigen::VectorXd GraphMap::value(std::span<const double> x) const {
  Eigen::VectorXd v(n());
  for (int s = 0; s < n(); ++s) v(s) = evaluate(components_[s], x) - offset_(s);
  return v;
}

Eigen::MatrixXd GraphMap::jacobian(std::span<const double> x) const {
  Eigen::MatrixXd J(n(), m_);
  for (int s = 0; s < n(); ++s) {
    const auto d = evaluate_dual(components_[s], x);
    for (int i = 0; i < m_; ++i) J(s, i) = d.d(i);
  }
  return J;
}

LocalGraph GraphMap::local(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != m_) throw Error("graph map: point has wrong dimension");
  LocalGraph lg;
  lg.m = m_;
  lg.n = n();
  lg.x = Eigen::Map<const Eigen::VectorXd>(x.data(), m_);
  lg.y.resize(n());
  lg.jac.resize(n(), m_);
  lg.second = Tensor3(n(), m_, m_);
  lg.third = Tensor4(n(), m_, m_, m_);
  for (int s = 0; s < n(); ++s) {
    const Jet3 j = evaluate_jet(components_[s], x);
    lg.y(s) = j.value() - offset_(s);
    for (int i = 0; i < m_; ++i) {
      lg.jac(s, i) = j.grad(i);
      for (int k = 0; k < m_; ++k) {
        lg.second(s, i, k) = j.hess(i, k);
        for (int l = 0; l < m_; ++l) (*lg.third)(s, i, k, l) = j.third(i, k, l);
      }
    }
  }
  return lg;
}

}  // namespace spacelike
