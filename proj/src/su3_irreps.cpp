#include "bellchaos/su3_irreps.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace bellchaos {

namespace {

using Triplets = std::vector<Eigen::Triplet<cdouble>>;

SparseMatrixXcd from_triplets(std::size_t dim, const Triplets& t) {
  SparseMatrixXcd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

SparseMatrixXcd sparse_identity(std::size_t dim) {
  SparseMatrixXcd id(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  id.setIdentity();
  return id;
}

void validate_label(const IrrepLabel& label) {
  if (label.p < 0 || label.q < 0) throw std::invalid_argument("irrep labels must be non-negative");
  if (label.p > 10000 || label.q > 10000) throw std::invalid_argument("irrep label above 10^4");
}

}  // namespace

std::size_t irrep_dimension(const IrrepLabel& label) {
  validate_label(label);
  const auto p = static_cast<std::size_t>(label.p);
  const auto q = static_cast<std::size_t>(label.q);
  return (1 + p) * (1 + q) * (2 + p + q) / 2;
}

std::size_t IrrepLabel::dimension() const { return irrep_dimension(*this); }

std::optional<double> IrrepLabel::symmetry_ratio() const {
  if (p + q == 0) return std::nullopt;
  return static_cast<double>(p) / static_cast<double>(p + q);
}

std::vector<IrrepLabel> enumerate_irreps(int n) {
  if (n < 1) throw std::invalid_argument("enumerate_irreps: n must be at least 1");
  std::vector<IrrepLabel> out;
  for (int l3 = 0; 3 * l3 <= n; ++l3) {
    for (int l2 = l3; l2 + l2 + l3 <= n; ++l2) {
      const int l1 = n - l2 - l3;
      out.push_back(YoungDiagram{l1, l2, l3}.label());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<YoungDiagram> diagram_for(const IrrepLabel& label, int n) {
  const int rest = n - label.p - 2 * label.q;
  if (label.p < 0 || label.q < 0 || rest < 0 || rest % 3 != 0) return std::nullopt;
  const int l3 = rest / 3;
  return YoungDiagram{label.p + label.q + l3, label.q + l3, l3};
}

long long schur_weyl_multiplicity(const IrrepLabel& label, int n) {
  const auto diagram = diagram_for(label, n);
  if (!diagram) return 0;
  if (n > 38) throw std::invalid_argument("schur_weyl_multiplicity: n above 38");
  // Standard Young tableaux counted through the branching rule: removing the
  // box holding n leaves a standard tableau of a diagram with one box fewer.
  std::map<std::array<int, 3>, long long> memo;
  auto count = [&](auto&& self, int a, int b, int c) -> long long {
    if (a + b + c == 0) return 1;
    const std::array<int, 3> k{a, b, c};
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    long long total = 0;
    if (a > b) total += self(self, a - 1, b, c);
    if (b > c) total += self(self, a, b - 1, c);
    if (c > 0) total += self(self, a, b, c - 1);
    memo.emplace(k, total);
    return total;
  };
  return count(count, diagram->l1, diagram->l2, diagram->l3);
}

SparseMatrixXcd IrrepBasis::s(int a, int b) const {
  if (a < 0 || a > 2 || b < 0 || b > 2) throw std::out_of_range("IrrepBasis::s: index");
  if (a != b) {
    static constexpr int kOffDiagonal[3][3] = {
        {-1, kTPlus, kVPlus}, {kTMinus, -1, kUPlus}, {kVMinus, kUMinus, -1}};
    return ops[static_cast<std::size_t>(kOffDiagonal[a][b])];
  }
  Triplets t;
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    const auto [m12, m22, m11] = patterns[k];
    const int total = label.p + 2 * label.q;
    const int weight = a == 0 ? m11 : a == 1 ? m12 + m22 - m11 : total - m12 - m22;
    const auto i = static_cast<Eigen::Index>(k);
    t.emplace_back(i, i, static_cast<double>(weight));
  }
  return from_triplets(patterns.size(), t);
}

SparseMatrixXcd IrrepBasis::hypercharge() const {
  return SparseMatrixXcd((s(0, 0) + s(1, 1) - 2.0 * s(2, 2)) / 3.0);
}

SparseMatrixXcd IrrepBasis::casimir() const {
  const double total = static_cast<double>(label.p + 2 * label.q);
  const SparseMatrixXcd id = sparse_identity(dimension());
  SparseMatrixXcd c(static_cast<Eigen::Index>(dimension()), static_cast<Eigen::Index>(dimension()));
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a == b) {
        const SparseMatrixXcd shifted = s(a, a) - (total / 3.0) * id;
        c += shifted * shifted;
      } else {
        c += s(a, b) * s(b, a);
      }
    }
  }
  return SparseMatrixXcd(0.5 * c);
}

double casimir_eigenvalue(const IrrepLabel& label) {
  const double p = label.p, q = label.q;
  return (p * p + q * q + p * q + 3 * p + 3 * q) / 3.0;
}

IrrepBasis irrep_generators(const IrrepLabel& label) {
  const std::size_t dim = irrep_dimension(label);
  check_dense_budget(dim, "irrep_generators");

  IrrepBasis basis;
  basis.label = label;
  const int m13 = label.p + label.q, m23 = label.q, m33 = 0;

  basis.patterns.reserve(dim);
  for (int m12 = m13; m12 >= m23; --m12)
    for (int m22 = m23; m22 >= m33; --m22)
      for (int m11 = m12; m11 >= m22; --m11) basis.patterns.push_back({m12, m22, m11});

  auto key = [&](int m12, int m22, int m11) {
    return (static_cast<long long>(m12) * (m13 + 1) + m22) * (m13 + 1) + m11;
  };
  std::unordered_map<long long, Eigen::Index> index;
  index.reserve(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const auto [m12, m22, m11] = basis.patterns[k];
    index.emplace(key(m12, m22, m11), static_cast<Eigen::Index>(k));
  }

  Triplets e12, e23, t3, u3;
  for (std::size_t k = 0; k < dim; ++k) {
    const auto [m12, m22, m11] = basis.patterns[k];
    const auto src = static_cast<Eigen::Index>(k);

    if (m11 < m12) {
      const double c = std::sqrt(static_cast<double>((m12 - m11) * (m11 - m22 + 1)));
      e12.emplace_back(index.at(key(m12, m22, m11 + 1)), src, c);
    }

    // Shifted labels l_{ki} = m_{ki} - i + 1.
    const long long l13 = m13, l23 = m23 - 1, l33 = m33 - 2;
    const long long l12 = m12, l22 = m22 - 1, l11 = m11;
    if (m12 + 1 <= m13) {
      const long long num = -(l12 - l13) * (l12 - l23) * (l12 - l33) * (l12 - l11 + 1);
      const long long den = (l12 - l22 + 1) * (l12 - l22);
      e23.emplace_back(index.at(key(m12 + 1, m22, m11)), src,
                       std::sqrt(static_cast<double>(num) / static_cast<double>(den)));
    }
    if (m22 + 1 <= m23 && m22 + 1 <= m11) {
      const long long num = -(l22 - l13) * (l22 - l23) * (l22 - l33) * (l22 - l11 + 1);
      const long long den = (l22 - l12 + 1) * (l22 - l12);
      e23.emplace_back(index.at(key(m12, m22 + 1, m11)), src,
                       std::sqrt(static_cast<double>(num) / static_cast<double>(den)));
    }

    const double w0 = m11;
    const double w1 = m12 + m22 - m11;
    const double w2 = (m13 + m23 + m33) - (m12 + m22);
    t3.emplace_back(src, src, 0.5 * (w0 - w1));
    u3.emplace_back(src, src, 0.5 * (w1 - w2));
  }

  const SparseMatrixXcd t_plus = from_triplets(dim, e12);
  const SparseMatrixXcd u_plus = from_triplets(dim, e23);
  SparseMatrixXcd v_plus = SparseMatrixXcd(t_plus * u_plus) - SparseMatrixXcd(u_plus * t_plus);
  v_plus.prune(cdouble(0.0));
  v_plus.makeCompressed();

  basis.ops[kId] = sparse_identity(dim);
  basis.ops[kTPlus] = t_plus;
  basis.ops[kTMinus] = t_plus.adjoint();
  basis.ops[kT3] = from_triplets(dim, t3);
  basis.ops[kVPlus] = v_plus;
  basis.ops[kVMinus] = v_plus.adjoint();
  basis.ops[kUPlus] = u_plus;
  basis.ops[kUMinus] = u_plus.adjoint();
  basis.ops[kU3] = from_triplets(dim, u3);
  return basis;
}

std::shared_ptr<const IrrepBasis> cached_irrep_generators(const IrrepLabel& label) {
  static std::mutex mutex;
  static std::map<IrrepLabel, std::shared_ptr<const IrrepBasis>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(label); it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const IrrepBasis>(irrep_generators(label));
  std::lock_guard lock(mutex);
  cache[label] = built;
  return built;
}

GramMatrix gram_matrix(const IrrepBasis& fundamental) {
  if (fundamental.label != IrrepLabel{1, 0}) {
    throw std::invalid_argument("gram_matrix: expects the (1,0) irrep");
  }
  std::array<QutritOperator, kBasisSize> v;
  for (int i = 0; i < kBasisSize; ++i) v[static_cast<std::size_t>(i)] = fundamental.dense(i);
  GramMatrix g;
  for (int i = 0; i < kBasisSize; ++i)
    for (int j = 0; j < kBasisSize; ++j)
      g(i, j) = (v[static_cast<std::size_t>(i)].adjoint() * v[static_cast<std::size_t>(j)]).trace();
  return g;
}

namespace {

struct FundamentalData {
  std::array<QutritOperator, kBasisSize> basis;
  Eigen::FullPivLU<GramMatrix> solver;
};

const FundamentalData& fundamental_data() {
  static const FundamentalData data = [] {
    const IrrepBasis fundamental = irrep_generators({1, 0});
    FundamentalData d;
    for (int i = 0; i < kBasisSize; ++i) d.basis[static_cast<std::size_t>(i)] = fundamental.dense(i);
    const GramMatrix g = gram_matrix(fundamental);
    d.solver.compute(g);
    if (!d.solver.isInvertible()) throw NumericalError("singular Gram matrix for the (1,0) basis");
    return d;
  }();
  return data;
}

}  // namespace

LiftCoefficients lift_coefficients(const QutritOperator& a, int n) {
  const FundamentalData& data = fundamental_data();
  LiftCoefficients b;
  for (int i = 0; i < kBasisSize; ++i) {
    b(i) = (data.basis[static_cast<std::size_t>(i)].adjoint() * a).trace();
  }
  LiftCoefficients x = data.solver.solve(b);
  x(kId) *= static_cast<double>(n);
  return x;
}

SparseMatrixXcd expand_lift(const LiftCoefficients& x, const IrrepBasis& basis) {
  SparseMatrixXcd out(static_cast<Eigen::Index>(basis.dimension()),
                      static_cast<Eigen::Index>(basis.dimension()));
  for (int i = 0; i < kBasisSize; ++i) {
    if (x(i) != cdouble(0.0)) out += x(i) * basis.ops[static_cast<std::size_t>(i)];
  }
  return out;
}

CollectiveOperator lift_one_body(const QutritOperator& a, const IrrepLabel& label, int n) {
  if (n < 1) throw std::invalid_argument("lift_one_body: n must be at least 1");
  const auto basis = cached_irrep_generators(label);
  return {MatrixXcd(expand_lift(lift_coefficients(a, n), *basis)), label, n};
}

CollectiveOperator lift_two_body(const QutritOperator& a, const QutritOperator& b,
                                 const IrrepLabel& label, int n) {
  if (n < 1) throw std::invalid_argument("lift_two_body: n must be at least 1");
  const auto basis = cached_irrep_generators(label);
  const SparseMatrixXcd la = expand_lift(lift_coefficients(a, n), *basis);
  const SparseMatrixXcd lb = expand_lift(lift_coefficients(b, n), *basis);
  const SparseMatrixXcd lab = expand_lift(lift_coefficients(a * b, n), *basis);
  return {MatrixXcd(SparseMatrixXcd(la * lb) - lab), label, n};
}

}  // namespace bellchaos
