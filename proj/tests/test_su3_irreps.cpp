#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "bellchaos/su3_irreps.hpp"
#include "support/oracles.hpp"

using namespace bellchaos;

namespace {

double max_abs(const MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

MatrixXcd comm(const MatrixXcd& a, const MatrixXcd& b) { return a * b - b * a; }

// [S_ab, S_cd] = delta_bc S_ad - delta_ad S_cb for every pair of generators.
double gl3_defect(const IrrepBasis& basis) {
  MatrixXcd s[3][3];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) s[a][b] = MatrixXcd(basis.s(a, b));
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  double worst = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
          MatrixXcd expected = MatrixXcd::Zero(dim, dim);
          if (b == c) expected += s[a][d];
          if (a == d) expected -= s[c][b];
          worst = std::max(worst, max_abs(comm(s[a][b], s[c][d]) - expected));
        }
  return worst;
}

}  // namespace

TEST_CASE("irrep dimensions") {
  CHECK(irrep_dimension({21, 2}) == 825);
  CHECK(irrep_dimension({9, 8}) == 855);
  CHECK(irrep_dimension({0, 0}) == 1);
  CHECK(irrep_dimension({1, 0}) == 3);
  CHECK(irrep_dimension({1, 1}) == 8);
  CHECK(IrrepLabel{25, 0}.dimension() == 351);
  CHECK_THROWS_AS(irrep_dimension({-1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(irrep_dimension({0, 10001}), std::invalid_argument);
}

TEST_CASE("symmetry ratio") {
  CHECK_FALSE(IrrepLabel{0, 0}.symmetry_ratio().has_value());
  CHECK(*IrrepLabel{25, 0}.symmetry_ratio() == 1.0);
  CHECK(*IrrepLabel{0, 3}.symmetry_ratio() == 0.0);
  CHECK(*IrrepLabel{21, 2}.symmetry_ratio() == doctest::Approx(21.0 / 23.0));
}

TEST_CASE("irreps of small tensor powers") {
  const auto two = enumerate_irreps(2);
  CHECK(std::set<IrrepLabel>(two.begin(), two.end()) == std::set<IrrepLabel>{{2, 0}, {0, 1}});
  const auto three = enumerate_irreps(3);
  CHECK(std::set<IrrepLabel>(three.begin(), three.end()) == std::set<IrrepLabel>{{3, 0}, {1, 1}, {0, 0}});
  CHECK(std::is_sorted(three.begin(), three.end()));
  CHECK(schur_weyl_multiplicity({1, 1}, 3) == 2);
  CHECK(schur_weyl_multiplicity({2, 0}, 3) == 0);
  CHECK(enumerate_irreps(25).size() == 65);
}

TEST_CASE("Schur-Weyl dimension count against hook lengths") {
  for (int n : {1, 2, 3, 4, 5, 8, 12, 25}) {
    CAPTURE(n);
    long long total = 0;
    long long expected = 1;
    for (int i = 0; i < n; ++i) expected *= 3;
    for (const IrrepLabel& label : enumerate_irreps(n)) {
      const auto diagram = diagram_for(label, n);
      REQUIRE(diagram.has_value());
      CHECK(diagram->size() == n);
      CHECK(diagram->label() == label);
      const long long mult = oracle::hook_length_multiplicity(*diagram);
      CHECK(schur_weyl_multiplicity(label, n) == mult);
      total += static_cast<long long>(label.dimension()) * mult;
    }
    CHECK(total == expected);
  }
  CHECK_FALSE(diagram_for({1, 0}, 2).has_value());
}

TEST_CASE("fundamental representation") {
  const IrrepBasis f = irrep_generators({1, 0});
  REQUIRE(f.dimension() == 3);
  const Eigen::Vector3cd t3(0.5, -0.5, 0.0);
  CHECK(max_abs(f.dense(kT3) - MatrixXcd(t3.asDiagonal())) < 1e-12);
  // S_ab is the matrix unit |a><b| on the computational basis
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      MatrixXcd e = MatrixXcd::Zero(3, 3);
      e(a, b) = 1.0;
      CHECK(max_abs(MatrixXcd(f.s(a, b)) - e) < 1e-12);
    }
}

TEST_CASE("adjoint representation Casimir") {
  const IrrepBasis adj = irrep_generators({1, 1});
  REQUIRE(adj.dimension() == 8);
  CHECK(casimir_eigenvalue({1, 1}) == doctest::Approx(3.0));
  CHECK(max_abs(MatrixXcd(adj.casimir()) - 3.0 * MatrixXcd::Identity(8, 8)) < 1e-10);
}

TEST_CASE("generator algebra across irreps") {
  for (int n = 1; n <= 7; ++n)
    for (const IrrepLabel& label : enumerate_irreps(n)) {
      CAPTURE(label.p);
      CAPTURE(label.q);
      const IrrepBasis basis = irrep_generators(label);
      const auto dim = static_cast<Eigen::Index>(basis.dimension());
      REQUIRE(basis.dimension() == label.dimension());
      REQUIRE(basis.patterns.size() == basis.dimension());
      CHECK(gl3_defect(basis) < 1e-9);
      const MatrixXcd t3 = basis.dense(kT3), u3 = basis.dense(kU3);
      CHECK(max_abs(t3 - t3.adjoint()) < 1e-12);
      CHECK(max_abs(MatrixXcd(basis.hypercharge()) - MatrixXcd(basis.hypercharge()).adjoint()) < 1e-12);
      CHECK(max_abs(basis.dense(kTPlus).adjoint() - basis.dense(kTMinus)) < 1e-12);
      CHECK(max_abs(basis.dense(kVPlus).adjoint() - basis.dense(kVMinus)) < 1e-12);
      CHECK(max_abs(basis.dense(kUPlus).adjoint() - basis.dense(kUMinus)) < 1e-12);
      CHECK(max_abs(comm(t3, basis.dense(kTPlus)) - basis.dense(kTPlus)) < 1e-9);
      CHECK(max_abs(comm(basis.dense(kTPlus), basis.dense(kTMinus)) - 2.0 * t3) < 1e-9);
      CHECK(max_abs(comm(basis.dense(kUPlus), basis.dense(kUMinus)) - 2.0 * u3) < 1e-9);
      CHECK(max_abs(comm(basis.dense(kVPlus), basis.dense(kVMinus)) - 2.0 * (t3 + u3)) < 1e-9);
      CHECK(max_abs(basis.dense(kId) - MatrixXcd::Identity(dim, dim)) == 0.0);
      const double c = casimir_eigenvalue(label);
      CHECK(max_abs(MatrixXcd(basis.casimir()) - c * MatrixXcd::Identity(dim, dim)) < 1e-8);
    }
}

TEST_CASE("highest weight state") {
  for (const IrrepLabel label : {IrrepLabel{1, 0}, IrrepLabel{0, 1}, IrrepLabel{3, 2}, IrrepLabel{21, 2}, IrrepLabel{9, 8}}) {
    const IrrepBasis basis = irrep_generators(label);
    Eigen::VectorXcd mu = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dimension()));
    mu(0) = 1.0;
    CHECK((basis.dense(kT3) * mu - 0.5 * label.p * mu).norm() < 1e-10);
    CHECK((MatrixXcd(basis.hypercharge()) * mu - (label.p + 2.0 * label.q) / 3.0 * mu).norm() < 1e-10);
    for (const int raise : {kTPlus, kUPlus, kVPlus}) CHECK((basis.dense(raise) * mu).norm() < 1e-10);
  }
}

TEST_CASE("cached generators are shared") {
  const auto a = cached_irrep_generators({4, 3});
  const auto b = cached_irrep_generators({4, 3});
  CHECK(a.get() == b.get());
  CHECK(a->dimension() == 90);
}

TEST_CASE("Gram matrix of the fundamental basis") {
  const GramMatrix g = gram_matrix(irrep_generators({1, 0}));
  CHECK(std::abs(g(0, 0) - 3.0) < 1e-14);
  CHECK((g - g.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(g.determinant()) > 1e-6);
}

TEST_CASE("one-body lifts") {
  const int n = 6;
  const IrrepLabel label{2, 2};
  const auto dim = static_cast<Eigen::Index>(label.dimension());
  const auto id = lift_one_body(QutritOperator::Identity(), label, n);
  CHECK(max_abs(id.matrix - n * MatrixXcd::Identity(dim, dim)) < 1e-12);

  const QutritOperator t3 = Eigen::Vector3cd(0.5, -0.5, 0.0).asDiagonal();
  CHECK(max_abs(lift_one_body(t3, label, n).matrix - irrep_generators(label).dense(kT3)) < 1e-12);

  const QutritOperator a = oracle::random_complex(1), b = oracle::random_complex(2);
  const cdouble alpha(0.3, -1.2), beta(-2.0, 0.5);
  const MatrixXcd combined = lift_one_body(alpha * a + beta * b, label, n).matrix;
  CHECK(max_abs(combined - alpha * lift_one_body(a, label, n).matrix - beta * lift_one_body(b, label, n).matrix) < 1e-10);
  CHECK(max_abs(lift_one_body(a.adjoint(), label, n).matrix - lift_one_body(a, label, n).matrix.adjoint()) < 1e-10);
}

TEST_CASE("two-body lifts") {
  const int n = 5;
  const IrrepLabel label{3, 1};
  const auto dim = static_cast<Eigen::Index>(label.dimension());
  const auto id = lift_two_body(QutritOperator::Identity(), QutritOperator::Identity(), label, n);
  CHECK(max_abs(id.matrix - n * (n - 1) * MatrixXcd::Identity(dim, dim)) < 1e-10);

  const Eigen::Vector3cd v = Eigen::Vector3cd(1.0, cdouble(0, 2), -1.0).normalized();
  const QutritOperator p = v * v.adjoint();
  const MatrixXcd lp = lift_one_body(p, label, n).matrix;
  CHECK(max_abs(lift_two_body(p, p, label, n).matrix - (lp * lp - lp)) < 1e-10);
}

TEST_CASE("lifts agree with the tensor-product construction") {
  for (int n : {2, 3}) {
    for (const IrrepLabel& label : enumerate_irreps(n)) {
      CAPTURE(n);
      CAPTURE(label.p);
      CAPTURE(label.q);
      const IrrepBasis basis = irrep_generators(label);
      const MatrixXcd w = oracle::intertwiner(basis, n);
      const auto dim = static_cast<Eigen::Index>(basis.dimension());
      CHECK(max_abs(w.adjoint() * w - MatrixXcd::Identity(dim, dim)) < 1e-9);
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const QutritOperator a = oracle::random_hermitian(10 + seed);
        const QutritOperator b = oracle::random_complex(20 + seed);
        const MatrixXcd one = w.adjoint() * oracle::collective(a, n) * w;
        CHECK(max_abs(lift_one_body(a, label, n).matrix - one) < 1e-9);
        const MatrixXcd two = w.adjoint() * oracle::pair_sum(a, b, n) * w;
        CHECK(max_abs(lift_two_body(a, b, label, n).matrix - two) < 1e-9);
      }
    }
  }
}

TEST_CASE("two-qutrit blocks reassemble the full operator spectrum") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const QutritOperator a = oracle::random_hermitian(100 + seed);
    const QutritOperator b = oracle::random_hermitian(200 + seed);
    const MatrixXcd full = oracle::collective(a, 2) + oracle::pair_sum(a, b, 2);
    std::vector<double> pooled;
    for (const IrrepLabel& label : enumerate_irreps(2)) {
      const auto block = oracle::sorted_spectrum(lift_one_body(a, label, 2).matrix +
                                                 lift_two_body(a, b, label, 2).matrix);
      pooled.insert(pooled.end(), block.begin(), block.end());
    }
    std::sort(pooled.begin(), pooled.end());
    CHECK(oracle::multiset_distance(pooled, oracle::sorted_spectrum(full)) < 1e-9);
  }
}
