#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "simvec/error.hpp"
#include "simvec/lsi.hpp"
#include "simvec/rng.hpp"

using namespace simvec;

namespace {

TokenStream ts(std::string id, std::vector<std::string> tokens) {
  return {std::move(id), Field::kTitle, std::move(tokens)};
}

TermDocMatrix from_dense(const Eigen::MatrixXd& d) {
  TermDocMatrix m;
  m.x = d.sparseView();
  return m;
}

Eigen::MatrixXd random_sparse(Rng& rng, int rows, int cols, double density) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (rng.uniform() < density) d(i, j) = rng.uniform(0.0, 3.0);
  return d;
}

Eigen::MatrixXd reconstruct(const LsiModel& m) {
  return m.v() * m.sigma().asDiagonal() * m.u().transpose();
}

double orthonormality_error(const Eigen::MatrixXd& q) {
  return (q.transpose() * q - Eigen::MatrixXd::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("lsi") {

TEST_CASE("build_matrix weightings") {
  std::vector<TokenStream> s{ts("0", {"a", "a"})};
  auto v = build_vocabulary(s);
  auto raw = build_matrix(s, v, MatrixWeighting::kRawCount);
  CHECK(raw.x.coeff(0, *v.index("a")) == 2.0);
  auto bin = build_matrix(s, v, MatrixWeighting::kBinary);
  CHECK(bin.x.coeff(0, *v.index("a")) == 1.0);
  auto tf = build_matrix(s, v, MatrixWeighting::kTfidf);
  CHECK(tf.x.nonZeros() == 0);
  CHECK(parse_weighting("raw-count") == MatrixWeighting::kRawCount);
  CHECK_THROWS_AS(parse_weighting("bogus"), Error);
}

TEST_CASE("truncated_svd examples") {
  Eigen::MatrixXd a(2, 2);
  a << 2, 0, 0, 0;
  auto m = truncated_svd(from_dense(a), 1);
  CHECK(m.sigma()[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK((reconstruct(m) - a).norm() <= 1e-14);

  auto id = truncated_svd(from_dense(Eigen::MatrixXd::Identity(2, 2)), 1);
  CHECK(id.sigma()[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((reconstruct(id) - Eigen::MatrixXd::Identity(2, 2)).norm() ==
        doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(4);
  Eigen::MatrixXd f = random_sparse(rng, 7, 5, 0.9);
  auto full = truncated_svd(from_dense(f), 5);
  CHECK((reconstruct(full) - f).norm() <= 1e-8 * f.norm());
}

TEST_CASE("truncated_svd errors") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 2);
  CHECK_THROWS_AS(truncated_svd(from_dense(a), 3), Error);
  CHECK_THROWS_AS(truncated_svd(from_dense(a), 0), Error);
  CHECK_THROWS_AS(truncated_svd(from_dense(Eigen::MatrixXd::Zero(3, 2)), 1), Error);
  Eigen::MatrixXd r1(2, 2);
  r1 << 1, 1, 1, 1;
  CHECK_THROWS_AS(truncated_svd(from_dense(r1), 2), Error);
  LsiOptions bad;
  bad.decay = 0.0;
  CHECK_THROWS_AS(truncated_svd(from_dense(a), 1, bad), Error);
}

TEST_CASE("dense path matches the reference SVD") {
  Rng rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    const int rows = 10 + static_cast<int>(rng.below(60));
    const int cols = 10 + static_cast<int>(rng.below(80));
    Eigen::MatrixXd d = random_sparse(rng, rows, cols, 0.15);
    const int k = 1 + static_cast<int>(rng.below(std::min(rows, cols) / 2));
    Eigen::BDCSVD<Eigen::MatrixXd> ref(d, Eigen::ComputeThinU | Eigen::ComputeThinV);
    auto m = truncated_svd(from_dense(d), k);
    double tail = 0.0;
    for (Eigen::Index i = k; i < ref.singularValues().size(); ++i)
      tail += ref.singularValues()[i] * ref.singularValues()[i];
    for (int i = 0; i < k; ++i)
      CHECK(std::abs(m.sigma()[i] - ref.singularValues()[i]) <= 1e-8 * ref.singularValues()[i]);
    const double err = (reconstruct(m) - d).norm();
    CHECK(std::abs(err - std::sqrt(tail)) <= 1e-6 * std::max(std::sqrt(tail), 1e-12) + 1e-10);
    CHECK(orthonormality_error(m.u()) <= 1e-8);
    CHECK(orthonormality_error(m.v()) <= 1e-8);
    for (int i = 1; i < k; ++i) CHECK(m.sigma()[i] <= m.sigma()[i - 1]);
  }
}

TEST_CASE("jacobi_svd of a wide and a tall matrix") {
  Rng rng(2);
  for (auto [r, c] : {std::pair{4, 9}, std::pair{9, 4}}) {
    Eigen::MatrixXd d = random_sparse(rng, r, c, 0.7);
    auto s = jacobi_svd(d);
    CHECK((s.left * s.sigma.asDiagonal() * s.right.transpose() - d).norm() <= 1e-12 * d.norm());
    Eigen::JacobiSVD<Eigen::MatrixXd> ref(d);
    CHECK((s.sigma - ref.singularValues()).norm() <= 1e-12 * d.norm());
  }
}

TEST_CASE("randomized solver recovers a low-rank matrix") {
  Rng rng(8);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(300, 400);
  for (int r = 0; r < 5; ++r) {
    Eigen::VectorXd x(300), y(400);
    for (auto& e : x) e = rng.normal();
    for (auto& e : y) e = rng.normal();
    a += (10.0 - r) * x * y.transpose();
  }
  Eigen::BDCSVD<Eigen::MatrixXd> ref(a);
  LsiOptions opt;
  opt.solver = SvdSolver::kRandomized;
  opt.randomized.seed = 3;
  auto m = truncated_svd(from_dense(a), 5, opt);
  for (int i = 0; i < 5; ++i)
    CHECK(std::abs(m.sigma()[i] - ref.singularValues()[i]) <= 1e-8 * ref.singularValues()[i]);
  CHECK((reconstruct(m) - a).norm() <= 1e-8 * a.norm());
}

TEST_CASE("chunked accumulation is exact when the rank fits") {
  Rng rng(5);
  Eigen::MatrixXd basis = random_sparse(rng, 3, 40, 0.5);
  Eigen::MatrixXd mix(60, 3);
  for (auto& e : mix.reshaped()) e = rng.uniform();
  Eigen::MatrixXd d = mix * basis;
  auto whole = truncated_svd(from_dense(d), 3);
  LsiOptions opt;
  opt.chunksize = 7;
  auto chunked = truncated_svd(from_dense(d), 3, opt);
  CHECK((whole.sigma() - chunked.sigma()).norm() <= 1e-9 * whole.sigma().norm());
  CHECK((reconstruct(chunked) - d).norm() <= 1e-9 * d.norm());
  CHECK(orthonormality_error(chunked.u()) <= 1e-8);

  opt.decay = 0.5;
  auto decayed = truncated_svd(from_dense(d), 3, opt);
  CHECK(decayed.sigma()[0] < whole.sigma()[0]);
}

TEST_CASE("doc_vector and fold_in") {
  LsiModel::RowMatrix u(2, 2), v(1, 2);
  u << 1, 0, 0, 1;
  v << 0.5, 0.5;
  Eigen::VectorXd sigma(2);
  sigma << 2, 1;
  LsiModel m(u, sigma, v);
  CHECK(m.doc_vector(0).values == std::vector<double>{1.0, 0.5});
  CHECK_THROWS_AS(m.doc_vector(1), Error);

  Rng rng(21);
  Eigen::MatrixXd d = random_sparse(rng, 8, 12, 0.5);
  auto full = truncated_svd(from_dense(d), 8);
  for (int j = 0; j < 8; ++j) {
    std::vector<SparseEntry> e;
    for (int t = 0; t < 12; ++t)
      if (d(j, t) != 0.0) e.push_back({static_cast<TermIndex>(t), d(j, t)});
    auto f = full.fold_in(SparseVector::from_unsorted(e, 12));
    auto dv = full.doc_vector(static_cast<std::size_t>(j));
    for (int i = 0; i < 8; ++i) CHECK(std::abs(f.values[i] - dv.values[i]) <= 1e-6 * norm(dv));
  }
  auto zero = full.fold_in(SparseVector{{}, 12});
  CHECK(norm(zero) == 0.0);
  std::vector<SparseEntry> col;
  for (int t = 0; t < 12; ++t) col.push_back({static_cast<TermIndex>(t), full.u()(t, 0)});
  auto e1 = full.fold_in(SparseVector::from_unsorted(col, 12));
  CHECK(e1.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosine(e1, e1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(full.fold_in(SparseVector{{}, 11}), Error);
}

TEST_CASE("signs are fixed by the term factor") {
  Rng rng(13);
  Eigen::MatrixXd d = random_sparse(rng, 15, 20, 0.3);
  auto m = truncated_svd(from_dense(d), 4);
  for (int j = 0; j < 4; ++j) {
    Eigen::Index at;
    m.u().col(j).cwiseAbs().maxCoeff(&at);
    CHECK(m.u()(at, j) > 0.0);
  }
  auto again = truncated_svd(from_dense(d), 4);
  CHECK(m.u() == again.u());
  CHECK(m.v() == again.v());
}

TEST_CASE("save and load round trip") {
  Rng rng(17);
  auto m = truncated_svd(from_dense(random_sparse(rng, 10, 14, 0.4)), 3);
  std::stringstream buf;
  m.save(buf);
  auto back = LsiModel::load(buf);
  CHECK(back.u() == m.u());
  CHECK(back.sigma() == m.sigma());
  CHECK(back.v() == m.v());
  std::stringstream junk("not a model");
  CHECK_THROWS_AS(LsiModel::load(junk), Error);
}

}  // TEST_SUITE
