#include <catch_amalgamated.hpp>

#include "bsdl/metrics.hpp"
#include "bsdl/rng.hpp"
#include "bsdl/synth.hpp"
#include "oracles.hpp"

using namespace bsdl;

TEST_CASE("generate_dictionary shape, norms, and determinism") {
  const Matrix dict = generate_dictionary(30, 60, 5);
  CHECK(dict.rows() == 30);
  CHECK(dict.cols() == 60);
  for (Eigen::Index j = 0; j < dict.cols(); ++j)
    CHECK(std::abs(dict.col(j).norm() - 1.0) < 1e-12);

  const Matrix tiny = generate_dictionary(1, 1, 9);
  CHECK(std::abs(std::abs(tiny(0, 0)) - 1.0) < 1e-15);

  const Matrix again = generate_dictionary(30, 60, 5);
  CHECK((dict - again).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("generate_block_structure lays out contiguous blocks") {
  const BlockStructure d = generate_block_structure(60, std::vector<int>(20, 3));
  for (int i = 0; i < 60; ++i) CHECK(d.label_of(i) == i / 3);
  CHECK(d.max_block_size() == 3);

  std::vector<int> mixed(12, 2);
  mixed.insert(mixed.end(), 12, 3);
  const BlockStructure dm = generate_block_structure(60, mixed);
  CHECK(dm.block_count() == 24);
  CHECK(dm.max_block_size() == 3);

  CHECK(generate_block_structure(3, {3}).labels() == std::vector<int>{0, 0, 0});
  CHECK_THROWS_AS(generate_block_structure(5, {3, 3}), SizeMismatch);
}

TEST_CASE("generate_signals produces exactly k-block-sparse columns") {
  const Matrix dict = generate_dictionary(30, 60, 11);
  const BlockStructure d = generate_block_structure(60, std::vector<int>(20, 3));
  auto [x, theta] = generate_signals(dict, d, 2, 100, 12);
  CHECK(x.rows() == 30);
  CHECK(x.cols() == 100);
  for (int i = 0; i < theta.cols(); ++i)
    CHECK(block_sparsity(theta.col(i), d) == 2);
  CHECK((x - dict * theta).lpNorm<Eigen::Infinity>() == 0.0);
  for (Eigen::Index c = 0; c < theta.cols(); ++c)
    for (Eigen::Index r = 0; r < theta.rows(); ++r)
      CHECK(std::abs(theta(r, c)) <= 1.0);
}

TEST_CASE("generate_signals with every block active") {
  const Matrix dict = generate_dictionary(8, 6, 13);
  const BlockStructure d = generate_block_structure(6, {2, 2, 2});
  auto [x, theta] = generate_signals(dict, d, 3, 10, 14);
  for (int i = 0; i < theta.cols(); ++i)
    CHECK(block_sparsity(theta.col(i), d) == 3);
}

TEST_CASE("generate_signals single-atom case and infeasible k") {
  const Matrix dict = generate_dictionary(5, 1, 15);
  const BlockStructure d({0}, 1);
  auto [x, theta] = generate_signals(dict, d, 1, 4, 16);
  for (int i = 0; i < x.cols(); ++i) {
    const double scale = theta(0, i);
    CHECK((x.col(i) - scale * dict.col(0)).norm() < 1e-15);
  }
  CHECK_THROWS_AS(generate_signals(dict, d, 2, 4, 17), InfeasibleSparsity);
}

TEST_CASE("add_noise hits the requested SNR exactly") {
  const Matrix x = generate_dictionary(10, 25, 21);
  const Matrix noisy = add_noise(x, 10.0, 22);
  const double snr = 10.0 * std::log10(x.squaredNorm() / (noisy - x).squaredNorm());
  CHECK(snr == Catch::Approx(10.0).margin(1e-10));

  const Matrix clean = add_noise(x, std::numeric_limits<double>::infinity(), 23);
  CHECK((clean - x).lpNorm<Eigen::Infinity>() == 0.0);

  const Matrix a = add_noise(x, 0.0, 24);
  const Matrix b = add_noise(x, 0.0, 24);
  CHECK((a - b).lpNorm<Eigen::Infinity>() == 0.0);

  CHECK_THROWS_AS(add_noise(Matrix::Zero(3, 3), 5.0, 25), ZeroSignal);
}

TEST_CASE("representation_error basics") {
  const Matrix dict = generate_dictionary(6, 9, 31);
  const BlockStructure d = generate_block_structure(9, {3, 3, 3});
  auto [x, theta] = generate_signals(dict, d, 1, 12, 32);
  CHECK(representation_error(x, dict, theta) < 1e-15);
  CHECK(representation_error(x, dict, Matrix::Zero(9, 12)) == Catch::Approx(1.0));
  CHECK_THROWS_AS(representation_error(Matrix::Zero(6, 12), dict, theta), ZeroSignal);
}

TEST_CASE("representation_error matches a rank-truncation ratio") {
  Rng rng(33);
  Matrix x(7, 11);
  for (Eigen::Index c = 0; c < x.cols(); ++c)
    for (Eigen::Index r = 0; r < x.rows(); ++r) x(r, c) = rng.normal();
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const int rank = 3;
  const Matrix u = svd.matrixU().leftCols(rank);
  const Matrix rest = Matrix(svd.singularValues().asDiagonal()).topLeftCorner(rank, rank) *
                      svd.matrixV().leftCols(rank).transpose();
  const double e = representation_error(x, u, rest);
  double tail = 0.0;
  for (Eigen::Index i = rank; i < svd.singularValues().size(); ++i)
    tail += svd.singularValues()[i] * svd.singularValues()[i];
  CHECK(e == Catch::Approx(std::sqrt(tail) / x.norm()).margin(1e-12));
}

TEST_CASE("block_distance endpoints") {
  const Matrix q = oracles::gram_schmidt(generate_dictionary(8, 4, 41));
  const Matrix s1 = q.leftCols(2);
  const Matrix s2 = q.rightCols(2);
  CHECK(block_distance(s1, s1) == Catch::Approx(0.0).margin(1e-12));
  CHECK(block_distance(s1, s2) == Catch::Approx(1.0).margin(1e-12));
  CHECK_THROWS_AS(block_distance(Matrix::Zero(8, 2), s1), ZeroBlock);
}

TEST_CASE("block_distance equals the principal-angle oracle") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Matrix s1 = generate_dictionary(9, 3, 100 + seed);
    const Matrix s2 = generate_dictionary(9, 2 + static_cast<int>(seed % 2), 200 + seed);
    const double via_lib = block_distance(s1, s2);
    const double via_angles = oracles::block_distance_principal_angles(s1, s2);
    CHECK(via_lib == Catch::Approx(via_angles).margin(1e-10));
    CHECK(via_lib == Catch::Approx(block_distance(s2, s1)).margin(1e-12));
  }
}

TEST_CASE("block_distance is invariant to in-block re-parameterization") {
  Rng rng(51);
  const Matrix s1 = generate_dictionary(8, 3, 52);
  const Matrix s2 = generate_dictionary(8, 3, 53);
  // Right-multiply by a random orthogonal matrix.
  Matrix g(3, 3);
  for (Eigen::Index c = 0; c < 3; ++c)
    for (Eigen::Index r = 0; r < 3; ++r) g(r, c) = rng.normal();
  const Matrix q = oracles::gram_schmidt(g);
  CHECK(block_distance(s1 * q, s2) ==
        Catch::Approx(block_distance(s1, s2)).margin(1e-10));
}

TEST_CASE("recovery_percentage is 100 for the truth itself and permutations") {
  const Matrix dict = generate_dictionary(12, 12, 61);
  const BlockStructure d = generate_block_structure(12, std::vector<int>(4, 3));
  CHECK(recovery_percentage(dict, d, dict, d) == 100.0);

  // Permute blocks and atoms within blocks, flip some signs.
  Matrix permuted(12, 12);
  const std::vector<int> order = {9, 11, 10, 3, 5, 4, 0, 1, 2, 7, 6, 8};
  for (int i = 0; i < 12; ++i)
    permuted.col(i) = (i % 2 ? -1.0 : 1.0) * dict.col(order[static_cast<std::size_t>(i)]);
  CHECK(recovery_percentage(permuted, d, dict, d) == 100.0);
  CHECK(recovery_percentage(permuted, d, dict, d, MatchMode::Optimal) == 100.0);
}

TEST_CASE("recovery_percentage of an unrelated dictionary is zero") {
  const Matrix truth = generate_dictionary(30, 60, 71);
  const Matrix other = generate_dictionary(30, 60, 72);
  const BlockStructure d = generate_block_structure(60, std::vector<int>(20, 3));
  CHECK(recovery_percentage(other, d, truth, d) == 0.0);
}

TEST_CASE("recovery_percentage counts true blocks in the denominator") {
  const Matrix truth = generate_dictionary(10, 6, 81);
  const BlockStructure d_true = generate_block_structure(6, {3, 3});
  // Learned structure splits the first true block in half: neither half
  // matches a 3-dimensional subspace.
  const BlockStructure d_learned = generate_block_structure(6, {2, 1, 3});
  const double p = recovery_percentage(truth, d_learned, truth, d_true);
  CHECK(p == 50.0);
}

TEST_CASE("oracle_run fits noiseless block-sparse data almost exactly") {
  const Matrix dict = generate_dictionary(30, 60, 91);
  const BlockStructure d = generate_block_structure(60, std::vector<int>(20, 3));
  auto [x, theta] = generate_signals(dict, d, 2, 120, 92);
  const auto [coded, e] = oracle_run(dict, d, x, 2);
  CHECK(e < 1e-6);
  for (int i = 0; i < coded.cols(); ++i)
    CHECK(block_sparsity(coded.col(i), d) <= 2);
}

TEST_CASE("oracle error shrinks with a larger block budget") {
  const Matrix dict = generate_dictionary(20, 40, 93);
  const BlockStructure d = generate_block_structure(40, std::vector<int>(10, 4));
  auto [x0, theta] = generate_signals(dict, d, 2, 50, 94);
  const Matrix x = add_noise(x0, 10.0, 95);
  const auto [t2, e2] = oracle_run(dict, d, x, 2);
  const auto [t3, e3] = oracle_run(dict, d, x, 3);
  CHECK(e3 <= e2 + 1e-12);
}
