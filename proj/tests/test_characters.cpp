#include "doctest.h"
#include "oracles.hpp"
#include "voa/characters.hpp"
#include "voa/error.hpp"

using namespace voa;

TEST_CASE("partition series") {
  const QSeries p = partition_series(10);
  const auto parts = oracle::partitions(10);
  for (int k = 0; k <= 10; ++k) CHECK(p.coefficient(Rational(k)) == Rational(parts[static_cast<std::size_t>(k)]));
  CHECK(p.str() == "1 + q + 2q^2 + 3q^3 + 5q^4 + 7q^5 + 11q^6 + 15q^7 + 22q^8 + 30q^9 + 42q^10");
}

TEST_CASE("Heisenberg character") {
  const QSeries ch = character(heisenberg(), 0, 10, {{"lambda", Rational(0)}});
  CHECK(ch.offset() == rational(-1, 24));
  const auto parts = oracle::partitions(10);
  for (int k = 0; k <= 10; ++k) CHECK(ch.coefficient(Rational(k)) == Rational(parts[static_cast<std::size_t>(k)]));
  CHECK(character(heisenberg(), 0, 3, {{"lambda", Rational(1)}}).offset() == rational(11, 24));
  CHECK(character(heisenberg(), 0, 6, {{"lambda", Rational(0)}}).str() ==
        "q^{-1/24}(1 + q + 2q^2 + 3q^3 + 5q^4 + 7q^5 + 11q^6)");
  CHECK_THROWS_AS(character(heisenberg(), 0, 3), Error);
}

TEST_CASE("Virasoro character counts partitions into parts of size at least 2") {
  const QSeries ch = character(virasoro(), 0, 10, {{"c", rational(1, 2)}});
  CHECK(ch.offset() == rational(-1, 48));
  // p(k) - p(k-1) counts partitions of k with no part equal to 1.
  const auto p = oracle::partitions(10);
  for (int k = 0; k <= 10; ++k) {
    const long expected = p[static_cast<std::size_t>(k)] - (k ? p[static_cast<std::size_t>(k - 1)] : 0);
    CHECK(ch.coefficient(Rational(k)) == Rational(expected));
  }
}

TEST_CASE("affine and fermion characters") {
  // prod (1 - q^n)^{-3} for three currents.
  const QSeries p = partition_series(6);
  const QSeries cube = p * p * p;
  const QSeries ch = character(affine(lie_sl2()), 0, 6, {{"k", Rational(1)}});
  CHECK(ch.offset() == rational(-1, 24));
  for (int k = 0; k <= 6; ++k) CHECK(ch.coefficient(Rational(k)) == cube.coefficient(Rational(k)));
}

TEST_CASE("lattice theta characters equal sector sums") {
  for (int N = 1; N <= 3; ++N) {
    const int cutoff = 8;
    const ThetaCharacter t = lattice_theta_character(N, cutoff);
    const AlgebraInstance inst = lattice(N);
    QSeries sum = character(inst, 0, cutoff);
    for (std::int64_t m = 1; static_cast<int>(m * m * N) <= 2 * cutoff; ++m) {
      sum = sum + character(inst, m, cutoff);
      sum = sum + character(inst, -m, cutoff);
    }
    CHECK(sum == t.full);
    CHECK(t.full.offset() == rational(-1, 24));
  }
  const ThetaCharacter t2 = lattice_theta_character(2, 4);
  CHECK(t2.theta.coefficient(Rational(0)) == 1);
  CHECK(t2.theta.coefficient(Rational(1)) == 2);
  CHECK(t2.theta.coefficient(Rational(2)) == 0);
  CHECK(t2.theta.coefficient(Rational(4)) == 2);
}

TEST_CASE("lattice sector offsets") {
  const QSeries s1 = character(lattice(1), 1, 3);
  CHECK(s1.offset() == rational(11, 24));
  CHECK(s1.coefficient(Rational(0)) == 1);
  CHECK(s1.coefficient(Rational(2)) == 2);
  CHECK_THROWS_AS(character(heisenberg(), 1, 3, {{"lambda", Rational(0)}}), Error);
  CHECK_THROWS_AS(character(weyl(1), 0, 3), Error);
}

TEST_CASE("boson-fermion graded dimensions") {
  const CharacterComparison c = boson_fermion_character_check(8);
  CHECK_MESSAGE(c.ok, c.witness);
  REQUIRE(c.dims.size() == 9);
  // Both sides equal the coefficients of q^{-1/24} theta_{Z} / eta, read
  // at doubled degree: sum over m of p((t - m^2)/2).
  const QSeries p = partition_series(4);
  for (int t = 0; t <= 8; ++t) {
    Rational expected = 0;
    for (int m = -3; m <= 3; ++m) {
      const int rest = t - m * m;
      if (rest >= 0 && rest % 2 == 0) expected += p.coefficient(Rational(rest / 2));
    }
    CHECK(Rational(static_cast<unsigned long>(c.dims[static_cast<std::size_t>(t)].first)) == expected);
    CHECK(c.dims[static_cast<std::size_t>(t)].first == c.dims[static_cast<std::size_t>(t)].second);
  }
}

TEST_CASE("q-series arithmetic") {
  QSeries a(Rational(0), Rational(4)), b(rational(1, 2), Rational(4));
  a.add(Rational(0), Rational(1));
  a.add(Rational(1), Rational(-1));
  b.add(Rational(0), Rational(3));
  const QSeries s = a + b;
  CHECK(s.offset() == 0);
  CHECK(s.coefficient(rational(1, 2)) == 3);
  CHECK(s.str() == "1 + 3q^{1/2} - q");
  CHECK((a * a).coefficient(Rational(2)) == 1);
  CHECK(s.to_json().find("\"offset\"") != std::string::npos);
}
