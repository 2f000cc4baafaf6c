#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "csi/data_model.hpp"
#include "csi/rng.hpp"

using namespace csi;

namespace {

FeatureMatrix random_sparse(std::size_t n, std::size_t d, Rng& rng) {
  std::vector<std::size_t> row_offsets{0};
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (rng.uniform() < 0.4) {
        idx.push_back(static_cast<std::uint32_t>(j));
        val.push_back(rng.normal());
      }
    }
    row_offsets.push_back(idx.size());
  }
  return FeatureMatrix::sparse(n, d, std::move(row_offsets), std::move(idx),
                               std::move(val));
}

Vector random_vector(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& e : v) e = rng.normal();
  return Vector(std::move(v));
}

}  // namespace

TEST_CASE("vector rejects non-finite entries at construction") {
  CHECK_THROWS_AS(Vector({1.0, std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(Vector({std::numeric_limits<double>::infinity()}),
                  std::invalid_argument);
  CHECK_NOTHROW(Vector({0.0, -1e308}));
}

TEST_CASE("matvec on identity and zero matrices") {
  const auto eye = FeatureMatrix::dense(2, 2, {1, 0, 0, 1});
  const Vector w({3.0, -4.0});
  const Vector out = matvec(eye, w);
  CHECK(out[0] == 3.0);
  CHECK(out[1] == -4.0);

  const auto zero = FeatureMatrix::dense(3, 2, std::vector<double>(6, 0.0));
  const Vector z = matvec(zero, w);
  for (std::size_t i = 0; i < 3; ++i) CHECK(z[i] == 0.0);
}

TEST_CASE("sparse row dot product") {
  // row {(0,1),(2,2)} with d=3, w=[1,1,1] -> 3
  const auto m = FeatureMatrix::sparse(1, 3, {0, 2}, {0, 2}, {1.0, 2.0});
  const Vector out = matvec(m, Vector({1.0, 1.0, 1.0}));
  CHECK(out[0] == 3.0);
}

TEST_CASE("transpose_matvec hand cases") {
  const auto eye = FeatureMatrix::dense(2, 2, {1, 0, 0, 1});
  const Vector v({5.0, 7.0});
  CHECK(transpose_matvec(eye, v) == v);

  const auto m = FeatureMatrix::dense(2, 2, {1, 0, 1, 0});
  const Vector out = transpose_matvec(m, Vector({1.0, 1.0}));
  CHECK(out[0] == 2.0);
  CHECK(out[1] == 0.0);

  const Vector zeros = transpose_matvec(m, Vector({0.0, 0.0}));
  CHECK(zeros[0] == 0.0);
  CHECK(zeros[1] == 0.0);
}

TEST_CASE("dimension mismatches raise") {
  const auto m = FeatureMatrix::dense(2, 3, std::vector<double>(6, 1.0));
  CHECK_THROWS_AS(matvec(m, Vector({1.0, 2.0})), std::invalid_argument);
  CHECK_THROWS_AS(transpose_matvec(m, Vector({1.0, 2.0, 3.0})), std::invalid_argument);
}

TEST_CASE("sparse construction validates indices") {
  CHECK_THROWS_AS(FeatureMatrix::sparse(1, 3, {0, 2}, {2, 1}, {1.0, 1.0}),
                  std::invalid_argument);  // not increasing
  CHECK_THROWS_AS(FeatureMatrix::sparse(1, 3, {0, 1}, {3}, {1.0}),
                  std::invalid_argument);  // out of range
}

TEST_CASE("adjointness: <Xw, v> == <w, X^T v>") {
  Rng rng(4242);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 1 + rng.integer(12), d = 1 + rng.integer(12);
    std::vector<double> x(n * d);
    for (double& e : x) e = rng.normal();
    const auto m = FeatureMatrix::dense(n, d, std::move(x));
    const Vector w = random_vector(d, rng);
    const Vector v = random_vector(n, rng);
    const Vector xw = matvec(m, w);
    const Vector xtv = transpose_matvec(m, v);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) lhs += xw[i] * v[i];
    for (std::size_t j = 0; j < d; ++j) rhs += w[j] * xtv[j];
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("sparse and dense paths agree") {
  Rng rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = 2 + rng.integer(10), d = 2 + rng.integer(10);
    const FeatureMatrix sp = random_sparse(n, d, rng);
    const FeatureMatrix dn = sp.to_dense();
    const Vector w = random_vector(d, rng);
    const Vector v = random_vector(n, rng);
    const Vector a = matvec(sp, w), b = matvec(dn, w);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    const Vector c = transpose_matvec(sp, v), e = transpose_matvec(dn, v);
    for (std::size_t j = 0; j < d; ++j)
      CHECK(c[j] == doctest::Approx(e[j]).epsilon(1e-12));
  }
}

TEST_CASE("standardize: two-point column") {
  // column [1,3] -> [-1,1] with mean 2, scale 1 (population sd over n)
  const Dataset ds(FeatureMatrix::dense(2, 1, {1.0, 3.0}), Vector({0.0, 0.0}),
                   ResponseKind::kRegression);
  const StandardizeResult st = standardize(ds);
  CHECK(st.column_means[0] == 2.0);
  CHECK(st.column_scales[0] == 1.0);
  const auto x = st.data.features().dense_values();
  CHECK(x[0] == -1.0);
  CHECK(x[1] == 1.0);
}

TEST_CASE("standardize: constant column gets scale 1") {
  const Dataset ds(FeatureMatrix::dense(2, 1, {5.0, 5.0}), Vector({0.0, 0.0}),
                   ResponseKind::kRegression);
  const StandardizeResult st = standardize(ds);
  CHECK(st.column_scales[0] == 1.0);
  const auto x = st.data.features().dense_values();
  CHECK(x[0] == 0.0);
  CHECK(x[1] == 0.0);
}

TEST_CASE("standardize: already standardized column is unchanged") {
  const Dataset ds(FeatureMatrix::dense(2, 1, {-1.0, 1.0}), Vector({0.0, 0.0}),
                   ResponseKind::kRegression);
  const StandardizeResult st = standardize(ds);
  const auto x = st.data.features().dense_values();
  CHECK(x[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));
  // statistics allow the exact inverse transform
  CHECK(x[0] * st.column_scales[0] + st.column_means[0] == doctest::Approx(-1.0));
}

TEST_CASE("standardize requires at least two rows") {
  const Dataset ds(FeatureMatrix::dense(1, 1, {3.0}), Vector({0.0}),
                   ResponseKind::kRegression);
  CHECK_THROWS_AS(standardize(ds), std::invalid_argument);
}

TEST_CASE("dataset validates responses") {
  auto m = FeatureMatrix::dense(2, 1, {1.0, 2.0});
  CHECK_THROWS_AS(Dataset(m, Vector({1.0}), ResponseKind::kRegression),
                  std::invalid_argument);
  CHECK_THROWS_AS(Dataset(m, Vector({1.0, 0.5}), ResponseKind::kBinaryClassification),
                  std::invalid_argument);
  CHECK_NOTHROW(Dataset(m, Vector({1.0, -1.0}), ResponseKind::kBinaryClassification));
}
