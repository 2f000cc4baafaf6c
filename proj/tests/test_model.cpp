#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "csi/model.hpp"
#include "csi/rng.hpp"

using namespace csi;

namespace {

SimModel make_model(bool with_prep = false, bool with_shape = false) {
  Rng rng(42);
  std::vector<double> w(6);
  for (double& v : w) v = rng.normal();
  std::vector<double> knots{-1.5, -0.25, 0.5, 2.0};
  std::vector<double> values{-0.8, -0.1, 0.3, 1.1};
  std::optional<Preprocessing> prep;
  if (with_prep) {
    std::vector<double> mu(6), sc(6);
    for (double& v : mu) v = rng.normal();
    for (double& v : sc) v = 0.5 + rng.uniform();
    prep = Preprocessing{Vector(mu), Vector(sc)};
  }
  std::optional<MatrixShape> shape;
  if (with_shape) shape = MatrixShape{2, 3};
  return SimModel(Vector(w), MonotoneLink(knots, values), prep, shape);
}

}  // namespace

TEST_CASE("zero weights predict the constant g(0)") {
  SimModel m(Vector({0.0, 0.0}), MonotoneLink({-1.0, 1.0}, {-0.5, 0.5}));
  CHECK(m.predict(std::vector<double>{3.0, 4.0}) == 0.0);
  CHECK(m.predict(std::vector<double>{-100.0, 9.0}) == 0.0);
}

TEST_CASE("identity link with a basis weight reads off the coordinate") {
  SimModel m(Vector({1.0, 0.0}), MonotoneLink({-1.0, 1.0}, {-1.0, 1.0}));
  CHECK(m.predict(std::vector<double>{0.5, 77.0}) == doctest::Approx(0.5));
}

TEST_CASE("inputs beyond the training range are clamped to boundary values") {
  SimModel m(Vector({1.0}), MonotoneLink({-1.0, 1.0}, {-0.25, 0.75}));
  CHECK(m.predict(std::vector<double>{1000.0}) == 0.75);
  CHECK(m.predict(std::vector<double>{-1000.0}) == -0.25);
}

TEST_CASE("classification threshold: ties go to +1") {
  SimModel m(Vector({1.0}), MonotoneLink({-1.0, 1.0}, {-1.0, 1.0}));
  CHECK(m.predict_class(std::vector<double>{0.3}) == 1);
  CHECK(m.predict_class(std::vector<double>{-0.3}) == -1);
  CHECK(m.predict_class(std::vector<double>{0.0}) == 1);  // boundary convention
}

TEST_CASE("prediction is monotone in the linear index") {
  const SimModel m = make_model();
  Rng rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> a(6), b(6);
    for (double& v : a) v = rng.normal();
    for (double& v : b) v = rng.normal();
    double ia = 0.0, ib = 0.0;
    for (std::size_t j = 0; j < 6; ++j) {
      ia += m.weights()[j] * a[j];
      ib += m.weights()[j] * b[j];
    }
    if (ia > ib) {
      std::swap(a, b);
      std::swap(ia, ib);
    }
    CHECK(m.predict(a) <= m.predict(b) + 1e-15);
  }
}

TEST_CASE("save/load round-trips bit-exactly, with and without options") {
  for (bool prep : {false, true}) {
    for (bool shape : {false, true}) {
      const SimModel m = make_model(prep, shape);
      std::stringstream buf;
      m.save(buf);
      const SimModel r = SimModel::load(buf);
      CHECK(r.weights() == m.weights());
      CHECK(r.link() == m.link());
      CHECK(r.preprocessing().has_value() == prep);
      if (prep) {
        CHECK(r.preprocessing()->means == m.preprocessing()->means);
        CHECK(r.preprocessing()->scales == m.preprocessing()->scales);
      }
      if (shape) {
        REQUIRE(r.shape().has_value());
        CHECK(r.shape()->rows == 2);
        CHECK(r.shape()->cols == 3);
      }

      // predictions survive the round trip bit-exactly
      Rng rng(1234);
      for (int rep = 0; rep < 25; ++rep) {
        std::vector<double> x(6);
        for (double& v : x) v = 3.0 * rng.normal();
        CHECK(m.predict(x) == r.predict(x));
      }
    }
  }
}

TEST_CASE("truncated stream errors with a position") {
  const SimModel m = make_model();
  std::stringstream buf;
  m.save(buf);
  std::string text = buf.str();
  text.resize(text.size() / 2);
  std::stringstream cut(text);
  try {
    SimModel::load(cut);
    FAIL("expected a load error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
}

TEST_CASE("future version tag errors naming both versions") {
  std::stringstream in("csi-model v9\nd 1\nweights 1\n");
  try {
    SimModel::load(in);
    FAIL("expected a version error");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("v9") != std::string::npos);
    CHECK(msg.find("v1") != std::string::npos);
  }
}

TEST_CASE("corrupt payload errors") {
  std::stringstream in("csi-model v1\nd 2\nweights 1 nope\n");
  CHECK_THROWS_AS(SimModel::load(in), std::runtime_error);
}

TEST_CASE("predict validates the row dimension") {
  const SimModel m = make_model();
  CHECK_THROWS_AS(m.predict(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("predict_all agrees with per-row predict on sparse features") {
  const SimModel m = make_model(true);
  const auto sp = FeatureMatrix::sparse(2, 6, {0, 2, 3}, {1, 4, 0}, {2.0, -1.0, 0.5});
  const Vector scores = m.predict_all(sp);
  std::vector<double> row(6);
  for (std::size_t i = 0; i < 2; ++i) {
    sp.copy_row(i, row.data());
    CHECK(scores[i] == m.predict(row));
  }
}
