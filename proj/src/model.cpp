#include "csi/model.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "csi/text.hpp"

namespace csi {

namespace {
constexpr const char* kMagic = "csi-model";
constexpr int kFormatVersion = 1;
}  // namespace

SimModel::SimModel(Vector weights, MonotoneLink link,
                   std::optional<Preprocessing> preprocessing,
                   std::optional<MatrixShape> shape)
    : weights_(std::move(weights)),
      link_(std::move(link)),
      preprocessing_(std::move(preprocessing)),
      shape_(std::move(shape)) {
  if (weights_.size() == 0) throw std::invalid_argument("SimModel: empty weights");
  if (preprocessing_) {
    if (preprocessing_->means.size() != weights_.size() ||
        preprocessing_->scales.size() != weights_.size())
      throw std::invalid_argument("SimModel: preprocessing stats do not match d");
    for (std::size_t j = 0; j < preprocessing_->scales.size(); ++j)
      if (preprocessing_->scales[j] == 0.0)
        throw std::invalid_argument("SimModel: zero preprocessing scale");
  }
  if (shape_ && shape_->rows * shape_->cols != weights_.size())
    throw std::invalid_argument("SimModel: shape does not match d");
}

double SimModel::predict(std::span<const double> x) const {
  const std::size_t d = weights_.size();
  if (x.size() != d)
    throw std::invalid_argument("predict: row has length " + std::to_string(x.size()) +
                                ", model expects " + std::to_string(d));
  double acc = 0.0;
  if (preprocessing_) {
    const auto& mu = preprocessing_->means;
    const auto& sc = preprocessing_->scales;
    for (std::size_t j = 0; j < d; ++j)
      acc += weights_[j] * ((x[j] - mu[j]) / sc[j]);
  } else {
    for (std::size_t j = 0; j < d; ++j) acc += weights_[j] * x[j];
  }
  return link_.eval(acc);
}

int SimModel::predict_class(std::span<const double> x, double threshold) const {
  return predict(x) >= threshold ? 1 : -1;
}

Vector SimModel::predict_all(const FeatureMatrix& features) const {
  if (features.cols() != weights_.size())
    throw std::invalid_argument("predict_all: feature dimension " +
                                std::to_string(features.cols()) + ", model expects " +
                                std::to_string(weights_.size()));
  std::vector<double> row(features.cols());
  std::vector<double> scores(features.rows());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    features.copy_row(i, row.data());
    scores[i] = predict(row);
  }
  return Vector(std::move(scores));
}

namespace {

void write_values(std::ostream& out, std::span<const double> v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ' ';
    out << format_double(v[i]);
  }
  out << '\n';
}

class FieldReader {
 public:
  explicit FieldReader(std::istream& in) : in_(in) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error("model load: line " + std::to_string(line_no_) + ": " + msg);
  }

  std::string next_line() {
    std::string line;
    if (!std::getline(in_, line)) fail("unexpected end of stream");
    ++line_no_;
    return line;
  }

  /// Reads "key v0 v1 ..." with exactly count values.
  std::vector<double> keyed_values(const std::string& key, std::size_t count) {
    const std::string line = next_line();
    const auto toks = tokenize(line);
    if (toks.empty() || toks[0] != key) fail("expected field '" + key + "'");
    if (toks.size() != count + 1)
      fail("field '" + key + "' expects " + std::to_string(count) + " values, got " +
           std::to_string(toks.size() - 1));
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
      if (!parse_double(toks[i + 1], out[i]))
        fail("field '" + key + "': bad number '" + std::string(toks[i + 1]) + "'");
    return out;
  }

  std::size_t keyed_size(const std::string& key) {
    const std::string line = next_line();
    const auto toks = tokenize(line);
    if (toks.size() != 2 || toks[0] != key) fail("expected field '" + key + " <count>'");
    std::size_t v = 0;
    if (!parse_size(toks[1], v)) fail("field '" + key + "': bad count");
    return v;
  }

  int line_no() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

}  // namespace

void SimModel::save(std::ostream& out) const {
  out << kMagic << " v" << kFormatVersion << '\n';
  out << "d " << weights_.size() << '\n';
  out << "weights ";
  write_values(out, weights_.values());
  out << "knots " << link_.num_knots() << ' ';
  write_values(out, link_.knots());
  out << "values " << link_.num_knots() << ' ';
  write_values(out, link_.fitted_values());
  out << "preprocessing " << (preprocessing_ ? 1 : 0) << '\n';
  if (preprocessing_) {
    out << "means ";
    write_values(out, preprocessing_->means.values());
    out << "scales ";
    write_values(out, preprocessing_->scales.values());
  }
  out << "shape " << (shape_ ? 1 : 0);
  if (shape_) out << ' ' << shape_->rows << ' ' << shape_->cols;
  out << '\n';
}

SimModel SimModel::load(std::istream& in) {
  FieldReader r(in);

  {
    const std::string header = r.next_line();
    const auto toks = tokenize(header);
    if (toks.size() != 2 || toks[0] != kMagic)
      r.fail("not a csi model file (bad magic)");
    const std::string version(toks[1]);
    const std::string expected = "v" + std::to_string(kFormatVersion);
    if (version != expected)
      r.fail("unsupported format version " + version + "; this build reads " + expected);
  }

  const std::size_t d = r.keyed_size("d");
  if (d == 0) r.fail("d must be positive");
  std::vector<double> weights = r.keyed_values("weights", d);

  std::size_t m = 0;
  std::vector<double> knots, values;
  {
    const std::string line = r.next_line();
    const auto toks = tokenize(line);
    if (toks.size() < 2 || toks[0] != "knots") r.fail("expected field 'knots'");
    if (!parse_size(toks[1], m) || m == 0) r.fail("bad knot count");
    if (toks.size() != m + 2) r.fail("knot count does not match values on line");
    knots.resize(m);
    for (std::size_t i = 0; i < m; ++i)
      if (!parse_double(toks[i + 2], knots[i])) r.fail("bad knot value");
  }
  {
    const std::string line = r.next_line();
    const auto toks = tokenize(line);
    if (toks.size() != m + 2 || toks[0] != "values") r.fail("expected field 'values'");
    std::size_t m2 = 0;
    if (!parse_size(toks[1], m2) || m2 != m) r.fail("values count differs from knots");
    values.resize(m);
    for (std::size_t i = 0; i < m; ++i)
      if (!parse_double(toks[i + 2], values[i])) r.fail("bad fitted value");
  }

  std::optional<Preprocessing> prep;
  const std::size_t has_prep = r.keyed_size("preprocessing");
  if (has_prep > 1) r.fail("preprocessing flag must be 0 or 1");
  if (has_prep == 1) {
    std::vector<double> means = r.keyed_values("means", d);
    std::vector<double> scales = r.keyed_values("scales", d);
    prep = Preprocessing{Vector(std::move(means)), Vector(std::move(scales))};
  }

  std::optional<MatrixShape> shape;
  {
    const std::string line = r.next_line();
    const auto toks = tokenize(line);
    if (toks.size() < 2 || toks[0] != "shape") r.fail("expected field 'shape'");
    std::size_t flag = 0;
    if (!parse_size(toks[1], flag) || flag > 1) r.fail("shape flag must be 0 or 1");
    if (flag == 1) {
      if (toks.size() != 4) r.fail("shape expects rows and cols");
      MatrixShape s;
      if (!parse_size(toks[2], s.rows) || !parse_size(toks[3], s.cols))
        r.fail("bad shape value");
      shape = s;
    } else if (toks.size() != 2) {
      r.fail("unexpected tokens after 'shape 0'");
    }
  }

  try {
    return SimModel(Vector(std::move(weights)),
                    MonotoneLink(std::move(knots), std::move(values)), std::move(prep),
                    std::move(shape));
  } catch (const std::invalid_argument& e) {
    r.fail(std::string("invalid model contents: ") + e.what());
  }
}

void SimModel::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save(out);
  if (!out) throw std::runtime_error("failed writing " + path);
}

SimModel SimModel::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load(in);
}

}  // namespace csi
