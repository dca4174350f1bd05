#include "forecast/app/checkpoint.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "forecast/app/report.hpp"
#include "forecast/error.hpp"

namespace forecast {
namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) { return json(s).dump(); }

class LineReader {
 public:
  LineReader(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

  std::string_view next(const char* expecting) {
    if (pos_ >= text_.size()) fail(std::string("truncated file, expected ") + expecting);
    const std::size_t nl = text_.find('\n', pos_);
    if (nl == std::string_view::npos) fail(std::string("truncated file, expected ") + expecting);
    std::string_view line = text_.substr(pos_, nl - pos_);
    pos_ = nl + 1;
    ++line_no_;
    return line;
  }

  // Returns the remainder after "key ".
  std::string_view field(const char* key) {
    const std::string_view line = next(key);
    const std::string prefix = std::string(key) + " ";
    if (line.substr(0, prefix.size()) != prefix) fail(std::string("expected `") + key + "`");
    return line.substr(prefix.size());
  }

  bool peek_is(std::string_view key) const {
    return text_.substr(pos_, key.size() + 1) == std::string(key) + " ";
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(source_ + ":" + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::string_view text_;
  std::string source_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

double parse_double(std::string_view s, const LineReader& r) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) r.fail("bad number `" + std::string(s) + "`");
  return v;
}

std::size_t parse_size(std::string_view s, const LineReader& r) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) r.fail("bad integer `" + std::string(s) + "`");
  return v;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

json parse_json(std::string_view s, const LineReader& r) {
  try {
    return json::parse(s);
  } catch (const json::parse_error& e) {
    r.fail(std::string("malformed JSON: ") + e.what());
  }
}

// A JSON string literal followed by the rest of the line.
std::pair<std::string, std::string_view> leading_name(std::string_view s, const LineReader& r) {
  if (s.empty() || s.front() != '"') r.fail("expected a quoted name");
  std::size_t i = 1;
  while (i < s.size() && s[i] != '"') i += s[i] == '\\' ? 2 : 1;
  if (i >= s.size()) r.fail("unterminated name");
  const json name = parse_json(s.substr(0, i + 1), r);
  std::string_view rest = s.substr(i + 1);
  if (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  return {name.get<std::string>(), rest};
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& ck) {
  std::string out;
  out += "forecast-checkpoint\n";
  out += "format_version " + std::to_string(kCheckpointVersion) + "\n";
  out += "config " + config_to_json(ck.config).dump() + "\n";
  out += "hyperparams " + hyperparams_to_json(ck.model.hp).dump() + "\n";
  out += "feature_dim " + std::to_string(ck.model.feature_dim) + "\n";
  out += "best_epoch " + std::to_string(ck.best_epoch) + "\n";
  out += "feature_columns " + json(ck.feature_columns).dump() + "\n";
  out += "scaler_range " + fmt(ck.scaler.range().lo) + " " + fmt(ck.scaler.range().hi) + "\n";
  out += "scaler_columns " + std::to_string(ck.scaler.columns().size()) + "\n";
  for (const auto& c : ck.scaler.columns()) {
    out += "scaler_column " + quoted(c.name) + " " + fmt(c.min) + " " + fmt(c.max) + "\n";
  }
  out += "vocabularies " + std::to_string(ck.encoder.vocabularies().size()) + "\n";
  for (const auto& v : ck.encoder.vocabularies()) {
    out += "vocabulary " + quoted(v.column) + " " + json(v.categories).dump() + "\n";
  }
  Network::visit(ck.model.net, [&](const std::string& name, const Tensor& t) {
    out += "tensor " + name + " " + shape_to_string(t.shape()) + "\n";
    std::string line;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) line += ' ';
      line += fmt(t[i]);
    }
    out += line + "\n";
  });
  out += "end\n";
  return out;
}

Checkpoint parse_checkpoint(std::string_view text, const std::string& source) {
  LineReader r(text, source);
  if (r.next("header") != "forecast-checkpoint") r.fail("not a forecast checkpoint");
  const std::size_t version = parse_size(r.field("format_version"), r);
  if (version != kCheckpointVersion) {
    r.fail("unsupported format_version " + std::to_string(version) + " (this build reads " +
           std::to_string(kCheckpointVersion) + ")");
  }
  Checkpoint ck;
  ck.config = config_from_json(parse_json(r.field("config"), r));
  const HyperParams hp = hyperparams_from_json(parse_json(r.field("hyperparams"), r));
  hp.validate();
  const std::size_t feature_dim = parse_size(r.field("feature_dim"), r);
  if (feature_dim == 0) r.fail("feature_dim must be positive");
  ck.best_epoch = parse_size(r.field("best_epoch"), r);
  const json cols = parse_json(r.field("feature_columns"), r);
  if (!cols.is_array()) r.fail("feature_columns must be a list");
  ck.feature_columns = cols.get<std::vector<std::string>>();
  if (ck.feature_columns.size() != feature_dim) r.fail("feature_columns does not match feature_dim");

  const auto range = tokens(r.field("scaler_range"));
  if (range.size() != 2) r.fail("scaler_range needs two numbers");
  const ScaleRange sr{parse_double(range[0], r), parse_double(range[1], r)};
  const std::size_t n_scaled = parse_size(r.field("scaler_columns"), r);
  std::vector<ScaledColumn> scaled;
  for (std::size_t i = 0; i < n_scaled; ++i) {
    const auto [name, rest] = leading_name(r.field("scaler_column"), r);
    const auto mm = tokens(rest);
    if (mm.size() != 2) r.fail("scaler_column needs min and max");
    scaled.push_back({name, parse_double(mm[0], r), parse_double(mm[1], r)});
  }
  ck.scaler = MinMaxScaler(std::move(scaled), sr);

  const std::size_t n_vocab = parse_size(r.field("vocabularies"), r);
  std::vector<Vocabulary> vocab;
  for (std::size_t i = 0; i < n_vocab; ++i) {
    const auto [name, rest] = leading_name(r.field("vocabulary"), r);
    const json cats = parse_json(rest, r);
    if (!cats.is_array()) r.fail("vocabulary categories must be a list");
    vocab.push_back({name, cats.get<std::vector<std::string>>()});
  }
  ck.encoder = OneHotEncoder(std::move(vocab));

  ck.model = model_skeleton(hp, feature_dim);
  Network::visit(ck.model.net, [&](const std::string& name, Tensor& t) {
    const auto head = tokens(r.field("tensor"));
    if (head.size() != 2 || head[0] != name) {
      r.fail("expected tensor " + name + ", found `" + (head.empty() ? "" : std::string(head[0])) + "`");
    }
    if (head[1] != shape_to_string(t.shape())) {
      r.fail("tensor " + name + " has shape " + std::string(head[1]) + ", model expects " +
             shape_to_string(t.shape()));
    }
    const auto vals = tokens(r.next(name.c_str()));
    if (vals.size() != t.size()) {
      r.fail("tensor " + name + " has " + std::to_string(vals.size()) + " values, expected " +
             std::to_string(t.size()));
    }
    for (std::size_t i = 0; i < vals.size(); ++i) t[i] = parse_double(vals[i], r);
  });
  if (r.next("end") != "end") r.fail("expected `end`");
  return ck;
}

void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_checkpoint(ck));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_checkpoint(ss.str(), path.string());
}

}  // namespace forecast
