#include "eikamp/model_file.hpp"

#include <charconv>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "eikamp/errors.hpp"

namespace eikamp::io {
namespace {

namespace pt = boost::property_tree;

double parse_double(std::string_view text, const std::string& where) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(where + ": expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

class Section {
 public:
  Section(const pt::ptree* tree, std::string name, std::string source)
      : tree_(tree), name_(std::move(name)), source_(std::move(source)) {}

  std::optional<std::string> text(const std::string& key) {
    used_.insert(key);
    if (!tree_) return std::nullopt;
    const auto child = tree_->get_optional<std::string>(key);
    if (!child) return std::nullopt;
    return *child;
  }

  std::optional<double> number(const std::string& key) {
    const auto t = text(key);
    if (!t) return std::nullopt;
    return parse_double(*t, where(key));
  }

  double required(const std::string& key) {
    const auto v = number(key);
    if (!v) throw ParseError(source_ + ": [" + name_ + "] is missing '" + key + "'");
    return *v;
  }

  void reject_unknown() const {
    if (!tree_) return;
    for (const auto& [key, _] : *tree_) {
      if (!used_.count(key)) {
        throw ParseError(source_ + ": unknown key '" + key + "' in [" + name_ + "]");
      }
    }
  }

  std::string where(const std::string& key) const {
    return source_ + ": [" + name_ + "] " + key;
  }

 private:
  const pt::ptree* tree_;
  std::string name_;
  std::string source_;
  std::set<std::string> used_;
};

}  // namespace

std::vector<eikonal::TabulatedSample> parse_table(std::istream& in,
                                                  const std::string& source_name) {
  std::vector<eikonal::TabulatedSample> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string f; fields >> f;) tok.push_back(f);
    if (tok.empty()) continue;
    const std::string where = source_name + ":" + std::to_string(lineno);
    if (tok.size() != 3) {
      throw ParseError(where + ": expected 3 columns (q re im), got " +
                       std::to_string(tok.size()));
    }
    rows.push_back({parse_double(tok[0], where),
                    {parse_double(tok[1], where), parse_double(tok[2], where)}});
  }
  return rows;
}

eikonal::BornModel parse_model(std::istream& in, const std::filesystem::path& base_dir,
                               const std::string& source_name) {
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(source_name + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [name, _] : root) {
    if (name != "model" && name != "envelope") {
      throw ParseError(source_name + ": unknown section [" + name + "]");
    }
  }
  const auto model_tree = root.get_child_optional("model");
  if (!model_tree) throw ParseError(source_name + ": missing [model] section");
  const auto env_tree = root.get_child_optional("envelope");

  Section model(&*model_tree, "model", source_name);
  Section envelope(env_tree ? &*env_tree : nullptr, "envelope", source_name);

  const auto kind = model.text("kind");
  if (!kind) throw ParseError(source_name + ": [model] is missing 'kind'");

  std::optional<eikonal::BornModel> result;
  if (*kind == "gaussian") {
    const double lambda = model.required("lambda");
    const auto g_re = model.number("g");
    const auto chi0 = model.number("chi0");
    const double g_im = model.number("g_imag").value_or(0.0);
    if (g_re.has_value() == chi0.has_value()) {
      throw ParseError(source_name + ": gaussian model needs exactly one of 'g' or 'chi0'");
    }
    // chi0 = g Lambda^2 / 4 pi
    const double re = g_re ? *g_re : *chi0 * 4.0 * std::numbers::pi / (lambda * lambda);
    result = eikonal::BornModel::gaussian({re, g_im}, lambda);
  } else if (*kind == "exponential_pole") {
    const double c = model.required("c");
    const double c_im = model.number("c_imag").value_or(0.0);
    result = eikonal::BornModel::exponential_pole({c, c_im}, model.required("slope"));
  } else if (*kind == "tabulated") {
    const auto data = model.text("data");
    if (!data) throw ParseError(source_name + ": tabulated model is missing 'data'");
    std::filesystem::path p(*data);
    if (p.is_relative()) p = base_dir / p;
    std::ifstream table(p);
    if (!table) throw ParseError(source_name + ": cannot open table '" + p.string() + "'");
    result = eikonal::BornModel::tabulated(parse_table(table, p.string()),
                                           envelope.number("tail_rate"));
  } else {
    throw ParseError(source_name + ": unknown model kind '" + *kind + "'");
  }
  model.reject_unknown();
  envelope.reject_unknown();
  return *result;
}

eikonal::BornModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path.string() + "'");
  return parse_model(in, path.parent_path(), path.string());
}

}  // namespace eikamp::io
