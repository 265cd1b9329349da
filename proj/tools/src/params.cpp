#include "balcast_cli/params.hpp"

#include <charconv>
#include <fstream>

#include "balcast/error.hpp"

namespace balcast::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ParamFile ParamFile::parse(std::istream& in) {
  ParamFile out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw InvalidArgument("config line " + std::to_string(n) + ": expected key=value");
    const auto key = trim(t.substr(0, eq));
    if (key.empty()) throw InvalidArgument("config line " + std::to_string(n) + ": empty key");
    out.values_[key] = trim(t.substr(eq + 1));
  }
  return out;
}

ParamFile ParamFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path.string() + "'");
  return parse(in);
}

std::optional<std::string> ParamFile::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void ParamFile::write(std::ostream& out) const {
  for (const auto& [k, v] : values_) out << k << '=' << v << '\n';
}

double parse_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) throw InvalidArgument("parameter " + key + ": '" + text + "' is not a number");
  return v;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) {
    throw InvalidArgument("parameter " + key + ": '" + text + "' is not a non-negative integer");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = trim(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<std::string> Parameters::raw(const std::string& key) const {
  if (const auto it = flags_.find(key); it != flags_.end()) return it->second;
  return file_.get(key);
}

std::optional<std::string> Parameters::layered(const std::string& key, const std::string& specific) const {
  if (const auto it = flags_.find(key); it != flags_.end()) return it->second;
  if (!specific.empty()) {
    if (auto v = file_.get(key + "." + specific)) return v;
  }
  return file_.get(key);
}

double Parameters::number(const std::string& key, double fallback) const {
  const auto v = raw(key);
  return v ? parse_number(key, *v) : fallback;
}

std::size_t Parameters::count(const std::string& key, std::size_t fallback) const {
  const auto v = raw(key);
  return v ? parse_count(key, *v) : fallback;
}

ForecastConfig Parameters::forecast(const std::optional<AccountId>& account, std::optional<AccountClass> cls) const {
  ForecastConfig c;
  c.L = count("L", c.L);
  c.L1 = count("L1", c.L1);
  c.S = count("S", c.S);
  c.knn_k = count("knn_k", c.knn_k);
  c.dtw.window = count("window", c.dtw.window);
  const std::string klass = cls ? std::string(account_class_name(*cls)) : "";
  if (auto v = layered("M", klass)) c.M = parse_count("M", *v);
  if (auto v = layered("tau", klass)) c.tau = parse_count("tau", *v);
  if (auto v = layered("lambda", account.value_or(""))) c.lambda = parse_number("lambda", *v);
  if (auto v = raw("align")) c.align = *v != "0" && *v != "false";
  if (auto v = raw("horizon_mode")) {
    if (*v == "single") {
      c.horizon_mode = HorizonMode::SingleFit;
    } else if (*v == "rolling") {
      c.horizon_mode = HorizonMode::Rolling;
    } else {
      throw InvalidArgument("horizon_mode must be 'single' or 'rolling'");
    }
  }
  c.validate();
  return c;
}

SimilarityConfig Parameters::similarity() const {
  SimilarityConfig s;
  s.threshold = number("threshold", s.threshold);
  s.validate();
  return s;
}

std::optional<AccountClass> Parameters::account_class(const AccountId& account) const {
  const auto v = file_.get("class." + account);
  if (!v) return std::nullopt;
  if (*v == account_class_name(AccountClass::Paycheck)) return AccountClass::Paycheck;
  if (*v == account_class_name(AccountClass::NonPaycheck)) return AccountClass::NonPaycheck;
  throw InvalidArgument("class." + account + ": unknown class '" + *v + "'");
}

TuningGrids Parameters::grids(std::size_t S) const {
  TuningGrids g;
  g.tau = TuningGrids::default_taus(S);
  if (auto v = raw("grid.M")) {
    g.M.clear();
    for (const auto& x : split_list(*v)) g.M.push_back(parse_count("grid.M", x));
  }
  if (auto v = raw("grid.lambda")) {
    g.lambda.clear();
    for (const auto& x : split_list(*v)) g.lambda.push_back(parse_number("grid.lambda", x));
  }
  if (auto v = raw("grid.tau")) {
    g.tau.clear();
    for (const auto& x : split_list(*v)) g.tau.push_back(parse_count("grid.tau", x));
  }
  g.validate(S);
  return g;
}

}  // namespace balcast::cli
