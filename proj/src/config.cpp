#include "mixprior/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace mixprior {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Splits on commas that are not inside parentheses.
std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> items;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) {
      items.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  items.push_back(trim(s.substr(start)));
  return items;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

template <class Int>
std::optional<Int> to_integer(std::string_view s) {
  s = trim(s);
  std::string digits;
  for (char c : s) {
    if (c != '_' && c != '\'') digits.push_back(c);
  }
  Int value{};
  const auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size() ||
      digits.empty()) {
    return std::nullopt;
  }
  return value;
}

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Entry> entries;
};

struct Document {
  Section top;
  std::vector<Section> sections;
};

Document tokenize(std::string_view text, std::vector<ConfigIssue> &issues) {
  Document doc;
  Section *current = &doc.top;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back({where, "unterminated section header"});
        continue;
      }
      const auto name = lower(trim(line.substr(1, line.size() - 2)));
      const bool seen =
          std::any_of(doc.sections.begin(), doc.sections.end(),
                      [&](const Section &s) { return s.name == name; });
      if (seen) issues.push_back({name, "section appears more than once"});
      doc.sections.push_back({name, line_no, {}});
      current = &doc.sections.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      issues.push_back({where, "expected 'key = value' or '[section]'"});
      continue;
    }
    const auto key = lower(trim(line.substr(0, eq)));
    const auto value = std::string(trim(line.substr(eq + 1)));
    if (key.empty()) {
      issues.push_back({where, "missing key before '='"});
      continue;
    }
    const bool duplicate =
        std::any_of(current->entries.begin(), current->entries.end(),
                    [&](const Entry &e) { return e.key == key; });
    const std::string path =
        current->name.empty() ? key : current->name + "." + key;
    if (duplicate) {
      issues.push_back({path, "key given more than once"});
      continue;
    }
    current->entries.push_back({key, value, line_no});
  }
  return doc;
}

// Typed access to one section; remembers which keys were consumed so the
// rest can be reported as unknown.
class SectionReader {
 public:
  SectionReader(const Section *section, std::string name,
                std::vector<ConfigIssue> &issues)
      : section_(section), name_(std::move(name)), issues_(issues) {}

  bool present() const { return section_ != nullptr; }

  std::string path(std::string_view key) const {
    return name_.empty() ? std::string(key) : name_ + "." + std::string(key);
  }

  bool has(std::string_view key) const { return find(key) != nullptr; }

  std::optional<std::string> raw(std::string_view key, bool required) {
    const Entry *e = find(key);
    if (e == nullptr) {
      if (required) fail(key, "required key is missing");
      return std::nullopt;
    }
    used_.insert(e->key);
    if (e->value.empty()) {
      fail(key, "empty value");
      return std::nullopt;
    }
    return e->value;
  }

  std::optional<double> number(std::string_view key, bool required) {
    auto text = raw(key, required);
    if (!text) return std::nullopt;
    auto value = to_double(*text);
    if (!value) fail(key, "malformed number '" + *text + "'");
    return value;
  }

  template <class Int>
  std::optional<Int> integer(std::string_view key, bool required) {
    auto text = raw(key, required);
    if (!text) return std::nullopt;
    auto value = to_integer<Int>(*text);
    if (!value) fail(key, "malformed integer '" + *text + "'");
    return value;
  }

  std::optional<std::vector<double>> numbers(std::string_view key,
                                             bool required) {
    auto text = raw(key, required);
    if (!text) return std::nullopt;
    std::vector<double> values;
    const auto items = split_list(*text);
    for (std::size_t i = 0; i < items.size(); ++i) {
      auto v = to_double(items[i]);
      if (!v) {
        fail(std::string(key) + "[" + std::to_string(i + 1) + "]",
             "malformed number '" + std::string(items[i]) + "'");
        return std::nullopt;
      }
      values.push_back(*v);
    }
    return values;
  }

  std::optional<std::vector<Component>> components(std::string_view key,
                                                   bool required) {
    auto text = raw(key, required);
    if (!text) return std::nullopt;
    std::vector<Component> out;
    const auto items = split_list(*text);
    bool ok = true;
    for (std::size_t i = 0; i < items.size(); ++i) {
      auto c = parse_component(
          items[i], path(key) + "[" + std::to_string(i + 1) + "]");
      if (c) {
        out.push_back(*c);
      } else {
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    return out;
  }

  std::optional<Component> component(std::string_view key, bool required) {
    auto text = raw(key, required);
    if (!text) return std::nullopt;
    return parse_component(*text, path(key));
  }

  std::optional<bool> boolean(std::string_view key, bool required) {
    auto text = raw(key, required);
    if (!text) return std::nullopt;
    const auto v = lower(*text);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(key, "expected true or false, got '" + *text + "'");
    return std::nullopt;
  }

  void fail(std::string_view key, std::string message) {
    issues_.push_back({path(key), std::move(message)});
  }

  void report_unknown() {
    if (section_ == nullptr) return;
    for (const auto &e : section_->entries) {
      if (!used_.contains(e.key)) issues_.push_back({path(e.key), "unknown key"});
    }
  }

 private:
  const Entry *find(std::string_view key) const {
    if (section_ == nullptr) return nullptr;
    for (const auto &e : section_->entries) {
      if (e.key == key) return &e;
    }
    return nullptr;
  }

  std::optional<Component> parse_component(std::string_view item,
                                           const std::string &where) {
    const auto open = item.find('(');
    if (open == std::string_view::npos || item.back() != ')') {
      issues_.push_back(
          {where, "expected family(params), got '" + std::string(item) + "'"});
      return std::nullopt;
    }
    const auto family = lower(trim(item.substr(0, open)));
    const auto inner = item.substr(open + 1, item.size() - open - 2);
    std::vector<double> params;
    for (auto p : split_list(inner)) {
      auto v = to_double(p);
      if (!v) {
        issues_.push_back({where, "malformed number '" + std::string(p) + "'"});
        return std::nullopt;
      }
      params.push_back(*v);
    }
    auto arity = [&](std::size_t n) {
      if (params.size() == n) return true;
      issues_.push_back({where, family + " takes " + std::to_string(n) +
                                    " parameter(s), got " +
                                    std::to_string(params.size())});
      return false;
    };
    try {
      if (family == "beta") {
        if (!arity(2)) return std::nullopt;
        return make_beta(params[0], params[1]);
      }
      if (family == "normal") {
        if (!arity(2)) return std::nullopt;
        return make_normal(params[0], params[1]);
      }
      if (family == "uniform") {
        if (!arity(2)) return std::nullopt;
        return make_uniform(params[0], params[1]);
      }
      if (family == "point" || family == "pointmass") {
        if (!arity(1)) return std::nullopt;
        return make_point_mass(params[0]);
      }
    } catch (const std::invalid_argument &e) {
      issues_.push_back({where, e.what()});
      return std::nullopt;
    }
    issues_.push_back({where, "unknown distribution family '" + family + "'"});
    return std::nullopt;
  }

  const Section *section_;
  std::string name_;
  std::vector<ConfigIssue> &issues_;
  std::set<std::string> used_;
};

const Section *find_section(const Document &doc, std::string_view name) {
  for (const auto &s : doc.sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::string describe_sum(double total) {
  std::ostringstream out;
  out << "weights sum to " << total;
  return out.str();
}

// Reads either `weights` (fixed) or `dirichlet` (uncertain) from a section.
std::optional<WeightPrior> read_weight_prior(SectionReader &reader,
                                             std::size_t expected_size) {
  const bool fixed = reader.has("weights");
  const bool dirichlet = reader.has("dirichlet");
  if (fixed == dirichlet) {
    reader.fail(fixed ? "dirichlet" : "weights",
                "give exactly one of 'weights' or 'dirichlet'");
    reader.raw("weights", false);
    reader.raw("dirichlet", false);
    return std::nullopt;
  }
  const char *key = fixed ? "weights" : "dirichlet";
  auto values = reader.numbers(key, true);
  if (!values) return std::nullopt;
  if (expected_size != 0 && values->size() != expected_size) {
    reader.fail(key, "has " + std::to_string(values->size()) +
                         " entries for " + std::to_string(expected_size) +
                         " components");
    return std::nullopt;
  }
  if (fixed) {
    double total = 0.0;
    for (std::size_t i = 0; i < values->size(); ++i) {
      const double w = (*values)[i];
      if (!(w >= 0.0 && w <= 1.0)) {
        reader.fail(std::string(key) + "[" + std::to_string(i + 1) + "]",
                    "weight must lie in [0, 1]");
        return std::nullopt;
      }
      total += w;
    }
    if (std::fabs(total - 1.0) > Mixture::kWeightTolerance) {
      reader.fail(key, describe_sum(total));
      return std::nullopt;
    }
    return FixedWeights{*values};
  }
  for (std::size_t i = 0; i < values->size(); ++i) {
    if (!((*values)[i] > 0.0)) {
      reader.fail(std::string(key) + "[" + std::to_string(i + 1) + "]",
                  "Dirichlet concentration must be positive");
      return std::nullopt;
    }
  }
  return DirichletWeights{*values};
}

std::optional<BinomialData> read_data(SectionReader &reader) {
  auto r = reader.integer<std::int64_t>("r", true);
  auto n = reader.integer<std::int64_t>("n", true);
  if (!r || !n) return std::nullopt;
  bool ok = true;
  if (*n < 1) {
    reader.fail("n", "n must be at least 1");
    ok = false;
  }
  if (*r < 0) {
    reader.fail("r", "r must be nonnegative");
    ok = false;
  } else if (*r > *n) {
    reader.fail("r", "r exceeds n");
    ok = false;
  }
  if (!ok) return std::nullopt;
  return BinomialData{*r, *n};
}

void require_betas(SectionReader &reader, const std::vector<Component> &cs) {
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!is_beta(cs[i])) {
      reader.fail("components[" + std::to_string(i + 1) + "]",
                  "binomial updating needs Beta components");
    }
  }
}

std::optional<UpdatePayload> read_update(const Document &doc,
                                         std::vector<ConfigIssue> &issues) {
  SectionReader prior(find_section(doc, "prior"), "prior", issues);
  SectionReader data(find_section(doc, "data"), "data", issues);
  if (!prior.present()) issues.push_back({"[prior]", "section is missing"});
  if (!data.present()) issues.push_back({"[data]", "section is missing"});
  UpdatePayload payload;
  auto components = prior.components("components", prior.present());
  std::optional<WeightPrior> weights;
  if (prior.present()) {
    weights = read_weight_prior(prior, components ? components->size() : 0);
  }
  if (components) require_betas(prior, *components);
  std::optional<BinomialData> d;
  if (data.present()) d = read_data(data);
  prior.report_unknown();
  data.report_unknown();
  if (!components || !weights || !d) return std::nullopt;
  return UpdatePayload{*components, *weights, *d};
}

std::optional<GibbsPayload> read_gibbs(const Document &doc,
                                       std::vector<ConfigIssue> &issues) {
  SectionReader prior(find_section(doc, "prior"), "prior", issues);
  SectionReader data(find_section(doc, "data"), "data", issues);
  SectionReader sampler(find_section(doc, "sampler"), "sampler", issues);
  if (!prior.present()) issues.push_back({"[prior]", "section is missing"});
  if (!data.present()) issues.push_back({"[data]", "section is missing"});

  GibbsPayload payload;
  auto components = prior.components("components", prior.present());
  if (components) {
    require_betas(prior, *components);
    if (components->size() < 2) {
      prior.fail("components", "the latent model needs at least two components");
    }
  }
  std::optional<BinomialData> d;
  if (data.present()) d = read_data(data);

  if (auto v = sampler.integer<std::size_t>("burn_in", false)) payload.burn_in = *v;
  if (auto v = sampler.integer<std::size_t>("iterations", false)) {
    if (*v < 1) {
      sampler.fail("iterations", "must be at least 1");
    } else {
      payload.iterations = *v;
    }
  }
  if (auto v = sampler.integer<std::size_t>("thin", false)) {
    if (*v < 1) {
      sampler.fail("thin", "must be at least 1");
    } else {
      payload.thin = *v;
    }
  }

  // [analysis.N] sections, ordered by N.
  std::map<std::size_t, const Section *> analyses;
  for (const auto &s : doc.sections) {
    if (!s.name.starts_with("analysis")) continue;
    const auto suffix = std::string_view(s.name).substr(8);
    std::optional<std::size_t> index;
    if (suffix.size() > 1 && suffix.front() == '.') {
      index = to_integer<std::size_t>(suffix.substr(1));
    }
    if (!index || *index < 1) {
      issues.push_back({"[" + s.name + "]",
                        "analysis sections are named [analysis.1], "
                        "[analysis.2], ..."});
      continue;
    }
    analyses[*index] = &s;
  }
  if (analyses.empty()) {
    issues.push_back({"[analysis.1]", "at least one analysis section is required"});
  }
  bool analyses_ok = true;
  for (const auto &[index, section] : analyses) {
    SectionReader reader(section, section->name, issues);
    auto w = read_weight_prior(reader, components ? components->size() : 0);
    if (w) {
      payload.analyses.push_back(*w);
    } else {
      analyses_ok = false;
    }
    reader.report_unknown();
  }

  prior.report_unknown();
  data.report_unknown();
  sampler.report_unknown();
  if (!components || !d || !analyses_ok || analyses.empty()) return std::nullopt;
  payload.components = *components;
  payload.data = *d;
  return payload;
}

// Scalar or per-parameter list, broadcast to length m.
std::optional<std::vector<double>> per_parameter(SectionReader &reader,
                                                 std::string_view key,
                                                 std::size_t m) {
  auto values = reader.numbers(key, true);
  if (!values) return std::nullopt;
  if (values->size() == 1) return std::vector<double>(m, values->front());
  if (values->size() != m) {
    reader.fail(key, "needs 1 or m = " + std::to_string(m) + " entries, got " +
                         std::to_string(values->size()));
    return std::nullopt;
  }
  return values;
}

std::optional<ShrinkagePayload> read_shrinkage(
    const Document &doc, std::vector<ConfigIssue> &issues) {
  SectionReader reader(find_section(doc, "shrinkage"), "shrinkage", issues);
  if (!reader.present()) {
    issues.push_back({"[shrinkage]", "section is missing"});
    return std::nullopt;
  }
  const std::size_t before = issues.size();
  ShrinkagePayload payload;
  auto m = reader.integer<std::size_t>("m", true);
  if (m && *m < 1) reader.fail("m", "m must be at least 1");
  const std::size_t count = m && *m >= 1 ? *m : 1;
  auto version = reader.raw("version", true);
  if (version) {
    const auto v = lower(*version);
    if (v == "independent_fixed") {
      if (auto p = per_parameter(reader, "p", count)) {
        for (double x : *p) {
          if (!(x >= 0.0 && x <= 1.0)) {
            reader.fail("p", "probabilities must lie in [0, 1]");
            break;
          }
        }
        payload.spec.version = IndependentFixed{*p};
      }
    } else if (v == "independent_beta") {
      auto a = per_parameter(reader, "a", count);
      auto b = per_parameter(reader, "b", count);
      if (a && b) {
        for (std::size_t j = 0; j < count; ++j) {
          if (!((*a)[j] > 0.0) || !((*b)[j] > 0.0)) {
            reader.fail("a", "Beta concentrations must be positive");
            break;
          }
        }
        payload.spec.version = IndependentBeta{*a, *b};
      }
    } else if (v == "shared_beta") {
      auto a = reader.number("a", true);
      auto b = reader.number("b", true);
      if (a && !(*a > 0.0)) reader.fail("a", "must be positive");
      if (b && !(*b > 0.0)) reader.fail("b", "must be positive");
      if (a && b) payload.spec.version = SharedBeta{*a, *b};
    } else {
      reader.fail("version", "expected independent_fixed, independent_beta "
                             "or shared_beta, got '" + *version + "'");
    }
  }
  const bool has_f1 = reader.has("f1");
  const bool has_f2 = reader.has("f2");
  if (has_f1 != has_f2) {
    reader.fail(has_f1 ? "f2" : "f1", "f1 and f2 must be given together");
  }
  auto f1 = reader.component("f1", false);
  auto f2 = reader.component("f2", false);
  if (f1 && f2) payload.spec.components = ComponentPair{*f1, *f2};
  if (auto d = reader.integer<std::size_t>("draws", false)) {
    if (*d != 0 && *d < kMinSimulationDraws) {
      reader.fail("draws", "simulation needs 0 (off) or at least " +
                               std::to_string(kMinSimulationDraws) + " draws");
    }
    payload.draws = *d;
  }
  if (auto p = reader.boolean("patterns", false)) {
    payload.patterns = *p;
    if (*p && count > kMaxEnumeratedParameters) {
      reader.fail("patterns", "pattern enumeration is limited to m <= " +
                                  std::to_string(kMaxEnumeratedParameters));
    }
  }
  reader.report_unknown();
  if (issues.size() != before || !m) return std::nullopt;
  payload.spec.m = *m;
  return payload;
}

std::optional<MarginalPayload> read_marginal(const Document &doc,
                                             std::vector<ConfigIssue> &issues) {
  SectionReader reader(find_section(doc, "marginal"), "marginal", issues);
  if (!reader.present()) {
    issues.push_back({"[marginal]", "section is missing"});
    return std::nullopt;
  }
  const std::size_t before = issues.size();
  MarginalPayload payload;
  if (auto v = reader.number("mu", false)) payload.mu = *v;
  if (auto v = reader.number("shape", true)) {
    if (!(*v > 0.0)) reader.fail("shape", "must be positive");
    payload.shape = *v;
  }
  if (auto v = reader.number("scale", true)) {
    if (!(*v > 0.0)) reader.fail("scale", "must be positive");
    payload.scale = *v;
  }
  if (auto v = reader.integer<std::size_t>("draws", false)) {
    if (*v < 1) reader.fail("draws", "must be at least 1");
    payload.draws = *v;
  }
  reader.report_unknown();
  if (issues.size() != before) return std::nullopt;
  return payload;
}

void render_weight_prior(std::ostream &out, const WeightPrior &w) {
  auto list = [&out](const std::vector<double> &v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      out << (i ? ", " : "") << format_number(v[i]);
    }
    out << '\n';
  };
  if (const auto *f = std::get_if<FixedWeights>(&w)) {
    out << "weights = ";
    list(f->weights);
  } else {
    out << "dirichlet = ";
    list(std::get<DirichletWeights>(w).concentration);
  }
}

std::string render_component(const Component &c) {
  if (const auto *b = std::get_if<Beta>(&c)) {
    return "beta(" + format_number(b->alpha) + ", " + format_number(b->beta) + ")";
  }
  if (const auto *n = std::get_if<Normal>(&c)) {
    return "normal(" + format_number(n->mu) + ", " + format_number(n->sigma2) + ")";
  }
  if (const auto *u = std::get_if<Uniform>(&c)) {
    return "uniform(" + format_number(u->lo) + ", " + format_number(u->hi) + ")";
  }
  return "point(" + format_number(std::get<PointMass>(c).location) + ")";
}

std::string render_components(const std::vector<Component> &cs) {
  std::string out;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i) out += ", ";
    out += render_component(cs[i]);
  }
  return out;
}

std::string render_list(const std::vector<double> &v) {
  if (!v.empty() && std::all_of(v.begin(), v.end(),
                                [&](double x) { return x == v.front(); })) {
    return format_number(v.front());
  }
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_number(v[i]);
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error([&issues] {
        std::string msg = "invalid configuration:";
        for (const auto &i : issues) msg += "\n  " + i.path + ": " + i.message;
        return msg;
      }()),
      issues_(std::move(issues)) {}

const char *to_string(Command c) {
  switch (c) {
    case Command::kUpdate:
      return "update";
    case Command::kGibbs:
      return "gibbs";
    case Command::kShrinkage:
      return "shrinkage";
    case Command::kMarginalCheck:
      return "marginal-check";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  for (auto c : {Command::kUpdate, Command::kGibbs, Command::kShrinkage,
                 Command::kMarginalCheck}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

std::string format_number(double x) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, x);
  return std::string(buffer, ptr);
}

AnalysisConfig parse_config(std::string_view text,
                            std::optional<Command> expected) {
  std::vector<ConfigIssue> issues;
  const Document doc = tokenize(text, issues);

  SectionReader top(&doc.top, "", issues);
  std::optional<Command> command = expected;
  if (auto name = top.raw("command", !expected.has_value())) {
    auto parsed = parse_command(lower(*name));
    if (!parsed) {
      top.fail("command", "unknown command '" + *name + "'");
    } else if (expected && *parsed != *expected) {
      top.fail("command", std::string("file is for '") + to_string(*parsed) +
                              "' but '" + to_string(*expected) +
                              "' was requested");
    } else {
      command = parsed;
    }
  }
  AnalysisConfig config;
  if (auto seed = top.integer<std::uint64_t>("seed", false)) config.seed = *seed;
  if (auto out = top.raw("output", false)) config.output_path = *out;
  top.report_unknown();

  static const std::map<Command, std::set<std::string>> kSections{
      {Command::kUpdate, {"prior", "data"}},
      {Command::kGibbs, {"prior", "data", "sampler"}},
      {Command::kShrinkage, {"shrinkage"}},
      {Command::kMarginalCheck, {"marginal"}}};

  if (command) {
    const auto &allowed = kSections.at(*command);
    for (const auto &s : doc.sections) {
      const bool analysis =
          *command == Command::kGibbs && s.name.starts_with("analysis");
      if (!allowed.contains(s.name) && !analysis) {
        issues.push_back({"[" + s.name + "]",
                          std::string("unknown section for '") +
                              to_string(*command) + "'"});
      }
    }
    switch (*command) {
      case Command::kUpdate:
        if (auto p = read_update(doc, issues)) config.payload = *p;
        break;
      case Command::kGibbs:
        if (auto p = read_gibbs(doc, issues)) config.payload = *p;
        break;
      case Command::kShrinkage:
        if (auto p = read_shrinkage(doc, issues)) config.payload = *p;
        break;
      case Command::kMarginalCheck:
        if (auto p = read_marginal(doc, issues)) config.payload = *p;
        break;
    }
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return config;
}

std::string render_config(const AnalysisConfig &config) {
  std::ostringstream out;
  out << "command = " << to_string(config.command()) << '\n';
  out << "seed = " << config.seed << '\n';
  if (config.output_path) out << "output = " << *config.output_path << '\n';

  std::visit(
      [&out](const auto &p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, UpdatePayload>) {
          out << "\n[prior]\ncomponents = " << render_components(p.components)
              << '\n';
          render_weight_prior(out, p.weights);
          out << "\n[data]\nr = " << p.data.r << "\nn = " << p.data.n << '\n';
        } else if constexpr (std::is_same_v<T, GibbsPayload>) {
          out << "\n[prior]\ncomponents = " << render_components(p.components)
              << '\n';
          out << "\n[data]\nr = " << p.data.r << "\nn = " << p.data.n << '\n';
          out << "\n[sampler]\nburn_in = " << p.burn_in
              << "\niterations = " << p.iterations << "\nthin = " << p.thin
              << '\n';
          for (std::size_t i = 0; i < p.analyses.size(); ++i) {
            out << "\n[analysis." << (i + 1) << "]\n";
            render_weight_prior(out, p.analyses[i]);
          }
        } else if constexpr (std::is_same_v<T, ShrinkagePayload>) {
          out << "\n[shrinkage]\nm = " << p.spec.m << '\n';
          std::visit(
              [&out](const auto &v) {
                using V = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<V, IndependentFixed>) {
                  out << "version = independent_fixed\np = " << render_list(v.p)
                      << '\n';
                } else if constexpr (std::is_same_v<V, IndependentBeta>) {
                  out << "version = independent_beta\na = " << render_list(v.a)
                      << "\nb = " << render_list(v.b) << '\n';
                } else {
                  out << "version = shared_beta\na = " << format_number(v.a)
                      << "\nb = " << format_number(v.b) << '\n';
                }
              },
              p.spec.version);
          if (p.spec.components) {
            out << "f1 = " << render_component(p.spec.components->f1) << '\n'
                << "f2 = " << render_component(p.spec.components->f2) << '\n';
          }
          out << "draws = " << p.draws << '\n'
              << "patterns = " << (p.patterns ? "true" : "false") << '\n';
        } else {
          out << "\n[marginal]\nmu = " << format_number(p.mu)
              << "\nshape = " << format_number(p.shape)
              << "\nscale = " << format_number(p.scale)
              << "\ndraws = " << p.draws << '\n';
        }
      },
      config.payload);
  return out.str();
}

}  // namespace mixprior
