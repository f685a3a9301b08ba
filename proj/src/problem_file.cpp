#include "adpt/problem_file.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "adpt/errors.hpp"

namespace adpt {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct Entry {
  std::string value;
  int lineno = 0;
  bool used = false;
};

class ProblemReader {
 public:
  explicit ProblemReader(const std::string& path) : path_(path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open problem file '" + path + "'");
    static const std::set<std::string> known_sections = {"system", "cost", "adp",
                                                         "explore"};
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string text = trim(line);
      if (text.empty() || text[0] == '#') continue;
      if (text.front() == '[') {
        if (text.back() != ']')
          throw ParseError(path_ + ":" + std::to_string(lineno) +
                           ": malformed section header '" + text + "'");
        section = trim(text.substr(1, text.size() - 2));
        if (!known_sections.count(section))
          throw ParseError(path_ + ":" + std::to_string(lineno) + ": unknown section [" +
                           section + "]");
        continue;
      }
      const std::size_t eq = text.find('=');
      if (eq == std::string::npos)
        throw ParseError(path_ + ":" + std::to_string(lineno) +
                         ": expected 'key = value', got '" + text + "'");
      if (section.empty())
        throw ParseError(path_ + ":" + std::to_string(lineno) +
                         ": key outside of any [section]");
      const std::string key = trim(text.substr(0, eq));
      if (key.empty())
        throw ParseError(path_ + ":" + std::to_string(lineno) + ": empty key");
      auto [it, fresh] = entries_[section].emplace(key, Entry{trim(text.substr(eq + 1)), lineno, false});
      (void)it;
      if (!fresh)
        throw ParseError(path_ + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                         "' in [" + section + "]");
    }
  }

  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& what) const {
    throw InputError(path_ + ": [" + section + "] " + key + ": " + what);
  }

  bool has(const std::string& section, const std::string& key) {
    auto sec = entries_.find(section);
    return sec != entries_.end() && sec->second.count(key) > 0;
  }

  const std::string& require(const std::string& section, const std::string& key) {
    auto sec = entries_.find(section);
    if (sec == entries_.end())
      throw InputError(path_ + ": missing section [" + section + "] (required for key '" +
                       key + "')");
    auto it = sec->second.find(key);
    if (it == sec->second.end()) fail(section, key, "required key is missing");
    it->second.used = true;
    return it->second.value;
  }

  const std::string* optional(const std::string& section, const std::string& key) {
    auto sec = entries_.find(section);
    if (sec == entries_.end()) return nullptr;
    auto it = sec->second.find(key);
    if (it == sec->second.end()) return nullptr;
    it->second.used = true;
    return &it->second.value;
  }

  // Call after extracting everything: any untouched key is a typo.
  void reject_unused() const {
    for (const auto& [section, keys] : entries_) {
      for (const auto& [key, entry] : keys) {
        if (!entry.used)
          throw InputError(path_ + ":" + std::to_string(entry.lineno) + ": unknown key '" +
                           key + "' in [" + section + "]");
      }
    }
  }

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::map<std::string, std::map<std::string, Entry>> entries_;
};

long long parse_int(ProblemReader& r, const std::string& section, const std::string& key,
                    const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    r.fail(section, key, "not an integer: '" + value + "'");
  }
}

double parse_real(ProblemReader& r, const std::string& section, const std::string& key,
                  const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (value.empty() || end != begin + value.size() || !std::isfinite(v))
    r.fail(section, key, "not a finite number: '" + value + "'");
  return v;
}

std::uint64_t parse_seed(ProblemReader& r, const std::string& section,
                         const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    r.fail(section, key, "not an unsigned integer: '" + value + "'");
  }
}

}  // namespace

ProblemFile load_problem_file(const std::string& path) {
  ProblemReader reader(path);
  ProblemFile pf;

  // [system]
  const long long n = parse_int(reader, "system", "n", reader.require("system", "n"));
  const long long m = parse_int(reader, "system", "m", reader.require("system", "m"));
  if (n < 1 || n > 64) reader.fail("system", "n", "state dimension out of range (1..64)");
  if (m < 1 || m > 64) reader.fail("system", "m", "input dimension out of range (1..64)");
  pf.system.n = static_cast<int>(n);
  pf.system.m = static_cast<int>(m);

  try {
    pf.system.f = parse_vector_expression(reader.require("system", "f"));
  } catch (const Error& e) {
    reader.fail("system", "f", e.what());
  }
  if (pf.system.f.size() != pf.system.n)
    reader.fail("system", "f",
                "needs " + std::to_string(n) + " rows, got " +
                    std::to_string(pf.system.f.size()));
  try {
    pf.system.g = parse_matrix_expression(reader.require("system", "g"));
  } catch (const Error& e) {
    reader.fail("system", "g", e.what());
  }
  if (pf.system.g.rows != pf.system.n || pf.system.g.cols != pf.system.m)
    reader.fail("system", "g",
                "needs shape " + std::to_string(n) + "x" + std::to_string(m) + ", got " +
                    std::to_string(pf.system.g.rows) + "x" +
                    std::to_string(pf.system.g.cols));

  // [cost]
  try {
    pf.system.q = parse_expression(reader.require("cost", "q"));
  } catch (const Error& e) {
    reader.fail("cost", "q", e.what());
  }
  try {
    pf.system.R = parse_numeric_matrix(reader.require("cost", "R"));
  } catch (const Error& e) {
    reader.fail("cost", "R", e.what());
  }
  if (pf.system.R.rows() != pf.system.m || pf.system.R.cols() != pf.system.m)
    reader.fail("cost", "R",
                "needs shape " + std::to_string(m) + "x" + std::to_string(m) + ", got " +
                    std::to_string(pf.system.R.rows()) + "x" +
                    std::to_string(pf.system.R.cols()));

  // [adp]
  ModelBasedOptions& opt = pf.options;
  if (const std::string* v = reader.optional("adp", "d")) {
    const long long d = parse_int(reader, "adp", "d", *v);
    if (d < 1 || d > 32) reader.fail("adp", "d", "degree out of range (1..32)");
    pf.d = static_cast<int>(d);
  }
  if (const std::string* v = reader.optional("adp", "crit")) {
    const long long crit = parse_int(reader, "adp", "crit", *v);
    if (crit < 0 || crit > 3) reader.fail("adp", "crit", "criterion must be 0, 1, 2 or 3");
    opt.crit = static_cast<int>(crit);
  }
  if (const std::string* v = reader.optional("adp", "epsilon")) {
    opt.epsilon = parse_real(reader, "adp", "epsilon", *v);
    if (!(opt.epsilon > 0.0)) reader.fail("adp", "epsilon", "must be positive");
  }
  if (const std::string* v = reader.optional("adp", "maxIter")) {
    const long long it = parse_int(reader, "adp", "maxIter", *v);
    if (it < 1) reader.fail("adp", "maxIter", "must be at least 1");
    opt.max_iter = static_cast<int>(it);
  }
  if (const std::string* v = reader.optional("adp", "stride")) {
    const long long s = parse_int(reader, "adp", "stride", *v);
    if (s < 1) reader.fail("adp", "stride", "must be at least 1");
    opt.stride = static_cast<int>(s);
  }
  if (const std::string* v = reader.optional("adp", "seed"))
    opt.seed = parse_seed(reader, "adp", "seed", *v);

  // [explore]
  if (const std::string* v = reader.optional("explore", "xInit")) {
    Eigen::MatrixXd states;
    try {
      states = parse_numeric_matrix(*v);
    } catch (const Error& e) {
      reader.fail("explore", "xInit", e.what());
    }
    if (states.cols() != pf.system.n)
      reader.fail("explore", "xInit",
                  "each row needs " + std::to_string(n) + " entries, got " +
                      std::to_string(states.cols()));
    for (Eigen::Index i = 0; i < states.rows(); ++i)
      opt.x_init.push_back(states.row(i).transpose());
  }
  if (const std::string* v = reader.optional("explore", "xInitNum")) {
    const long long c = parse_int(reader, "explore", "xInitNum", *v);
    if (c < 1) reader.fail("explore", "xInitNum", "must be at least 1");
    opt.x_init_num = static_cast<int>(c);
  }
  if (const std::string* v = reader.optional("explore", "xInitMin"))
    opt.x_init_min = parse_real(reader, "explore", "xInitMin", *v);
  if (const std::string* v = reader.optional("explore", "xInitMax"))
    opt.x_init_max = parse_real(reader, "explore", "xInitMax", *v);
  if (const std::string* v = reader.optional("explore", "tSpan")) {
    Eigen::MatrixXd spans;
    try {
      spans = parse_numeric_matrix(*v);
    } catch (const Error& e) {
      reader.fail("explore", "tSpan", e.what());
    }
    if (spans.cols() != 2)
      reader.fail("explore", "tSpan", "each row needs 2 entries (t0, tf)");
    opt.t_span.clear();
    for (Eigen::Index i = 0; i < spans.rows(); ++i)
      opt.t_span.emplace_back(spans(i, 0), spans(i, 1));
  }
  if (const std::string* v = reader.optional("explore", "dt")) {
    opt.dt = parse_real(reader, "explore", "dt", *v);
    if (!(opt.dt > 0.0)) reader.fail("explore", "dt", "must be positive");
  }
  if (const std::string* v = reader.optional("explore", "segment")) {
    opt.segment = parse_real(reader, "explore", "segment", *v);
    if (!(opt.segment > 0.0)) reader.fail("explore", "segment", "must be positive");
  }
  if (const std::string* v = reader.optional("explore", "u0")) {
    try {
      opt.u0 = parse_vector_expression(*v);
    } catch (const Error& e) {
      reader.fail("explore", "u0", e.what());
    }
    if (opt.u0.size() != pf.system.m)
      reader.fail("explore", "u0",
                  "needs " + std::to_string(m) + " rows, got " +
                      std::to_string(opt.u0.size()));
  }
  if (const std::string* v = reader.optional("explore", "eta")) {
    VectorExpr eta;
    try {
      eta = parse_vector_expression(*v);
    } catch (const Error& e) {
      reader.fail("explore", "eta", e.what());
    }
    if (eta.size() < 1 || eta.size() % pf.system.m != 0)
      reader.fail("explore", "eta",
                  "needs m = " + std::to_string(m) +
                      " rows (shared) or m rows per trajectory, got " +
                      std::to_string(eta.size()));
    opt.eta = eta.rows;
  }
  if (const std::string* v = reader.optional("explore", "explAmpl")) {
    opt.expl_ampl = parse_real(reader, "explore", "explAmpl", *v);
    if (!(opt.expl_ampl >= 0.0)) reader.fail("explore", "explAmpl", "must be nonnegative");
  }
  if (const std::string* v = reader.optional("explore", "numFreq")) {
    const long long c = parse_int(reader, "explore", "numFreq", *v);
    if (c < 1) reader.fail("explore", "numFreq", "must be at least 1");
    opt.num_freq = static_cast<int>(c);
  }

  reader.reject_unused();

  try {
    pf.system.validate();
  } catch (const Error& e) {
    throw InputError(reader.path() + ": " + e.what());
  }
  return pf;
}

}  // namespace adpt
