#include "kds/scenario.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

namespace kds {

std::string ScenarioError::str() const {
  std::ostringstream os;
  os << "line " << line << ", col " << column << ": " << message;
  return os.str();
}

Angle Scenario::effective_theta() const {
  if (theta) return *theta;
  return Angle{1, 3};
}

namespace {

struct Cursor {
  const std::string& text;
  size_t pos = 0;
  int line = 1;

  bool next_line(std::string& out) {
    if (pos >= text.size()) return false;
    size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    out = text.substr(pos, end - pos);
    pos = end + 1;
    return true;
  }
};

[[noreturn]] void fail(int line, int col, const std::string& msg) {
  throw ScenarioError{line, col, msg};
}

std::vector<std::pair<std::string, int>> tokenize(const std::string& line) {
  std::vector<std::pair<std::string, int>> toks;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(uint8_t(line[i]))) ++i;
    if (i >= line.size() || line[i] == '#') break;
    size_t j = i;
    while (j < line.size() && !std::isspace(uint8_t(line[j])) &&
           line[j] != '#')
      ++j;
    toks.emplace_back(line.substr(i, j - i), int(i) + 1);
    i = j;
  }
  return toks;
}

Angle parse_theta(const std::string& tok, int line, int col) {
  // forms: "pi/3"
  if (tok.rfind("pi/", 0) != 0) fail(line, col, "theta must look like pi/3");
  int den = 0;
  try {
    den = std::stoi(tok.substr(3));
  } catch (...) {
    fail(line, col, "malformed theta denominator");
  }
  Angle a{1, den};
  if (!ConeFamily::supported(a))
    fail(line, col,
         "unsupported theta (exact construction: pi/3, pi/4, pi/6, pi/8, "
         "pi/12)");
  return a;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  Cursor cur{text};
  std::string line;
  bool have_d = false, have_s = false;
  std::set<PointId> ids;
  int lineno = 0;
  while (cur.next_line(line)) {
    lineno = cur.line++;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const auto& [key, kcol] = toks[0];
    auto need = [&](size_t k, const char* what) {
      if (toks.size() < k + 1)
        fail(lineno, int(line.size()) + 1, std::string("missing ") + what);
    };
    if (key == "d") {
      need(1, "dimension");
      if (toks[1].first == "2")
        sc.dim = 2;
      else if (toks[1].first == "3")
        sc.dim = 3;
      else
        fail(lineno, toks[1].second, "dimension must be 2 or 3");
      have_d = true;
    } else if (key == "s") {
      need(1, "degree");
      try {
        sc.max_degree = std::stoi(toks[1].first);
      } catch (...) {
        fail(lineno, toks[1].second, "malformed degree");
      }
      if (sc.max_degree < 0 || sc.max_degree > 4)
        fail(lineno, toks[1].second,
             "trajectory degree s must be between 0 and 4");
      have_s = true;
    } else if (key == "theta") {
      need(1, "angle");
      sc.theta = parse_theta(toks[1].first, lineno, toks[1].second);
    } else if (key == "eps") {
      need(1, "epsilon");
      auto e = parse_rat(toks[1].first);
      if (!e || *e <= 0) fail(lineno, toks[1].second, "malformed eps");
      sc.eps = *e;
    } else if (key == "horizon") {
      need(1, "horizon");
      auto h = parse_rat(toks[1].first);
      if (!h || *h < 0) fail(lineno, toks[1].second, "malformed horizon");
      sc.horizon = *h;
    } else if (key == "seed") {
      need(1, "seed");
      try {
        sc.seed = std::stoull(toks[1].first);
      } catch (...) {
        fail(lineno, toks[1].second, "malformed seed");
      }
    } else if (key == "point") {
      need(1, "point id");
      Trajectory tr;
      tr.dim = sc.dim;
      try {
        unsigned long idv = std::stoul(toks[1].first);
        tr.id = PointId(idv);
      } catch (...) {
        fail(lineno, toks[1].second, "malformed point id");
      }
      if (!ids.insert(tr.id).second)
        fail(lineno, toks[1].second, "duplicate point id");
      size_t k = 2;
      if (k < toks.size() && toks[k].first == ":") ++k;
      int coord = 0;
      std::vector<Rat> coeffs;
      auto flush = [&](int col) {
        if (coord >= sc.dim) fail(lineno, col, "too many coordinates");
        if (int(coeffs.size()) > sc.max_degree + 1)
          fail(lineno, col, "coefficient degree exceeds s");
        tr.coord[coord] = RatPoly(coeffs);
        coeffs.clear();
        ++coord;
      };
      for (; k < toks.size(); ++k) {
        if (toks[k].first == "|") {
          flush(toks[k].second);
          continue;
        }
        auto v = parse_rat(toks[k].first);
        if (!v) fail(lineno, toks[k].second, "malformed coefficient");
        coeffs.push_back(*v);
      }
      flush(int(line.size()) + 1);
      if (coord != sc.dim)
        fail(lineno, int(line.size()) + 1, "wrong number of coordinates");
      sc.points.push_back(std::move(tr));
    } else {
      fail(lineno, kcol, "unknown directive '" + key + "'");
    }
  }
  (void)have_d;
  (void)have_s;
  std::sort(sc.points.begin(), sc.points.end(),
            [](const Trajectory& a, const Trajectory& b) { return a.id < b.id; });
  return sc;
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream os;
  os << "# kds scenario\n";
  os << "d " << s.dim << "\n";
  os << "s " << s.max_degree << "\n";
  if (s.theta) os << "theta pi/" << s.theta->den << "\n";
  if (s.eps) os << "eps " << to_string(*s.eps) << "\n";
  os << "horizon " << to_string(s.horizon) << "\n";
  os << "seed " << s.seed << "\n";
  for (const auto& p : s.points) {
    os << "point " << p.id << " :";
    for (int i = 0; i < p.dim; ++i) {
      if (i) os << " |";
      const auto& c = p.coord[i].coeffs();
      if (c.empty()) os << " 0";
      for (const auto& v : c) os << " " << to_string(v);
    }
    os << "\n";
  }
  return os.str();
}

Scenario generate_scenario(const GenParams& prm) {
  Scenario sc;
  sc.dim = prm.dim;
  sc.max_degree = prm.degree;
  sc.horizon = prm.horizon;
  sc.seed = prm.seed;
  sc.eps = prm.eps;
  std::mt19937_64 rng(prm.seed);
  // positions in [-8,8], velocities in [-8,8], higher terms shrinking;
  // all coefficients are multiples of 1/64.
  auto coeff = [&](int k) {
    int span = 512 >> std::min(k, 3);  // 512, 256, 128, 64 in 1/64 units
    std::uniform_int_distribution<int> d(-span, span);
    return Rat(d(rng), 64);
  };
  for (int i = 0; i < prm.n; ++i) {
    Trajectory t;
    t.id = PointId(i);
    t.dim = prm.dim;
    for (int c = 0; c < prm.dim; ++c) {
      std::vector<Rat> cs;
      for (int k = 0; k <= prm.degree; ++k) cs.push_back(coeff(k));
      t.coord[c] = RatPoly(std::move(cs));
    }
    sc.points.push_back(std::move(t));
  }
  return sc;
}

}  // namespace kds
