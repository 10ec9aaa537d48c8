#include "elcomp/problem_file.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "elcomp/error.hpp"

namespace elcomp {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw Error(ErrorCode::io, "cannot format number");
  return std::string(buf.data(), ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorCode::io, "write failed for '" + path + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::size_t value_col = 0;  // 1-based column of the first value byte
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::vector<Entry> entries;
};

class Reader {
 public:
  Reader(std::string_view text, std::string name) : text_(text), name_(std::move(name)) {}

  std::vector<Section> sections() {
    std::vector<Section> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      const std::size_t end = std::min(text_.find('\n', pos), text_.size());
      std::string_view raw = text_.substr(pos, end - pos);
      ++line_no;
      const std::size_t hash = raw.find('#');
      const std::string_view line = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
      if (!line.empty()) {
        if (line.front() == '[') {
          if (line.back() != ']') fail(ErrorCode::parse, line_no, 1, "unterminated section header");
          out.push_back({std::string(trim(line.substr(1, line.size() - 2))), line_no, {}});
        } else {
          const std::size_t eq = line.find('=');
          if (eq == std::string_view::npos) fail(ErrorCode::parse, line_no, 1, "expected 'key = value'");
          if (out.empty()) fail(ErrorCode::parse, line_no, 1, "entry before any section header");
          const std::string_view key = trim(line.substr(0, eq));
          const std::string_view value = trim(line.substr(eq + 1));
          if (key.empty()) fail(ErrorCode::parse, line_no, 1, "empty key");
          if (value.empty()) fail(ErrorCode::parse, line_no, static_cast<std::size_t>(line.data() - raw.data()) + eq + 2, "empty value for '" + std::string(key) + "'");
          const auto col = static_cast<std::size_t>(value.data() - raw.data()) + 1;
          out.back().entries.push_back({std::string(key), std::string(value), line_no, col});
        }
      }
      if (end == text_.size()) break;
      pos = end + 1;
    }
    return out;
  }

  [[noreturn]] void fail(ErrorCode code, std::size_t line, std::size_t col, const std::string& msg) const {
    const std::string where = name_ + ":" + std::to_string(line) + ":" + std::to_string(col) + ": ";
    if (code == ErrorCode::parse) throw ParseError(0, {}, where + msg);
    throw Error(code, where + msg);
  }

  Expr expr(const Entry& e, const VariableSet& vars) const {
    try {
      return parse_expr(e.value, vars);
    } catch (const ParseError& pe) {
      std::string msg = pe.what();
      fail(ErrorCode::parse, e.line, e.value_col + pe.offset(), "in '" + e.key + "': " + msg);
    }
  }

  std::vector<std::string> list(const Entry& e) const {
    std::vector<std::string> out;
    std::size_t start = 0;
    // Commas inside parentheses belong to calls such as min(a, b).
    int depth = 0;
    for (std::size_t i = 0; i <= e.value.size(); ++i) {
      if (i == e.value.size() || (e.value[i] == ',' && depth == 0)) {
        out.emplace_back(trim(std::string_view(e.value).substr(start, i - start)));
        start = i + 1;
      } else if (e.value[i] == '(') {
        ++depth;
      } else if (e.value[i] == ')') {
        --depth;
      }
    }
    return out;
  }

  double constant(const Entry& e, const std::string& item) const {
    Entry sub = e;
    sub.value = item;
    const Expr x = expr(sub, VariableSet());
    try {
      return x.eval(std::span<const double>{});
    } catch (const Error& err) {
      fail(ErrorCode::validation, e.line, e.value_col, "in '" + e.key + "': " + err.what());
    }
  }

  int integer(const Entry& e, const std::string& item) const {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      fail(ErrorCode::parse, e.line, e.value_col, "'" + e.key + "' expects integers, got '" + item + "'");
    }
    return v;
  }

 private:
  std::string_view text_;
  std::string name_;
};

bool parse_index(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) return false;
  out = v;
  return true;
}

// "12" -> (1, 2); "1_2" -> (1, 2).
bool parse_pair(std::string_view s, std::size_t& a, std::size_t& b) {
  const std::size_t us = s.find('_');
  if (us != std::string_view::npos) return parse_index(s.substr(0, us), a) && parse_index(s.substr(us + 1), b);
  if (s.size() != 2) return false;
  return parse_index(s.substr(0, 1), a) && parse_index(s.substr(1, 1), b);
}

Grid read_domain(const Reader& r, const Section& s) {
  int dim = 0;
  std::vector<double> lo, hi;
  std::vector<int> n;
  const Entry* first = nullptr;
  for (const auto& e : s.entries) {
    if (!first) first = &e;
    if (e.key == "dim") {
      dim = r.integer(e, e.value);
    } else if (e.key == "lo" || e.key == "hi") {
      auto& dst = e.key == "lo" ? lo : hi;
      for (const auto& item : r.list(e)) dst.push_back(r.constant(e, item));
    } else if (e.key == "n") {
      for (const auto& item : r.list(e)) n.push_back(r.integer(e, item));
    } else {
      r.fail(ErrorCode::validation, e.line, 1, "unknown domain key '" + e.key + "'");
    }
  }
  const std::size_t line = first ? first->line : s.line;
  if (dim != 1 && dim != 2) r.fail(ErrorCode::validation, line, 1, "domain needs dim = 1 or 2");
  const auto d = static_cast<std::size_t>(dim);
  auto broadcast = [&](auto& v, const char* what) {
    if (v.size() == 1 && d == 2) v.push_back(v[0]);
    if (v.size() != d) r.fail(ErrorCode::validation, line, 1, std::string("domain '") + what + "' needs " + std::to_string(d) + " value(s)");
  };
  broadcast(lo, "lo");
  broadcast(hi, "hi");
  broadcast(n, "n");
  try {
    return build_grid(dim, lo, hi, n);
  } catch (const Error& e) {
    r.fail(ErrorCode::bad_grid, s.line, 1, e.what());
  }
}

}  // namespace

Problem parse_problem(std::string_view text, const std::string& name) {
  Reader r(text, name);
  const auto sections = r.sections();
  const Section* domain = nullptr;
  const Section* coupling = nullptr;
  const Section* quasi = nullptr;
  std::map<std::size_t, const Section*> species;
  for (const auto& s : sections) {
    if (s.name == "domain") {
      if (domain) r.fail(ErrorCode::validation, s.line, 1, "duplicate [domain] section");
      domain = &s;
    } else if (s.name == "coupling") {
      if (coupling) r.fail(ErrorCode::validation, s.line, 1, "duplicate [coupling] section");
      coupling = &s;
    } else if (s.name == "quasilinear") {
      if (quasi) r.fail(ErrorCode::validation, s.line, 1, "duplicate [quasilinear] section");
      quasi = &s;
    } else if (s.name.rfind("species", 0) == 0) {
      std::size_t k = 0;
      if (!parse_index(trim(std::string_view(s.name).substr(7)), k)) {
        r.fail(ErrorCode::parse, s.line, 1, "section '[" + s.name + "]' needs a positive species index");
      }
      if (species.count(k)) r.fail(ErrorCode::validation, s.line, 1, "duplicate [species " + std::to_string(k) + "]");
      species[k] = &s;
    } else {
      r.fail(ErrorCode::validation, s.line, 1, "unknown section '[" + s.name + "]'");
    }
  }
  if (!domain) r.fail(ErrorCode::validation, 1, 1, "missing [domain] section");
  const Grid grid = read_domain(r, *domain);
  const int dim = grid.dim();
  const auto d = static_cast<std::size_t>(dim);

  std::size_t n = species.empty() ? 0 : species.rbegin()->first;
  if (species.size() != n) r.fail(ErrorCode::validation, domain->line, 1, "species sections must be numbered 1..N without gaps");

  Problem out;
  out.name = name;
  out.source = std::string(text);

  if (!quasi) {
    if (n == 0) r.fail(ErrorCode::validation, domain->line, 1, "no [species k] section");
    SystemSpec spec = SystemSpec::uniform(grid, n);
    for (const auto& [k, s] : species) {
      auto& op = spec.ops[k - 1];
      for (const auto& e : s->entries) {
        auto check_axis = [&](std::size_t axis) {
          if (axis >= d) r.fail(ErrorCode::validation, e.line, 1, "'" + e.key + "' refers to an axis the domain lacks");
        };
        const Expr x = r.expr(e, VariableSet::spatial());
        try {
          validate_spatial(x, dim);
        } catch (const Error& err) {
          r.fail(ErrorCode::validation, e.line, e.value_col, err.what());
        }
        std::size_t i = 0, j = 0;
        if (e.key.size() == 3 && e.key[0] == 'a' && parse_index(e.key.substr(1, 1), i) && parse_index(e.key.substr(2, 1), j)) {
          check_axis(i - 1);
          check_axis(j - 1);
          op.a[(i - 1) * d + (j - 1)] = x;
        } else if (e.key.size() == 2 && e.key[0] == 'b' && parse_index(e.key.substr(1), i)) {
          check_axis(i - 1);
          op.b[i - 1] = x;
        } else if (e.key == "c") {
          op.c = x;
        } else if (e.key == "f") {
          spec.f[k - 1] = x;
        } else if (e.key == "g") {
          spec.g[k - 1] = x;
        } else {
          r.fail(ErrorCode::validation, e.line, 1, "unknown species key '" + e.key + "'");
        }
      }
    }
    if (coupling) {
      for (const auto& e : coupling->entries) {
        std::size_t a = 0, b = 0;
        if (e.key.empty() || e.key[0] != 'm' || !parse_pair(e.key.substr(1), a, b)) {
          r.fail(ErrorCode::validation, e.line, 1, "coupling keys look like m12 or m1_2, got '" + e.key + "'");
        }
        if (a > n || b > n) {
          r.fail(ErrorCode::validation, e.line, 1, "'" + e.key + "' refers to a species beyond N = " + std::to_string(n));
        }
        const Expr x = r.expr(e, VariableSet::spatial());
        try {
          validate_spatial(x, dim);
        } catch (const Error& err) {
          r.fail(ErrorCode::validation, e.line, e.value_col, err.what());
        }
        spec.m[(a - 1) * n + (b - 1)] = x;
      }
    }
    out.linear = std::move(spec);
    return out;
  }

  if (coupling) r.fail(ErrorCode::validation, coupling->line, 1, "a quasi-linear problem carries its coupling in F");
  // Species count: the species sections and every index the quasi keys use.
  struct QuasiKey {
    enum Kind { flux, reaction, da_dp, da_du, dF_du, dF_dp } kind;
    std::size_t l = 0, i = 0, j = 0;
  };
  std::vector<std::pair<QuasiKey, const Entry*>> keys;
  for (const auto& e : quasi->entries) {
    QuasiKey q{};
    const std::string& k = e.key;
    const std::size_t slash = k.find('/');
    bool ok = false;
    if (slash == std::string::npos) {
      if (k.size() > 1 && k[0] == 'a') {
        q.kind = QuasiKey::flux;
        ok = parse_pair(k.substr(1), q.l, q.i);
      } else if (k.size() > 1 && k[0] == 'F') {
        q.kind = QuasiKey::reaction;
        ok = parse_index(k.substr(1), q.l);
      }
    } else {
      const std::string num = k.substr(0, slash);
      const std::string den = k.substr(slash + 1);
      if (num.size() > 2 && num[0] == 'd' && num[1] == 'a' && parse_pair(num.substr(2), q.l, q.i)) {
        if (den.size() > 2 && den.rfind("dp", 0) == 0 && parse_index(den.substr(2), q.j)) {
          q.kind = QuasiKey::da_dp;
          ok = true;
        } else if (den == "du") {
          q.kind = QuasiKey::da_du;
          ok = true;
        }
      } else if (num.size() > 2 && num[0] == 'd' && num[1] == 'F' && parse_index(num.substr(2), q.l)) {
        if (den.size() > 2 && den.rfind("du", 0) == 0 && parse_index(den.substr(2), q.i)) {
          q.kind = QuasiKey::dF_du;
          ok = true;
        } else if (den.size() > 2 && den.rfind("dp", 0) == 0 && parse_index(den.substr(2), q.i)) {
          q.kind = QuasiKey::dF_dp;
          ok = true;
        }
      }
    }
    if (!ok) r.fail(ErrorCode::validation, e.line, 1, "unknown quasilinear key '" + k + "'");
    n = std::max(n, q.l);
    if (q.kind == QuasiKey::dF_du) n = std::max(n, q.i);
    keys.push_back({q, &e});
  }
  if (n == 0) r.fail(ErrorCode::validation, quasi->line, 1, "quasi-linear problem declares no species");
  const VariableSet vars = quasi_variables(n);

  QuasiSpec qs;
  qs.grid = grid;
  qs.a.assign(n, {});
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t i = 0; i < d; ++i) qs.a[l].push_back(Expr::variable(quasi_slot::p1 + static_cast<int>(i)));
  }
  qs.F.assign(n, Expr::constant(0.0));
  qs.f.assign(n, Expr::constant(0.0));
  qs.g.assign(n, Expr::constant(0.0));
  qs.da_dp.assign(n, std::vector<std::optional<Expr>>(d * d));
  qs.da_du.assign(n, std::vector<std::optional<Expr>>(d));
  qs.dF_du.assign(n, std::vector<std::optional<Expr>>(n));
  qs.dF_dp.assign(n, std::vector<std::optional<Expr>>(d));

  for (const auto& [k, s] : species) {
    for (const auto& e : s->entries) {
      if (e.key != "f" && e.key != "g") {
        r.fail(ErrorCode::validation, e.line, 1, "quasi-linear species sections take only f and g, got '" + e.key + "'");
      }
      const Expr x = r.expr(e, VariableSet::spatial());
      try {
        validate_spatial(x, dim);
      } catch (const Error& err) {
        r.fail(ErrorCode::validation, e.line, e.value_col, err.what());
      }
      (e.key == "f" ? qs.f : qs.g)[k - 1] = x;
    }
  }
  for (const auto& [q, e] : keys) {
    const Expr x = r.expr(*e, vars);
    auto axis = [&](std::size_t a) {
      if (a == 0 || a > d) r.fail(ErrorCode::validation, e->line, 1, "'" + e->key + "' refers to an axis the domain lacks");
      return a - 1;
    };
    const std::size_t l = q.l - 1;
    switch (q.kind) {
      case QuasiKey::flux: qs.a[l][axis(q.i)] = x; break;
      case QuasiKey::reaction: qs.F[l] = x; break;
      case QuasiKey::da_dp: qs.da_dp[l][axis(q.i) * d + axis(q.j)] = x; break;
      case QuasiKey::da_du: qs.da_du[l][axis(q.i)] = x; break;
      case QuasiKey::dF_du: qs.dF_du[l][q.i - 1] = x; break;
      case QuasiKey::dF_dp: qs.dF_dp[l][axis(q.i)] = x; break;
    }
  }
  try {
    validate(qs);
  } catch (const Error& err) {
    r.fail(ErrorCode::validation, quasi->line, 1, err.what());
  }
  out.quasi = std::move(qs);
  return out;
}

Problem load_problem(const std::string& path) { return parse_problem(read_file(path), path); }

std::vector<NamedField> parse_fields(std::string_view text, const Grid& grid, const std::string& name) {
  std::vector<NamedField> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw ParseError(pos, {}, name + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, end - pos));
    ++line_no;
    if (!line.empty()) {
      if (line.front() == '#') {
        std::istringstream hs{std::string(line.substr(1))};
        std::string kw, fname, gkw;
        hs >> kw >> fname >> gkw;
        if (kw != "field" || fname.empty() || gkw != "grid") fail("expected '# field <name> grid ...' header");
        std::string rest;
        std::getline(hs, rest);
        const std::string gid = "grid" + std::string(rest);
        if (trim(gid) != grid.id()) {
          throw Error(ErrorCode::dim_mismatch, name + ":" + std::to_string(line_no) + ": field '" + fname +
                                                   "' is on '" + std::string(trim(gid)) + "', problem grid is '" +
                                                   grid.id() + "'");
        }
        out.push_back({fname, {grid.id(), {}}});
      } else {
        if (out.empty()) fail("value before any field header");
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
        if (ec != std::errc() || ptr != line.data() + line.size()) fail("bad number '" + std::string(line) + "'");
        out.back().field.values.push_back(v);
      }
    }
    pos = end + 1;
  }
  for (const auto& f : out) {
    if (f.field.values.size() != grid.node_count()) {
      throw Error(ErrorCode::dim_mismatch, name + ": field '" + f.name + "' has " +
                                               std::to_string(f.field.values.size()) + " values, grid has " +
                                               std::to_string(grid.node_count()) + " nodes");
    }
  }
  return out;
}

std::vector<NamedField> read_fields(const std::string& path, const Grid& grid) {
  return parse_fields(read_file(path), grid, path);
}

std::string format_fields(const std::vector<NamedField>& fields, const Grid& grid) {
  std::string out;
  for (const auto& f : fields) {
    if (f.field.values.size() != grid.node_count()) throw Error(ErrorCode::dim_mismatch, "field does not match the grid");
    out += "# field " + f.name + " " + grid.id() + "\n";
    for (double v : f.field.values) out += format_double(v) + "\n";
  }
  return out;
}

BlockField read_block_field(const std::string& path, const Grid& grid, std::size_t species) {
  auto fields = read_fields(path, grid);
  if (fields.size() != species) {
    throw Error(ErrorCode::dim_mismatch, path + ": expected " + std::to_string(species) + " fields, found " +
                                             std::to_string(fields.size()));
  }
  BlockField out;
  for (auto& f : fields) out.push_back(std::move(f.field));
  return out;
}

}  // namespace elcomp
