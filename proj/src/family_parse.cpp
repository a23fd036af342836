#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "bfree/error.hpp"
#include "bfree/family.hpp"

namespace bfree {

namespace {

// A nested bracket list whose leaves are raw tokens: [[1,2],[t,3]].
struct Node {
  std::string atom;
  std::vector<Node> items;
  bool is_list = false;
};

class ListReader {
 public:
  explicit ListReader(std::string_view text) : s_(text) {}

  Node read() {
    Node n = node();
    skip_space();
    if (i_ != s_.size()) throw std::invalid_argument("trailing characters after list");
    return n;
  }

 private:
  void skip_space() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  Node node() {
    skip_space();
    Node n;
    if (i_ < s_.size() && s_[i_] == '[') {
      ++i_;
      n.is_list = true;
      skip_space();
      if (i_ < s_.size() && s_[i_] == ']') {
        ++i_;
        return n;
      }
      while (true) {
        n.items.push_back(node());
        skip_space();
        if (i_ >= s_.size()) throw std::invalid_argument("unterminated list");
        if (s_[i_] == ']') {
          ++i_;
          return n;
        }
        if (s_[i_] != ',') throw std::invalid_argument("expected ',' or ']'");
        ++i_;
      }
    }
    std::size_t start = i_;
    while (i_ < s_.size() && s_[i_] != ',' && s_[i_] != ']' && s_[i_] != '[' &&
           !std::isspace(static_cast<unsigned char>(s_[i_])))
      ++i_;
    if (start == i_) throw std::invalid_argument("empty list element");
    n.atom = std::string(s_.substr(start, i_ - start));
    return n;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<BigInt> int_list(const Node& n) {
  if (!n.is_list) throw std::invalid_argument("expected a list of integers");
  std::vector<BigInt> out;
  for (const Node& item : n.items) {
    if (item.is_list) throw std::invalid_argument("expected an integer, found a list");
    out.push_back(parse_bigint(item.atom));
  }
  return out;
}

std::vector<std::vector<BigInt>> int_rows(const Node& n) {
  if (!n.is_list || n.items.empty()) throw std::invalid_argument("expected a non-empty list of vectors");
  std::vector<std::vector<BigInt>> out;
  for (const Node& item : n.items) out.push_back(int_list(item));
  for (const auto& r : out)
    if (r.size() != out.front().size()) throw std::invalid_argument("vectors of different lengths");
  return out;
}

Monomial parse_monomial(const std::string& tok) {
  const auto t = tok.find('t');
  if (t == std::string::npos) return Monomial{parse_bigint(tok), 0};
  std::string coef = tok.substr(0, t);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  Monomial m;
  m.coef = coef.empty() ? BigInt(1) : parse_bigint(coef);
  std::string rest = tok.substr(t + 1);
  if (rest.empty()) {
    m.exp = 1;
  } else {
    if (rest.front() != '^') throw std::invalid_argument("bad monomial '" + tok + "'");
    BigInt e = parse_bigint(rest.substr(1));
    if (e < 1 || !e.fits_ulong_p()) throw std::invalid_argument("bad exponent in '" + tok + "'");
    m.exp = e.get_ui();
  }
  return m;
}

std::vector<BigInt> comma_ints(std::string_view s) {
  std::vector<BigInt> out;
  std::string cur;
  std::istringstream in{std::string(s)};
  while (std::getline(in, cur, ',')) out.push_back(parse_bigint(trim(cur)));
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

ParamSeq parse_params(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "primes") {
    if (arg.empty()) return ParamSeq::primes();
    if (arg.rfind("exclude=", 0) != 0) throw std::invalid_argument("expected primes:exclude=p,q,...");
    return ParamSeq::primes(comma_ints(std::string_view(arg).substr(8)));
  }
  if (kind == "oddprimes" && arg.empty()) return ParamSeq::odd_primes();
  if (kind == "geometric") {
    const auto c2 = arg.find(':');
    BigInt base = parse_bigint(arg.substr(0, c2));
    unsigned long offset = 1;
    if (c2 != std::string::npos) {
      BigInt o = parse_bigint(arg.substr(c2 + 1));
      if (o < 0 || !o.fits_ulong_p()) throw std::invalid_argument("bad geometric offset");
      offset = o.get_ui();
    }
    return ParamSeq::geometric(base, offset);
  }
  if (kind == "explicit") return ParamSeq::explicit_list(comma_ints(arg));
  throw std::invalid_argument("unknown parameter sequence '" + text + "'");
}

// Splits "key=value key=value" where values may contain bracketed spaces.
std::map<std::string, std::string> key_values(std::string_view s) {
  std::map<std::string, std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    std::size_t eq = s.find('=', i);
    if (eq == std::string_view::npos) throw std::invalid_argument("expected key=value");
    std::string key(s.substr(i, eq - i));
    std::size_t j = eq + 1;
    int depth = 0;
    while (j < s.size() && (depth > 0 || !std::isspace(static_cast<unsigned char>(s[j])))) {
      if (s[j] == '[' || s[j] == '(') ++depth;
      if (s[j] == ']' || s[j] == ')') --depth;
      ++j;
    }
    if (!out.emplace(key, std::string(s.substr(eq + 1, j - eq - 1))).second)
      throw std::invalid_argument("duplicate key '" + key + "'");
    i = j;
  }
  return out;
}

const std::string& require_key(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw std::invalid_argument("missing " + key + "=");
  return it->second;
}

Eigen::Index parse_scale(const std::string& text, Eigen::Index dim) {
  if (text.size() < 5 || text.front() != '(' || text.back() != ')')
    throw std::invalid_argument("scale must look like (i,i)");
  std::vector<BigInt> ij = comma_ints(std::string_view(text).substr(1, text.size() - 2));
  if (ij.size() != 2 || ij[0] != ij[1]) throw std::invalid_argument("scaled position must be on the diagonal");
  if (ij[0] < 1 || ij[0] > dim) throw std::invalid_argument("scaled position out of range");
  return static_cast<Eigen::Index>(ij[0].get_si() - 1);
}

void require_dim(Eigen::Index got, Eigen::Index dim) {
  if (got != dim) throw std::invalid_argument("expected dimension " + std::to_string(dim));
}

FamilyEntry parse_entry(const std::string& keyword, const std::string& rest, Eigen::Index dim) {
  if (keyword == "static") {
    auto cols = int_rows(ListReader(rest).read());
    require_dim(static_cast<Eigen::Index>(cols.front().size()), dim);
    Lattice l = hnf(int_matrix_from_columns(cols));
    if (!l.is_proper()) throw std::invalid_argument("lattice has index 1");
    return StaticEntry{l};
  }
  if (keyword == "rect") {
    auto a = int_list(ListReader(rest).read());
    require_dim(static_cast<Eigen::Index>(a.size()), dim);
    return RectEntry{a};
  }
  if (keyword == "template") {
    auto kv = key_values(rest);
    auto cols = int_rows(ListReader(require_key(kv, "base")).read());
    require_dim(static_cast<Eigen::Index>(cols.size()), dim);
    require_dim(static_cast<Eigen::Index>(cols.front().size()), dim);
    if (kv.size() != 3) throw std::invalid_argument("template takes base=, scale= and params=");
    return TemplateEntry{int_matrix_from_columns(cols), parse_scale(require_key(kv, "scale"), dim),
                         parse_params(require_key(kv, "params"))};
  }
  if (keyword == "recttemplate") {
    const auto close = rest.find(']');
    if (close == std::string::npos) throw std::invalid_argument("expected [..] coordinates");
    Node list = ListReader(rest.substr(0, close + 1)).read();
    auto kv = key_values(std::string_view(rest).substr(close + 1));
    if (kv.size() != 1) throw std::invalid_argument("recttemplate takes only params=");
    RectTemplateEntry e{{}, parse_params(require_key(kv, "params"))};
    if (!list.is_list) throw std::invalid_argument("expected [..] coordinates");
    for (const Node& item : list.items) {
      if (item.is_list) throw std::invalid_argument("nested list in recttemplate");
      e.coords.push_back(parse_monomial(item.atom));
    }
    require_dim(static_cast<Eigen::Index>(e.coords.size()), dim);
    return e;
  }
  throw std::invalid_argument("unknown entry '" + keyword + "'");
}

[[noreturn]] void line_error(std::size_t line, const std::string& what) {
  fail(Errc::ParseError, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

FamilySpec parse_family(std::string_view text) {
  FamilySpec spec;
  bool have_dim = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto space = line.find_first_of(" \t");
    const std::string keyword = line.substr(0, space);
    const std::string rest = space == std::string::npos ? "" : trim(line.substr(space));
    try {
      if (keyword == "dim") {
        if (have_dim) throw std::invalid_argument("dim given twice");
        if (!spec.entries.empty()) throw std::invalid_argument("dim must precede the entries");
        BigInt d = parse_bigint(rest);
        if (d < 1 || d > 64) throw std::invalid_argument("dimension must be in [1, 64]");
        spec.dim = d.get_si();
        have_dim = true;
        continue;
      }
      if (!have_dim) throw std::invalid_argument("dim must come first");
      if (keyword == "transform") {
        if (spec.transform) throw std::invalid_argument("transform given twice");
        auto rows = int_rows(ListReader(rest).read());
        require_dim(static_cast<Eigen::Index>(rows.size()), spec.dim);
        require_dim(static_cast<Eigen::Index>(rows.front().size()), spec.dim);
        IntMatrix a(spec.dim, spec.dim);
        for (Eigen::Index i = 0; i < spec.dim; ++i)
          for (Eigen::Index j = 0; j < spec.dim; ++j)
            a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        spec.transform = UnimodularMap(a);
        continue;
      }
      spec.entries.push_back(parse_entry(keyword, rest, spec.dim));
      FamilySpec single{spec.dim, {spec.entries.back()}, std::nullopt};
      single.validate();
    } catch (const Error& e) {
      if (e.code() == Errc::ParseError) line_error(line_no, e.what());
      line_error(line_no, std::string(errc_name(e.code())) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      line_error(line_no, e.what());
    }
  }
  if (!have_dim) fail(Errc::ParseError, "missing 'dim' line");
  return spec;
}

FamilySpec load_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open family file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_family(buf.str());
}

std::string to_text(const FamilySpec& spec) {
  std::string s = "dim " + std::to_string(spec.dim) + "\n";
  for (const FamilyEntry& e : spec.entries) s += entry_to_string(e) + "\n";
  if (spec.transform) {
    const IntMatrix& a = spec.transform->matrix();
    s += "transform [";
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      s += i ? ",[" : "[";
      for (Eigen::Index j = 0; j < a.cols(); ++j) s += (j ? "," : "") + to_string(a(i, j));
      s += "]";
    }
    s += "]\n";
  }
  return s;
}

}  // namespace bfree
