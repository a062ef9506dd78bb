#include "effconv/text_format.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "effconv/error.hpp"

namespace effconv {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> words;
};

// Non-empty lines split on whitespace, comments removed.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    pos = end + 1;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::istringstream in{std::string(raw)};
    Line line{number, {}};
    for (std::string w; in >> w;) line.words.push_back(w);
    if (!line.words.empty()) out.push_back(std::move(line));
    if (end == text.size()) break;
  }
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what);
}

Rational rational_at(const Line& l, std::size_t i) {
  try {
    return Rational::parse(l.words.at(i));
  } catch (const Error& e) {
    fail(l.number, e.what());
  }
}

std::size_t natural_at(const Line& l, std::size_t i) {
  const std::string& w = l.words.at(i);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
  if (ec != std::errc() || ptr != w.data() + w.size()) fail(l.number, "expected a natural number, got '" + w + "'");
  return v;
}

void expect_words(const Line& l, std::size_t n) {
  if (l.words.size() != n)
    fail(l.number, "expected " + std::to_string(n) + " fields, got " + std::to_string(l.words.size()));
}

const Line& header(const std::vector<Line>& lines, std::string_view what) {
  if (lines.empty()) throw Error(ErrorKind::Parse, "line 1: missing header (expected " + std::string(what) + ")");
  return lines.front();
}

std::vector<Vertex> read_vertices(const std::vector<Line>& lines) {
  std::vector<Vertex> vs;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    expect_words(lines[i], 2);
    Vertex v{rational_at(lines[i], 0), rational_at(lines[i], 1)};
    if (!vs.empty() && !(vs.back().x < v.x)) fail(lines[i].number, "vertex abscissae must increase strictly");
    vs.push_back(std::move(v));
  }
  if (vs.empty()) throw Error(ErrorKind::Parse, "line " + std::to_string(lines.front().number) + ": no vertices");
  return vs;
}

}  // namespace

MeasureFile parse_measure(std::string_view text) {
  const auto lines = tokenize(text);
  const Line& h = header(lines, "discrete or polydensity");
  if (h.words.size() == 1 && h.words[0] == "discrete") {
    std::vector<Atom> atoms;
    std::optional<Rational> tail;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const Line& l = lines[i];
      if (l.words[0] == "atom") {
        expect_words(l, 3);
        Atom a{rational_at(l, 1), rational_at(l, 2)};
        if (a.weight.sign() <= 0) fail(l.number, "atom weight must be positive");
        atoms.push_back(std::move(a));
      } else if (l.words[0] == "tailbound") {
        expect_words(l, 2);
        if (tail) fail(l.number, "repeated tailbound");
        tail = rational_at(l, 1);
        if (tail->sign() < 0) fail(l.number, "tailbound must be nonnegative");
      } else {
        fail(l.number, "unknown directive '" + l.words[0] + "'");
      }
    }
    return MeasureFile{std::make_shared<DiscreteMeasure>(std::move(atoms)), tail};
  }
  if (h.words.size() == 1 && h.words[0] == "polydensity") {
    auto vs = read_vertices(lines);
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (vs[i].y.sign() < 0) fail(lines[i + 1].number, "density must be nonnegative");
    }
    return MeasureFile{std::make_shared<PolyDensityMeasure>(PolyFunc(std::move(vs), Extension::ConstantExtend)),
                       std::nullopt};
  }
  fail(h.number, "unknown measure header '" + h.words[0] + "'");
}

std::string write_measure(const Measure& m, const std::optional<Rational>& tailbound) {
  std::ostringstream out;
  if (const auto* d = dynamic_cast<const DiscreteMeasure*>(&m)) {
    if (d->is_lazy()) throw Error(ErrorKind::UnsupportedMeasure, "cannot write a lazily generated measure");
    out << "discrete\n";
    for (const auto& a : d->atoms()) out << "atom " << a.location.str() << ' ' << a.weight.str() << '\n';
    if (tailbound) out << "tailbound " << tailbound->str() << '\n';
    return out.str();
  }
  if (const auto* p = dynamic_cast<const PolyDensityMeasure*>(&m)) {
    out << "polydensity\n";
    for (const auto& v : p->density().vertices()) out << v.x.str() << ' ' << v.y.str() << '\n';
    return out.str();
  }
  throw Error(ErrorKind::UnsupportedMeasure, "measure has no text form");
}

PolyFunc parse_polyfunc(std::string_view text) {
  const auto lines = tokenize(text);
  const Line& h = header(lines, "polyfunc");
  if (h.words.size() != 2 || h.words[0] != "polyfunc") fail(h.number, "expected 'polyfunc <extension>'");
  Extension ext;
  if (h.words[1] == "constant-extend") {
    ext = Extension::ConstantExtend;
  } else if (h.words[1] == "zero-outside") {
    ext = Extension::ZeroOutside;
  } else {
    fail(h.number, "unknown extension '" + h.words[1] + "'");
  }
  auto vs = read_vertices(lines);
  if (ext == Extension::ZeroOutside && (!vs.front().y.is_zero() || !vs.back().y.is_zero()))
    fail(lines.back().number, "zero-outside needs zero end values");
  return PolyFunc(std::move(vs), ext);
}

std::string write_polyfunc(const PolyFunc& p) {
  std::ostringstream out;
  out << "polyfunc " << (p.extension() == Extension::ZeroOutside ? "zero-outside" : "constant-extend") << '\n';
  for (const auto& v : p.vertices()) out << v.x.str() << ' ' << v.y.str() << '\n';
  return out.str();
}

std::map<std::size_t, std::size_t> parse_modulus(std::string_view text) {
  const auto lines = tokenize(text);
  const Line& h = header(lines, "modulus");
  if (h.words.size() != 1 || h.words[0] != "modulus") fail(h.number, "expected 'modulus'");
  std::map<std::size_t, std::size_t> table;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    expect_words(lines[i], 2);
    if (!table.emplace(natural_at(lines[i], 0), natural_at(lines[i], 1)).second)
      fail(lines[i].number, "repeated precision");
  }
  return table;
}

std::string write_modulus(const std::map<std::size_t, std::size_t>& table) {
  std::ostringstream out;
  out << "modulus\n";
  for (const auto& [N, n] : table) out << N << ' ' << n << '\n';
  return out.str();
}

std::map<Rational, std::size_t> parse_witness(std::string_view text) {
  const auto lines = tokenize(text);
  const Line& h = header(lines, "witness");
  if (h.words.size() != 1 || h.words[0] != "witness") fail(h.number, "expected 'witness'");
  std::map<Rational, std::size_t> table;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    expect_words(lines[i], 2);
    if (!table.emplace(rational_at(lines[i], 0), natural_at(lines[i], 1)).second)
      fail(lines[i].number, "repeated rational");
  }
  return table;
}

std::string write_witness(const std::map<Rational, std::size_t>& table) {
  std::ostringstream out;
  out << "witness\n";
  for (const auto& [r, n] : table) out << r.str() << ' ' << n << '\n';
  return out.str();
}

std::vector<std::size_t> parse_enumeration(std::string_view text) {
  const auto lines = tokenize(text);
  const Line& h = header(lines, "enumeration");
  if (h.words.size() != 1 || h.words[0] != "enumeration") fail(h.number, "expected 'enumeration'");
  std::vector<std::size_t> values;
  std::set<std::size_t> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    expect_words(lines[i], 1);
    const std::size_t v = natural_at(lines[i], 0);
    if (!seen.insert(v).second)
      throw Error(ErrorKind::DuplicateEnumeration,
                  "line " + std::to_string(lines[i].number) + ": value " + std::to_string(v) + " repeats");
    values.push_back(v);
  }
  return values;
}

std::string write_report_csv(const Verdict& v) {
  std::ostringstream out;
  out << "N,index,checked_n,quantity,bound,pass\n";
  for (const auto& r : v.rows) {
    out << r.key << ',' << (r.index ? std::to_string(*r.index) : std::string("none")) << ',' << r.checked_n << ','
        << r.quantity.str() << ',' << r.bound.str() << ',' << (r.pass ? "pass" : "fail") << '\n';
  }
  return out.str();
}

std::vector<std::size_t> parse_index_list(std::string_view text) {
  auto number = [&](std::string_view w) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size())
      throw Error(ErrorKind::Parse, "bad index list '" + std::string(text) + "'");
    return v;
  };
  std::vector<std::size_t> out;
  if (auto dots = text.find(".."); dots != std::string_view::npos) {
    const std::size_t a = number(text.substr(0, dots));
    const std::size_t b = number(text.substr(dots + 2));
    if (b < a) throw Error(ErrorKind::Parse, "empty index range '" + std::string(text) + "'");
    for (std::size_t i = a; i <= b; ++i) out.push_back(i);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    out.push_back(number(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace effconv
