#include "fraccon/error.hpp"
#include "fraccon/mesh.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

namespace fraccon {
namespace {

struct Token {
  std::string text;
  int column = 0;
};

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next non-empty line split into tokens; false at end of input.
  bool next(std::vector<Token>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      tokens.clear();
      std::size_t i = 0;
      while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
      }
      if (!tokens.empty()) return true;
    }
    return false;
  }

  int line() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

template <typename T>
T parse_number(const Token& tok, int line) {
  T value{};
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ParseError("expected a number, got '" + tok.text + "'", line, tok.column);
  return value;
}

void expect_count(const std::vector<Token>& tokens, std::size_t n, int line) {
  if (tokens.size() != n)
    throw ParseError("expected " + std::to_string(n) + " fields, got " +
                         std::to_string(tokens.size()),
                     line, tokens.empty() ? 0 : tokens.front().column);
}

int read_header(LineReader& reader, std::vector<Token>& tokens, std::string_view keyword) {
  if (!reader.next(tokens))
    throw ParseError("unexpected end of file, expected " + std::string(keyword), reader.line());
  if (tokens.front().text != keyword)
    throw ParseError("expected " + std::string(keyword) + ", got '" + tokens.front().text + "'",
                     reader.line(), tokens.front().column);
  expect_count(tokens, 2, reader.line());
  const int n = parse_number<int>(tokens[1], reader.line());
  if (n < 0) throw ParseError("negative count", reader.line(), tokens[1].column);
  return n;
}

}  // namespace

Mesh parse_mesh(std::istream& in) {
  LineReader reader(in);
  std::vector<Token> tok;
  Mesh mesh;

  const int n_node = read_header(reader, tok, "NODES");
  mesh.nodes.resize(static_cast<std::size_t>(n_node));
  std::vector<bool> seen(static_cast<std::size_t>(n_node), false);
  for (int i = 0; i < n_node; ++i) {
    if (!reader.next(tok)) throw ParseError("unexpected end of file in NODES", reader.line());
    expect_count(tok, 3, reader.line());
    const int id = parse_number<int>(tok[0], reader.line());
    if (id < 0 || id >= n_node)
      throw ParseError("node id " + std::to_string(id) + " out of range", reader.line(),
                       tok[0].column);
    if (seen[static_cast<std::size_t>(id)])
      throw ParseError("duplicate node id " + std::to_string(id), reader.line(), tok[0].column);
    seen[static_cast<std::size_t>(id)] = true;
    mesh.nodes[static_cast<std::size_t>(id)] = {id, parse_number<double>(tok[1], reader.line()),
                                                parse_number<double>(tok[2], reader.line())};
  }

  const int n_elem = read_header(reader, tok, "ELEMENTS");
  mesh.elements.resize(static_cast<std::size_t>(n_elem));
  std::vector<bool> seen_elem(static_cast<std::size_t>(n_elem), false);
  for (int i = 0; i < n_elem; ++i) {
    if (!reader.next(tok)) throw ParseError("unexpected end of file in ELEMENTS", reader.line());
    expect_count(tok, 4, reader.line());
    const int id = parse_number<int>(tok[0], reader.line());
    if (id < 0 || id >= n_elem || seen_elem[static_cast<std::size_t>(id)])
      throw ParseError("bad or duplicate element id " + std::to_string(id), reader.line(),
                       tok[0].column);
    seen_elem[static_cast<std::size_t>(id)] = true;
    Tri3 e{id, {}};
    for (int k = 0; k < 3; ++k) {
      e.nodes[static_cast<std::size_t>(k)] = parse_number<int>(tok[1 + k], reader.line());
      if (e.nodes[static_cast<std::size_t>(k)] < 0 || e.nodes[static_cast<std::size_t>(k)] >= n_node)
        throw ParseError("element references missing node", reader.line(), tok[1 + k].column);
    }
    mesh.elements[static_cast<std::size_t>(id)] = e;
  }

  if (!reader.next(tok)) throw ParseError("unexpected end of file, expected FRACTURES or END",
                                          reader.line());
  if (tok.front().text == "FRACTURES") {
    expect_count(tok, 2, reader.line());
    const int n_frac = parse_number<int>(tok[1], reader.line());
    mesh.fractures.resize(static_cast<std::size_t>(std::max(n_frac, 0)));
    std::vector<bool> seen_frac(mesh.fractures.size(), false);
    for (int i = 0; i < n_frac; ++i) {
      if (!reader.next(tok)) throw ParseError("unexpected end of file in FRACTURES", reader.line());
      if (tok.size() < 2) expect_count(tok, 2, reader.line());
      const int id = parse_number<int>(tok[0], reader.line());
      const int len = parse_number<int>(tok[1], reader.line());
      if (id < 0 || id >= n_frac || seen_frac[static_cast<std::size_t>(id)])
        throw ParseError("bad or duplicate fracture id " + std::to_string(id), reader.line(),
                         tok[0].column);
      seen_frac[static_cast<std::size_t>(id)] = true;
      if (len < 2 || tok.size() != static_cast<std::size_t>(len) + 2)
        throw ParseError("fracture length does not match its node list", reader.line(),
                         tok[1].column);
      FracturePath f;
      f.id = id;
      for (int k = 0; k < len; ++k) {
        const int n = parse_number<int>(tok[2 + static_cast<std::size_t>(k)], reader.line());
        if (n < 0 || n >= n_node)
          throw ParseError("fracture references missing node", reader.line(),
                           tok[2 + static_cast<std::size_t>(k)].column);
        f.nodes.push_back(n);
      }
      mesh.fractures[static_cast<std::size_t>(id)] = std::move(f);
    }
    if (!reader.next(tok)) throw ParseError("unexpected end of file, expected END", reader.line());
  }
  if (tok.front().text != "END" || tok.size() != 1)
    throw ParseError("expected END", reader.line(), tok.front().column);
  if (reader.next(tok)) throw ParseError("trailing content after END", reader.line());

  mesh.origin.resize(mesh.nodes.size());
  for (std::size_t i = 0; i < mesh.origin.size(); ++i) mesh.origin[i] = static_cast<int>(i);
  validate(mesh);
  return mesh;
}

Mesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file " + path.string());
  return parse_mesh(in);
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  if (mesh.is_split) throw MeshError("only unsplit meshes can be written");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "NODES " << mesh.n_node() << '\n';
  for (const auto& n : mesh.nodes) out << n.id << ' ' << n.x << ' ' << n.y << '\n';
  out << "ELEMENTS " << mesh.n_elem() << '\n';
  for (const auto& e : mesh.elements)
    out << e.id << ' ' << e.nodes[0] << ' ' << e.nodes[1] << ' ' << e.nodes[2] << '\n';
  out << "FRACTURES " << mesh.n_frac() << '\n';
  for (const auto& f : mesh.fractures) {
    out << f.id << ' ' << f.nodes.size();
    for (int n : f.nodes) out << ' ' << n;
    out << '\n';
  }
  out << "END\n";
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write mesh file " + path.string());
  write_mesh(mesh, out);
}

}  // namespace fraccon
