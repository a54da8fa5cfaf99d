#include "hcouple/io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "hcouple/errors.hpp"

namespace hcouple {

namespace {

// Tokens of the non-comment lines, one vector per line.
class LineReader {
 public:
  explicit LineReader(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      auto start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos || line[start] == '#') continue;
      std::istringstream words(line);
      std::vector<std::string> tokens;
      for (std::string w; words >> w;) tokens.push_back(w);
      lines_.push_back(std::move(tokens));
    }
  }

  bool done() const { return pos_ >= lines_.size(); }

  const std::vector<std::string>& next(const char* what) {
    if (done()) throw Error(ErrorKind::parse, std::string("unexpected end of input, expected ") + what);
    return lines_[pos_++];
  }

  std::vector<int> ints(const char* what, std::size_t count) {
    const auto& tokens = next(what);
    if (tokens.size() != count) {
      throw Error(ErrorKind::parse, std::string("expected ") + std::to_string(count) + " integers for " + what);
    }
    std::vector<int> out;
    for (const auto& t : tokens) {
      std::size_t used = 0;
      int value = 0;
      try {
        value = std::stoi(t, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != t.size()) throw Error(ErrorKind::parse, "not an integer: '" + t + "'");
      out.push_back(value);
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> lines_;
  std::size_t pos_ = 0;
};

SimpleGraph read_graph_block(LineReader& in) {
  auto header = in.ints("graph header 'n m'", 2);
  const int n = header[0];
  const int m = header[1];
  if (n < 0 || m < 0) throw Error(ErrorKind::parse, "negative graph size");
  SimpleGraph g(n);
  for (int i = 0; i < m; ++i) {
    auto uv = in.ints("edge 'u v'", 2);
    if (uv[0] < 0 || uv[1] < 0 || uv[0] >= n || uv[1] >= n || uv[0] == uv[1]) {
      throw Error(ErrorKind::parse, "invalid edge " + std::to_string(uv[0]) + " " + std::to_string(uv[1]));
    }
    if (!g.add_edge(uv[0], uv[1])) {
      throw Error(ErrorKind::parse, "duplicate edge " + std::to_string(uv[0]) + " " + std::to_string(uv[1]));
    }
  }
  return g;
}

void write_graph_block(std::ostringstream& out, const SimpleGraph& g) {
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

}  // namespace

SimpleGraph parse_graph(std::string_view text) {
  LineReader in(text);
  auto g = read_graph_block(in);
  if (!in.done()) throw Error(ErrorKind::parse, "trailing lines after graph");
  return g;
}

std::string format_graph(const SimpleGraph& g) {
  std::ostringstream out;
  write_graph_block(out, g);
  return out.str();
}

Hypergraph parse_hypergraph(std::string_view text) {
  LineReader in(text);
  auto header = in.ints("hypergraph header 'r n m'", 3);
  const int r = header[0];
  const int n = header[1];
  const int m = header[2];
  if (r < 2 || n < 0 || m < 0) throw Error(ErrorKind::parse, "invalid hypergraph header");
  Hypergraph h(r, n);
  for (int i = 0; i < m; ++i) {
    auto e = in.ints("hyperedge", static_cast<std::size_t>(r));
    try {
      h.add(std::move(e));
    } catch (const Error& err) {
      throw Error(ErrorKind::parse, std::string("hyperedge ") + std::to_string(i) + ": " + err.what());
    }
  }
  if (!in.done()) throw Error(ErrorKind::parse, "trailing lines after hypergraph");
  return h;
}

std::string format_hypergraph(const Hypergraph& h) {
  std::ostringstream out;
  out << h.uniformity() << ' ' << h.ambient_order() << ' ' << h.edge_count() << '\n';
  for (const auto& e : h.edges()) {
    for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
    out << '\n';
  }
  return out.str();
}

FGraph parse_fgraph(std::string_view text, const std::filesystem::path& base_dir) {
  LineReader in(text);
  const auto& head = in.next("pattern line");
  if (head.size() != 2 || head[0] != "pattern") throw Error(ErrorKind::parse, "expected 'pattern <name|path|inline>'");
  std::shared_ptr<const PatternGraph> f;
  if (head[1] == "inline") {
    f = std::make_shared<const PatternGraph>(read_graph_block(in));
  } else {
    f = load_pattern(head[1], base_dir);
  }
  auto header = in.ints("F-graph header 'n m'", 2);
  FGraph hf{f, header[0], {}};
  if (hf.ambient_n < 0 || header[1] < 0) throw Error(ErrorKind::parse, "invalid F-graph header");
  for (int i = 0; i < header[1]; ++i) {
    auto image = in.ints("vertex images", static_cast<std::size_t>(f->order()));
    std::vector<int> sorted = image;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.front() < 0 ||
        sorted.back() >= hf.ambient_n) {
      throw Error(ErrorKind::parse, "F-edge " + std::to_string(i) + " is not an injective map into [n]");
    }
    if (!hf.add(make_copy(*f, std::move(image)))) {
      throw Error(ErrorKind::parse, "F-edge " + std::to_string(i) + " repeats an earlier copy");
    }
  }
  if (!in.done()) throw Error(ErrorKind::parse, "trailing lines after F-graph");
  return hf;
}

std::string format_fgraph(const FGraph& hf) {
  std::ostringstream out;
  const auto& name = hf.pattern->name();
  if (!is_named_pattern(name) || !(named_pattern(name).graph() == hf.pattern->graph())) {
    out << "pattern inline\n";
    write_graph_block(out, hf.pattern->graph());
  } else {
    out << "pattern " << hf.pattern->name() << '\n';
  }
  out << hf.ambient_n << ' ' << hf.f_edges.size() << '\n';
  for (const auto& c : hf.f_edges) {
    for (std::size_t i = 0; i < c.vertex_image.size(); ++i) out << (i ? " " : "") << c.vertex_image[i];
    out << '\n';
  }
  return out.str();
}

std::shared_ptr<const PatternGraph> load_pattern(const std::string& spec, const std::filesystem::path& base_dir) {
  if (is_named_pattern(spec)) return std::make_shared<const PatternGraph>(named_pattern(spec));
  std::filesystem::path path(spec);
  if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorKind::config, "pattern '" + spec + "' is neither a built-in name nor a readable file");
  }
  return std::make_shared<const PatternGraph>(parse_graph(read_file(path)), path.stem().string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::config, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::config, "cannot write " + path.string());
  out << contents;
}

}  // namespace hcouple
