#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "hcouple/graph.hpp"
#include "hcouple/hypergraph.hpp"
#include "hcouple/pattern.hpp"

namespace hcouple {

// Text formats.  Blank lines and lines starting with '#' are ignored.
//   graph:       "n m" then m lines "u v"
//   hypergraph:  "r n m" then m lines of r vertices
//   F-graph:     "pattern <name|path|inline>" (inline is followed by a graph
//                block), then "n m" and m lines of r vertex images

SimpleGraph parse_graph(std::string_view text);
std::string format_graph(const SimpleGraph& g);

Hypergraph parse_hypergraph(std::string_view text);
std::string format_hypergraph(const Hypergraph& h);

FGraph parse_fgraph(std::string_view text, const std::filesystem::path& base_dir = {});
std::string format_fgraph(const FGraph& hf);

/// A built-in name (K4, C5, petersen, ...) or a path to a graph file.
std::shared_ptr<const PatternGraph> load_pattern(const std::string& spec,
                                                 const std::filesystem::path& base_dir = {});

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace hcouple
