#pragma once

#include "mhkg/graph.hpp"
#include "mhkg/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mhkg {

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& source, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

struct EdgeList {
  int n_nodes = 0;  // 1 + largest endpoint seen
  std::vector<Graph::Edge> edges;
};

// "i j" per line, 0-indexed; blank lines and '#' comments ignored.
EdgeList parse_edge_list(std::istream& in, const std::string& source = "<edges>");
EdgeList read_edge_list(const std::filesystem::path& path);
void write_edge_list(std::ostream& out, const Graph& g);

// One integer class id per line.
std::vector<int> parse_labels(std::istream& in, const std::string& source = "<labels>");
std::vector<int> read_labels(const std::filesystem::path& path);
void write_labels(std::ostream& out, const std::vector<int>& labels);

// One node per row, comma-separated, '#' comments ignored.
Matrix parse_features(std::istream& in, const std::string& source = "<features>");
Matrix read_features(const std::filesystem::path& path);
void write_features(std::ostream& out, const Matrix& x);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace mhkg
