#include "mhkg/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace mhkg {

ParseError::ParseError(const std::string& source, int line, const std::string& what)
    : ValidationError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

std::string format_double(double x) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw NumericError("cannot format floating-point value");
  return std::string(buf.data(), end);
}

namespace {

std::string_view strip(std::string_view s) {
  if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_fields(std::string_view s, bool comma) {
  std::vector<std::string_view> out;
  const std::string_view seps = comma ? std::string_view(",") : std::string_view(" \t");
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto next = s.find_first_of(seps, pos);
    if (next == std::string_view::npos) next = s.size();
    auto field = s.substr(pos, next - pos);
    if (comma) {
      out.push_back(strip(field));
    } else if (!field.empty()) {
      out.push_back(field);
    }
    pos = next + 1;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& value) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return in;
}

}  // namespace

EdgeList parse_edge_list(std::istream& in, const std::string& source) {
  EdgeList out;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto s = strip(raw);
    if (s.empty()) {
      // "# nodes N" declares the node count so trailing isolated nodes survive.
      std::string_view r = raw;
      constexpr std::string_view tag = "# nodes ";
      int n = 0;
      if (r.substr(0, tag.size()) == tag && parse_number(strip(r.substr(tag.size())), n)) {
        out.n_nodes = std::max(out.n_nodes, n);
      }
      continue;
    }
    auto fields = split_fields(s, false);
    int i = 0, j = 0;
    if (fields.size() != 2 || !parse_number(fields[0], i) || !parse_number(fields[1], j)) {
      throw ParseError(source, line, "expected two integer node ids");
    }
    if (i < 0 || j < 0) throw ParseError(source, line, "node ids must be non-negative");
    out.edges.emplace_back(i, j);
    out.n_nodes = std::max({out.n_nodes, i + 1, j + 1});
  }
  return out;
}

EdgeList read_edge_list(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_edge_list(in, path.string());
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# nodes " << g.num_nodes() << "\n";
  for (auto [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

std::vector<int> parse_labels(std::istream& in, const std::string& source) {
  std::vector<int> out;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto s = strip(raw);
    if (s.empty()) continue;
    int c = 0;
    if (!parse_number(s, c) || c < 0) throw ParseError(source, line, "expected a non-negative class id");
    out.push_back(c);
  }
  return out;
}

std::vector<int> read_labels(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_labels(in, path.string());
}

void write_labels(std::ostream& out, const std::vector<int>& labels) {
  for (int c : labels) out << c << '\n';
}

Matrix parse_features(std::istream& in, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto s = strip(raw);
    if (s.empty()) continue;
    auto fields = split_fields(s, true);
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) {
      double x = 0;
      if (!parse_number(f, x)) throw ParseError(source, line, "malformed number '" + std::string(f) + "'");
      row.push_back(x);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(source, line, "expected " + std::to_string(rows.front().size()) + " columns");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return Matrix(0, 0);
  Matrix x(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) x(r, c) = rows[r][c];
  return x;
}

Matrix read_features(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_features(in, path.string());
}

void write_features(std::ostream& out, const Matrix& x) {
  for (Index r = 0; r < x.rows(); ++r) {
    for (Index c = 0; c < x.cols(); ++c) {
      if (c) out << ',';
      out << format_double(x(r, c));
    }
    out << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace mhkg
