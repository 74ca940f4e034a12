#include "csls/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "csls/errors.hpp"

namespace csls {

namespace {

struct Parser {
  std::string_view source;
  std::size_t line_no = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(fmt::format("{}:{}: {}", source, line_no, msg));
  }

  double number(const std::string& tok) const {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      fail("expected a number, got '" + tok + "'");
    }
    if (used != tok.size()) fail("expected a number, got '" + tok + "'");
    return v;
  }

  int integer(const std::string& tok) const {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      fail("expected an integer, got '" + tok + "'");
    }
    if (used != tok.size()) fail("expected an integer, got '" + tok + "'");
    return v;
  }

  std::vector<double> numbers(const std::vector<std::string>& toks, std::size_t from, std::size_t count) const {
    if (toks.size() - from != count) {
      fail(fmt::format("'{}' expects {} numeric entries, got {}", toks[0], count, toks.size() - from));
    }
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = from; i < toks.size(); ++i) out.push_back(number(toks[i]));
    return out;
  }
};

struct EdgeLine {
  std::string source;
  std::string target;
  int label;
  std::size_t line_no;
};

}  // namespace

Csls parse_system_config(std::istream& in, std::string_view source_name) {
  Parser p{source_name};
  std::optional<int> n;
  std::map<int, SquareMatrix> matrices;
  std::map<int, std::vector<double>> feedback;
  std::optional<std::vector<double>> plant;
  std::optional<std::pair<int, std::vector<double>>> input;
  std::vector<std::string> node_names;
  std::vector<EdgeLine> edge_lines;

  auto add_node = [&](const std::string& name) {
    if (std::find(node_names.begin(), node_names.end(), name) == node_names.end()) node_names.push_back(name);
  };
  auto need_dim = [&]() -> int {
    if (!n) p.fail("'dimension' must come before matrices");
    return *n;
  };
  auto claim_label = [&](int label) {
    if (label < 1) p.fail(fmt::format("label {} must be >= 1", label));
    if (matrices.count(label) || feedback.count(label)) p.fail(fmt::format("label {} defined twice", label));
  };

  std::string line;
  while (std::getline(in, line)) {
    ++p.line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> toks;
    for (std::string t; ss >> t;) toks.push_back(t);
    if (toks.empty()) continue;
    const std::string& key = toks[0];

    if (key == "dimension") {
      if (toks.size() != 2) p.fail("'dimension' takes one value");
      if (n) p.fail("'dimension' given twice");
      const int d = p.integer(toks[1]);
      if (d < 1 || d > kMaxDimension) p.fail(fmt::format("dimension must lie in 1..{}", kMaxDimension));
      n = d;
    } else if (key == "matrix") {
      const int d = need_dim();
      if (toks.size() < 2) p.fail("'matrix' needs a label");
      const int label = p.integer(toks[1]);
      claim_label(label);
      matrices.emplace(label, SquareMatrix(d, p.numbers(toks, 2, static_cast<std::size_t>(d * d))));
    } else if (key == "plant") {
      const int d = need_dim();
      if (plant) p.fail("'plant' given twice");
      plant = p.numbers(toks, 1, static_cast<std::size_t>(d * d));
    } else if (key == "input") {
      const int d = need_dim();
      if (input) p.fail("'input' given twice");
      if (toks.size() < 2) p.fail("'input' needs a column count");
      const int k = p.integer(toks[1]);
      if (k < 1) p.fail("input column count must be >= 1");
      input = std::make_pair(k, p.numbers(toks, 2, static_cast<std::size_t>(d * k)));
    } else if (key == "feedback") {
      const int d = need_dim();
      if (!input) p.fail("'feedback' requires a preceding 'input'");
      if (toks.size() < 2) p.fail("'feedback' needs a label");
      const int label = p.integer(toks[1]);
      claim_label(label);
      feedback.emplace(label, p.numbers(toks, 2, static_cast<std::size_t>(input->first * d)));
    } else if (key == "nodes") {
      if (toks.size() < 2) p.fail("'nodes' needs at least one name");
      for (std::size_t i = 1; i < toks.size(); ++i) add_node(toks[i]);
    } else if (key == "edge") {
      if (toks.size() != 4) p.fail("'edge' takes <source> <target> <label>");
      add_node(toks[1]);
      add_node(toks[2]);
      edge_lines.push_back({toks[1], toks[2], p.integer(toks[3]), p.line_no});
    } else {
      p.fail("unknown directive '" + key + "'");
    }
  }

  if (!n) throw ConfigError(fmt::format("{}: missing 'dimension'", source_name));
  if (!feedback.empty() && !plant) throw ConfigError(fmt::format("{}: 'feedback' requires 'plant'", source_name));
  const int d = *n;
  for (const auto& [label, gain] : feedback) {
    SquareMatrix a(d, *plant);
    const int k = input->first;
    const auto& b = input->second;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int c = 0; c < k; ++c) s += b[static_cast<std::size_t>(i * k + c)] * gain[static_cast<std::size_t>(c * d + j)];
        a(i, j) += s;
      }
    }
    matrices.emplace(label, a);
  }

  int m = 0;
  for (const auto& [label, _] : matrices) m = std::max(m, label);
  for (const auto& e : edge_lines) m = std::max(m, e.label);
  std::vector<std::string> problems;
  std::vector<SquareMatrix> ordered;
  for (int label = 1; label <= m; ++label) {
    const auto it = matrices.find(label);
    if (it == matrices.end()) {
      problems.push_back(fmt::format("no matrix for label {}", label));
    } else {
      ordered.push_back(it->second);
    }
  }

  std::vector<Edge> edges;
  edges.reserve(edge_lines.size());
  for (const auto& e : edge_lines) {
    const auto idx = [&](const std::string& name) {
      return static_cast<NodeId>(std::find(node_names.begin(), node_names.end(), name) - node_names.begin());
    };
    edges.push_back({idx(e.source), idx(e.target), e.label});
  }
  Automaton automaton(node_names, std::move(edges), m);
  for (auto& v : automaton.validate().violations) problems.push_back(std::move(v));
  if (!problems.empty()) {
    std::string msg = fmt::format("{}: invalid system", source_name);
    for (const auto& v : problems) msg += "\n  - " + v;
    throw ConfigError(msg);
  }
  try {
    return Csls(std::move(automaton), std::move(ordered));
  } catch (const InputError& e) {
    throw ConfigError(fmt::format("{}: {}", source_name, e.what()));
  }
}

Csls load_system_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open system config '" + path + "'");
  return parse_system_config(in, path);
}

}  // namespace csls
