#include "samgsr/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "samgsr/error.hpp"

namespace samgsr {
namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

bool skippable(const std::string& line) {
  return line.find_first_not_of(" \t") == std::string::npos || line.front() == '#';
}

double parse_number(const std::string& cell, const std::string& path, std::size_t line, std::size_t column) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (first != last && *first == '+') ++first;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last || !std::isfinite(value)) {
    throw ParseError(path, line, column, "non-numeric value '" + cell + "'");
  }
  return value;
}

std::string lowered(std::string text) {
  for (auto& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return text;
}

bool looks_like_label_header(const std::vector<std::string>& fields) {
  static const std::set<std::string> sample_words = {"sample", "samples", "sample_id", "sampleid", "id"};
  static const std::set<std::string> label_words = {"label", "labels", "class", "group", "condition"};
  return sample_words.count(lowered(fields[0])) > 0 || label_words.count(lowered(fields[1])) > 0;
}

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i];
  return out;
}

}  // namespace

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw InvalidInput("failed writing '" + path + "'");
}

GmtParse parse_gmt(const std::string& path) {
  const auto lines = split_lines(read_text(path));
  GmtParse out;
  std::vector<GeneSet> sets;
  std::set<std::string> names;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (skippable(lines[i])) continue;
    auto fields = split_tabs(lines[i]);
    while (!fields.empty() && fields.back().empty()) fields.pop_back();
    if (fields.size() < 3) {
      throw ParseError(path, i + 1, 0, "expected name, description and at least one gene, found " +
                                           std::to_string(fields.size()) + " field(s)");
    }
    if (fields[0].empty()) throw ParseError(path, i + 1, 1, "empty gene set name");
    if (!names.insert(fields[0]).second) throw ParseError(path, i + 1, 1, "duplicate gene set '" + fields[0] + "'");
    GeneSet set;
    set.name = fields[0];
    set.description = fields[1];
    std::unordered_set<std::string> seen;
    for (std::size_t f = 2; f < fields.size(); ++f) {
      if (fields[f].empty()) throw ParseError(path, i + 1, f + 1, "empty gene id");
      if (!seen.insert(fields[f]).second) {
        out.warnings.push_back(path + ":" + std::to_string(i + 1) + ": gene '" + fields[f] + "' repeated in set '" +
                               set.name + "'; kept once");
        continue;
      }
      set.genes.push_back(fields[f]);
    }
    sets.push_back(std::move(set));
  }
  if (sets.empty()) out.warnings.push_back(path + ": no gene sets found");
  out.collection = GeneSetCollection(std::move(sets), path);
  return out;
}

ExpressionDataset parse_expression(const std::string& matrix_path, const std::string& labels_path) {
  const auto lines = split_lines(read_text(matrix_path));
  std::size_t first = 0;
  while (first < lines.size() && skippable(lines[first])) ++first;
  if (first == lines.size()) throw ParseError(matrix_path, 0, 0, "empty expression matrix");
  const auto header = split_tabs(lines[first]);
  if (header.size() < 2) throw ParseError(matrix_path, first + 1, 0, "header lists no samples");
  std::vector<std::string> samples(header.begin() + 1, header.end());
  std::unordered_map<std::string, std::size_t> sample_index;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    if (samples[s].empty()) throw ParseError(matrix_path, first + 1, s + 2, "empty sample id");
    if (!sample_index.emplace(samples[s], s).second) {
      throw ParseError(matrix_path, first + 1, s + 2, "duplicate sample id '" + samples[s] + "'");
    }
  }

  std::vector<std::string> genes;
  std::vector<double> values;
  std::unordered_set<std::string> seen_genes;
  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    if (skippable(lines[i])) continue;
    const auto fields = split_tabs(lines[i]);
    if (fields.size() != header.size()) {
      throw ParseError(matrix_path, i + 1, 0,
                       "expected " + std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw ParseError(matrix_path, i + 1, 1, "empty gene id");
    if (!seen_genes.insert(fields[0]).second) {
      throw ParseError(matrix_path, i + 1, 1, "duplicate gene id '" + fields[0] + "'");
    }
    genes.push_back(fields[0]);
    for (std::size_t f = 1; f < fields.size(); ++f) values.push_back(parse_number(fields[f], matrix_path, i + 1, f + 1));
  }
  if (genes.empty()) throw ParseError(matrix_path, 0, 0, "expression matrix has no gene rows");

  const auto label_lines = split_lines(read_text(labels_path));
  std::vector<std::string> labels(samples.size());
  std::vector<bool> labelled(samples.size(), false);
  std::vector<std::string> unknown;
  bool first_record = true;
  for (std::size_t i = 0; i < label_lines.size(); ++i) {
    if (skippable(label_lines[i])) continue;
    const auto fields = split_tabs(label_lines[i]);
    if (fields.size() != 2) {
      throw ParseError(labels_path, i + 1, 0, "expected sample id and label, found " + std::to_string(fields.size()) +
                                                  " field(s)");
    }
    const auto it = sample_index.find(fields[0]);
    if (first_record) {
      first_record = false;
      if (it == sample_index.end() && looks_like_label_header(fields)) continue;
    }
    if (fields[1].empty()) throw ParseError(labels_path, i + 1, 2, "empty label");
    if (it == sample_index.end()) {
      unknown.push_back(fields[0]);
      continue;
    }
    if (labelled[it->second]) throw ParseError(labels_path, i + 1, 1, "sample '" + fields[0] + "' labelled twice");
    labelled[it->second] = true;
    labels[it->second] = fields[1];
  }
  std::vector<std::string> missing;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    if (!labelled[s]) missing.push_back(samples[s]);
  }
  if (!missing.empty() || !unknown.empty()) {
    std::string message = "samples do not match between '" + matrix_path + "' and '" + labels_path + "'";
    if (!missing.empty()) message += "; without a label: " + join_names(missing);
    if (!unknown.empty()) message += "; not in the matrix: " + join_names(unknown);
    throw InvalidInput(message);
  }
  return {std::move(genes), std::move(samples), std::move(values), std::move(labels)};
}

std::vector<GenePair> parse_edges(const std::string& path, bool header) {
  const auto lines = split_lines(read_text(path));
  std::vector<GenePair> pairs;
  bool skip_header = header;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (skippable(lines[i])) continue;
    if (skip_header) {
      skip_header = false;
      continue;
    }
    const auto fields = split_tabs(lines[i]);
    if (fields.size() != 2) {
      throw ParseError(path, i + 1, 0, "expected 2 columns, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) throw ParseError(path, i + 1, 0, "empty gene id");
    pairs.emplace_back(fields[0], fields[1]);
  }
  return pairs;
}

void write_gmt(const std::string& path, const GeneSetCollection& collection) {
  std::string text;
  for (const auto& set : collection.sets()) {
    text += set.name + "\t" + set.description;
    for (const auto& gene : set.genes) text += "\t" + gene;
    text += "\n";
  }
  write_text(path, text);
}

void write_expression(const std::string& matrix_path, const std::string& labels_path, const ExpressionDataset& dataset) {
  std::string matrix = "gene";
  for (const auto& s : dataset.sample_ids()) matrix += "\t" + s;
  matrix += "\n";
  char buffer[32];
  for (std::size_t g = 0; g < dataset.gene_count(); ++g) {
    matrix += dataset.gene_ids()[g];
    for (const double v : dataset.row(g)) {
      const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, v);
      matrix += "\t" + std::string(buffer, end);
    }
    matrix += "\n";
  }
  write_text(matrix_path, matrix);

  std::string labels = "sample\tlabel\n";
  for (std::size_t s = 0; s < dataset.sample_count(); ++s) {
    labels += dataset.sample_ids()[s] + "\t" + dataset.labels()[s] + "\n";
  }
  write_text(labels_path, labels);
}

void write_edges(const std::string& path, const std::vector<GenePair>& edges) {
  std::string text;
  for (const auto& [a, b] : edges) text += a + "\t" + b + "\n";
  write_text(path, text);
}

}  // namespace samgsr
