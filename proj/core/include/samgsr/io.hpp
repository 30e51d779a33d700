#pragma once

#include <string>
#include <vector>

#include "samgsr/connectivity.hpp"
#include "samgsr/data_model.hpp"

namespace samgsr {

struct GmtParse {
  GeneSetCollection collection;
  std::vector<std::string> warnings;
};

/// One set per line: name, description, then one or more genes, tab
/// separated. Repeated genes within a line are dropped with a warning.
GmtParse parse_gmt(const std::string& path);

/// Genes x samples TSV (header row of sample ids after one leading cell)
/// joined with a two-column sample/label TSV. The label file may start with
/// a header line such as "sample<TAB>label".
ExpressionDataset parse_expression(const std::string& matrix_path, const std::string& labels_path);

/// Two tab-separated gene ids per line. Blank lines and lines starting with
/// '#' are skipped; `header` skips the first remaining line.
std::vector<GenePair> parse_edges(const std::string& path, bool header = false);

void write_gmt(const std::string& path, const GeneSetCollection& collection);
void write_expression(const std::string& matrix_path, const std::string& labels_path, const ExpressionDataset& dataset);
void write_edges(const std::string& path, const std::vector<GenePair>& edges);

/// Whole-file helpers; throw InvalidInput naming the path on failure.
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace samgsr
