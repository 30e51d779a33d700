#include "fixtures.hpp"

#include <algorithm>
#include <numeric>

namespace samgsr::testing {

namespace {

std::string padded(const std::string& prefix, std::size_t i, std::size_t width) {
  std::string digits = std::to_string(i);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

}  // namespace

ExpressionDataset random_dataset(Rng& rng, std::size_t genes, std::size_t samples, std::size_t n_pos,
                                 std::size_t shifted, double shift) {
  std::normal_distribution<double> normal;
  std::vector<std::string> gene_ids, sample_ids, labels;
  for (std::size_t g = 0; g < genes; ++g) gene_ids.push_back(padded("g", g + 1, 3));
  for (std::size_t s = 0; s < samples; ++s) {
    sample_ids.push_back(padded("s", s + 1, 2));
    labels.push_back(s < samples - n_pos ? "A" : "B");
  }
  std::vector<double> values(genes * samples);
  for (std::size_t g = 0; g < genes; ++g) {
    for (std::size_t s = 0; s < samples; ++s) {
      values[g * samples + s] = normal(rng) + (g < shifted && labels[s] == "B" ? shift : 0.0);
    }
  }
  return {gene_ids, sample_ids, values, labels};
}

GeneSetCollection random_collection(Rng& rng, const std::vector<std::string>& genes, std::size_t sets,
                                    std::size_t min_size, std::size_t max_size) {
  std::vector<GeneSet> out;
  std::uniform_int_distribution<std::size_t> size(min_size, std::min(max_size, genes.size()));
  for (std::size_t k = 0; k < sets; ++k) {
    std::vector<std::string> pool = genes;
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(size(rng));
    out.push_back({"set" + std::to_string(k + 1), "", pool});
  }
  return GeneSetCollection(out, "random");
}

std::vector<GenePair> regular_edges(const std::vector<std::string>& genes, std::size_t half) {
  std::vector<GenePair> edges;
  const std::size_t n = genes.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 1; k <= half; ++k) edges.emplace_back(genes[i], genes[(i + k) % n]);
  }
  return edges;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("samgsr-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace samgsr::testing
