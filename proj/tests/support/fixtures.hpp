#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "samgsr/connectivity.hpp"
#include "samgsr/data_model.hpp"
#include "samgsr/random.hpp"

namespace samgsr::testing {

/// Gene ids "g001".., sample ids "s01".., labels "A" then "B" (n_pos of "B").
/// The first `shifted` genes get `shift` added on the "B" samples.
ExpressionDataset random_dataset(Rng& rng, std::size_t genes, std::size_t samples, std::size_t n_pos,
                                 std::size_t shifted = 0, double shift = 0.0);

/// Sets of random sizes in [min_size, max_size] drawn without replacement
/// inside each set from `genes`, named "set1"..
GeneSetCollection random_collection(Rng& rng, const std::vector<std::string>& genes, std::size_t sets,
                                    std::size_t min_size, std::size_t max_size);

/// Circulant graph: gene i is linked to i +- 1..half (mod n), so every gene
/// has degree 2 * half.
std::vector<GenePair> regular_edges(const std::vector<std::string>& genes, std::size_t half);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace samgsr::testing
