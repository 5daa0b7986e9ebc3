#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "deacs/types.hpp"

namespace deacs {

class Dataset;

struct FoldAssignment {
    std::size_t k = 0;
    std::vector<std::size_t> fold_of;
    std::uint64_t seed = 0;

    /// Sample indices of fold `fold`, ascending.
    std::vector<std::size_t> test_rows(std::size_t fold) const;
    /// Sample indices outside fold `fold`, ascending.
    std::vector<std::size_t> train_rows(std::size_t fold) const;
};

/// Stratified k-fold split. Samples of each class are shuffled with a
/// generator seeded by `seed`, then dealt round-robin; the dealing position
/// carries over from one class to the next so fold sizes also differ by at
/// most one.
FoldAssignment stratified_kfold(std::span<const Code> classes, std::size_t k, std::uint64_t seed);
FoldAssignment stratified_kfold(const Dataset& ds, std::size_t k, std::uint64_t seed);

}  // namespace deacs
