#include "deacs/folds.hpp"

#include <algorithm>
#include <string>

#include "deacs/dataset.hpp"
#include "deacs/error.hpp"
#include "deacs/random.hpp"

namespace deacs {

std::vector<std::size_t> FoldAssignment::test_rows(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] == fold) rows.push_back(i);
    return rows;
}

std::vector<std::size_t> FoldAssignment::train_rows(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] != fold) rows.push_back(i);
    return rows;
}

FoldAssignment stratified_kfold(std::span<const Code> classes, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("fold count must be at least 2");
    if (k > classes.size())
        throw ConfigError("fold count " + std::to_string(k) + " exceeds sample count " +
                          std::to_string(classes.size()));

    const Code n_classes = classes.empty() ? 0 : *std::max_element(classes.begin(), classes.end()) + 1;
    std::vector<std::vector<std::size_t>> by_class(n_classes);
    for (std::size_t i = 0; i < classes.size(); ++i) by_class[classes[i]].push_back(i);

    Rng rng(seed);
    FoldAssignment out{k, std::vector<std::size_t>(classes.size(), 0), seed};
    std::size_t next = 0;
    for (auto& members : by_class) {
        rng.shuffle(std::span<std::size_t>(members));
        for (auto i : members) {
            out.fold_of[i] = next;
            next = (next + 1) % k;
        }
    }
    return out;
}

FoldAssignment stratified_kfold(const Dataset& ds, std::size_t k, std::uint64_t seed) {
    return stratified_kfold(ds.classes(), k, seed);
}

}  // namespace deacs
