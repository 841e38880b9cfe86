#pragma once

#include <filesystem>

#include "hat/data/vocabulary.hpp"
#include "hat/model/hierarchical_model.hpp"

namespace hat::model {

// Overwrites embedding rows of in-vocabulary words from a text file of
// "word v1 ... vd" lines. An optional leading "count dim" header line is
// skipped. Padding and unknown rows are left alone. Returns the number of
// rows replaced. Throws ShapeError if a vector width differs from the table,
// DataError on unreadable or non-numeric lines.
std::size_t load_pretrained(const std::filesystem::path& path, const data::Vocabulary& vocabulary,
                            EmbeddingTable& table);

}  // namespace hat::model
