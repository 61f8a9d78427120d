#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "maddclust/types.hpp"

namespace maddclust {

// Label column selector: by header name or by zero-based position.
using LabelColumn = std::variant<std::string, std::size_t>;

struct IngestResult {
    DataMatrix data;
    std::vector<int> labels;               // empty when no label column was requested
    std::vector<std::string> label_names;  // original strings, indexed by label-1
    std::vector<std::string> columns;      // feature column names ("" entries when headerless)
};

// Reads a rectangular numeric CSV. Quoted fields and embedded commas are
// handled; ragged rows and non-numeric cells raise std::runtime_error naming
// the offending row/column. When a label column is given, its values are mapped
// to 1-based integer labels in order of first appearance.
IngestResult ingest_csv(const std::string& path, bool has_header,
                        const std::optional<LabelColumn>& label_column = std::nullopt);

// Writes samples as CSV with a header row; the label column (named "label")
// comes last. Numbers use max_digits10 so a round-trip is lossless.
void write_data_csv(const std::string& path, const DataMatrix& data,
                    const std::vector<int>* labels = nullptr);

std::string format_double(double v);

}  // namespace maddclust
