#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cubeproto/csv.hpp"
#include "cubeproto/matrix.hpp"

namespace cubeproto {

enum class ColumnKind { Numeric, Categorical, Label, Ignore };

std::string_view to_string(ColumnKind kind);
ColumnKind parse_column_kind(std::string_view text);

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::Categorical;

    friend bool operator==(const Column&, const Column&) = default;
};

class Schema {
public:
    Schema() = default;
    // Throws SchemaError when the column list violates the schema invariants.
    explicit Schema(std::vector<Column> columns);

    const std::vector<Column>& columns() const noexcept { return columns_; }
    std::size_t size() const noexcept { return columns_.size(); }

    std::size_t numeric_count() const noexcept { return numeric_.size(); }
    std::size_t categorical_count() const noexcept { return categorical_.size(); }
    std::size_t feature_count() const noexcept { return numeric_.size() + categorical_.size(); }
    std::optional<std::size_t> label_index() const noexcept { return label_; }

    // Source column positions of each numeric / categorical feature.
    const std::vector<std::size_t>& numeric_columns() const noexcept { return numeric_; }
    const std::vector<std::size_t>& categorical_columns() const noexcept { return categorical_; }

    std::optional<std::size_t> find(std::string_view name) const;

    // Copy with `name` re-kinded. Throws SchemaError for unknown names.
    Schema with_kind(std::string_view name, ColumnKind kind) const;

    friend bool operator==(const Schema& a, const Schema& b) { return a.columns_ == b.columns_; }

private:
    std::vector<Column> columns_;
    std::vector<std::size_t> numeric_;
    std::vector<std::size_t> categorical_;
    std::optional<std::size_t> label_;
};

// Interns category strings as dense ids in first-seen order.
class CategoryDictionary {
public:
    std::int32_t intern(const std::string& value);
    std::optional<std::int32_t> find(const std::string& value) const;
    const std::string& name(std::int32_t id) const { return names_.at(static_cast<std::size_t>(id)); }
    std::size_t size() const noexcept { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::int32_t> ids_;
};

inline constexpr std::string_view kMissingCategory = "<missing>";

// True for the cell spellings treated as missing: empty and "?".
bool is_missing(std::string_view cell);

// Mixed-type table. Numeric values are stored row-major as n x m_r, categorical
// ids as n x m_t, both in the schema's column order.
class Dataset {
public:
    Dataset(Schema schema, std::size_t rows, std::vector<double> numeric,
            std::vector<std::int32_t> categorical, std::vector<CategoryDictionary> categories,
            std::optional<std::vector<std::int32_t>> labels, CategoryDictionary label_names);

    const Schema& schema() const noexcept { return schema_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t numeric_count() const noexcept { return schema_.numeric_count(); }
    std::size_t categorical_count() const noexcept { return schema_.categorical_count(); }

    std::span<const double> numeric_row(std::size_t i) const {
        const auto m = numeric_count();
        return {numeric_.data() + i * m, m};
    }
    std::span<const std::int32_t> categorical_row(std::size_t i) const {
        const auto m = categorical_count();
        return {categorical_.data() + i * m, m};
    }
    std::span<const double> numeric_values() const noexcept { return numeric_; }
    std::span<const std::int32_t> categorical_values() const noexcept { return categorical_; }

    // Dictionary of the t-th categorical feature.
    const CategoryDictionary& categories(std::size_t t) const { return categories_.at(t); }

    bool has_labels() const noexcept { return labels_.has_value(); }
    std::span<const std::int32_t> labels() const;
    const CategoryDictionary& label_names() const noexcept { return label_names_; }
    std::size_t class_count() const noexcept { return label_names_.size(); }

    // New dataset holding the given rows in the given order.
    Dataset subset(std::span<const std::size_t> indices) const;

private:
    Schema schema_;
    std::size_t rows_;
    std::vector<double> numeric_;
    std::vector<std::int32_t> categorical_;
    std::vector<CategoryDictionary> categories_;
    std::optional<std::vector<std::int32_t>> labels_;
    CategoryDictionary label_names_;
};

// Numeric matrix view of a dataset: z-scored numerics followed by z-scored
// one-hot blocks, one block per categorical feature.
struct EncodedMatrix {
    Matrix values;
    std::vector<double> column_means;
    std::vector<double> column_stds;
    // Source schema column of each encoded column.
    std::vector<std::size_t> provenance;
};

// Numeric iff every non-missing sampled value parses as a finite real.
// A column with no evidence (no rows, or only missing cells) is Categorical.
// Labels are never inferred.
Schema infer_schema(const std::vector<std::string>& header, const std::vector<csv::Record>& sample_rows);

// JSON object mapping column name -> "numeric" | "categorical" | "label" | "ignore".
std::unordered_map<std::string, ColumnKind> read_schema_overrides(const std::filesystem::path& path);
Schema apply_overrides(Schema schema, const std::unordered_map<std::string, ColumnKind>& overrides);

// Parses rows per `schema`. Missing numeric cells are mean-imputed, missing
// categorical cells map to kMissingCategory. If `label_column` is given, that
// column becomes the Label column.
Dataset load_csv(const std::filesystem::path& path, const Schema& schema,
                 std::optional<std::string> label_column = std::nullopt);
Dataset load_csv(std::istream& in, const Schema& schema,
                 std::optional<std::string> label_column = std::nullopt);

// Reads the whole file, infers the schema, applies overrides and the label.
Dataset load_csv_inferred(const std::filesystem::path& path, std::optional<std::string> label_column = std::nullopt,
                          const std::unordered_map<std::string, ColumnKind>& overrides = {});

// Z-score normalisation with the sample (n - 1) standard deviation. Constant
// columns use std = 1 and so encode to zeros.
EncodedMatrix encode(const Dataset& dataset);

}  // namespace cubeproto
