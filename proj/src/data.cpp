#include "cubeproto/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cubeproto/errors.hpp"
#include "json.hpp"

namespace cubeproto {

namespace {

std::optional<double> parse_real(std::string_view text) {
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

}  // namespace

std::string_view to_string(ColumnKind kind) {
    switch (kind) {
        case ColumnKind::Numeric: return "numeric";
        case ColumnKind::Categorical: return "categorical";
        case ColumnKind::Label: return "label";
        case ColumnKind::Ignore: return "ignore";
    }
    return "?";
}

ColumnKind parse_column_kind(std::string_view text) {
    const auto t = lower(text);
    if (t == "numeric") return ColumnKind::Numeric;
    if (t == "categorical") return ColumnKind::Categorical;
    if (t == "label") return ColumnKind::Label;
    if (t == "ignore") return ColumnKind::Ignore;
    throw SchemaError("unknown column kind '" + std::string(text) + "'");
}

Schema::Schema(std::vector<Column> columns) : columns_(std::move(columns)) {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        switch (columns_[i].kind) {
            case ColumnKind::Numeric: numeric_.push_back(i); break;
            case ColumnKind::Categorical: categorical_.push_back(i); break;
            case ColumnKind::Label:
                if (label_) throw SchemaError("more than one label column");
                label_ = i;
                break;
            case ColumnKind::Ignore: break;
        }
    }
    if (numeric_.empty() && categorical_.empty())
        throw SchemaError("schema needs at least one numeric or categorical column");
}

std::optional<std::size_t> Schema::find(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].name == name) return i;
    return std::nullopt;
}

Schema Schema::with_kind(std::string_view name, ColumnKind kind) const {
    const auto idx = find(name);
    if (!idx) throw SchemaError("no column named '" + std::string(name) + "'");
    auto cols = columns_;
    cols[*idx].kind = kind;
    return Schema(std::move(cols));
}

std::int32_t CategoryDictionary::intern(const std::string& value) {
    if (auto it = ids_.find(value); it != ids_.end()) return it->second;
    const auto id = static_cast<std::int32_t>(names_.size());
    names_.push_back(value);
    ids_.emplace(value, id);
    return id;
}

std::optional<std::int32_t> CategoryDictionary::find(const std::string& value) const {
    if (auto it = ids_.find(value); it != ids_.end()) return it->second;
    return std::nullopt;
}

bool is_missing(std::string_view cell) { return cell.empty() || cell == "?"; }

Dataset::Dataset(Schema schema, std::size_t rows, std::vector<double> numeric,
                 std::vector<std::int32_t> categorical, std::vector<CategoryDictionary> categories,
                 std::optional<std::vector<std::int32_t>> labels, CategoryDictionary label_names)
    : schema_(std::move(schema)),
      rows_(rows),
      numeric_(std::move(numeric)),
      categorical_(std::move(categorical)),
      categories_(std::move(categories)),
      labels_(std::move(labels)),
      label_names_(std::move(label_names)) {
    if (rows_ == 0) throw IngestError("dataset has no rows", 0);
    if (numeric_.size() != rows_ * schema_.numeric_count() ||
        categorical_.size() != rows_ * schema_.categorical_count() ||
        categories_.size() != schema_.categorical_count())
        throw ArgumentError("dataset storage does not match schema");
    if (labels_ && labels_->size() != rows_) throw ArgumentError("label count does not match row count");
    for (double v : numeric_)
        if (!std::isfinite(v)) throw IngestError("non-finite numeric value", 0);
}

std::span<const std::int32_t> Dataset::labels() const {
    if (!labels_) throw ArgumentError("dataset has no labels");
    return *labels_;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    const auto mr = numeric_count();
    const auto mt = categorical_count();
    std::vector<double> num;
    std::vector<std::int32_t> cat;
    num.reserve(indices.size() * mr);
    cat.reserve(indices.size() * mt);
    std::optional<std::vector<std::int32_t>> lab;
    if (labels_) lab.emplace();
    for (auto i : indices) {
        if (i >= rows_) throw ArgumentError("subset index out of range");
        auto nr = numeric_row(i);
        auto cr = categorical_row(i);
        num.insert(num.end(), nr.begin(), nr.end());
        cat.insert(cat.end(), cr.begin(), cr.end());
        if (lab) lab->push_back((*labels_)[i]);
    }
    return Dataset(schema_, indices.size(), std::move(num), std::move(cat), categories_, std::move(lab),
                   label_names_);
}

Schema infer_schema(const std::vector<std::string>& header, const std::vector<csv::Record>& sample_rows) {
    if (header.empty()) throw ArgumentError("empty header");
    std::vector<bool> numeric(header.size(), true);
    std::vector<bool> seen(header.size(), false);
    for (std::size_t r = 0; r < sample_rows.size(); ++r) {
        const auto& row = sample_rows[r];
        if (row.size() != header.size())
            throw IngestError("row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                                  " fields, expected " + std::to_string(header.size()),
                              r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (is_missing(row[c])) continue;
            seen[c] = true;
            if (numeric[c] && !parse_real(row[c])) numeric[c] = false;
        }
    }
    std::vector<Column> cols;
    cols.reserve(header.size());
    for (std::size_t c = 0; c < header.size(); ++c)
        cols.push_back({header[c], (seen[c] && numeric[c]) ? ColumnKind::Numeric : ColumnKind::Categorical});
    return Schema(std::move(cols));
}

std::unordered_map<std::string, ColumnKind> read_schema_overrides(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open schema file " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("invalid schema JSON in " + path.string() + ": " + e.what());
    }
    if (!doc.is_object()) throw SchemaError("schema file must hold a JSON object");
    std::unordered_map<std::string, ColumnKind> out;
    for (const auto& [name, kind] : doc.items()) {
        if (!kind.is_string()) throw SchemaError("kind of column '" + name + "' must be a string");
        out.emplace(name, parse_column_kind(kind.get<std::string>()));
    }
    return out;
}

Schema apply_overrides(Schema schema, const std::unordered_map<std::string, ColumnKind>& overrides) {
    auto cols = schema.columns();
    for (const auto& [name, kind] : overrides) {
        auto it = std::find_if(cols.begin(), cols.end(), [&](const Column& c) { return c.name == name; });
        if (it == cols.end()) throw SchemaError("schema override names unknown column '" + name + "'");
        it->kind = kind;
    }
    return Schema(std::move(cols));
}

namespace {

Dataset build_dataset(const std::vector<std::string>& header, const std::vector<csv::Record>& rows, Schema schema,
                      const std::optional<std::string>& label_column) {
    if (label_column) schema = schema.with_kind(*label_column, ColumnKind::Label);
    if (header.size() != schema.size()) throw SchemaError("header has " + std::to_string(header.size()) +
                                                          " columns, schema has " + std::to_string(schema.size()));
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] != schema.columns()[c].name)
            throw SchemaError("header column " + std::to_string(c) + " is '" + header[c] + "', schema expects '" +
                              schema.columns()[c].name + "'");
    if (rows.empty()) throw IngestError("no data rows", 0);

    const auto n = rows.size();
    const auto& num_cols = schema.numeric_columns();
    const auto& cat_cols = schema.categorical_columns();
    const auto mr = num_cols.size();
    const auto mt = cat_cols.size();

    std::vector<double> numeric(n * mr, 0.0);
    std::vector<bool> missing(n * mr, false);
    std::vector<std::int32_t> categorical(n * mt, 0);
    std::vector<CategoryDictionary> dicts(mt);
    std::optional<std::vector<std::int32_t>> labels;
    CategoryDictionary label_names;
    if (schema.label_index()) labels.emplace(n);

    for (std::size_t r = 0; r < n; ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size())
            throw IngestError("row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                                  " fields, expected " + std::to_string(header.size()),
                              r);
        for (std::size_t j = 0; j < mr; ++j) {
            const auto& cell = row[num_cols[j]];
            if (is_missing(cell)) {
                missing[r * mr + j] = true;
                continue;
            }
            const auto v = parse_real(cell);
            if (!v)
                throw IngestError("row " + std::to_string(r) + ", column '" + header[num_cols[j]] +
                                      "': cannot parse '" + cell + "' as a number",
                                  r, num_cols[j]);
            numeric[r * mr + j] = *v;
        }
        for (std::size_t t = 0; t < mt; ++t) {
            const auto& cell = row[cat_cols[t]];
            categorical[r * mt + t] = dicts[t].intern(is_missing(cell) ? std::string(kMissingCategory) : cell);
        }
        if (labels) {
            const auto& cell = row[*schema.label_index()];
            (*labels)[r] = label_names.intern(is_missing(cell) ? std::string(kMissingCategory) : cell);
        }
    }

    for (std::size_t j = 0; j < mr; ++j) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t r = 0; r < n; ++r)
            if (!missing[r * mr + j]) {
                sum += numeric[r * mr + j];
                ++count;
            }
        const double mean = count ? sum / static_cast<double>(count) : 0.0;
        for (std::size_t r = 0; r < n; ++r)
            if (missing[r * mr + j]) numeric[r * mr + j] = mean;
    }

    return Dataset(std::move(schema), n, std::move(numeric), std::move(categorical), std::move(dicts),
                   std::move(labels), std::move(label_names));
}

std::vector<csv::Record> read_rows(std::istream& in, std::vector<std::string>& header) {
    auto records = csv::read_all(in);
    if (records.empty()) throw SchemaError("missing header row");
    header = std::move(records.front());
    records.erase(records.begin());
    return records;
}

}  // namespace

Dataset load_csv(std::istream& in, const Schema& schema, std::optional<std::string> label_column) {
    std::vector<std::string> header;
    auto rows = read_rows(in, header);
    return build_dataset(header, rows, schema, label_column);
}

Dataset load_csv(const std::filesystem::path& path, const Schema& schema, std::optional<std::string> label_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open " + path.string(), 0);
    return load_csv(in, schema, std::move(label_column));
}

Dataset load_csv_inferred(const std::filesystem::path& path, std::optional<std::string> label_column,
                          const std::unordered_map<std::string, ColumnKind>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open " + path.string(), 0);
    std::vector<std::string> header;
    auto rows = read_rows(in, header);
    auto schema = apply_overrides(infer_schema(header, rows), overrides);
    return build_dataset(header, rows, std::move(schema), label_column);
}

EncodedMatrix encode(const Dataset& dataset) {
    const auto n = dataset.rows();
    const auto mr = dataset.numeric_count();
    const auto mt = dataset.categorical_count();
    const auto& schema = dataset.schema();

    std::size_t d = mr;
    for (std::size_t t = 0; t < mt; ++t) d += dataset.categories(t).size();

    EncodedMatrix out;
    out.values = Matrix(n, d);
    out.column_means.assign(d, 0.0);
    out.column_stds.assign(d, 1.0);
    out.provenance.reserve(d);

    for (std::size_t j = 0; j < mr; ++j) {
        for (std::size_t i = 0; i < n; ++i) out.values(i, j) = dataset.numeric_row(i)[j];
        out.provenance.push_back(schema.numeric_columns()[j]);
    }
    std::size_t col = mr;
    for (std::size_t t = 0; t < mt; ++t) {
        const auto levels = dataset.categories(t).size();
        for (std::size_t i = 0; i < n; ++i)
            out.values(i, col + static_cast<std::size_t>(dataset.categorical_row(i)[t])) = 1.0;
        for (std::size_t c = 0; c < levels; ++c) out.provenance.push_back(schema.categorical_columns()[t]);
        col += levels;
    }

    for (std::size_t j = 0; j < d; ++j) {
        double lo = out.values(0, j), hi = lo, sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = out.values(i, j);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
        const double mean = sum / static_cast<double>(n);
        out.column_means[j] = mean;
        if (lo == hi || n < 2) {
            for (std::size_t i = 0; i < n; ++i) out.values(i, j) = 0.0;
            continue;
        }
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = out.values(i, j) - mean;
            ss += c * c;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        out.column_stds[j] = sd;
        for (std::size_t i = 0; i < n; ++i) out.values(i, j) = (out.values(i, j) - mean) / sd;
    }
    return out;
}

}  // namespace cubeproto
