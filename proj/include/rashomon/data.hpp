#ifndef RASHOMON_DATA_HPP
#define RASHOMON_DATA_HPP

#include "rashomon/bitset.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rashomon {

enum class Task { classification, regression };

/// Raised for malformed or unusable input data. Messages carry the line
/// number when the error comes from a file.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Classification labels (class ids) or regression targets, one per sample.
struct LabelVector {
    Task task = Task::classification;
    int num_classes = 2;            // classification only
    std::vector<int> classes;       // classification only
    std::vector<double> values;     // regression only

    std::size_t size() const
    {
        return task == Task::classification ? classes.size() : values.size();
    }

    static LabelVector classification(std::vector<int> ids, int num_classes = 0);
    static LabelVector regression(std::vector<double> values);
};

/// Immutable column-bitset dataset. Bit `i` of column `f` is set when sample
/// `i` satisfies feature `f`.
class BinaryDataset {
public:
    BinaryDataset(std::vector<Bitset> columns, LabelVector labels,
                  std::vector<std::string> feature_names = {});

    /// Build from a row-major 0/1 matrix.
    static BinaryDataset from_rows(const std::vector<std::vector<std::uint8_t>>& rows,
                                   LabelVector labels,
                                   std::vector<std::string> feature_names = {});

    std::size_t num_samples() const { return num_samples_; }
    std::size_t num_features() const { return columns_.size(); }
    Task task() const { return labels_.task; }
    int num_classes() const { return labels_.num_classes; }

    const Bitset& column(std::size_t f) const { return columns_.at(f); }
    const std::vector<Bitset>& columns() const { return columns_; }
    const LabelVector& labels() const { return labels_; }
    const std::vector<std::string>& feature_names() const { return names_; }

    /// Samples of class `k` (classification only).
    const Bitset& class_members(int k) const { return class_bits_.at(static_cast<std::size_t>(k)); }
    bool feature(std::size_t sample, std::size_t f) const { return columns_[f].test(sample); }
    std::vector<std::uint8_t> row(std::size_t sample) const;

    /// Copy with z-scored regression targets (population standard deviation).
    BinaryDataset with_normalized_labels() const;

private:
    std::size_t num_samples_ = 0;
    std::vector<Bitset> columns_;
    LabelVector labels_;
    std::vector<std::string> names_;
    std::vector<Bitset> class_bits_;
};

/// A subset of the samples of a dataset.
class DataView {
public:
    DataView(const BinaryDataset& data, Bitset members);
    /// The view containing every sample.
    static DataView all(const BinaryDataset& data);

    const BinaryDataset& dataset() const { return *data_; }
    const Bitset& members() const { return members_; }
    std::size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }

private:
    const BinaryDataset* data_;
    Bitset members_;
    std::size_t count_;
};

/// Returns (view ∩ ¬f, view ∩ f): left is the unsatisfied side.
std::pair<DataView, DataView> split(const DataView& view, std::size_t feature);

/// Identifies a subproblem by its sample set and remaining depth budget.
/// Equality compares the full member set; the hash only buckets.
struct CacheKey {
    std::uint64_t fingerprint = 0;
    int depth = 0;
    Bitset members;

    friend bool operator==(const CacheKey& a, const CacheKey& b)
    {
        return a.fingerprint == b.fingerprint && a.depth == b.depth && a.members == b.members;
    }
};

struct CacheKeyHash {
    std::size_t operator()(const CacheKey& k) const { return static_cast<std::size_t>(k.fingerprint); }
};

CacheKey fingerprint(const DataView& view, int depth);

enum class FileFormat { label_first, csv };

struct LoadOptions {
    FileFormat format = FileFormat::label_first;
    Task task = Task::classification;
    std::string label_column = "label"; // csv only
    bool remove_redundant_features = true;
};

/// Parse a dataset file. Duplicate and complemented feature columns are
/// dropped (keeping the lowest original index) unless disabled.
BinaryDataset load_dataset(const std::filesystem::path& path, const LoadOptions& options = {});
BinaryDataset parse_dataset(const std::string& text, const LoadOptions& options = {});

/// Write in label-first whitespace format.
void save_dataset(const BinaryDataset& data, const std::filesystem::path& path);
std::string format_dataset(const BinaryDataset& data);

/// Remove columns equal to, or the complement of, an earlier column.
/// Returns the indices of the kept columns.
std::vector<std::size_t> redundant_feature_filter(const std::vector<Bitset>& columns);

struct NumericColumn {
    std::string name;
    std::vector<double> values;
};

/// Expand numeric columns into threshold indicators `x <= t` placed at the
/// empirical quantiles i/(q+1), i = 1..q (lower order statistic). Constant
/// and duplicated indicators are dropped.
BinaryDataset binarize_numeric(const std::vector<NumericColumn>& columns, LabelVector labels,
                               int thresholds_per_column);

/// Thresholds chosen for one column by binarize_numeric.
std::vector<double> quantile_thresholds(std::vector<double> values, int thresholds);

/// Parse a CSV with header whose non-label columns are numeric.
BinaryDataset load_numeric_csv(const std::filesystem::path& path, const LoadOptions& options,
                               int thresholds_per_column);

struct SynthOptions {
    std::size_t samples = 100;
    std::size_t features = 8;
    double noise = 0.1;
    std::uint64_t seed = 0;
};

/// Seeded random binary classification data: every feature bit is a fair
/// coin; labels come from a random depth-two tree, each flipped with
/// probability `noise`. Identical options give identical datasets.
BinaryDataset synthetic_dataset(const SynthOptions& options);

} // namespace rashomon

#endif
