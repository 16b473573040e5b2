#include "rashomon/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace rashomon {

namespace {

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

std::uint8_t parse_bit(const std::string& tok, std::size_t line)
{
    if (tok == "0") return 0;
    if (tok == "1") return 1;
    throw DataError(where(line) + "non-binary feature value '" + tok + "'");
}

int parse_class(const std::string& tok, std::size_t line)
{
    int v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size() || v < 0)
        throw DataError(where(line) + "invalid class label '" + tok + "'");
    return v;
}

double parse_real(const std::string& tok, std::size_t line)
{
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw DataError(where(line) + "invalid numeric value '" + tok + "'");
    }
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool skippable(const std::string& line)
{
    auto t = trim(line);
    return t.empty() || t[0] == '#';
}

struct RawTable {
    std::vector<std::string> header;               // csv only
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
};

RawTable read_table(const std::string& text, FileFormat format)
{
    RawTable t;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (skippable(line)) continue;
        std::vector<std::string> toks;
        if (format == FileFormat::csv) {
            toks = split_csv(line);
            if (!have_header) {
                t.header = std::move(toks);
                have_header = true;
                continue;
            }
            if (toks.size() != t.header.size())
                throw DataError(where(lineno) + "expected " + std::to_string(t.header.size()) +
                                " fields, found " + std::to_string(toks.size()));
        } else {
            std::istringstream ls(line);
            std::string tok;
            while (ls >> tok) toks.push_back(tok);
            if (!t.rows.empty() && toks.size() != t.rows.front().size())
                throw DataError(where(lineno) + "expected " + std::to_string(t.rows.front().size()) +
                                " fields, found " + std::to_string(toks.size()));
        }
        t.rows.push_back(std::move(toks));
        t.line_numbers.push_back(lineno);
    }
    if (t.rows.empty()) throw DataError("empty dataset");
    return t;
}

std::size_t label_index(const RawTable& t, const LoadOptions& options)
{
    if (options.format == FileFormat::label_first) return 0;
    auto it = std::find(t.header.begin(), t.header.end(), options.label_column);
    if (it == t.header.end())
        throw DataError("label column '" + options.label_column + "' not found in header");
    return static_cast<std::size_t>(it - t.header.begin());
}

LabelVector parse_labels(const RawTable& t, std::size_t col, Task task)
{
    if (task == Task::classification) {
        std::vector<int> ids;
        ids.reserve(t.rows.size());
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            ids.push_back(parse_class(t.rows[r][col], t.line_numbers[r]));
        return LabelVector::classification(std::move(ids));
    }
    std::vector<double> ys;
    ys.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        ys.push_back(parse_real(t.rows[r][col], t.line_numbers[r]));
    return LabelVector::regression(std::move(ys));
}

} // namespace

LabelVector LabelVector::classification(std::vector<int> ids, int num_classes)
{
    LabelVector l;
    l.task = Task::classification;
    int max_id = 0;
    for (int k : ids) {
        if (k < 0) throw DataError("negative class label");
        max_id = std::max(max_id, k);
    }
    l.num_classes = std::max({2, max_id + 1, num_classes});
    if (l.num_classes > 64) throw DataError("at most 64 classes are supported");
    l.classes = std::move(ids);
    return l;
}

LabelVector LabelVector::regression(std::vector<double> values)
{
    LabelVector l;
    l.task = Task::regression;
    l.num_classes = 0;
    l.values = std::move(values);
    return l;
}

BinaryDataset::BinaryDataset(std::vector<Bitset> columns, LabelVector labels,
                             std::vector<std::string> feature_names)
    : num_samples_{labels.size()}, columns_{std::move(columns)}, labels_{std::move(labels)},
      names_{std::move(feature_names)}
{
    if (num_samples_ == 0) throw DataError("dataset has no samples");
    if (columns_.empty()) throw DataError("dataset has no features");
    for (const auto& c : columns_)
        if (c.size() != num_samples_) throw DataError("feature column length mismatch");
    if (names_.empty()) {
        for (std::size_t f = 0; f < columns_.size(); ++f) names_.push_back("f" + std::to_string(f));
    } else if (names_.size() != columns_.size()) {
        throw DataError("feature name count mismatch");
    }
    if (labels_.task == Task::classification) {
        class_bits_.assign(static_cast<std::size_t>(labels_.num_classes), Bitset(num_samples_));
        for (std::size_t i = 0; i < num_samples_; ++i) {
            int k = labels_.classes[i];
            if (k < 0 || k >= labels_.num_classes) throw DataError("class id out of range");
            class_bits_[static_cast<std::size_t>(k)].set(i);
        }
    }
}

BinaryDataset BinaryDataset::from_rows(const std::vector<std::vector<std::uint8_t>>& rows,
                                       LabelVector labels, std::vector<std::string> feature_names)
{
    if (rows.empty()) throw DataError("dataset has no samples");
    const std::size_t nf = rows.front().size();
    std::vector<Bitset> cols(nf, Bitset(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != nf) throw DataError("ragged feature rows");
        for (std::size_t f = 0; f < nf; ++f) {
            if (rows[i][f] > 1) throw DataError("non-binary feature value");
            if (rows[i][f]) cols[f].set(i);
        }
    }
    return BinaryDataset(std::move(cols), std::move(labels), std::move(feature_names));
}

std::vector<std::uint8_t> BinaryDataset::row(std::size_t sample) const
{
    std::vector<std::uint8_t> r(columns_.size());
    for (std::size_t f = 0; f < columns_.size(); ++f) r[f] = columns_[f].test(sample) ? 1 : 0;
    return r;
}

BinaryDataset BinaryDataset::with_normalized_labels() const
{
    if (labels_.task != Task::regression) return *this;
    const auto& y = labels_.values;
    const double n = static_cast<double>(y.size());
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / n);
    std::vector<double> z(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) z[i] = sd > 0 ? (y[i] - mean) / sd : 0.0;
    return BinaryDataset(columns_, LabelVector::regression(std::move(z)), names_);
}

DataView::DataView(const BinaryDataset& data, Bitset members)
    : data_{&data}, members_{std::move(members)}, count_{members_.count()}
{
    if (members_.size() != data.num_samples())
        throw std::invalid_argument("view member set does not match dataset size");
}

DataView DataView::all(const BinaryDataset& data)
{
    return DataView(data, Bitset(data.num_samples(), true));
}

std::pair<DataView, DataView> split(const DataView& view, std::size_t feature)
{
    const auto& data = view.dataset();
    if (feature >= data.num_features())
        throw std::out_of_range("feature index " + std::to_string(feature) + " out of range");
    const Bitset& col = data.column(feature);
    return {DataView(data, and_not(view.members(), col)), DataView(data, view.members() & col)};
}

CacheKey fingerprint(const DataView& view, int depth)
{
    CacheKey k;
    k.depth = depth;
    k.members = view.members();
    k.fingerprint = Bitset::mix(view.members().hash() ^ (static_cast<std::uint64_t>(depth) * 0x100000001b3ULL));
    return k;
}

std::vector<std::size_t> redundant_feature_filter(const std::vector<Bitset>& columns)
{
    std::vector<std::size_t> kept;
    for (std::size_t f = 0; f < columns.size(); ++f) {
        const Bitset comp = ~columns[f];
        bool redundant = false;
        for (std::size_t k : kept) {
            if (columns[k] == columns[f] || columns[k] == comp) {
                redundant = true;
                break;
            }
        }
        if (!redundant) kept.push_back(f);
    }
    return kept;
}

BinaryDataset parse_dataset(const std::string& text, const LoadOptions& options)
{
    RawTable t = read_table(text, options.format);
    const std::size_t lab = label_index(t, options);
    const std::size_t width = t.rows.front().size();
    if (width < 2) throw DataError(where(t.line_numbers.front()) + "no feature columns");

    LabelVector labels = parse_labels(t, lab, options.task);
    std::vector<Bitset> cols;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < width; ++c) {
        if (c == lab) continue;
        Bitset col(t.rows.size());
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            if (parse_bit(t.rows[r][c], t.line_numbers[r])) col.set(r);
        cols.push_back(std::move(col));
        names.push_back(options.format == FileFormat::csv ? t.header[c]
                                                          : "f" + std::to_string(cols.size() - 1));
    }
    if (options.remove_redundant_features) {
        auto kept = redundant_feature_filter(cols);
        std::vector<Bitset> kc;
        std::vector<std::string> kn;
        for (auto k : kept) {
            kc.push_back(std::move(cols[k]));
            kn.push_back(std::move(names[k]));
        }
        cols = std::move(kc);
        names = std::move(kn);
    }
    return BinaryDataset(std::move(cols), std::move(labels), std::move(names));
}

BinaryDataset load_dataset(const std::filesystem::path& path, const LoadOptions& options)
{
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_dataset(ss.str(), options);
}

std::string format_dataset(const BinaryDataset& data)
{
    std::ostringstream out;
    out.precision(17);
    const auto& labels = data.labels();
    for (std::size_t i = 0; i < data.num_samples(); ++i) {
        if (labels.task == Task::classification)
            out << labels.classes[i];
        else
            out << labels.values[i];
        for (std::size_t f = 0; f < data.num_features(); ++f) out << ' ' << (data.feature(i, f) ? 1 : 0);
        out << '\n';
    }
    return out.str();
}

void save_dataset(const BinaryDataset& data, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << format_dataset(data);
}

std::vector<double> quantile_thresholds(std::vector<double> values, int thresholds)
{
    std::vector<double> out;
    if (values.empty() || thresholds <= 0) return out;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    for (int i = 1; i <= thresholds; ++i) {
        // lower order statistic at level i/(q+1)
        const std::size_t num = static_cast<std::size_t>(i) * n;
        const std::size_t den = static_cast<std::size_t>(thresholds) + 1;
        std::size_t pos = (num + den - 1) / den;
        if (pos > 0) --pos;
        double t = values[std::min(pos, n - 1)];
        if (t >= values.back()) continue; // would be constant
        if (out.empty() || out.back() != t) out.push_back(t);
    }
    return out;
}

BinaryDataset binarize_numeric(const std::vector<NumericColumn>& columns, LabelVector labels,
                               int thresholds_per_column)
{
    const std::size_t n = labels.size();
    std::vector<Bitset> cols;
    std::vector<std::string> names;
    for (const auto& c : columns) {
        if (c.values.size() != n) throw DataError("column '" + c.name + "' length mismatch");
        for (double t : quantile_thresholds(c.values, thresholds_per_column)) {
            Bitset b(n);
            for (std::size_t i = 0; i < n; ++i)
                if (c.values[i] <= t) b.set(i);
            if (b.none() || b.count() == n) continue;
            bool dup = false;
            for (const auto& e : cols)
                if (e == b) dup = true;
            if (dup) continue;
            std::ostringstream nm;
            nm << c.name << " <= " << t;
            cols.push_back(std::move(b));
            names.push_back(nm.str());
        }
    }
    if (cols.empty()) throw DataError("binarization produced no informative features");
    return BinaryDataset(std::move(cols), std::move(labels), std::move(names));
}

BinaryDataset load_numeric_csv(const std::filesystem::path& path, const LoadOptions& options,
                               int thresholds_per_column)
{
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    RawTable t = read_table(ss.str(), FileFormat::csv);
    LoadOptions o = options;
    o.format = FileFormat::csv;
    const std::size_t lab = label_index(t, o);
    LabelVector labels = parse_labels(t, lab, options.task);
    std::vector<NumericColumn> cols;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        if (c == lab) continue;
        NumericColumn col{t.header[c], {}};
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            col.values.push_back(parse_real(t.rows[r][c], t.line_numbers[r]));
        cols.push_back(std::move(col));
    }
    return binarize_numeric(cols, std::move(labels), thresholds_per_column);
}

BinaryDataset synthetic_dataset(const SynthOptions& o)
{
    if (o.samples == 0 || o.features == 0) throw std::invalid_argument("synthetic dataset needs samples and features");
    if (o.noise < 0.0 || o.noise > 1.0) throw std::invalid_argument("noise rate must be in [0, 1]");
    std::mt19937_64 rng(o.seed);
    auto coin = [&] { return static_cast<int>(rng() >> 63); };
    auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    auto pick = [&] { return static_cast<std::size_t>(rng() % o.features); };

    // Labelling tree: root r, second-level features a (r unsatisfied) and b.
    const std::size_t r = pick(), a = pick(), b = pick();
    int leaf[4];
    for (int& l : leaf) l = coin();

    std::vector<std::vector<std::uint8_t>> rows(o.samples, std::vector<std::uint8_t>(o.features));
    std::vector<int> labels(o.samples);
    for (std::size_t i = 0; i < o.samples; ++i) {
        for (auto& x : rows[i]) x = static_cast<std::uint8_t>(coin());
        const int side = rows[i][r];
        const int second = rows[i][side ? b : a];
        int y = leaf[2 * side + second];
        if (uniform() < o.noise) y = 1 - y;
        labels[i] = y;
    }
    return BinaryDataset::from_rows(rows, LabelVector::classification(std::move(labels), 2));
}

} // namespace rashomon
