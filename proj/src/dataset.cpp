#include "fairfs/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "fairfs/errors.hpp"
#include "fairfs/rng.hpp"

namespace fairfs {

void FieldSchema::validate() const {
    if (fields.empty()) throw DataError("schema has no fields");
    if (embed_dim == 0) throw DataError("embed_dim must be >= 1");
    std::unordered_set<std::string> seen;
    for (const auto& f : fields) {
        if (f.vocab_size < 1) {
            throw DataError("field '" + f.name + "' has empty vocabulary");
        }
        if (!seen.insert(f.name).second) {
            throw DataError("duplicate field name '" + f.name + "'");
        }
    }
}

double TabularDataset::positive_rate() const {
    if (labels.empty()) return 0.0;
    size_t pos = 0;
    for (const uint8_t y : labels) pos += y;
    return static_cast<double>(pos) / static_cast<double>(labels.size());
}

void TabularDataset::validate() const {
    schema.validate();
    const size_t f = schema.field_count();
    if (indices.size() != labels.size() * f) {
        throw DataError("dataset index/label size mismatch");
    }
    for (size_t r = 0; r < labels.size(); ++r) {
        if (labels[r] > 1) throw DataError("label outside {0,1}");
        for (size_t k = 0; k < f; ++k) {
            if (index(r, k) >= schema.fields[k].vocab_size) {
                throw DataError("index out of range for field '" +
                                schema.fields[k].name + "'");
            }
        }
    }
}

TabularDataset TabularDataset::select_fields(
    const std::vector<size_t>& fields) const {
    const size_t f = schema.field_count();
    std::vector<size_t> picked = fields;
    std::sort(picked.begin(), picked.end());
    for (const size_t k : picked) {
        if (k >= f) throw DataError("selected field index out of range");
    }
    TabularDataset out;
    out.schema.embed_dim = schema.embed_dim;
    for (const size_t k : picked) out.schema.fields.push_back(schema.fields[k]);
    out.labels = labels;
    out.provenance = provenance;
    if (!vocab.empty()) {
        for (const size_t k : picked) out.vocab.push_back(vocab[k]);
    }
    out.indices.resize(labels.size() * picked.size());
    for (size_t r = 0; r < labels.size(); ++r) {
        for (size_t j = 0; j < picked.size(); ++j) {
            out.indices[r * picked.size() + j] = index(r, picked[j]);
        }
    }
    return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

// Shuffled row order shared by load_csv and split_dataset: membership in the
// train/validation/test partition depends only on (row count, seed).
std::vector<size_t> split_order(size_t n, uint64_t seed) {
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    Rng rng(derive_seed(seed, "split-shuffle"));
    rng.shuffle(order);
    return order;
}

TabularDataset load_csv_impl(const std::string& path,
                             const std::string& label_column,
                             std::optional<uint64_t> split_seed) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw DataError("missing header row");
    const std::vector<std::string> header = split_line(line);

    size_t label_col = header.size();
    for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == label_column) label_col = i;
    }
    if (label_col == header.size()) {
        throw DataError("missing label column '" + label_column + "'");
    }

    std::vector<std::vector<std::string>> raw_rows;
    std::vector<uint8_t> labels;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size()) {
            throw DataError("ragged row at line " + std::to_string(line_no));
        }
        const std::string& lab = cells[label_col];
        if (lab == "0") {
            labels.push_back(0);
        } else if (lab == "1") {
            labels.push_back(1);
        } else {
            throw DataError("non-binary label '" + lab + "' at line " +
                            std::to_string(line_no));
        }
        cells.erase(cells.begin() + static_cast<ptrdiff_t>(label_col));
        raw_rows.push_back(std::move(cells));
    }
    if (raw_rows.empty()) throw DataError("no data rows in '" + path + "'");

    const size_t n = raw_rows.size();
    const size_t f = header.size() - 1;

    // Rows contributing to the vocabulary: the future training partition when
    // a split seed is known, otherwise the whole file.
    std::vector<uint8_t> in_train(n, 1);
    if (split_seed) {
        const auto order = split_order(n, *split_seed);
        const size_t n_train = (n * 8) / 10;
        std::fill(in_train.begin(), in_train.end(), uint8_t{0});
        for (size_t i = 0; i < n_train; ++i) in_train[order[i]] = 1;
    }

    TabularDataset ds;
    ds.schema.embed_dim = 8;
    std::vector<std::unordered_map<std::string, uint32_t>> maps(f);
    ds.vocab.assign(f, {"<oov>"});
    for (size_t k = 0; k < f; ++k) {
        const size_t col = k < label_col ? k : k + 1;
        ds.schema.fields.push_back({header[col], 1});
    }
    for (size_t r = 0; r < n; ++r) {
        if (!in_train[r]) continue;
        for (size_t k = 0; k < f; ++k) {
            auto& m = maps[k];
            const std::string& v = raw_rows[r][k];
            if (m.find(v) == m.end()) {
                const auto id = static_cast<uint32_t>(ds.vocab[k].size());
                m.emplace(v, id);
                ds.vocab[k].push_back(v);
            }
        }
    }
    for (size_t k = 0; k < f; ++k) ds.schema.fields[k].vocab_size = ds.vocab[k].size();
    ds.schema.validate();

    ds.indices.resize(n * f);
    for (size_t r = 0; r < n; ++r) {
        for (size_t k = 0; k < f; ++k) {
            const auto& m = maps[k];
            const auto it = m.find(raw_rows[r][k]);
            ds.indices[r * f + k] = it == m.end() ? 0 : it->second;
        }
    }
    ds.labels = std::move(labels);
    ds.provenance.source = "csv:" + path;
    ds.provenance.seed = split_seed.value_or(0);
    return ds;
}

TabularDataset take_rows(const TabularDataset& data,
                         const std::vector<size_t>& order, size_t begin,
                         size_t end) {
    const size_t f = data.field_count();
    TabularDataset out;
    out.schema = data.schema;
    out.provenance = data.provenance;
    out.vocab = data.vocab;
    out.indices.reserve((end - begin) * f);
    out.labels.reserve(end - begin);
    for (size_t i = begin; i < end; ++i) {
        const size_t r = order[i];
        out.labels.push_back(data.labels[r]);
        for (size_t k = 0; k < f; ++k) {
            out.indices.push_back(data.indices[r * f + k]);
        }
    }
    return out;
}

} // namespace

TabularDataset load_csv(const std::string& path,
                        const std::string& label_column) {
    return load_csv_impl(path, label_column, std::nullopt);
}

TabularDataset load_csv(const std::string& path, const std::string& label_column,
                        uint64_t split_seed) {
    return load_csv_impl(path, label_column, split_seed);
}

SplitResult split_dataset(const TabularDataset& data, uint64_t seed) {
    const size_t n = data.row_count();
    if (n < 10) throw DataError("split requires at least 10 rows");
    const auto order = split_order(n, seed);
    const size_t n_train = (n * 8) / 10;
    const size_t n_val = n / 10;
    SplitResult out;
    out.train = take_rows(data, order, 0, n_train);
    out.validation = take_rows(data, order, n_train, n_train + n_val);
    out.test = take_rows(data, order, n_train + n_val, n);
    return out;
}

void SyntheticSpec::validate() const {
    if (n_rows < 1) throw DataError("synthetic spec: n_rows must be >= 1");
    if (n_fields < 1) throw DataError("synthetic spec: n_fields must be >= 1");
    if (vocab_size < 2) {
        throw DataError("synthetic spec: vocab_size must be >= 2 "
                        "(index 0 is reserved)");
    }
    if (!(target_positive_rate > 0.0 && target_positive_rate < 1.0)) {
        throw DataError("synthetic spec: target_positive_rate must be in (0,1)");
    }
    for (const size_t s : planted) {
        if (s >= n_fields) throw DataError("synthetic spec: planted field out of range");
    }
    for (const auto& [j, k] : interaction_pairs) {
        if (j >= n_fields || k >= n_fields) {
            throw DataError("synthetic spec: interaction pair out of range");
        }
    }
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct SyntheticWeights {
    std::vector<std::vector<double>> main;                // per planted field
    std::vector<std::vector<double>> pair;                // per interaction pair
};

SyntheticWeights draw_weights(const SyntheticSpec& spec) {
    SyntheticWeights w;
    Rng rng(derive_seed(spec.seed, "synthetic-weights"));
    for (size_t i = 0; i < spec.planted.size(); ++i) {
        std::vector<double> row(spec.vocab_size);
        for (double& v : row) v = rng.normal();
        w.main.push_back(std::move(row));
    }
    for (size_t p = 0; p < spec.interaction_pairs.size(); ++p) {
        std::vector<double> table(spec.vocab_size * spec.vocab_size);
        for (double& v : table) v = rng.normal();
        w.pair.push_back(std::move(table));
    }
    return w;
}

std::vector<double> raw_scores(const SyntheticSpec& spec,
                               const SyntheticWeights& w,
                               const std::vector<uint32_t>& indices) {
    const size_t n = indices.size() / spec.n_fields;
    std::vector<double> scores(n, 0.0);
    for (size_t r = 0; r < n; ++r) {
        const uint32_t* row = indices.data() + r * spec.n_fields;
        double s = 0.0;
        for (size_t i = 0; i < spec.planted.size(); ++i) {
            s += w.main[i][row[spec.planted[i]]];
        }
        for (size_t p = 0; p < spec.interaction_pairs.size(); ++p) {
            const auto& [j, k] = spec.interaction_pairs[p];
            s += w.pair[p][row[j] * spec.vocab_size + row[k]];
        }
        scores[r] = s;
    }
    return scores;
}

} // namespace

std::vector<double> synthetic_raw_scores(const SyntheticSpec& spec,
                                         const std::vector<uint32_t>& indices) {
    spec.validate();
    if (indices.size() % spec.n_fields != 0) {
        throw DataError("index matrix width does not match n_fields");
    }
    return raw_scores(spec, draw_weights(spec), indices);
}

TabularDataset generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    const size_t n = spec.n_rows;
    const size_t f = spec.n_fields;

    TabularDataset ds;
    ds.schema.embed_dim = spec.embed_dim;
    for (size_t k = 0; k < f; ++k) {
        ds.schema.fields.push_back({"f" + std::to_string(k), spec.vocab_size});
    }

    Rng idx_rng(derive_seed(spec.seed, "synthetic-indices"));
    ds.indices.resize(n * f);
    for (auto& v : ds.indices) {
        v = 1 + static_cast<uint32_t>(idx_rng.uniform_index(spec.vocab_size - 1));
    }

    const SyntheticWeights w = draw_weights(spec);
    const std::vector<double> scores = raw_scores(spec, w, ds.indices);

    Rng lab_rng(derive_seed(spec.seed, "synthetic-labels"));
    std::vector<double> u(n);
    for (double& v : u) v = lab_rng.uniform();

    // Empirical positive rate with frozen uniforms is monotone in b0, so
    // bisection lands inside the +-2% window whenever it is attainable.
    const auto rate_at = [&](double b0) {
        size_t pos = 0;
        for (size_t r = 0; r < n; ++r) {
            if (u[r] < sigmoid(b0 + scores[r])) ++pos;
        }
        return static_cast<double>(pos) / static_cast<double>(n);
    };
    double lo = -40.0, hi = 40.0, b0 = 0.0;
    const double tol = 0.02;
    bool ok = false;
    for (int it = 0; it < 200 && !ok; ++it) {
        b0 = 0.5 * (lo + hi);
        const double rate = rate_at(b0);
        if (std::abs(rate - spec.target_positive_rate) <= tol) {
            ok = true;
        } else if (rate < spec.target_positive_rate) {
            lo = b0;
        } else {
            hi = b0;
        }
    }
    if (!ok) {
        throw NumericError("synthetic generator: bisection failed to reach "
                           "target positive rate");
    }

    ds.labels.resize(n);
    for (size_t r = 0; r < n; ++r) {
        ds.labels[r] = u[r] < sigmoid(b0 + scores[r]) ? 1 : 0;
    }
    ds.provenance.source = "synthetic";
    ds.provenance.seed = spec.seed;
    ds.provenance.planted = spec.planted;
    std::sort(ds.provenance.planted.begin(), ds.provenance.planted.end());
    return ds;
}

namespace {

constexpr uint32_t kDatasetMagic = 0x46464453; // "FFDS"
constexpr uint32_t kDatasetVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw DataError("truncated dataset file");
    return v;
}

void write_string(std::ostream& out, const std::string& s) {
    write_pod(out, static_cast<uint64_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
    const auto len = read_pod<uint64_t>(in);
    std::string s(len, '\0');
    in.read(s.data(), static_cast<std::streamsize>(len));
    if (!in) throw DataError("truncated dataset file");
    return s;
}

} // namespace

void save_dataset(const TabularDataset& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    write_pod(out, kDatasetMagic);
    write_pod(out, kDatasetVersion);
    write_pod(out, static_cast<uint64_t>(data.schema.embed_dim));
    write_pod(out, static_cast<uint64_t>(data.field_count()));
    for (size_t k = 0; k < data.field_count(); ++k) {
        write_string(out, data.schema.fields[k].name);
        write_pod(out, static_cast<uint64_t>(data.schema.fields[k].vocab_size));
        const uint64_t nv = data.vocab.empty() ? 0 : data.vocab[k].size();
        write_pod(out, nv);
        for (uint64_t i = 0; i < nv; ++i) write_string(out, data.vocab[k][i]);
    }
    write_pod(out, static_cast<uint64_t>(data.row_count()));
    out.write(reinterpret_cast<const char*>(data.indices.data()),
              static_cast<std::streamsize>(data.indices.size() * sizeof(uint32_t)));
    out.write(reinterpret_cast<const char*>(data.labels.data()),
              static_cast<std::streamsize>(data.labels.size()));
    write_string(out, data.provenance.source);
    write_pod(out, data.provenance.seed);
    write_pod(out, static_cast<uint64_t>(data.provenance.planted.size()));
    for (const size_t p : data.provenance.planted) {
        write_pod(out, static_cast<uint64_t>(p));
    }
    if (!out) throw DataError("failed writing '" + path + "'");
}

TabularDataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    if (read_pod<uint32_t>(in) != kDatasetMagic) {
        throw DataError("'" + path + "' is not a dataset snapshot");
    }
    if (read_pod<uint32_t>(in) != kDatasetVersion) {
        throw DataError("unsupported dataset snapshot version");
    }
    TabularDataset ds;
    ds.schema.embed_dim = read_pod<uint64_t>(in);
    const auto f = read_pod<uint64_t>(in);
    bool any_vocab = false;
    std::vector<std::vector<std::string>> vocab(f);
    for (uint64_t k = 0; k < f; ++k) {
        FieldInfo info;
        info.name = read_string(in);
        info.vocab_size = read_pod<uint64_t>(in);
        ds.schema.fields.push_back(std::move(info));
        const auto nv = read_pod<uint64_t>(in);
        for (uint64_t i = 0; i < nv; ++i) vocab[k].push_back(read_string(in));
        any_vocab = any_vocab || nv > 0;
    }
    if (any_vocab) ds.vocab = std::move(vocab);
    const auto n = read_pod<uint64_t>(in);
    ds.indices.resize(n * f);
    in.read(reinterpret_cast<char*>(ds.indices.data()),
            static_cast<std::streamsize>(ds.indices.size() * sizeof(uint32_t)));
    ds.labels.resize(n);
    in.read(reinterpret_cast<char*>(ds.labels.data()),
            static_cast<std::streamsize>(n));
    if (!in) throw DataError("truncated dataset file");
    ds.provenance.source = read_string(in);
    ds.provenance.seed = read_pod<uint64_t>(in);
    const auto np = read_pod<uint64_t>(in);
    for (uint64_t i = 0; i < np; ++i) {
        ds.provenance.planted.push_back(read_pod<uint64_t>(in));
    }
    ds.validate();
    return ds;
}

} // namespace fairfs
