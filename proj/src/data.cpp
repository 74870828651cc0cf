#include "regpath/data.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace regpath {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::vector<unsigned char> out;
  if (ends_with(path.string(), ".gz")) {
    gzFile f = gzopen(path.string().c_str(), "rb");
    if (!f) throw DataError("cannot open " + path.string());
    std::array<unsigned char, 1 << 16> buf;
    int got;
    while ((got = gzread(f, buf.data(), static_cast<unsigned>(buf.size()))) > 0)
      out.insert(out.end(), buf.begin(), buf.begin() + got);
    int errnum = 0;
    const char* msg = gzerror(f, &errnum);
    const bool failed = got < 0 || (errnum != Z_OK && errnum != Z_STREAM_END);
    const std::string err = msg ? msg : "";
    gzclose(f);
    if (failed) throw DataError("gzip error reading " + path.string() + ": " + err);
    return out;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  out.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  return out;
}

std::uint32_t read_be32(const std::vector<unsigned char>& b, std::size_t off) {
  return (std::uint32_t{b[off]} << 24) | (std::uint32_t{b[off + 1]} << 16) |
         (std::uint32_t{b[off + 2]} << 8) | std::uint32_t{b[off + 3]};
}

std::string hex32(std::uint32_t v) {
  std::ostringstream os;
  os << "0x" << std::hex;
  os.width(8);
  os.fill('0');
  os << v;
  return os.str();
}

void check_magic(std::uint32_t found, std::uint32_t expected, const std::filesystem::path& p) {
  if (found != expected) {
    throw DataError(p.string() + ": IDX magic mismatch, expected " + hex32(expected) + ", found " +
                    hex32(found));
  }
}

}  // namespace

Dataset load_iris_raw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());

  std::vector<std::array<double, 4>> rows;
  std::vector<int> labels;
  std::map<std::string, int> class_ids;
  std::vector<std::string> class_names;

  std::string line;
  int line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_commas(line);
    if (cells.size() != 5) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected 5 columns, got " +
                      std::to_string(cells.size()));
    }
    std::array<double, 4> x{};
    bool numeric = true;
    for (int j = 0; j < 4; ++j) numeric = numeric && parse_double(cells[j], x[j]);
    if (!numeric) {
      if (first_content) {  // header row
        first_content = false;
        continue;
      }
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed numeric field");
    }
    first_content = false;
    if (cells[4].empty())
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": empty class label");
    auto [it, inserted] = class_ids.try_emplace(cells[4], static_cast<int>(class_names.size()));
    if (inserted) class_names.push_back(cells[4]);
    rows.push_back(x);
    labels.push_back(it->second);
  }
  if (rows.empty()) throw DataError(path.string() + ": no data rows");

  Dataset ds;
  ds.name = "iris";
  ds.features.resize(static_cast<Index>(rows.size()), 4);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < 4; ++j) ds.features(static_cast<Index>(i), j) = rows[i][j];
  ds.labels = std::move(labels);
  ds.class_names = std::move(class_names);
  ds.num_classes = static_cast<int>(ds.class_names.size());
  return ds;
}

Dataset load_iris(const std::filesystem::path& path) {
  Dataset ds = load_iris_raw(path);
  normalize_zscore(ds);
  return ds;
}

Dataset load_mnist(const std::filesystem::path& images, const std::filesystem::path& labels) {
  const auto img = read_bytes(images);
  const auto lab = read_bytes(labels);
  if (img.size() < 16) throw DataError(images.string() + ": truncated IDX header");
  if (lab.size() < 8) throw DataError(labels.string() + ": truncated IDX header");
  check_magic(read_be32(img, 0), 0x00000803u, images);
  check_magic(read_be32(lab, 0), 0x00000801u, labels);

  const std::uint64_t n = read_be32(img, 4), h = read_be32(img, 8), w = read_be32(img, 12);
  const std::uint64_t n_labels = read_be32(lab, 4);
  if (n != n_labels) {
    throw DataError("MNIST image count " + std::to_string(n) + " does not match label count " +
                    std::to_string(n_labels));
  }
  const std::uint64_t d = h * w;
  if (img.size() - 16 < n * d) {
    throw DataError(images.string() + ": truncated payload (" + std::to_string(img.size() - 16) +
                    " bytes, expected " + std::to_string(n * d) + ")");
  }
  if (lab.size() - 8 < n) throw DataError(labels.string() + ": truncated payload");

  Dataset ds;
  ds.name = "mnist";
  ds.features.resize(static_cast<Index>(n), static_cast<Index>(d));
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t j = 0; j < d; ++j)
      ds.features(static_cast<Index>(i), static_cast<Index>(j)) = img[16 + i * d + j];
  ds.labels.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const int y = lab[8 + i];
    if (y > 9) throw DataError(labels.string() + ": label " + std::to_string(y) + " out of range");
    ds.labels[i] = y;
  }
  ds.num_classes = 10;
  for (int k = 0; k < 10; ++k) ds.class_names.push_back(std::to_string(k));
  normalize_scale255(ds);
  return ds;
}

void normalize_zscore(Dataset& ds) {
  if (!ds.normalization_tag.empty())
    throw DataError("dataset '" + ds.name + "' is already normalized (" + ds.normalization_tag + ")");
  const double n = static_cast<double>(ds.rows());
  for (Index j = 0; j < ds.dim(); ++j) {
    auto col = ds.features.col(j);
    const double mean = col.sum() / n;
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / n);
    if (sd > 0.0) col /= sd;
  }
  ds.normalization_tag = "zscore";
}

void normalize_scale255(Dataset& ds) {
  if (!ds.normalization_tag.empty())
    throw DataError("dataset '" + ds.name + "' is already normalized (" + ds.normalization_tag + ")");
  ds.features /= 255.0;
  ds.normalization_tag = "scale255";
}

Dataset concat(const Dataset& a, const Dataset& b) {
  if (a.dim() != b.dim()) throw DataError("concat: feature dimensions differ");
  if (a.normalization_tag != b.normalization_tag)
    throw DataError("concat: normalization tags differ");
  Dataset out;
  out.name = a.name;
  out.normalization_tag = a.normalization_tag;
  out.num_classes = std::max(a.num_classes, b.num_classes);
  out.class_names = a.class_names.size() >= b.class_names.size() ? a.class_names : b.class_names;
  out.features.resize(a.rows() + b.rows(), a.dim());
  out.features.topRows(a.rows()) = a.features;
  out.features.bottomRows(b.rows()) = b.features;
  out.labels = a.labels;
  out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
  return out;
}

Dataset subset(const Dataset& ds, std::span<const Index> rows) {
  Dataset out;
  out.name = ds.name;
  out.normalization_tag = ds.normalization_tag;
  out.num_classes = ds.num_classes;
  out.class_names = ds.class_names;
  Batch b = gather(ds, rows);
  out.features = std::move(b.inputs);
  out.labels = std::move(b.labels);
  return out;
}

Dataset head(const Dataset& ds, Index count) {
  std::vector<Index> rows(static_cast<std::size_t>(std::min(count, ds.rows())));
  std::iota(rows.begin(), rows.end(), Index{0});
  return subset(ds, rows);
}

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw std::invalid_argument("split: train_fraction must lie in (0, 1)");
  std::vector<Index> perm(static_cast<std::size_t>(ds.rows()));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::mt19937_64 rng(spec.seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto n_train = static_cast<std::size_t>(
      std::floor(static_cast<double>(ds.rows()) * spec.train_fraction));
  std::span<const Index> all(perm);
  return {subset(ds, all.first(n_train)), subset(ds, all.subspan(n_train))};
}

std::vector<Index> epoch_permutation(Index n, std::uint64_t seed, std::uint64_t epoch) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(epoch), static_cast<std::uint32_t>(epoch >> 32)};
  std::mt19937_64 rng(seq);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

std::vector<std::vector<Index>> batch_indices(Index n, Index batch_size, std::uint64_t seed,
                                              std::uint64_t epoch) {
  if (batch_size < 1 || batch_size > n)
    throw std::invalid_argument("batch_stream: batch size must lie in [1, N]");
  const auto perm = epoch_permutation(n, seed, epoch);
  std::vector<std::vector<Index>> out;
  for (Index start = 0; start < n; start += batch_size) {
    const Index end = std::min(n, start + batch_size);
    out.emplace_back(perm.begin() + start, perm.begin() + end);
  }
  return out;
}

std::vector<Batch> batch_stream(const Dataset& ds, Index batch_size, std::uint64_t seed,
                                std::uint64_t epoch) {
  std::vector<Batch> out;
  for (const auto& rows : batch_indices(ds.rows(), batch_size, seed, epoch))
    out.push_back(gather(ds, rows));
  return out;
}

Batch gather(const Dataset& ds, std::span<const Index> rows) {
  Batch b;
  b.inputs.resize(static_cast<Index>(rows.size()), ds.dim());
  b.labels.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    b.inputs.row(static_cast<Index>(i)) = ds.features.row(rows[i]);
    b.labels[i] = ds.labels[static_cast<std::size_t>(rows[i])];
  }
  return b;
}

MinibatchSampler::MinibatchSampler(Index n, Index batch_size, std::uint64_t seed)
    : n_(n), batch_size_(batch_size), seed_(seed) {
  if (batch_size < 1 || batch_size > n)
    throw std::invalid_argument("MinibatchSampler: batch size must lie in [1, N]");
}

BatchSpec MinibatchSampler::next() {
  if (cursor_ >= current_.size()) {
    current_ = batch_indices(n_, batch_size_, seed_, epoch_++);
    cursor_ = 0;
  }
  return BatchSpec(current_[cursor_++]);
}

}  // namespace regpath
