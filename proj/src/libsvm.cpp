#include "shb/libsvm.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "shb/rng.hpp"

namespace shb {

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("libsvm parse error at line " +
                           std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& token, std::size_t line_no,
                    const char* role) {
  try {
    std::size_t used = 0;
    const double value = std::stod(token, &used);
    if (used != token.size() || !std::isfinite(value))
      parse_fail(line_no, std::string("bad ") + role + " '" + token + "'");
    return value;
  } catch (const std::logic_error&) {
    parse_fail(line_no, std::string("bad ") + role + " '" + token + "'");
  }
}

}  // namespace

SparseDataset parse_libsvm(std::istream& in,
                           std::int32_t n_features_override) {
  SparseDataset dataset;
  std::int32_t max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    std::istringstream tokens(line);
    std::string token;
    if (!(tokens >> token)) continue;  // blank or comment-only line

    const double label = parse_double(token, line_no, "label");
    std::vector<std::pair<std::int32_t, double>> row;
    std::int32_t prev_index = 0;
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos || colon == 0 ||
          colon + 1 == token.size())
        parse_fail(line_no, "expected <index>:<value>, got '" + token + "'");
      std::int32_t index = 0;
      const char* first = token.data();
      const auto [ptr, ec] = std::from_chars(first, first + colon, index);
      if (ec != std::errc{} || ptr != first + colon)
        parse_fail(line_no, "bad feature index in '" + token + "'");
      if (index < 1)
        parse_fail(line_no, "feature index must be >= 1, got " +
                                std::to_string(index));
      if (index <= prev_index)
        parse_fail(line_no, "nonincreasing feature index " +
                                std::to_string(index));
      const double value =
          parse_double(token.substr(colon + 1), line_no, "feature value");
      row.emplace_back(index - 1, value);
      prev_index = index;
    }
    if (n_features_override > 0 && prev_index > n_features_override)
      parse_fail(line_no, "feature index " + std::to_string(prev_index) +
                              " exceeds declared dimension " +
                              std::to_string(n_features_override));
    max_index = std::max(max_index, prev_index);
    dataset.rows.push_back(std::move(row));
    dataset.labels.push_back(label);
  }
  dataset.n_features =
      n_features_override > 0 ? n_features_override : max_index;
  return dataset;
}

void serialize_libsvm(const SparseDataset& dataset, std::ostream& out) {
  for (std::size_t i = 0; i < dataset.rows.size(); ++i) {
    out << dataset.labels[i];
    for (const auto& [index, value] : dataset.rows[i])
      out << ' ' << (index + 1) << ':' << value;
    out << '\n';
  }
}

SparseDataset make_synthetic_dataset(std::size_t n_samples,
                                     std::int32_t n_features, int min_active,
                                     int max_active, std::uint64_t seed) {
  if (n_features < 1 || min_active < 1 || max_active < min_active ||
      max_active > n_features)
    throw std::invalid_argument("make_synthetic_dataset: bad shape");
  std::mt19937_64 rng = make_stream(seed, 7001);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> count(min_active, max_active);
  std::uniform_int_distribution<std::int32_t> pick(0, n_features - 1);

  std::vector<double> planted(static_cast<std::size_t>(n_features));
  for (double& c : planted) c = normal(rng);

  SparseDataset dataset;
  dataset.n_features = n_features;
  dataset.rows.reserve(n_samples);
  dataset.labels.reserve(n_samples);
  std::vector<std::int32_t> active;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const int k = count(rng);
    active.clear();
    while (static_cast<int>(active.size()) < k) {
      const std::int32_t idx = pick(rng);
      if (std::find(active.begin(), active.end(), idx) == active.end())
        active.push_back(idx);
    }
    std::sort(active.begin(), active.end());
    std::vector<std::pair<std::int32_t, double>> row;
    row.reserve(active.size());
    double score = 0.0;
    for (std::int32_t idx : active) {
      row.emplace_back(idx, 1.0);
      score += planted[static_cast<std::size_t>(idx)];
    }
    dataset.rows.push_back(std::move(row));
    dataset.labels.push_back(score + 0.5 * normal(rng) >= 0.0 ? 1.0 : -1.0);
  }
  return dataset;
}

}  // namespace shb
