#ifndef SHB_LIBSVM_HPP
#define SHB_LIBSVM_HPP

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace shb {

/// Sparse rows with 0-based feature indices (1-based in the file format).
struct SparseDataset {
  std::vector<std::vector<std::pair<std::int32_t, double>>> rows;
  std::vector<double> labels;
  std::int32_t n_features = 0;

  std::size_t n_samples() const { return rows.size(); }
};

/// Parses "<label> <idx>:<val> ..." lines; '#' starts a comment, blank lines
/// are skipped. Indices must be >= 1 and strictly increasing within a row.
/// Malformed input raises std::runtime_error naming the line. When
/// n_features_override > 0 it fixes the feature count (indices beyond it are
/// an error); otherwise the maximum index seen decides.
SparseDataset parse_libsvm(std::istream& in,
                           std::int32_t n_features_override = 0);

/// Inverse of parse_libsvm up to whitespace normalization.
void serialize_libsvm(const SparseDataset& dataset, std::ostream& out);

/// Deterministic sparse binary-classification dataset in the same shape as
/// the LIBSVM adult datasets: each row activates between min_active and
/// max_active distinct binary features; labels are +-1 from a planted linear
/// model with flip noise.
SparseDataset make_synthetic_dataset(std::size_t n_samples,
                                     std::int32_t n_features, int min_active,
                                     int max_active, std::uint64_t seed);

}  // namespace shb

#endif  // SHB_LIBSVM_HPP
