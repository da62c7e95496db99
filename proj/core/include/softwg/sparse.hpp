#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace softwg {

/// Symmetric sparse matrix in CSR layout. Only the upper triangle
/// (column >= row) is stored logically; `finalize()` additionally builds the
/// mirrored full pattern so that matrix-vector products can run row-parallel
/// with one writer per row (bit-reproducible for any thread count).
class SparseSymMatrix {
  public:
    SparseSymMatrix() = default;
    explicit SparseSymMatrix(std::size_t dimension) : dim_(dimension) {}

    std::size_t dimension() const { return dim_; }
    std::size_t stored_nnz() const { return upper_cols_.size(); } ///< upper triangle
    bool finalized() const { return finalized_; }

    void reserve(std::size_t nnz_upper);

    /// Add an upper-triangle entry (col >= row required, duplicates summed).
    void add(std::size_t row, std::size_t col, double value);

    /// Sort, merge duplicates, build row offsets and the full mirrored pattern.
    void finalize();

    /// y = A x (full-pattern rows, fixed in-row accumulation order)
    void multiply(std::span<const double> x, std::span<double> y, int threads = 1) const;

    double diagonal(std::size_t row) const;

    /// Gershgorin bounds: row-wise a_ii ± sum |a_ij|.
    struct Bounds {
        double low, high;
    };
    Bounds gershgorin() const;

    /// upper-triangle CSR views
    std::span<const std::size_t> upper_offsets() const { return upper_offsets_; }
    std::span<const std::uint32_t> upper_cols() const { return upper_cols_; }
    std::span<const double> upper_values() const { return upper_vals_; }

    /// Coordinate text dump: "dim nnz" header, then "row col value" triplets
    /// (0-based, 17 significant digits). All nonzeros of the full symmetric
    /// pattern are written so a reader needs no completion convention.
    void dump_coordinate(std::ostream& os) const;

    /// Inverse of dump_coordinate (entries may come in any order).
    static SparseSymMatrix read_coordinate(std::istream& is);

  private:
    std::size_t dim_ = 0;
    bool finalized_ = false;

    struct Entry {
        std::uint32_t row, col;
        double value;
    };
    std::vector<Entry> pending_;

    std::vector<std::size_t> upper_offsets_;
    std::vector<std::uint32_t> upper_cols_;
    std::vector<double> upper_vals_;

    std::vector<std::size_t> full_offsets_;
    std::vector<std::uint32_t> full_cols_;
    std::vector<double> full_vals_;
};

} // namespace softwg
