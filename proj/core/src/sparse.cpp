#include "softwg/sparse.hpp"

#include "softwg/errors.hpp"
#include "softwg/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <utility>

namespace softwg {

void SparseSymMatrix::reserve(std::size_t nnz_upper) { pending_.reserve(nnz_upper); }

void SparseSymMatrix::add(std::size_t row, std::size_t col, double value) {
    if (row >= dim_ || col >= dim_) throw Error("sparse: index out of range");
    if (col < row) throw Error("sparse: entries must be given in the upper triangle");
    if (finalized_) throw Error("sparse: matrix already finalized");
    pending_.push_back({static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(col), value});
}

void SparseSymMatrix::finalize() {
    if (finalized_) return;
    std::sort(pending_.begin(), pending_.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    upper_offsets_.assign(dim_ + 1, 0);
    upper_cols_.clear();
    upper_vals_.clear();
    upper_cols_.reserve(pending_.size());
    upper_vals_.reserve(pending_.size());
    for (std::size_t i = 0; i < pending_.size();) {
        std::size_t j = i + 1;
        double v = pending_[i].value;
        while (j < pending_.size() && pending_[j].row == pending_[i].row &&
               pending_[j].col == pending_[i].col) {
            v += pending_[j].value;
            ++j;
        }
        upper_cols_.push_back(pending_[i].col);
        upper_vals_.push_back(v);
        ++upper_offsets_[pending_[i].row + 1];
        i = j;
    }
    for (std::size_t r = 0; r < dim_; ++r) upper_offsets_[r + 1] += upper_offsets_[r];
    pending_.clear();
    pending_.shrink_to_fit();

    // mirror into the full pattern
    std::vector<std::size_t> count(dim_ + 1, 0);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t k = upper_offsets_[r]; k < upper_offsets_[r + 1]; ++k) {
            ++count[r + 1];
            if (upper_cols_[k] != r) ++count[upper_cols_[k] + 1];
        }
    }
    full_offsets_.assign(dim_ + 1, 0);
    for (std::size_t r = 0; r < dim_; ++r) full_offsets_[r + 1] = full_offsets_[r] + count[r + 1];
    full_cols_.assign(full_offsets_[dim_], 0);
    full_vals_.assign(full_offsets_[dim_], 0.0);
    std::vector<std::size_t> cursor(full_offsets_.begin(), full_offsets_.end() - 1);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t k = upper_offsets_[r]; k < upper_offsets_[r + 1]; ++k) {
            const std::uint32_t c = upper_cols_[k];
            full_cols_[cursor[r]] = c;
            full_vals_[cursor[r]] = upper_vals_[k];
            ++cursor[r];
            if (c != r) {
                full_cols_[cursor[c]] = static_cast<std::uint32_t>(r);
                full_vals_[cursor[c]] = upper_vals_[k];
                ++cursor[c];
            }
        }
    }
    // in-row column order (lower part first arrives row-sorted already, but
    // the mirrored upper entries appear in ascending source rows; sort rows)
    for (std::size_t r = 0; r < dim_; ++r) {
        const std::size_t b = full_offsets_[r], e = full_offsets_[r + 1];
        std::vector<std::pair<std::uint32_t, double>> row(e - b);
        for (std::size_t k = b; k < e; ++k) row[k - b] = {full_cols_[k], full_vals_[k]};
        std::sort(row.begin(), row.end());
        for (std::size_t k = b; k < e; ++k) {
            full_cols_[k] = row[k - b].first;
            full_vals_[k] = row[k - b].second;
        }
    }
    finalized_ = true;
}

void SparseSymMatrix::multiply(std::span<const double> x, std::span<double> y,
                               int threads) const {
    if (!finalized_) throw Error("sparse: finalize() before multiply()");
    parallel_for(dim_, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            double acc = 0.0;
            for (std::size_t k = full_offsets_[r]; k < full_offsets_[r + 1]; ++k)
                acc += full_vals_[k] * x[full_cols_[k]];
            y[r] = acc;
        }
    });
}

double SparseSymMatrix::diagonal(std::size_t row) const {
    for (std::size_t k = upper_offsets_[row]; k < upper_offsets_[row + 1]; ++k)
        if (upper_cols_[k] == row) return upper_vals_[k];
    return 0.0;
}

SparseSymMatrix::Bounds SparseSymMatrix::gershgorin() const {
    if (!finalized_) throw Error("sparse: finalize() before gershgorin()");
    Bounds b{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
    for (std::size_t r = 0; r < dim_; ++r) {
        double diag = 0.0, off = 0.0;
        for (std::size_t k = full_offsets_[r]; k < full_offsets_[r + 1]; ++k) {
            if (full_cols_[k] == r)
                diag = full_vals_[k];
            else
                off += std::abs(full_vals_[k]);
        }
        b.low = std::min(b.low, diag - off);
        b.high = std::max(b.high, diag + off);
    }
    if (dim_ == 0) b = {0.0, 0.0};
    return b;
}

void SparseSymMatrix::dump_coordinate(std::ostream& os) const {
    if (!finalized_) throw Error("sparse: finalize() before dump_coordinate()");
    os << dim_ << ' ' << full_cols_.size() << '\n';
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t k = full_offsets_[r]; k < full_offsets_[r + 1]; ++k)
            os << r << ' ' << full_cols_[k] << ' ' << format_g17(full_vals_[k]) << '\n';
}

SparseSymMatrix SparseSymMatrix::read_coordinate(std::istream& is) {
    std::size_t dim = 0, nnz = 0;
    if (!(is >> dim >> nnz)) throw Error("sparse: bad coordinate header");
    SparseSymMatrix m(dim);
    m.reserve(nnz / 2 + dim);
    for (std::size_t i = 0; i < nnz; ++i) {
        std::size_t r, c;
        double v;
        if (!(is >> r >> c >> v)) throw Error("sparse: truncated coordinate file");
        // entries below the diagonal are the mirrored copies of upper ones
        if (c >= r) m.add(r, c, v);
    }
    m.finalize();
    return m;
}

} // namespace softwg
