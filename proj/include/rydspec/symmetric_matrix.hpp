#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace rydspec {

// Dense real symmetric matrix with zero diagonal, column-major full storage.
// Immutable once built.
class SymmetricMatrix {
  public:
    SymmetricMatrix() = default;

    // fill(i, j) is called once per pair with i < j, columns left to right,
    // rows top to bottom within a column.
    template <class Fill>
    static SymmetricMatrix build(std::size_t order, Fill&& fill) {
        SymmetricMatrix m(order);
        for (std::size_t j = 1; j < order; ++j)
            for (std::size_t i = 0; i < j; ++i) m.put(i, j, fill(i, j));
        return m;
    }

    // Takes ownership of an order*order buffer; checks symmetry and zero diagonal.
    static SymmetricMatrix from_dense(std::size_t order, std::vector<double> entries);

    std::size_t order() const { return order_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[j * order_ + i]; }
    std::span<const double> data() const { return data_; }

    bool is_symmetric() const;
    bool has_zero_diagonal() const;
    double max_abs() const;
    // Sum over i != j of H_ij^2.
    double frobenius_squared() const;

    // Upper-triangle entries (i<j) in build order.
    std::vector<double> upper_entries() const;

  private:
    explicit SymmetricMatrix(std::size_t order) : order_(order), data_(order * order, 0.0) {}
    void put(std::size_t i, std::size_t j, double v) {
        data_[j * order_ + i] = v;
        data_[i * order_ + j] = v;
    }

    std::size_t order_ = 0;
    std::vector<double> data_;
};

// Plain-text "i j value" lines, 0-based, i<j.
void write_triplets(std::ostream& os, const SymmetricMatrix& m);
SymmetricMatrix read_triplets(std::istream& is, std::size_t order);

}  // namespace rydspec
