#include "rydspec/symmetric_matrix.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace rydspec {

SymmetricMatrix SymmetricMatrix::from_dense(std::size_t order, std::vector<double> entries) {
    if (entries.size() != order * order) throw std::invalid_argument("from_dense: size mismatch");
    SymmetricMatrix m;
    m.order_ = order;
    m.data_ = std::move(entries);
    if (!m.is_symmetric() || !m.has_zero_diagonal())
        throw std::invalid_argument("from_dense: matrix must be symmetric with zero diagonal");
    return m;
}

bool SymmetricMatrix::is_symmetric() const {
    for (std::size_t j = 0; j < order_; ++j)
        for (std::size_t i = 0; i < j; ++i)
            if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
}

bool SymmetricMatrix::has_zero_diagonal() const {
    for (std::size_t i = 0; i < order_; ++i)
        if ((*this)(i, i) != 0.0) return false;
    return true;
}

double SymmetricMatrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double SymmetricMatrix::frobenius_squared() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return s;
}

std::vector<double> SymmetricMatrix::upper_entries() const {
    std::vector<double> out;
    out.reserve(order_ * (order_ > 0 ? order_ - 1 : 0) / 2);
    for (std::size_t j = 1; j < order_; ++j)
        for (std::size_t i = 0; i < j; ++i) out.push_back((*this)(i, j));
    return out;
}

void write_triplets(std::ostream& os, const SymmetricMatrix& m) {
    os << std::setprecision(17);
    for (std::size_t i = 0; i < m.order(); ++i)
        for (std::size_t j = i + 1; j < m.order(); ++j) os << i << ' ' << j << ' ' << m(i, j) << '\n';
}

SymmetricMatrix read_triplets(std::istream& is, std::size_t order) {
    std::vector<double> dense(order * order, 0.0);
    std::size_t i, j;
    double v;
    while (is >> i >> j >> v) {
        if (i >= order || j >= order || i == j)
            throw std::invalid_argument("read_triplets: bad index pair " + std::to_string(i) + " " + std::to_string(j));
        dense[j * order + i] = v;
        dense[i * order + j] = v;
    }
    return SymmetricMatrix::from_dense(order, std::move(dense));
}

}  // namespace rydspec
