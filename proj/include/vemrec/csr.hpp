/// \file csr.hpp
/// \brief Compressed-row sparse matrix with triplet assembly and matrix-market export.
#ifndef VEMREC_CSR_HPP
#define VEMREC_CSR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <tuple>
#include <vector>

#include "vemrec/common.hpp"

namespace vemrec {

struct CsrMatrix {
    int n = 0;
    std::vector<int> row_ptr; // n+1
    std::vector<int> col;
    std::vector<double> val;

    static CsrMatrix from_triplets(int n, std::vector<std::tuple<int, int, double>> trip) {
        std::sort(trip.begin(), trip.end(), [](const auto& a, const auto& b) {
            return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
        });
        CsrMatrix m;
        m.n = n;
        m.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
        for (std::size_t k = 0; k < trip.size();) {
            const int i = std::get<0>(trip[k]);
            const int j = std::get<1>(trip[k]);
            double s = 0.0;
            while (k < trip.size() && std::get<0>(trip[k]) == i && std::get<1>(trip[k]) == j) {
                s += std::get<2>(trip[k]);
                ++k;
            }
            m.col.push_back(j);
            m.val.push_back(s);
            ++m.row_ptr[static_cast<std::size_t>(i) + 1];
        }
        for (int i = 0; i < n; ++i) m.row_ptr[static_cast<std::size_t>(i) + 1] += m.row_ptr[static_cast<std::size_t>(i)];
        return m;
    }

    void matvec(std::span<const double> x, std::span<double> y) const {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int k = row_ptr[static_cast<std::size_t>(i)]; k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
                s += val[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(col[static_cast<std::size_t>(k)])];
            y[static_cast<std::size_t>(i)] = s;
        }
    }

    std::vector<double> matvec(std::span<const double> x) const {
        std::vector<double> y(static_cast<std::size_t>(n), 0.0);
        matvec(x, y);
        return y;
    }

    std::vector<double> diagonal() const {
        std::vector<double> d(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i)
            for (int k = row_ptr[static_cast<std::size_t>(i)]; k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
                if (col[static_cast<std::size_t>(k)] == i) d[static_cast<std::size_t>(i)] = val[static_cast<std::size_t>(k)];
        return d;
    }

    double entry(int i, int j) const {
        for (int k = row_ptr[static_cast<std::size_t>(i)]; k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
            if (col[static_cast<std::size_t>(k)] == j) return val[static_cast<std::size_t>(k)];
        return 0.0;
    }

    // x^T A y for vectors on all dofs (supercloseness norm uses this).
    double quadratic_form(std::span<const double> x, std::span<const double> y) const {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int k = row_ptr[static_cast<std::size_t>(i)]; k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
                s += x[static_cast<std::size_t>(i)] * val[static_cast<std::size_t>(k)] *
                     y[static_cast<std::size_t>(col[static_cast<std::size_t>(k)])];
        return s;
    }

    double max_asymmetry() const {
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int k = row_ptr[static_cast<std::size_t>(i)]; k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
                const int j = col[static_cast<std::size_t>(k)];
                worst = std::max(worst, std::abs(val[static_cast<std::size_t>(k)] - entry(j, i)));
            }
        return worst;
    }
};

// Matrix-market coordinate format (general, 1-based), for debugging dumps.
inline void write_matrix_market(const CsrMatrix& m, std::ostream& os) {
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << m.n << " " << m.n << " " << m.val.size() << "\n";
    os.precision(17);
    for (int i = 0; i < m.n; ++i)
        for (int k = m.row_ptr[static_cast<std::size_t>(i)]; k < m.row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
            os << i + 1 << " " << m.col[static_cast<std::size_t>(k)] + 1 << " "
               << m.val[static_cast<std::size_t>(k)] << "\n";
}

} // namespace vemrec

#endif
