#pragma once

// Independent cross-checks used only by the test suite.  These deliberately
// avoid the library's production code paths: the resultant oracle builds the
// literal Sylvester matrix and eliminates it fraction-free, so a PRS bug
// cannot cancel itself out.

#include <vector>

#include "sncres/poly.hpp"

namespace oracles {

using sncres::QPoly;

// Determinant by Bareiss fraction-free elimination with row pivoting.
inline QPoly bareiss_det(std::vector<std::vector<QPoly>> m) {
    const std::size_t n = m.size();
    if (n == 0) return QPoly(1);
    int sign = 1;
    QPoly prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t swap_row = k;
            for (std::size_t i = k + 1; i < n; ++i)
                if (!m[i][k].is_zero()) {
                    swap_row = i;
                    break;
                }
            if (swap_row == k) return QPoly();  // zero column: singular
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = sncres::divide_exact(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
        prev = m[k][k];
    }
    QPoly det = m[n - 1][n - 1];
    return sign == 1 ? det : -det;
}

// Literal Sylvester matrix resultant in var; rows of f first, then rows of g.
inline QPoly sylvester_resultant(const QPoly& f, const QPoly& g, const std::string& var) {
    auto fc = f.as_univariate(var);
    auto gc = g.as_univariate(var);
    int df = static_cast<int>(fc.size()) - 1;
    int dg = static_cast<int>(gc.size()) - 1;
    if (df < 0 || dg < 0) return QPoly();
    std::size_t n = static_cast<std::size_t>(df + dg);
    std::vector<std::vector<QPoly>> m(n, std::vector<QPoly>(n, QPoly()));
    for (int row = 0; row < dg; ++row)
        for (int j = 0; j <= df; ++j)
            m[static_cast<std::size_t>(row)][static_cast<std::size_t>(row + j)] =
                fc[static_cast<std::size_t>(df - j)];
    for (int row = 0; row < df; ++row)
        for (int j = 0; j <= dg; ++j)
            m[static_cast<std::size_t>(dg + row)][static_cast<std::size_t>(row + j)] =
                gc[static_cast<std::size_t>(dg - j)];
    return bareiss_det(std::move(m));
}

}  // namespace oracles
