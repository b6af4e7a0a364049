#pragma once

#include "mhs.hpp"
#include "smith.hpp"

#include <map>
#include <string>
#include <vector>

namespace shodge {

struct GysinInput {
    std::vector<std::string> labels; // ambient K^0 basis
    IntMatrix pushforward;           // columns = images of the submanifold's K^0 basis
    std::size_t odd_rank = 0;        // rank of K^1 of the submanifold
    int even_weight = 0;
    int odd_weight = 1;
    bool reduced = false;            // also quotient by the class of the structure sheaf (first label)

    std::size_t rank() const { return pushforward.rows(); }
};

using GradedKResult = std::map<int, FgAbGroup>;

inline GradedKResult gysin_weight_graded(const GysinInput& g)
{
    if (!g.labels.empty() && g.labels.size() != g.rank()) {
        throw domain_error("label count differs from the ambient rank");
    }
    if (g.even_weight == g.odd_weight) {
        throw domain_error("even and odd pieces need distinct weights");
    }
    IntMatrix rel = g.pushforward;
    if (g.reduced) {
        if (g.rank() == 0) {
            throw domain_error("reduced K-theory needs a nonempty ambient basis");
        }
        IntMatrix r(g.rank(), rel.cols() + 1);
        for (std::size_t i = 0; i < g.rank(); ++i) {
            for (std::size_t j = 0; j < rel.cols(); ++j) {
                r(i, j) = rel(i, j);
            }
        }
        r(0, rel.cols()) = 1;
        rel = r;
    }
    GradedKResult out;
    out.emplace(g.even_weight, FgAbGroup(rel));
    out.emplace(g.odd_weight, FgAbGroup::free(g.odd_rank));
    return out;
}

// Column j holds the t-expansion of e_j = (1 - t)^j.
inline IntMatrix pd_basis_change(int d)
{
    if (d < 0) {
        throw domain_error("projective space dimension must be nonnegative");
    }
    std::size_t n = static_cast<std::size_t>(d) + 1;
    IntMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        Integer c = 1;
        for (std::size_t k = 0; k <= j; ++k) {
            m(k, j) = (k % 2 ? -c : c);
            c = c * Integer(j - k) / Integer(k + 1);
        }
    }
    return m;
}

// The inverse: (1 - t)^j with t = 1 - e_1 is its own inverse change of basis.
inline IntMatrix pd_basis_change_inverse(int d) { return pd_basis_change(d); }

inline MixedHodgeStructure zero_structure()
{
    return {FgAbGroup::free(0), Matrix<TauScalar>(0, 0), Filtration(Filtration::Kind::increasing, 0, 0, {}),
            Filtration(Filtration::Kind::decreasing, 0, 0, {})};
}

inline MixedHodgeStructure power_sum(const MixedHodgeStructure& v, int copies)
{
    MixedHodgeStructure out = zero_structure();
    for (int i = 0; i < copies; ++i) {
        out = direct_sum(out, v);
    }
    return out;
}

inline MixedHodgeStructure projective_bundle_sum(const MixedHodgeStructure& base, int r)
{
    if (r < 1) {
        throw domain_error("projective bundle needs rank at least 1");
    }
    return power_sum(base, r);
}

inline MixedHodgeStructure blowup_sum(const MixedHodgeStructure& x, const MixedHodgeStructure& y, int codim)
{
    if (codim < 1) {
        throw domain_error("blowup centre needs codimension at least 1");
    }
    return direct_sum(x, power_sum(y, codim - 1));
}

// K^n of P^d: Z(-j)^{d+1} for n = 2j, zero for odd n.
inline MixedHodgeStructure projective_space_k(int d, int degree)
{
    if (degree % 2 != 0) {
        return zero_structure();
    }
    return projective_bundle_sum(tate_structure(-degree / 2), d + 1);
}

} // namespace shodge
