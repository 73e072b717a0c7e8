#pragma once

#include <functional>
#include <map>
#include <string>

#include "ophom/graded.hpp"

namespace ophom {

// A mixed complex (V, d, Delta): d of degree +1, Delta of degree -1,
// d^2 = Delta^2 = d Delta + Delta d = 0.  The defining triple is verified at
// construction.  d and Delta are stored term-wise on the basis.
class MixedComplex {
public:
    MixedComplex(GradedBasis basis, std::map<std::string, FormalSum<>> d,
                 std::map<std::string, FormalSum<>> delta);

    static MixedComplex from_functions(GradedBasis basis,
                                       const std::function<FormalSum<>(const std::string&)>& d,
                                       const std::function<FormalSum<>(const std::string&)>& delta);

    const GradedBasis& basis() const { return basis_; }
    FormalSum<> d(const std::string& key) const;
    FormalSum<> d(const FormalSum<>& v) const;
    FormalSum<> delta(const std::string& key) const;
    FormalSum<> delta(const FormalSum<>& v) const;

    std::map<int, size_t> homology_dims() const;  // of (V, d)

    // Monoidal product with the Koszul rule.  Labels are joined with a tab,
    // flattened, so the product is strictly associative on labels.
    static MixedComplex tensor(const MixedComplex& a, const MixedComplex& b);

    static MixedComplex unit();  // (k, 0, 0)

    // Cyclic chain complexes, truncated at the given maximal power:
    //   cc_minus: V (x) k[u], d + u Delta, |u| = 2
    //   cc_plain: V (x) k[v], d + u Delta (u lowers the v power, kills v^0)
    //   cc_per:   V (x) k[u,v], powers -trunc..trunc
    GradedComplex cc_minus(unsigned trunc) const;
    GradedComplex cc_plain(unsigned trunc) const;
    GradedComplex cc_per(unsigned trunc) const;

    // Homology of cc_minus on the truncation-stable window: dims computed at
    // trunc and trunc+1, degrees that disagree (truncation artifacts) dropped.
    std::map<int, size_t> cc_minus_stable_homology(unsigned trunc) const;

    std::string to_json() const;
    static MixedComplex from_json(const std::string& text);

private:
    GradedBasis basis_;
    std::map<std::string, FormalSum<>> d_, delta_;

    void verify() const;
};

}  // namespace ophom
