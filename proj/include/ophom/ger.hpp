#pragma once

#include <optional>
#include <vector>

#include "ophom/graphs.hpp"
#include "ophom/operad.hpp"
#include "ophom/sparse.hpp"

namespace ophom {

// Deterministic incremental span of formal sums with coordinate solving.
// Vectors adopted into the basis are kept verbatim; a reduced echelon shadow
// (pivoted on the lexicographically smallest key) answers membership and
// coordinate queries.
class SpanBasis {
public:
    // Adopts v if independent of the current span; returns true when adopted.
    bool add(const FormalSum<>& v);
    size_t size() const { return adopted_.size(); }
    const FormalSum<>& vec(size_t i) const { return adopted_[i]; }

    // Coordinates in terms of the adopted vectors, or nullopt if outside.
    std::optional<std::vector<Rational>> coords(const FormalSum<>& v) const;
    bool contains(const FormalSum<>& v) const { return coords(v).has_value(); }

private:
    std::vector<FormalSum<>> adopted_;
    std::vector<FormalSum<>> echelon_;               // pivot coefficient 1
    std::vector<std::string> pivot_;                 // pivot key per echelon row
    std::vector<std::vector<Rational>> combo_;       // echelon row in adopted coords
};

// The Gerstenhaber operad realized as the suboperad of Gra generated by the
// edgeless two-vertex graph (the product) and the symmetric one-edge sum
// (the bracket).  Basis elements are compositions of the generators, adopted
// greedily in a deterministic order; dim Ger(n) = n! over all degrees.
//
// Keys: "g<arity>:<index>".  The zero differential and Delta = R (the tadpole
// bracket of Gra, which preserves the subspace) make this the mixed-complex
// operad (Ger, 0, R).
class GerOperad : public DgOperad {
public:
    using DgOperad::compose;
    using DgOperad::sym;
    using DgOperad::differential;
    using DgOperad::mixed_delta;
    using DgOperad::rho;

    explicit GerOperad(size_t max_arity);

    std::string name() const override { return "Ger"; }
    size_t max_arity() const override { return max_arity_; }
    GradedBasis basis(size_t arity) const override;
    int degree(const std::string& key) const override;
    size_t arity(const std::string& key) const override;
    FormalSum<> compose(const std::string& a, size_t i, const std::string& b) const override;
    FormalSum<> sym(const std::vector<size_t>& perm, const std::string& a) const override;
    bool has_mixed_delta() const override { return true; }
    FormalSum<> mixed_delta(const std::string& a) const override;

    // Realization in Gra coordinates.
    const FormalSum<>& realize(const std::string& key) const;
    FormalSum<> realize(const FormalSum<>& x) const;
    // Inverse: expresses a Gra element lying in the subspace; throws if outside.
    FormalSum<> from_gra(const FormalSum<>& v, size_t arity) const;

    size_t dim(size_t arity) const { return levels_.at(arity).span.size(); }

    // Matrix of R on the arity-n basis.
    SparseMatrix r_matrix(size_t arity) const;

    std::string key_of(size_t arity, size_t index) const;

private:
    struct Level {
        SpanBasis span;
        std::vector<int> degrees;
    };
    size_t max_arity_;
    std::map<size_t, Level> levels_;
};

}  // namespace ophom
