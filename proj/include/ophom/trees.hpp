#pragma once

#include <string>
#include <vector>

#include "ophom/ger.hpp"
#include "ophom/graded.hpp"
#include "ophom/operad.hpp"

namespace ophom {

// Planar rooted tree with labeled white vertices (label > 0) and unlabeled
// black vertices (label 0).  Stability: every black vertex has at least two
// children.  The planar structure is the child order; the root is the marked
// vertex.  Degree: 2 * (#black) - (#edges).
struct Tree {
    int label = 0;
    std::vector<Tree> children;

    bool is_white() const { return label > 0; }
    int count_black() const;
    int count_edges() const;
    int degree() const { return 2 * count_black() - count_edges(); }
    bool stable() const;

    friend bool operator==(const Tree& a, const Tree& b) = default;
};

std::string tree_key(const Tree& t);       // canonical preorder encoding
Tree parse_tree_key(const std::string& s);

std::string tree_to_json(const Tree& t);
Tree tree_from_json(const std::string& text);

// All stable trees on white labels 1..n (any number of black vertices).
std::vector<Tree> enumerate_m_trees(int n);

// Brace insertion T o_i S: the root of S replaces the white vertex i of T and
// the former children of i distribute over the corners of S preserving the
// planar order.  Signs come from the edge order (edges of T before edges of
// S, then sorted to the preorder of the result).
FormalSum<> m_compose(const Tree& t, size_t i, const Tree& s);

// The minimal-operad differential: a signed sum over single black-vertex
// expansions (splitting a black vertex, splitting off a consecutive block of
// children of a white vertex, and moving a white vertex below a new black).
FormalSum<> m_differential(const Tree& t);

// Root rotation: zero on white-rooted trees; for a black root, the signed sum
// over all placements of the root marker at a white vertex (one term per
// corner of each white vertex), contracting the old root into its new parent.
FormalSum<> rotation_r(const Tree& t);

FormalSum<> m_sym(const std::vector<size_t>& perm, const Tree& t);

// The minimal operad as a dg operad with the rotation as rho.  This is a
// rotational operad, not an operad in mixed complexes: R does not distribute
// over compositions.
class MOperad : public DgOperad {
public:
    using DgOperad::compose;
    using DgOperad::sym;
    using DgOperad::differential;
    using DgOperad::mixed_delta;
    using DgOperad::rho;

    explicit MOperad(size_t max_arity) : max_arity_(max_arity) {}
    std::string name() const override { return "M"; }
    size_t max_arity() const override { return max_arity_; }
    GradedBasis basis(size_t arity) const override;
    int degree(const std::string& key) const override { return parse_tree_key(key).degree(); }
    size_t arity(const std::string& key) const override;
    FormalSum<> compose(const std::string& a, size_t i, const std::string& b) const override;
    FormalSum<> sym(const std::vector<size_t>& perm, const std::string& a) const override;
    FormalSum<> differential(const std::string& a) const override {
        return m_differential(parse_tree_key(a));
    }
    bool has_mixed_delta() const override { return false; }
    bool has_rho() const override { return true; }
    FormalSum<> rho(const std::string& a) const override {
        return rotation_r(parse_tree_key(a));
    }

private:
    size_t max_arity_;
};

// The suboperad of trees without black vertices (zero differential).
class BOperad : public MOperad {
public:
    explicit BOperad(size_t max_arity) : MOperad(max_arity) {}
    std::string name() const override { return "B"; }
    GradedBasis basis(size_t arity) const override;
};

// im(R) inside M(n) as a subcomplex: basis, closure of d, exact homology.
class MCircLevel {
public:
    MCircLevel(const MOperad& m, size_t arity);

    size_t dim() const { return span_.size(); }
    const FormalSum<>& vec(size_t i) const { return span_.vec(i); }

    // d(im R) <= im R is asserted during construction.
    std::map<int, size_t> homology_dims() const;

    // Certifies membership by a preimage under R.
    const FormalSum<>& preimage(size_t i) const { return preimages_[i]; }

private:
    SpanBasis span_;
    std::vector<int> degrees_;
    std::vector<FormalSum<>> preimages_;
    const MOperad& m_;
    size_t arity_;
};

}  // namespace ophom
