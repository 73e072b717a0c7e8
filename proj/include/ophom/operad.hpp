#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ophom/formal_sum.hpp"
#include "ophom/graded.hpp"
#include "ophom/rng.hpp"

namespace ophom {

// A dg operad presented by canonical basis keys.  Keys are strings that each
// concrete operad interprets; all structure maps are given term-wise and
// extended linearly by the helpers below.
//
// Unary structure is optional and layered:
//   - differential(): internal degree +1 differential d, d^2 = 0.
//   - mixed_delta():  the Delta of an operad in mixed complexes (degree -1,
//                     anti-commutes with d, derivation over compositions).
//   - rho():          rotational operator (degree -1, square zero,
//                     rho(a o_i rho b) = rho(a) o_i rho(b)).  Every operad in
//                     mixed complexes is rotational via rho = Delta.
//   - delta_element(): the arity-1 degree -1 element of an S^1-operad.
class DgOperad {
public:
    virtual ~DgOperad() = default;

    virtual std::string name() const = 0;
    virtual size_t max_arity() const = 0;

    virtual GradedBasis basis(size_t arity) const = 0;
    virtual int degree(const std::string& key) const = 0;
    virtual size_t arity(const std::string& key) const = 0;

    // a o_i b for basis keys; 1 <= i <= arity(a).
    virtual FormalSum<> compose(const std::string& a, size_t i, const std::string& b) const = 0;

    // Relabeling action: input slot j of `a` becomes slot perm[j-1] of the result.
    virtual FormalSum<> sym(const std::vector<size_t>& perm, const std::string& a) const = 0;

    virtual FormalSum<> differential(const std::string& a) const { return {}; }

    virtual bool has_mixed_delta() const { return false; }
    virtual FormalSum<> mixed_delta(const std::string& a) const;

    virtual bool has_rho() const { return has_mixed_delta(); }
    virtual FormalSum<> rho(const std::string& a) const { return mixed_delta(a); }

    virtual bool has_delta_element() const { return false; }
    virtual FormalSum<> delta_element() const;

    // ---- linear extensions ----
    FormalSum<> compose(const FormalSum<>& a, size_t i, const FormalSum<>& b) const;
    FormalSum<> sym(const std::vector<size_t>& perm, const FormalSum<>& a) const;
    FormalSum<> differential(const FormalSum<>& a) const;
    FormalSum<> mixed_delta(const FormalSum<>& a) const;
    FormalSum<> rho(const FormalSum<>& a) const;

    int degree_of(const FormalSum<>& a) const;   // asserts homogeneity
    size_t arity_of(const FormalSum<>& a) const; // asserts uniformity
};

// Delta(a) := delta o_1 a - (-1)^{|a|} sum_i a o_i delta, computed with the
// operad's own arity-1 element delta.  Throws MissingDelta.
FormalSum<> external_delta(const DgOperad& op, const FormalSum<>& a);

// ---- generic constructions ----

// theta: rotational operads -> operads in mixed complexes.
// Underlying spaces Sigma^{-1} O(n); compositions a ~o_i b = a o_i rho(b);
// the suspension negates the differential; Delta = rho.
// Keys are shared with the base operad.
class ThetaOperad : public DgOperad {
public:
    using DgOperad::compose;
    using DgOperad::sym;
    using DgOperad::differential;
    using DgOperad::mixed_delta;
    using DgOperad::rho;

    explicit ThetaOperad(const DgOperad& base);
    std::string name() const override { return "theta(" + base_.name() + ")"; }
    size_t max_arity() const override { return base_.max_arity(); }
    GradedBasis basis(size_t arity) const override;
    int degree(const std::string& key) const override { return base_.degree(key) - 1; }
    size_t arity(const std::string& key) const override { return base_.arity(key); }
    FormalSum<> compose(const std::string& a, size_t i, const std::string& b) const override;
    FormalSum<> sym(const std::vector<size_t>& perm, const std::string& a) const override {
        return base_.sym(perm, a);
    }
    FormalSum<> differential(const std::string& a) const override { return -base_.differential(a); }
    bool has_mixed_delta() const override { return true; }
    FormalSum<> mixed_delta(const std::string& a) const override { return base_.rho(a); }

    // theta^{-1}: morphism of rotational operads theta(O) -> O, a |-> rho(a).
    FormalSum<> theta_inverse(const FormalSum<>& a) const { return base_.rho(a); }

private:
    const DgOperad& base_;
};

// Level-wise cyclic chain operads, truncated at a maximal u/v power.
// Keys are "<base key>~u<r>" (CC^-) or "<base key>~v<r>" (CC, CC^theta).
enum class CcKind { Minus, Plain, Theta };

class CcOperad : public DgOperad {
public:
    using DgOperad::compose;
    using DgOperad::sym;
    using DgOperad::differential;
    using DgOperad::mixed_delta;
    using DgOperad::rho;

    CcOperad(const DgOperad& base, CcKind kind, unsigned trunc);
    std::string name() const override;
    size_t max_arity() const override { return base_.max_arity(); }
    GradedBasis basis(size_t arity) const override;
    int degree(const std::string& key) const override;
    size_t arity(const std::string& key) const override;
    FormalSum<> compose(const std::string& a, size_t i, const std::string& b) const override;
    FormalSum<> sym(const std::vector<size_t>& perm, const std::string& a) const override;
    FormalSum<> differential(const std::string& a) const override;  // d + u*Delta
    bool has_mixed_delta() const override { return true; }
    FormalSum<> mixed_delta(const std::string& a) const override;

    unsigned trunc() const { return trunc_; }
    CcKind kind() const { return kind_; }

    std::pair<std::string, unsigned> split_key(const std::string& key) const;
    std::string make_key(const std::string& base_key, unsigned power) const;

    // Kills terms above the power truncation (compositions add powers).
    FormalSum<> inject(const FormalSum<>& base_elem, unsigned power) const;

    // Corollary maps.  For Theta: c |-> Delta(c_0) lands in ker(Delta) of the
    // base; for Minus: the inclusion of ker(Delta) at u^0.
    FormalSum<> to_ker_delta(const FormalSum<>& a) const;  // Theta only
    FormalSum<> from_ker_delta(const FormalSum<>& x) const;  // Minus only

    // Per-arity homology of the truncated complex (d + u Delta).
    std::map<int, size_t> homology_dims(size_t arity) const;

private:
    const DgOperad& base_;
    CcKind kind_;
    unsigned trunc_;
};

// ---- verification ----

struct CheckReport {
    std::string name;
    bool pass = true;
    size_t checks = 0;
    std::vector<std::string> failures;  // human-readable witnesses

    void note(bool ok, const std::string& witness) {
        ++checks;
        if (!ok) {
            pass = false;
            if (failures.size() < 16) failures.push_back(witness);
        }
    }
    std::string to_json() const;
};

// Both operadic associativity shapes and the equivariance axiom, exhaustively
// on small bases and sampled (>= `samples` triples) when bases are large.
CheckReport check_operad_axioms(const DgOperad& op, size_t max_arity, size_t samples, uint64_t seed);

// rho^2 = 0, d rho + rho d = 0, and the rotational law on pairs.
CheckReport check_rotational(const DgOperad& op, size_t max_arity, size_t samples, uint64_t seed);

// d^2 = 0, degree +1, derivation rule for d; for operads in mixed complexes
// additionally Delta^2 = 0, d Delta + Delta d = 0 and the derivation rule for
// Delta.
CheckReport check_dg_structure(const DgOperad& op, size_t max_arity, size_t samples, uint64_t seed);

// Verifies that a linear map phi (given term-wise on basis keys) is a map of
// operads in mixed complexes onto an S^1-operad target: phi respects d, the
// compositions, and phi(Delta a) = {delta_target, phi(a)}.
CheckReport w_identities_check(const DgOperad& source, const DgOperad& target,
                               const std::function<FormalSum<>(const std::string&)>& phi,
                               size_t max_arity, size_t samples, uint64_t seed);

// Blow up a permutation sigma in S_p at slot i with a block of size q: the
// permutation of p+q-1 letters governing equivariance of o_i.
std::vector<size_t> blowup_perm(const std::vector<size_t>& sigma, size_t i, size_t q);

std::vector<size_t> identity_perm(size_t n);

}  // namespace ophom
