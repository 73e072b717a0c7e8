#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ophom/formal_sum.hpp"
#include "ophom/sparse.hpp"

namespace ophom {

// Enumerated graded basis: dense indices 0..N-1, each index carrying an
// integer degree and a canonical label.  Indices are assigned in label order
// so that tables are reproducible run to run.
class GradedBasis {
public:
    GradedBasis() = default;
    explicit GradedBasis(std::vector<std::pair<std::string, int>> labeled_degrees);

    size_t size() const { return labels_.size(); }
    int degree(size_t i) const { return degrees_[i]; }
    const std::string& label(size_t i) const { return labels_[i]; }
    bool contains(const std::string& l) const { return index_.count(l) != 0; }
    size_t index(const std::string& l) const;

    const std::vector<size_t>& block(int degree) const;  // indices of one degree
    std::vector<int> degrees_present() const;
    std::map<int, size_t> dims_by_degree() const;

    // Coordinates of a formal sum inside one degree block.
    std::vector<std::pair<size_t, Rational>> block_coords(int degree, const FormalSum<>& v) const;

private:
    std::vector<std::string> labels_;
    std::vector<int> degrees_;
    std::map<std::string, size_t> index_;
    std::map<int, std::vector<size_t>> blocks_;
    std::map<int, std::map<std::string, size_t>> block_pos_;  // label -> position in its block
};

// A finite cochain complex presented by a graded basis and a degree +1
// differential given term-wise on labels.
class GradedComplex {
public:
    GradedComplex(GradedBasis basis, std::function<FormalSum<>(const std::string&)> d)
        : basis_(std::move(basis)), d_(std::move(d)) {}

    const GradedBasis& basis() const { return basis_; }

    // Matrix of d from the block in `degree` to the block in `degree + 1`.
    SparseMatrix differential_matrix(int degree) const;

    // Throws CompositionNotZero if d^2 != 0 anywhere on the basis.
    void check_d_squared() const;

    std::map<int, size_t> homology_dims() const;  // degree -> dim, zeros omitted
    size_t total_homology_dim() const;

private:
    GradedBasis basis_;
    std::function<FormalSum<>(const std::string&)> d_;
};

// Degrees on which two dimension tables agree; used to read off homology of a
// truncated complex on its truncation-independent window.
std::map<int, size_t> stable_dims(const std::map<int, size_t>& a, const std::map<int, size_t>& b);

size_t total_dim(const std::map<int, size_t>& dims);

}  // namespace ophom
