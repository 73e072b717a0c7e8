#include "ophom/graded.hpp"

#include <algorithm>

#include "ophom/errors.hpp"

namespace ophom {

GradedBasis::GradedBasis(std::vector<std::pair<std::string, int>> labeled_degrees) {
    std::sort(labeled_degrees.begin(), labeled_degrees.end());
    labels_.reserve(labeled_degrees.size());
    degrees_.reserve(labeled_degrees.size());
    for (auto& [label, deg] : labeled_degrees) {
        if (index_.count(label))
            throw Error(ErrorCode::Usage, "GradedBasis: duplicate label " + label);
        size_t idx = labels_.size();
        index_[label] = idx;
        block_pos_[deg][label] = blocks_[deg].size();
        blocks_[deg].push_back(idx);
        labels_.push_back(std::move(label));
        degrees_.push_back(deg);
    }
}

size_t GradedBasis::index(const std::string& l) const {
    auto it = index_.find(l);
    if (it == index_.end()) throw Error(ErrorCode::Usage, "GradedBasis: unknown label " + l);
    return it->second;
}

const std::vector<size_t>& GradedBasis::block(int degree) const {
    static const std::vector<size_t> empty;
    auto it = blocks_.find(degree);
    return it == blocks_.end() ? empty : it->second;
}

std::vector<int> GradedBasis::degrees_present() const {
    std::vector<int> out;
    out.reserve(blocks_.size());
    for (const auto& [d, b] : blocks_) out.push_back(d);
    return out;
}

std::map<int, size_t> GradedBasis::dims_by_degree() const {
    std::map<int, size_t> out;
    for (const auto& [d, b] : blocks_) out[d] = b.size();
    return out;
}

std::vector<std::pair<size_t, Rational>> GradedBasis::block_coords(int degree,
                                                                   const FormalSum<>& v) const {
    std::vector<std::pair<size_t, Rational>> out;
    auto bit = block_pos_.find(degree);
    for (const auto& [label, coeff] : v.terms()) {
        if (bit == block_pos_.end())
            throw Error(ErrorCode::Usage, "block_coords: term of unexpected degree: " + label);
        auto it = bit->second.find(label);
        if (it == bit->second.end())
            throw Error(ErrorCode::Usage, "block_coords: label not in block: " + label);
        out.emplace_back(it->second, coeff);
    }
    return out;
}

SparseMatrix GradedComplex::differential_matrix(int degree) const {
    const auto& src = basis_.block(degree);
    const auto& dst = basis_.block(degree + 1);
    return SparseMatrix::from_columns(dst.size(), src.size(), [&](size_t j) {
        FormalSum<> img = d_(basis_.label(src[j]));
        return basis_.block_coords(degree + 1, img);
    });
}

void GradedComplex::check_d_squared() const {
    for (size_t i = 0; i < basis_.size(); ++i) {
        FormalSum<> dd = d_(basis_.label(i)).apply([&](const std::string& k) { return d_(k); });
        if (!dd.is_zero())
            throw Error(ErrorCode::CompositionNotZero,
                        "d^2 != 0 on " + basis_.label(i) + ": " + dd.str());
    }
}

std::map<int, size_t> GradedComplex::homology_dims() const {
    std::map<int, size_t> out;
    for (int deg : basis_.degrees_present()) {
        SparseMatrix d_out = differential_matrix(deg);
        SparseMatrix d_in = differential_matrix(deg - 1);
        size_t h = homology_dim(d_in, d_out);
        if (h) out[deg] = h;
    }
    return out;
}

size_t GradedComplex::total_homology_dim() const { return total_dim(homology_dims()); }

std::map<int, size_t> stable_dims(const std::map<int, size_t>& a, const std::map<int, size_t>& b) {
    std::map<int, size_t> out;
    for (const auto& [deg, dim] : a) {
        auto it = b.find(deg);
        if (it != b.end() && it->second == dim && dim) out[deg] = dim;
    }
    return out;
}

size_t total_dim(const std::map<int, size_t>& dims) {
    size_t t = 0;
    for (const auto& [d, n] : dims) t += n;
    return t;
}

}  // namespace ophom
