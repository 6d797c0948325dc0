// Copyright 2026 The upb-locc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UPB_TENSOR_HPP
#define UPB_TENSOR_HPP

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace upb {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Numerical thresholds shared by the engine and the checkers.
struct Tolerance {
    double compare = 1e-9;  ///< orthogonality / equality comparisons
    double prune = 1e-12;   ///< branch probabilities at or below this are dropped
    double rank = 1e-9;     ///< singular values at or below this are zero
};

/// One tensor factor of a composite Hilbert space.
struct Factor {
    std::string label;
    std::size_t dim = 1;
    std::string owner;

    bool operator==(const Factor &) const = default;
};

/// Ordered list of tensor factors. Amplitudes are indexed row-major over the
/// factors in this order (the last factor varies fastest).
class SystemLayout {
   public:
    SystemLayout() = default;
    explicit SystemLayout(std::vector<Factor> factors);

    const std::vector<Factor> &factors() const { return factors_; }
    std::size_t size() const { return factors_.size(); }
    std::size_t total_dim() const { return total_dim_; }

    std::optional<std::size_t> find(std::string_view label) const;
    /// Position of `label`; throws std::invalid_argument("unknown label ...").
    std::size_t index_of(std::string_view label) const;
    const Factor &factor(std::string_view label) const;
    std::vector<Factor> select(std::span<const std::string> labels) const;

    /// Parties in order of first appearance.
    std::vector<std::string> parties() const;
    std::vector<std::string> labels_of(std::string_view party) const;
    std::size_t dim_of(std::span<const std::string> labels) const;

    /// Concatenation; throws on a duplicated label ("label collision").
    SystemLayout concat(const SystemLayout &other) const;

    bool operator==(const SystemLayout &other) const { return factors_ == other.factors_; }

   private:
    std::vector<Factor> factors_;
    std::size_t total_dim_ = 1;
};

/// Dense pure state over a layout.
class Ket {
   public:
    Ket() = default;
    Ket(SystemLayout layout, Vector amplitudes);

    static Ket basis(const SystemLayout &layout, std::size_t index);

    const SystemLayout &layout() const { return layout_; }
    const Vector &amplitudes() const { return amplitudes_; }
    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }

    double norm() const { return amplitudes_.norm(); }
    bool is_normalized(double tol = 1e-10) const;
    /// Unit-norm copy; throws on a zero vector.
    Ket normalized() const;

   private:
    SystemLayout layout_;
    Vector amplitudes_;
};

/// Kronecker product in the given order. Throws "label collision".
Ket tensor_product(std::span<const Ket> parts);
Ket tensor_product(const Ket &x, const Ket &y);

/// <x|y>, conjugate-linear in x. Throws on layout mismatch.
Complex inner_product(const Ket &x, const Ket &y);

/// Builds a product ket from one local vector per party. Each party's vector
/// covers all of that party's factors in layout order.
Ket product_ket(const SystemLayout &layout, const std::map<std::string, Vector> &parts);

/// Local operator: a matrix on `support` (row-major over the support factors
/// in the listed order), identity elsewhere.
class Operator {
   public:
    Operator() = default;
    Operator(std::vector<Factor> support, Matrix local);

    const std::vector<Factor> &support() const { return support_; }
    std::vector<std::string> support_labels() const;
    const Matrix &local() const { return local_; }
    std::size_t local_dim() const { return static_cast<std::size_t>(local_.rows()); }

    /// Full matrix on `layout` (for tests and small systems).
    Matrix dense(const SystemLayout &layout) const;
    Operator renamed(const std::map<std::string, std::string> &labels) const;

   private:
    std::vector<Factor> support_;
    Matrix local_;
};

/// Embeds `op` acting on `target` (in the listed order) into `layout`.
/// Throws on unknown labels or a dimension mismatch.
Operator embed_local_operator(const Matrix &op, std::span<const std::string> target,
                              const SystemLayout &layout);
Operator embed_local_operator(const Matrix &op, std::initializer_list<std::string> target,
                              const SystemLayout &layout);

/// Index bookkeeping for acting on a subset of factors. For every assignment
/// of the non-support factors, `bases` holds the global index with all support
/// digits zero; `offsets[i]` is the global shift of support-local index i.
struct SupportIndexMap {
    std::vector<std::size_t> bases;
    std::vector<std::size_t> offsets;
};
SupportIndexMap support_index_map(const SystemLayout &layout, std::span<const Factor> support);

Ket apply(const Operator &op, const Ket &ket);

struct SchmidtDecomposition {
    std::vector<double> coefficients;  ///< descending, strictly positive
    Matrix left;                       ///< columns: left Schmidt vectors
    Matrix right;                      ///< columns: right Schmidt vectors
    std::vector<std::string> left_labels;
    std::vector<std::string> right_labels;

    std::size_t rank() const { return coefficients.size(); }
    /// Rebuilds the state on the original layout.
    Ket reconstruct(const SystemLayout &layout) const;
};

/// Schmidt decomposition across `left` | rest. Both sides are ordered as in
/// the layout. Throws if either side is empty.
SchmidtDecomposition schmidt_decomposition(const Ket &psi, std::span<const std::string> left,
                                           double rank_tol = 1e-9);

/// Reshapes `psi` into a matrix M(left_index, rest_index).
Matrix bipartite_matrix(const Ket &psi, std::span<const std::string> left);

/// Orthonormal basis of the orthogonal complement of span(vectors) in C^dim.
std::vector<Vector> orthocomplement_basis(std::span<const Vector> vectors, std::size_t dim,
                                          double rank_tol = 1e-9);
/// Orthonormal basis of span(vectors).
Matrix span_basis(std::span<const Vector> vectors, std::size_t dim, double rank_tol = 1e-9);
Matrix span_basis(const Matrix &columns, double rank_tol = 1e-9);

/// H_d[j,k] = w^{jk}/sqrt(d), w = exp(2 pi i/d).
Matrix dft_matrix(std::size_t d);

Vector basis_vector(std::size_t dim, std::size_t index);
Matrix projector(const Vector &v);

}  // namespace upb

#endif  // UPB_TENSOR_HPP
