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

#ifndef UPB_CATALOG_HPP
#define UPB_CATALOG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "upb/tensor.hpp"

namespace upb {

/// Product of local index sets, one per party, plus the party that resolves
/// the states inside it.
struct Tile {
    int id = 0;
    std::string owner;
    std::map<std::string, std::vector<std::size_t>> rect;

    bool contains(const std::map<std::string, std::size_t> &cell) const;
};

struct ProductState {
    std::string label;
    std::optional<int> tile;  ///< nullopt for the stopper and untiled members
    std::map<std::string, Vector> parts;

    Ket ket(const SystemLayout &layout) const { return product_ket(layout, parts); }
};

struct FamilyInfo {
    std::string name;
    std::map<std::string, std::vector<std::int64_t>> params;
    std::vector<std::string> tags;

    bool has_tag(const std::string &tag) const;
};

class StateSet {
   public:
    StateSet() = default;
    /// Validates normalization, mutual orthogonality and tile containment.
    StateSet(SystemLayout layout, std::vector<ProductState> members, std::vector<Tile> tiles,
             FamilyInfo family, std::optional<std::size_t> stopper = std::nullopt,
             double tol = 1e-9);
    /// Skips validation; for deliberately corrupted sets in tests and I/O.
    static StateSet unchecked(SystemLayout layout, std::vector<ProductState> members,
                              std::vector<Tile> tiles, FamilyInfo family,
                              std::optional<std::size_t> stopper = std::nullopt);

    const SystemLayout &layout() const { return layout_; }
    const std::vector<ProductState> &members() const { return members_; }
    const std::vector<Tile> &tiles() const { return tiles_; }
    const FamilyInfo &family() const { return family_; }
    std::optional<std::size_t> stopper() const { return stopper_; }

    std::size_t size() const { return members_.size(); }
    Ket ket(std::size_t i) const { return members_.at(i).ket(layout_); }
    std::vector<Ket> kets() const;
    std::size_t index_of(const std::string &label) const;
    const Tile *find_tile(int id) const;
    std::vector<std::size_t> members_of_tile(int id) const;

    /// Copy without member i.
    StateSet without(std::size_t i) const;
    /// Copy with members reordered: new member j = old member perm[j].
    StateSet permuted(const std::vector<std::size_t> &perm) const;

   private:
    SystemLayout layout_;
    std::vector<ProductState> members_;
    std::vector<Tile> tiles_;
    FamilyInfo family_;
    std::optional<std::size_t> stopper_;
};

/// Principal layout with one factor per party, labelled by the party id.
SystemLayout principal_layout(const std::vector<std::size_t> &dims);
std::string party_name(std::size_t n);

StateSet tiles();
StateSet gentiles1(int m);
StateSet gentiles2(int m, int n);

/// tile_table[n][p] = standard-basis value held by party p inside tile n
/// (the diagonal entry is ignored).
using TileTable = std::vector<std::vector<std::size_t>>;
TileTable niset_cerf_default_table(const std::vector<std::size_t> &dims);
/// First cyclic-shift table t[n][(n+s) mod N] = f(s) that validates.
TileTable find_niset_cerf_table(const std::vector<std::size_t> &dims);
StateSet niset_cerf(const std::vector<std::size_t> &dims);
StateSet niset_cerf(const std::vector<std::size_t> &dims, const TileTable &table);

struct Random3x3Options {
    bool complex_entries = false;
    int max_attempts = 1000;
};
StateSet random_3x3_upb(std::uint64_t seed, Random3x3Options options = {});

StateSet nlwe_of(const StateSet &family);

/// coefficients[t] holds four length-4 coefficient vectors for long tile t
/// (0-based, eight tiles). Defaults to the columns of H_4.
StateSet tiles_squared(const std::optional<std::vector<std::vector<Vector>>> &coefficients =
                           std::nullopt);

StateSet tensor_power(const StateSet &s1, const StateSet &s2);

/// Product states that fill every line-shaped tile to a full basis of its
/// cells (the stopper projection first) and every uncovered cell with a
/// standard-basis state. Members equal to `removed` are ignored.
struct TileCompletion {
    std::vector<ProductState> added;
    std::vector<Tile> extra_tiles;  ///< 1x1 tiles for the standard-basis fills
};
TileCompletion tile_completion(const StateSet &family, std::optional<std::size_t> removed);

/// Builds a family by name. Recognized: tiles, gentiles1 (m), gentiles2 (m, n),
/// niset_cerf (dims), random3x3 (seed), tiles_squared, plus the prefixes
/// "nlwe:<name>" and "tensor:<name>" (the set tensored with itself).
StateSet build_family(const std::string &name, const std::map<std::string, std::vector<std::int64_t>> &params);

}  // namespace upb

#endif  // UPB_CATALOG_HPP
