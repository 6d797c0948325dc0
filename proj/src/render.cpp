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

#include "upb/render.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace upb {

namespace {

// cell[r][c] holds the text of one grid cell.
using Grid = std::vector<std::vector<std::string>>;

void draw(std::ostringstream &out, const Grid &cells, const std::vector<std::string> &row_labels,
          const std::string &corner, std::size_t cols) {
    std::size_t w = 1;
    for (std::size_t c = 0; c < cols; c++) {
        w = std::max(w, std::to_string(c).size());
    }
    for (const auto &row : cells) {
        for (const auto &x : row) {
            w = std::max(w, x.size());
        }
    }
    std::size_t lw = corner.size();
    for (const auto &l : row_labels) {
        lw = std::max(lw, l.size());
    }
    auto pad = [](const std::string &s, std::size_t n) { return std::string(n - s.size(), ' ') + s; };
    out << pad(corner, lw);
    for (std::size_t c = 0; c < cols; c++) {
        out << ' ' << pad(std::to_string(c), w);
    }
    out << '\n';
    for (std::size_t r = 0; r < cells.size(); r++) {
        out << pad(row_labels[r], lw);
        for (const auto &x : cells[r]) {
            out << ' ' << pad(x, w);
        }
        out << '\n';
    }
}

std::size_t party_dim(const SystemLayout &layout, const std::string &p) {
    return layout.dim_of(layout.labels_of(p));
}

std::string tile_at(const StateSet &s, const std::map<std::string, std::size_t> &cell) {
    std::string found;
    for (const auto &t : s.tiles()) {
        if (t.contains(cell)) {
            if (!found.empty()) {
                return "*";
            }
            found = std::to_string(t.id);
        }
    }
    return found.empty() ? "." : found;
}

}  // namespace

std::string render_state_set(const StateSet &s) {
    const auto &layout = s.layout();
    auto parties = layout.parties();
    if (parties.size() > 4) {
        throw std::invalid_argument("render: more than four parties");
    }
    if (parties.size() < 2) {
        throw std::invalid_argument("render: need at least two parties");
    }
    for (const auto &p : parties) {
        if (layout.labels_of(p).size() != 1) {
            throw std::invalid_argument("render: party " + p + " holds several factors");
        }
    }
    const std::string &A = parties[0], &B = parties[1];
    std::size_t da = party_dim(layout, A), db = party_dim(layout, B);
    std::vector<std::string> rest(parties.begin() + 2, parties.end());
    std::size_t boxes = 1;
    for (const auto &p : rest) {
        boxes *= party_dim(layout, p);
    }
    std::ostringstream out;
    out << s.family().name << " (" << s.size() << " states; rows: " << B << ", columns: " << A << ")\n";
    for (std::size_t box = 0; box < boxes; box++) {
        std::map<std::string, std::size_t> cell;
        std::size_t rem = box;
        std::string title;
        for (std::size_t k = rest.size(); k-- > 0;) {
            std::size_t d = party_dim(layout, rest[k]);
            cell[rest[k]] = rem % d;
            rem /= d;
        }
        for (const auto &p : rest) {
            title += (title.empty() ? "" : ", ") + p + "=" + std::to_string(cell[p]);
        }
        if (!title.empty()) {
            out << '\n' << "[" << title << "]\n";
        }
        Grid g(db, std::vector<std::string>(da));
        std::vector<std::string> labels;
        for (std::size_t r = 0; r < db; r++) {
            labels.push_back(std::to_string(r));
            for (std::size_t c = 0; c < da; c++) {
                cell[A] = c;
                cell[B] = r;
                g[r][c] = tile_at(s, cell);
            }
        }
        draw(out, g, labels, B + "\\" + A, da);
    }
    return out.str();
}

std::string render_images(const StateSet &s, const Protocol &p,
                          const std::vector<std::pair<std::string, std::string>> &path) {
    const auto &principal = s.layout();
    if (!(p.principal == principal) || principal.size() != 2 || p.resource.pairs.empty()) {
        throw std::invalid_argument("render: image view needs a bipartite set and an entangled resource");
    }
    SystemLayout full = attach_resource(principal, p.resource);
    auto anc = p.resource.ancilla_factors();
    const Factor &fa = anc[0], &fb = anc[1];
    const std::string &A = principal.factors()[0].label, &B = principal.factors()[1].label;
    std::size_t da = principal.factors()[0].dim, db = principal.factors()[1].dim;

    // Follow the path through the tree for every member.
    std::vector<std::pair<int, Ket>> states;  // (tile id or -1, state)
    for (std::size_t i = 0; i < s.size(); i++) {
        Ket k = prepare(s.ket(i), p.resource);
        NodePtr node = p.root;
        bool alive = true;
        for (const auto &[party, label] : path) {
            while (const auto *c = std::get_if<Correction>(&node->get())) {
                k = apply(c->unitary.op, k);
                node = c->child;
            }
            const auto *step = std::get_if<Step>(&node->get());
            if (!step || step->measurement.party != party) {
                throw std::invalid_argument("render: path does not match the protocol at " + party + ":" + label);
            }
            const auto &m = step->measurement;
            auto it = std::find(m.labels.begin(), m.labels.end(), label);
            if (it == m.labels.end()) {
                throw std::invalid_argument("render: no outcome '" + label + "'");
            }
            auto idx = static_cast<std::size_t>(it - m.labels.begin());
            k = apply(m.outcomes[idx], k);
            node = step->children[idx];
            if (k.amplitudes().squaredNorm() <= 1e-12) {
                alive = false;
                break;
            }
        }
        if (alive && !(s.stopper() && *s.stopper() == i)) {
            states.emplace_back(s.members()[i].tile.value_or(-1), std::move(k));
        }
    }

    std::ostringstream out;
    out << s.family().name << " after";
    for (const auto &[party, label] : path) {
        out << ' ' << party << ':' << label;
    }
    out << " (rows: " << B << " per image, columns: " << A << ")\n";
    for (std::size_t x = 0; x < fa.dim; x++) {
        for (std::size_t y = 0; y < fb.dim; y++) {
            Grid g;
            std::vector<std::string> labels;
            std::string image = "|" + std::to_string(x) + std::to_string(y) + ">_" + fa.label + fb.label;
            for (std::size_t r = 0; r < db; r++) {
                std::vector<std::string> row(da, ".");
                bool used = false;
                for (std::size_t c = 0; c < da; c++) {
                    std::set<int> ids;
                    for (const auto &[tile, k] : states) {
                        std::vector<std::size_t> v(full.size());
                        v[full.index_of(A)] = c;
                        v[full.index_of(B)] = r;
                        v[full.index_of(fa.label)] = x;
                        v[full.index_of(fb.label)] = y;
                        std::size_t flat = 0;
                        for (std::size_t f = 0; f < full.size(); f++) {
                            flat = flat * full.factors()[f].dim + v[f];
                        }
                        if (std::norm(k.amplitudes()[static_cast<Eigen::Index>(flat)]) > 1e-12) {
                            ids.insert(tile);
                        }
                    }
                    if (!ids.empty()) {
                        used = true;
                        row[c] = ids.size() > 1 ? "*" : (*ids.begin() < 0 ? "?" : std::to_string(*ids.begin()));
                    }
                }
                if (used) {
                    g.push_back(std::move(row));
                    labels.push_back(image + " " + std::to_string(r));
                }
            }
            if (!g.empty()) {
                draw(out, g, labels, B + "\\" + A, da);
            }
        }
    }
    return out.str();
}

}  // namespace upb
