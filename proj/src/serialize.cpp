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

#include "upb/serialize.hpp"

#include <stdexcept>

namespace upb {

namespace {

void expect_schema(const Json &j, const std::string &schema) {
    if (!j.is_object() || j.value("schema", std::string()) != schema) {
        throw std::invalid_argument("expected a document with schema " + schema);
    }
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json &j) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (!j.is_array() || j.size() != 2) {
        throw std::invalid_argument("complex number must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Json operator_to_json(const Operator &op) {
    Json support = Json::array();
    for (const auto &f : op.support()) {
        support.push_back(f.label);
    }
    return {{"support", support}, {"matrix", matrix_to_json(op.local())}};
}

Operator operator_from_json(const Json &j, const SystemLayout &layout) {
    std::vector<std::string> support = j.at("support").get<std::vector<std::string>>();
    return embed_local_operator(matrix_from_json(j.at("matrix")), std::span<const std::string>(support),
                                layout);
}

Json node_to_json(const ProtocolNode &n) {
    if (const auto *l = std::get_if<Leaf>(&n.get())) {
        return {{"leaf", l->label}};
    }
    if (const auto *c = std::get_if<Correction>(&n.get())) {
        Json u = operator_to_json(c->unitary.op);
        u["party"] = c->unitary.party;
        u["label"] = c->unitary.label;
        return {{"correction", u}, {"child", node_to_json(*c->child)}};
    }
    const auto &s = std::get<Step>(n.get());
    Json outcomes = Json::array();
    for (std::size_t i = 0; i < s.measurement.outcomes.size(); i++) {
        Json o = operator_to_json(s.measurement.outcomes[i]);
        o["label"] = s.measurement.labels[i];
        outcomes.push_back(o);
    }
    Json children = Json::array();
    for (const auto &ch : s.children) {
        children.push_back(node_to_json(*ch));
    }
    return {{"party", s.measurement.party}, {"outcomes", outcomes}, {"children", children}};
}

NodePtr node_from_json(const Json &j, const SystemLayout &layout) {
    if (j.contains("leaf")) {
        return make_leaf(j.at("leaf").get<std::string>());
    }
    if (j.contains("correction")) {
        const auto &u = j.at("correction");
        LocalUnitary lu{u.at("party").get<std::string>(), operator_from_json(u, layout),
                        u.value("label", std::string())};
        return make_correction(std::move(lu), node_from_json(j.at("child"), layout));
    }
    Measurement m{j.at("party").get<std::string>(), {}, {}};
    for (const auto &o : j.at("outcomes")) {
        m.outcomes.push_back(operator_from_json(o, layout));
        m.labels.push_back(o.at("label").get<std::string>());
    }
    std::vector<NodePtr> children;
    for (const auto &ch : j.at("children")) {
        children.push_back(node_from_json(ch, layout));
    }
    return make_step(std::move(m), std::move(children));
}

}  // namespace

Json vector_to_json(const Vector &v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); i++) {
        out.push_back(complex_to_json(v[i]));
    }
    return out;
}

Vector vector_from_json(const Json &j) {
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); i++) {
        v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
    }
    return v;
}

Json matrix_to_json(const Matrix &m) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        out.push_back(vector_to_json(m.row(r).transpose()));
    }
    return out;
}

Matrix matrix_from_json(const Json &j) {
    auto rows = static_cast<Eigen::Index>(j.size());
    auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; r++) {
        if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(r)].size()) != cols) {
            throw std::invalid_argument("ragged matrix");
        }
        m.row(r) = vector_from_json(j[static_cast<std::size_t>(r)]).transpose();
    }
    return m;
}

Json layout_to_json(const SystemLayout &layout) {
    Json out = Json::array();
    for (const auto &f : layout.factors()) {
        out.push_back({{"label", f.label}, {"dim", f.dim}, {"owner", f.owner}});
    }
    return out;
}

SystemLayout layout_from_json(const Json &j) {
    std::vector<Factor> fs;
    for (const auto &f : j) {
        fs.push_back({f.at("label").get<std::string>(), f.at("dim").get<std::size_t>(),
                      f.at("owner").get<std::string>()});
    }
    return SystemLayout(std::move(fs));
}

Json to_json(const StateSet &s) {
    Json family = {{"name", s.family().name}};
    Json params = Json::object();
    for (const auto &[k, v] : s.family().params) {
        params[k] = v;
    }
    family["params"] = params;
    family["tags"] = s.family().tags;

    Json members = Json::array();
    for (std::size_t i = 0; i < s.size(); i++) {
        const auto &m = s.members()[i];
        Json tile;
        if (s.stopper() && *s.stopper() == i) {
            tile = "stopper";
        } else if (m.tile) {
            tile = *m.tile;
        }
        Json parts = Json::object();
        for (const auto &p : s.layout().parties()) {
            parts[p] = vector_to_json(m.parts.at(p));
        }
        members.push_back({{"label", m.label}, {"tile", tile}, {"parts", parts}});
    }
    Json tiles = Json::array();
    for (const auto &t : s.tiles()) {
        Json rect = Json::object();
        for (const auto &[p, idx] : t.rect) {
            rect[p] = idx;
        }
        tiles.push_back({{"id", t.id}, {"owner", t.owner}, {"rect", rect}});
    }
    return {{"schema", kStateSetSchema},
            {"family", family},
            {"layout", layout_to_json(s.layout())},
            {"members", members},
            {"tiles", tiles}};
}

StateSet state_set_from_json(const Json &j) {
    expect_schema(j, kStateSetSchema);
    SystemLayout layout = layout_from_json(j.at("layout"));
    FamilyInfo info;
    const auto &fam = j.at("family");
    info.name = fam.at("name").get<std::string>();
    for (const auto &[k, v] : fam.at("params").items()) {
        info.params[k] = v.get<std::vector<std::int64_t>>();
    }
    info.tags = fam.at("tags").get<std::vector<std::string>>();
    std::vector<ProductState> members;
    std::optional<std::size_t> stopper;
    for (const auto &m : j.at("members")) {
        ProductState ps;
        ps.label = m.at("label").get<std::string>();
        const auto &tile = m.at("tile");
        if (tile.is_string()) {
            if (tile.get<std::string>() != "stopper") {
                throw std::invalid_argument("unknown tile marker '" + tile.get<std::string>() + "'");
            }
            stopper = members.size();
        } else if (tile.is_number_integer()) {
            ps.tile = tile.get<int>();
        }
        for (const auto &[p, v] : m.at("parts").items()) {
            ps.parts[p] = vector_from_json(v);
        }
        for (const auto &p : layout.parties()) {
            if (!ps.parts.count(p) ||
                static_cast<std::size_t>(ps.parts[p].size()) != layout.dim_of(layout.labels_of(p))) {
                throw std::invalid_argument("member '" + ps.label + "' has a bad part for party " + p);
            }
        }
        members.push_back(std::move(ps));
    }
    std::vector<Tile> tiles;
    for (const auto &t : j.at("tiles")) {
        Tile tile{t.at("id").get<int>(), t.at("owner").get<std::string>(), {}};
        for (const auto &[p, idx] : t.at("rect").items()) {
            tile.rect[p] = idx.get<std::vector<std::size_t>>();
        }
        tiles.push_back(std::move(tile));
    }
    return StateSet::unchecked(std::move(layout), std::move(members), std::move(tiles), std::move(info),
                               stopper);
}

Json to_json(const Protocol &p) {
    Json res = Json::array();
    for (const auto &pair : p.resource.pairs) {
        res.push_back({{"party1", pair.party1},
                       {"party2", pair.party2},
                       {"coefficients", pair.coefficients},
                       {"dim", pair.dim}});
    }
    return {{"schema", kProtocolSchema},
            {"name", p.name},
            {"principal", layout_to_json(p.principal)},
            {"resource", res},
            {"root", node_to_json(*p.root)}};
}

Protocol protocol_from_json(const Json &j) {
    expect_schema(j, kProtocolSchema);
    Protocol p;
    p.name = j.at("name").get<std::string>();
    p.principal = layout_from_json(j.at("principal"));
    for (const auto &r : j.at("resource")) {
        p.resource.pairs.push_back({r.at("party1").get<std::string>(), r.at("party2").get<std::string>(),
                                    r.at("coefficients").get<std::vector<double>>(),
                                    r.at("dim").get<std::size_t>()});
    }
    p.resource.validate();
    p.root = node_from_json(j.at("root"), attach_resource(p.principal, p.resource));
    return p;
}

Json trace_to_json(const std::string &input, const std::vector<BranchTrace> &branches) {
    Json bs = Json::array();
    for (const auto &b : branches) {
        Json path = Json::array();
        for (const auto &[party, label] : b.path) {
            path.push_back(Json::array({party, label}));
        }
        bs.push_back({{"path", path}, {"p", b.probability}, {"leaf", b.leaf}, {"pruned", b.pruned}});
    }
    return {{"schema", kTraceSchema}, {"input", input}, {"branches", bs}};
}

Json to_json(const OrthogonalityReport &r) {
    Json j = {{"pass", r.pass}, {"max_overlap", r.max_overlap}, {"max_norm_defect", r.max_norm_defect}};
    if (r.worst_pair) {
        j["worst_pair"] = Json::array({r.worst_pair->first, r.worst_pair->second});
    }
    return j;
}

Json to_json(const UnextendibleReport &r) {
    Json j = {{"verdict", r.verdict == Extendibility::Unextendible ? "UNEXTENDIBLE" : "EXTENDIBLE"},
              {"nodes", r.nodes}};
    if (r.verdict == Extendibility::Extendible) {
        Json w = Json::object();
        for (const auto &[p, v] : r.witness) {
            w[p] = vector_to_json(v);
        }
        j["witness"] = w;
        j["witness_max_overlap"] = r.witness_max_overlap;
    }
    return j;
}

Json to_json(const DiscriminationReport &r) {
    Json members = Json::array();
    for (const auto &m : r.members) {
        members.push_back({{"label", m.label},
                           {"branches", m.branches},
                           {"probability_sum", m.probability_sum},
                           {"correct_probability", m.correct_probability},
                           {"max_measurements", m.max_measurements}});
    }
    Json mis = Json::array();
    for (const auto &[member, leaf, p] : r.mislabeled) {
        mis.push_back({{"member", member}, {"leaf", leaf}, {"p", p}});
    }
    return {{"pass", r.pass},
            {"worst_defect", r.worst_defect},
            {"max_measurements", r.max_measurements},
            {"total_measurements", r.total_measurements},
            {"members", members},
            {"mislabeled", mis}};
}

Json to_json(const SepMeasurement &m) {
    Json elems = Json::array();
    for (std::size_t k = 0; k < m.size(); k++) {
        Json parts = Json::object();
        for (const auto &[p, v] : m.parts[k]) {
            parts[p] = vector_to_json(v);
        }
        elems.push_back({{"label", m.labels[k]}, {"parts", parts}});
    }
    return {{"layout", layout_to_json(m.layout)}, {"sum_defect", m.sum_defect}, {"projectors", elems}};
}

Json to_json(const SepReport &r) {
    Json members = Json::array();
    for (const auto &m : r.members) {
        Json outs = Json::array();
        for (const auto &[label, p] : m.outcomes) {
            outs.push_back({{"outcome", label}, {"p", p}});
        }
        members.push_back({{"label", m.label}, {"identified", m.identified}, {"outcomes", outs}});
    }
    return {{"pass", r.pass},
            {"ambiguous", r.ambiguous},
            {"completion_leak", r.completion_leak},
            {"members", members}};
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

}  // namespace upb
