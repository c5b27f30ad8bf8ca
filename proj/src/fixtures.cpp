#include "quivermorse/fixtures.hpp"

#include "quivermorse/errors.hpp"

namespace qm::fixtures {

Quiver jordan_base() {
    return Quiver({"1", "inf"}, {{"B", "1", "1"}, {"a", "inf", "1"}}, std::string("inf"));
}

Quiver a1_base() { return Quiver({"1", "inf"}, {{"a", "inf", "1"}}, std::string("inf")); }

QuiverWithRelations jordan() { return build_nakajima_double(jordan_base()); }

QuiverWithRelations a1() { return build_nakajima_double(a1_base()); }

QuiverWithRelations adhm() {
    Quiver base({"V", "W"}, {{"B1", "V", "V"}, {"a", "W", "V"}}, std::string("W"));
    auto doubled = build_nakajima_double(base, {{"B1", "B2"}, {"a", "b"}});
    // The framed variety imposes the moment-map relation at the gauge vertex only.
    std::vector<Relation> rels;
    for (const auto& r : doubled.relations)
        if (r.id == "r_V") rels.push_back(Relation{"r", r.tail, r.head, r.terms});
    return {doubled.quiver, RelationSet(*doubled.quiver, std::move(rels))};
}

QuiverWithRelations jordan_cubic() {
    auto j = jordan();
    const auto& q = *j.quiver;
    std::vector<Relation> rels;
    rels.push_back(make_relation(q, "c_1", "1", "1", {{1.0, {"Bbar", "B", "B"}}, {-1.0, {"B", "B", "Bbar"}}}));
    rels.push_back(make_relation(q, "c_inf", "inf", "inf", {{1.0, {"a", "B", "abar"}}}));
    return {j.quiver, RelationSet(q, std::move(rels))};
}

QuiverWithRelations edgeless() {
    auto q = std::make_shared<const Quiver>(std::vector<std::string>{"p", "q"}, std::vector<EdgeSpec>{});
    return {q, RelationSet()};
}

QuiverWithRelations by_name(const std::string& name) {
    if (name == "jordan") return jordan();
    if (name == "a1") return a1();
    if (name == "adhm") return adhm();
    if (name == "jordan-cubic") return jordan_cubic();
    if (name == "edgeless") return edgeless();
    if (name == "handsaw3") {
        auto h = build_handsaw(3);
        return {h.quiver, h.relations};
    }
    if (name == "handsaw4") {
        auto h = build_handsaw(4);
        return {h.quiver, h.relations};
    }
    if (name == "adhm-ext") return build_extended_adhm(2, {2, 1});
    throw Error(ErrorCode::InvalidParameter, "unknown fixture '" + name + "'");
}

} // namespace qm::fixtures
