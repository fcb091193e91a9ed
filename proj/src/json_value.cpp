#include "jdiv/json_value.hpp"

#include <algorithm>
#include <unordered_map>

namespace jdiv {

namespace {

using KeyIndex = std::unordered_map<std::string_view, const JsonValue*>;

KeyIndex index_members(const JsonObject& o) {
    KeyIndex idx;
    idx.reserve(o.members.size());
    for (const auto& m : o.members) idx[m.key] = &m.value;  // last wins
    return idx;
}

bool equivalent_objects(const JsonObject& a, const JsonObject& b) {
    const KeyIndex ia = index_members(a);
    const KeyIndex ib = index_members(b);
    if (ia.size() != ib.size()) return false;
    for (const auto& [key, value] : ia) {
        auto it = ib.find(key);
        if (it == ib.end() || !equivalent(*value, *it->second)) return false;
    }
    return true;
}

}  // namespace

const JsonValue* JsonValue::find(std::string_view key) const {
    const auto* o = as_object();
    if (!o) return nullptr;
    for (auto it = o->members.rbegin(); it != o->members.rend(); ++it)
        if (it->key == key) return &it->value;
    return nullptr;
}

JsonObject make_object(std::vector<JsonMember> members) {
    JsonObject o;
    o.members = std::move(members);
    return o;
}

bool equivalent(const JsonValue& a, const JsonValue& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case ValueKind::null: return true;
    case ValueKind::boolean: return *a.as_bool() == *b.as_bool();
    case ValueKind::number: return same_number(*a.as_number(), *b.as_number());
    case ValueKind::string: return *a.as_string() == *b.as_string();
    case ValueKind::array: {
        const auto& x = *a.as_array();
        const auto& y = *b.as_array();
        return x.size() == y.size() &&
               std::equal(x.begin(), x.end(), y.begin(),
                          [](const JsonValue& l, const JsonValue& r) { return equivalent(l, r); });
    }
    case ValueKind::object: return equivalent_objects(*a.as_object(), *b.as_object());
    }
    return false;
}

std::size_t nesting_depth(const JsonValue& v) {
    std::size_t inner = 0;
    if (const auto* arr = v.as_array()) {
        for (const auto& e : *arr) inner = std::max(inner, nesting_depth(e));
        return inner + 1;
    }
    if (const auto* obj = v.as_object()) {
        for (const auto& m : obj->members) inner = std::max(inner, nesting_depth(m.value));
        return inner + 1;
    }
    return 0;
}

}  // namespace jdiv
