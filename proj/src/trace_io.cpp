#include "edcheck/trace_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace edcheck {

using nlohmann::json;

namespace {

std::string quote(std::string_view s) { return json(std::string(s)).dump(); }

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what);
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) fail(where, "unknown key '" + it.key() + "'");
    }
}

const std::string& str_field(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, std::string("missing key '") + key + "'");
    if (!it->is_string()) fail(where, std::string("key '") + key + "' must be a string");
    return it->get_ref<const std::string&>();
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

TraceGraph parse_trace(std::string_view text, const ParseOptions& opt) {
    json doc = parse_json(text);
    only_keys(doc, "trace", {"handlers", "events", "edges"});
    for (const char* k : {"handlers", "events", "edges"}) {
        if (!doc.contains(k)) fail("trace", std::string("missing key '") + k + "'");
        if (!doc[k].is_array()) fail(k, "expected an array");
    }

    TraceGraph t;
    std::size_t i = 0;
    for (const json& h : doc["handlers"]) {
        std::string where = "handlers[" + std::to_string(i++) + "]";
        if (!h.is_string()) fail(where, "handler names must be strings");
        if (t.handler_index(h.get<std::string>()) >= 0) fail(where, "duplicate handler '" + h.get<std::string>() + "'");
        t.add_handler(h.get<std::string>());
    }

    i = 0;
    for (const json& ev : doc["events"]) {
        std::string where = "events[" + std::to_string(i++) + "]";
        only_keys(ev, where, {"id", "handler", "kind", "var", "val", "receiver"});
        Event e;
        e.id = str_field(ev, "id", where);
        where += " '" + e.id + "'";
        const std::string& h = str_field(ev, "handler", where);
        e.handler = t.handler_index(h);
        if (e.handler < 0) fail(where, "unknown handler '" + h + "'");
        const std::string& ks = str_field(ev, "kind", where);
        auto kind = kind_from_string(ks);
        if (!kind) fail(where, "unknown event kind '" + ks + "'");
        e.kind = *kind;
        bool mem = e.kind == EventKind::Write || e.kind == EventKind::Read;
        if (mem)
            e.var = str_field(ev, "var", where);
        else if (ev.contains("var"))
            fail(where, "key 'var' not allowed on a " + ks + " event");
        if (ev.contains("val")) {
            if (e.kind != EventKind::Write) fail(where, "key 'val' only allowed on write events");
            if (!ev["val"].is_number_integer()) fail(where, "key 'val' must be an integer");
            e.val = ev["val"].get<std::int64_t>();
        }
        if (e.kind == EventKind::Post) {
            const std::string& r = str_field(ev, "receiver", where);
            e.receiver = t.handler_index(r);
            if (e.receiver < 0) fail(where, "unknown receiver '" + r + "'");
        } else if (ev.contains("receiver")) {
            fail(where, "key 'receiver' only allowed on post events");
        }
        if (t.find(e.id)) fail(where, "duplicate event id '" + e.id + "'");
        t.add_event(std::move(e));
    }

    i = 0;
    for (const json& ed : doc["edges"]) {
        std::string where = "edges[" + std::to_string(i++) + "]";
        only_keys(ed, where, {"kind", "src", "dst"});
        const std::string& ks = str_field(ed, "kind", where);
        auto rel = rel_from_string(ks);
        if (!rel) fail(where, "unknown edge kind '" + ks + "'");
        if (opt.partial_only && (*rel == Rel::mo || *rel == Rel::eo))
            fail(where, ks + " edge in a partial trace");
        const std::string& s = str_field(ed, "src", where);
        const std::string& d = str_field(ed, "dst", where);
        auto se = t.find(s);
        auto de = t.find(d);
        if (!se) fail(where, "unknown event id '" + s + "'");
        if (!de) fail(where, "unknown event id '" + d + "'");
        t.add_edge(*rel, *se, *de);
    }
    return t;
}

std::string serialize_trace(const TraceGraph& t) {
    std::ostringstream os;
    os << "{\"handlers\": [";
    for (std::size_t i = 0; i < t.handlers().size(); ++i) os << (i ? ", " : "") << quote(t.handlers()[i]);
    os << "], \"events\": [";
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Event& e = t.event(i);
        os << (i ? ",\n" : "\n") << "  {\"id\": " << quote(e.id) << ", \"handler\": " << quote(t.handlers()[e.handler])
           << ", \"kind\": \"" << to_string(e.kind) << "\"";
        if (e.kind == EventKind::Write || e.kind == EventKind::Read) os << ", \"var\": " << quote(e.var);
        if (e.kind == EventKind::Write) os << ", \"val\": " << e.val;
        if (e.kind == EventKind::Post) os << ", \"receiver\": " << quote(t.handlers()[e.receiver]);
        os << "}";
    }
    if (t.size()) os << "\n";
    os << "], \"edges\": [";

    std::vector<std::tuple<std::string, std::string, std::string>> edges;
    for (const Edge& e : t.edges()) edges.emplace_back(to_string(e.rel), t.event(e.src).id, t.event(e.dst).id);
    std::sort(edges.begin(), edges.end());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& [k, s, d] = edges[i];
        os << (i ? ",\n" : "\n") << "  {\"kind\": \"" << k << "\", \"src\": " << quote(s) << ", \"dst\": " << quote(d)
           << "}";
    }
    if (!edges.empty()) os << "\n";
    os << "]}\n";
    return os.str();
}

Witness parse_witness(std::string_view text, const TraceGraph& t) {
    json doc = parse_json(text);
    only_keys(doc, "witness", {"mo", "eo", "linearization"});
    Witness w;
    auto ids = [&](const json& arr, const std::string& where) {
        if (!arr.is_array()) fail(where, "expected an array of event ids");
        std::vector<EventId> out;
        for (const json& x : arr) {
            if (!x.is_string()) fail(where, "event ids must be strings");
            auto e = t.find(x.get<std::string>());
            if (!e) fail(where, "unknown event id '" + x.get<std::string>() + "'");
            out.push_back(*e);
        }
        return out;
    };
    for (const char* key : {"mo", "eo"}) {
        if (!doc.contains(key)) continue;
        const json& m = doc[key];
        if (!m.is_object()) fail(key, "expected an object");
        for (auto it = m.begin(); it != m.end(); ++it) {
            int h = t.handler_index(it.key());
            if (h < 0) fail(key, "unknown handler '" + it.key() + "'");
            auto seq = ids(it.value(), std::string(key) + "." + it.key());
            (std::string(key) == "mo" ? w.mo : w.eo)[h] = std::move(seq);
        }
    }
    if (doc.contains("linearization")) w.linearization = ids(doc["linearization"], "linearization");
    return w;
}

std::string serialize_witness(const TraceGraph& t, const Witness& w) {
    std::ostringstream os;
    auto seq = [&](const std::vector<EventId>& s) {
        os << "[";
        for (std::size_t i = 0; i < s.size(); ++i) os << (i ? ", " : "") << quote(t.event(s[i]).id);
        os << "]";
    };
    auto orders = [&](const std::map<int, std::vector<EventId>>& m) {
        os << "{";
        bool first = true;
        for (const auto& [h, s] : m) {
            os << (first ? "" : ", ") << quote(t.handlers()[h]) << ": ";
            seq(s);
            first = false;
        }
        os << "}";
    };
    os << "{\"mo\": ";
    orders(w.mo);
    os << ", \"eo\": ";
    orders(w.eo);
    os << ", \"linearization\": ";
    seq(w.linearization);
    os << "}\n";
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

TraceGraph load_trace(const std::string& path, const ParseOptions& opt) {
    try {
        return parse_trace(read_file(path), opt);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace edcheck
