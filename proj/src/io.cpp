#include "imdp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace imdp {

using json = nlohmann::ordered_json;

namespace {

/// JSON value paired with its location for diagnostics.
struct Node {
    const json& v;
    std::string path;

    [[noreturn]] void fail(const std::string& what) const {
        throw InputError((path.empty() ? std::string("$") : path) + ": " + what);
    }
    bool has(const char* key) const { return v.is_object() && v.contains(key); }
    Node operator[](const char* key) const {
        if (!v.is_object()) fail("expected an object");
        if (!v.contains(key)) fail(std::string("missing field '") + key + "'");
        return {v.at(key), path + "." + key};
    }
    Node operator[](std::size_t i) const { return {v.at(i), path + "[" + std::to_string(i) + "]"}; }
    std::size_t size() const {
        if (!v.is_array()) fail("expected an array");
        return v.size();
    }
    std::string str() const {
        if (!v.is_string()) fail("expected a string");
        return v.get<std::string>();
    }
    double num() const {
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) {
            try {
                return parse_probability(v.get<std::string>());
            } catch (const InputError& e) {
                fail(e.what());
            }
        }
        fail("expected a number or \"p/q\" string");
    }
    double real() const {
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) {
            const std::string s = v.get<std::string>();
            if (s.find('/') != std::string::npos) return num();
            try {
                std::size_t used = 0;
                const double d = std::stod(s, &used);
                if (used == s.size()) return d;
            } catch (const std::exception&) {
            }
        }
        fail("expected a number");
    }
    std::size_t count() const {
        if (!v.is_number_integer() || v.get<long long>() < 0) fail("expected a non-negative integer");
        return v.get<std::size_t>();
    }
};

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw InputError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                         e.what());
    }
}

void check_version(const Node& root) {
    if (!root.v.is_object()) root.fail("expected an object");
    if (root.has("format_version") && root["format_version"].count() != static_cast<std::size_t>(kFormatVersion))
        root["format_version"].fail("unsupported format version");
}

std::string op_name(Op op) { return op == Op::Ge ? ">=" : "<="; }

Op parse_op(const Node& n) {
    const std::string s = n.str();
    if (s == ">=" || s == "ge") return Op::Ge;
    if (s == "<=" || s == "le") return Op::Le;
    n.fail("unknown operator '" + s + "'");
}

std::string dir_name(Direction d) { return d == Direction::Max ? "max" : "min"; }

Direction parse_dir(const Node& n) {
    const std::string s = n.str();
    if (s == "max") return Direction::Max;
    if (s == "min") return Direction::Min;
    n.fail("unknown direction '" + s + "'");
}

json bound_json(int k) { return k == kInf ? json("inf") : json(k); }

int parse_bound(const Node& n) {
    if (n.v.is_string()) {
        if (n.v.get<std::string>() == "inf") return kInf;
        n.fail("step bound must be an integer or \"inf\"");
    }
    if (!n.v.is_number_integer() || n.v.get<long long>() < 0 || n.v.get<long long>() >= kInf)
        n.fail("step bound must be a non-negative integer or \"inf\"");
    return n.v.get<int>();
}

std::string outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Achievable: return "achievable";
        case Outcome::Unachievable: return "unachievable";
        case Outcome::Undecided: return "undecided";
    }
    return "";
}

json vec_json(const Vec& v) { return json(v); }

json oriented(const BasicQuery& b, Vec g) {
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (b.negated[i]) g[i] = -g[i] + 0.0;
    }
    return json(g);
}

json points_json(const BasicQuery& b, const Generated& found) {
    json pts = json::array();
    for (std::size_t i = 0; i < found.points.size(); ++i) {
        pts.push_back({{"value", oriented(b, found.points.points[i])},
                       {"strategy", found.points.tags[i]},
                       {"weights", found.points.weights[i]}});
    }
    return pts;
}

json trace_json(const Generated& found) {
    json t = json::array();
    for (const auto& it : found.trace) t.push_back({{"w", vec_json(it.w)}, {"g", vec_json(it.g)}});
    return t;
}

json counting_json(const Imdp& m, const CountingStrategy& s) {
    auto row = [&](const std::vector<int>& choice) {
        json out = json::object();
        for (std::size_t st = 0; st < m.num_states(); ++st) {
            const int c = choice[st];
            if (c >= 0 && static_cast<std::size_t>(c) < m.enabled[st].size())
                out[m.states[st]] = m.actions[m.enabled[st][c]];
        }
        return out;
    };
    json steps = json::array();
    for (const auto& p : s.per_step) steps.push_back(row(p));
    return {{"kind", "counting"}, {"per_step", steps}, {"tail", row(s.tail)}};
}

std::vector<int> parse_choice_row(const Imdp& m, const Node& n) {
    if (!n.v.is_object()) n.fail("expected an object mapping states to actions");
    std::vector<int> out(m.num_states(), 0);
    for (const auto& [state, action] : n.v.items()) {
        const Node a{action, n.path + "." + state};
        int s, act;
        try {
            s = m.state_index(state);
            act = m.action_index(a.str());
        } catch (const InputError& e) {
            a.fail(e.what());
        }
        const int c = m.choice_of(s, act);
        if (c < 0) a.fail("action not enabled in state '" + state + "'");
        out[s] = c;
    }
    return out;
}

CountingStrategy counting_from(const Imdp& m, const Node& n) {
    if (n.has("kind") && n["kind"].str() != "counting") n["kind"].fail("expected kind \"counting\"");
    CountingStrategy s;
    const Node steps = n["per_step"];
    for (std::size_t i = 0; i < steps.size(); ++i) s.per_step.push_back(parse_choice_row(m, steps[i]));
    s.tail = parse_choice_row(m, n["tail"]);
    return s;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

Imdp parse_model(const std::string& text) {
    const json doc = parse_json(text);
    const Node root{doc, ""};
    check_version(root);
    ModelBuilder b;
    const Node states = root["states"];
    std::set<std::string> known;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (!known.insert(states[i].str()).second) states[i].fail("duplicate state id");
        b.state(states[i].str());
    }
    auto require_state = [&](const Node& n) {
        const std::string id = n.str();
        if (!known.count(id)) n.fail("unknown state '" + id + "'");
        return id;
    };
    std::set<std::pair<std::string, std::string>> pairs;
    const Node actions = root["actions"];
    if (!actions.v.is_object()) actions.fail("expected an object mapping states to action lists");
    for (const auto& [state, list] : actions.v.items()) {
        const Node l{list, actions.path + "." + state};
        if (!known.count(state)) l.fail("unknown state '" + state + "'");
        for (std::size_t i = 0; i < l.size(); ++i) {
            b.enable(state, l[i].str());
            pairs.emplace(state, l[i].str());
        }
    }
    const Node tr = root["transitions"];
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const Node t = tr[i];
        const Node iv = t["interval"];
        if (iv.size() != 2) iv.fail("interval must have two entries");
        const std::string from = require_state(t["from"]);
        const std::string to = require_state(t["to"]);
        const std::string act = t["action"].str();
        if (!pairs.count({from, act})) t["action"].fail("action '" + act + "' is not enabled in '" + from + "'");
        b.transition(from, act, to, iv[std::size_t{0}].num(), iv[std::size_t{1}].num());
    }
    if (root.has("rewards")) {
        const Node rw = root["rewards"];
        if (!rw.v.is_object()) rw.fail("expected an object of reward structures");
        for (const auto& [name, entries] : rw.v.items()) {
            const Node en{entries, rw.path + "." + name};
            if (!en.v.is_object()) en.fail("expected an object mapping \"state,action\" to values");
            b.declare_reward(name);
            for (const auto& [key, value] : entries.items()) {
                const Node val{value, en.path + "." + key};
                const auto comma = key.rfind(',');
                if (comma == std::string::npos) val.fail("key must be \"state,action\"");
                const std::string st = key.substr(0, comma), act = key.substr(comma + 1);
                if (!pairs.count({st, act})) val.fail("(" + st + "," + act + ") is not an enabled pair");
                b.reward(name, st, act, val.real());
            }
        }
    }
    b.set_initial(require_state(root["initial"]));
    return b.build();
}

std::string serialize_model(const Imdp& m) {
    json doc;
    doc["format_version"] = kFormatVersion;
    doc["states"] = m.states;
    doc["initial"] = m.states[m.initial];
    json actions = json::object();
    json transitions = json::array();
    for (std::size_t s = 0; s < m.num_states(); ++s) {
        json list = json::array();
        for (std::size_t c = 0; c < m.enabled[s].size(); ++c) {
            const std::string& a = m.actions[m.enabled[s][c]];
            list.push_back(a);
            for (const auto& e : m.rows[s][c].entries) {
                transitions.push_back(
                    {{"from", m.states[s]}, {"action", a}, {"to", m.states[e.target]}, {"interval", {e.lower, e.upper}}});
            }
        }
        actions[m.states[s]] = list;
    }
    doc["actions"] = actions;
    doc["transitions"] = transitions;
    json rewards = json::object();
    for (const auto& [name, rs] : m.rewards) {
        json entries = json::object();
        for (std::size_t s = 0; s < m.num_states(); ++s) {
            for (std::size_t c = 0; c < m.enabled[s].size(); ++c) {
                const double v = rs.values[s][c];
                if (v != 0.0) entries[m.states[s] + "," + m.actions[m.enabled[s][c]]] = v;
            }
        }
        rewards[name] = entries;
    }
    doc["rewards"] = rewards;
    return dump(doc);
}

QueryFile parse_query(const std::string& text) {
    const json doc = parse_json(text);
    const Node root{doc, ""};
    check_version(root);
    QueryFile out;
    Query& q = out.query;
    const std::string mode = root["mode"].str();
    if (mode == "synth") {
        q.mode = Mode::Synth;
    } else if (mode == "qnt") {
        q.mode = Mode::Qnt;
    } else if (mode == "pareto") {
        q.mode = Mode::Pareto;
    } else {
        root["mode"].fail("unknown mode '" + mode + "'");
    }
    const Node objs = root["objectives"];
    for (std::size_t i = 0; i < objs.size(); ++i) {
        const Node o = objs[i];
        Objective obj;
        const std::string kind = o["kind"].str();
        if (kind == "reach") {
            obj.kind = ObjKind::Reach;
            const Node t = o["target"];
            if (t.v.is_string()) {
                obj.target.push_back(t.str());
            } else {
                for (std::size_t k = 0; k < t.size(); ++k) obj.target.push_back(t[k].str());
            }
        } else if (kind == "reward") {
            obj.kind = ObjKind::Reward;
            obj.structure = o["structure"].str();
        } else {
            o["kind"].fail("unknown objective kind '" + kind + "'");
        }
        if (o.has("op")) obj.op = parse_op(o["op"]);
        if (o.has("threshold")) {
            obj.threshold = obj.kind == ObjKind::Reach ? o["threshold"].num() : o["threshold"].real();
        } else if (q.mode == Mode::Synth) {
            o.fail("missing field 'threshold'");
        }
        if (o.has("step_bound")) obj.step_bound = parse_bound(o["step_bound"]);
        q.objectives.push_back(std::move(obj));
    }
    if (root.has("qnt_index")) q.qnt_index = static_cast<int>(root["qnt_index"].count());
    if (root.has("qnt_direction")) q.qnt_direction = parse_dir(root["qnt_direction"]);
    if (root.has("directions")) {
        const Node d = root["directions"];
        for (std::size_t i = 0; i < d.size(); ++i) q.directions.push_back(parse_dir(d[i]));
    }
    if (root.has("epsilon")) {
        out.epsilon = root["epsilon"].real();
        if (!(*out.epsilon > 0.0)) root["epsilon"].fail("epsilon must be positive");
    }
    if (root.has("max_iters")) out.max_iters = root["max_iters"].count();
    return out;
}

std::string serialize_query(const QueryFile& f) {
    const Query& q = f.query;
    json doc;
    doc["format_version"] = kFormatVersion;
    doc["mode"] = q.mode == Mode::Synth ? "synth" : q.mode == Mode::Qnt ? "qnt" : "pareto";
    json objs = json::array();
    for (const auto& o : q.objectives) {
        json j;
        if (o.kind == ObjKind::Reach) {
            j["kind"] = "reach";
            j["target"] = o.target;
        } else {
            j["kind"] = "reward";
            j["structure"] = o.structure;
        }
        j["op"] = op_name(o.op);
        j["threshold"] = o.threshold;
        j["step_bound"] = bound_json(o.step_bound);
        objs.push_back(j);
    }
    doc["objectives"] = objs;
    if (q.mode == Mode::Qnt) {
        doc["qnt_index"] = q.qnt_index;
        doc["qnt_direction"] = dir_name(q.qnt_direction);
    }
    if (!q.directions.empty()) {
        json d = json::array();
        for (auto dir : q.directions) d.push_back(dir_name(dir));
        doc["directions"] = d;
    }
    if (f.epsilon) doc["epsilon"] = *f.epsilon;
    if (f.max_iters) doc["max_iters"] = *f.max_iters;
    return dump(doc);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

std::string serialize_strategy(const Imdp& m, const CountingStrategy& s) {
    json j = counting_json(m, s);
    j["format_version"] = kFormatVersion;
    return dump(j);
}

std::string serialize_strategy(const Imdp& m, const MixtureStrategy& s) {
    json comps = json::array();
    for (std::size_t i = 0; i < s.components.size(); ++i)
        comps.push_back({{"probability", s.probs[i]}, {"strategy", counting_json(m, s.components[i])}});
    return dump({{"format_version", kFormatVersion}, {"kind", "mixture"}, {"components", comps}});
}

std::string serialize_strategy(const Imdp& m, const RandomisedCountingStrategy& s) {
    json rows = json::array();
    for (const auto& layer : s.probs) {
        json row = json::object();
        for (std::size_t st = 0; st < m.num_states(); ++st) {
            json dist = json::object();
            for (std::size_t c = 0; c < layer[st].size(); ++c) {
                if (layer[st][c] > 0.0) dist[m.actions[m.enabled[st][c]]] = layer[st][c];
            }
            row[m.states[st]] = dist;
        }
        rows.push_back(row);
    }
    return dump({{"format_version", kFormatVersion}, {"kind", "randomised"}, {"steps", rows}});
}

CountingStrategy parse_counting_strategy(const Imdp& m, const std::string& text) {
    const json doc = parse_json(text);
    const Node root{doc, ""};
    check_version(root);
    return counting_from(m, root);
}

MixtureStrategy parse_mixture_strategy(const Imdp& m, const std::string& text) {
    const json doc = parse_json(text);
    const Node root{doc, ""};
    check_version(root);
    MixtureStrategy out;
    if (!root.has("kind") || root["kind"].str() == "counting") {
        out.components.push_back(counting_from(m, root));
        out.probs.push_back(1.0);
        return out;
    }
    if (root["kind"].str() != "mixture") root["kind"].fail("expected kind \"counting\" or \"mixture\"");
    const Node comps = root["components"];
    double total = 0.0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        out.probs.push_back(comps[i]["probability"].num());
        total += out.probs.back();
        out.components.push_back(counting_from(m, comps[i]["strategy"]));
    }
    if (out.components.empty() || std::abs(total - 1.0) > 1e-9) comps.fail("probabilities must sum to 1");
    return out;
}

MixtureStrategy mixture_of(const Generated& found, const Vec& probs) {
    MixtureStrategy out;
    for (std::size_t i = 0; i < probs.size() && i < found.points.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        out.components.push_back(found.strategies[found.points.tags[i]]);
        out.probs.push_back(probs[i]);
    }
    double total = 0.0;
    for (double p : out.probs) total += p;
    for (double& p : out.probs) p /= total;
    return out;
}

std::string serialize_result(const BasicQuery& b, const SynthesisResult& r) {
    json j{{"format_version", kFormatVersion},
           {"mode", "synth"},
           {"outcome", outcome_name(r.outcome)},
           {"achievable", r.achievable()},
           {"points", points_json(b, r.found)},
           {"trace", trace_json(r.found)}};
    j["mixture"] = r.mixture ? json(*r.mixture) : json(nullptr);
    return dump(j);
}

std::string serialize_result(const BasicQuery& b, const QuantResult& r) {
    json j{{"format_version", kFormatVersion},
           {"mode", "qnt"},
           {"outcome", outcome_name(r.outcome)},
           {"points", points_json(b, r.found)},
           {"trace", trace_json(r.found)}};
    j["value"] = r.outcome == Outcome::Unachievable ? json(nullptr) : json(r.value);
    j["mixture"] = r.mixture ? json(*r.mixture) : json(nullptr);
    return dump(j);
}

std::string serialize_result(const BasicQuery& b, const ParetoApprox& r) {
    json verts = json::array();
    for (std::size_t i = 0; i < r.vertices.size(); ++i)
        verts.push_back({{"point", r.vertices[i]}, {"supports", r.supports[i]}, {"strategy", r.found.points.tags[r.vertex_points[i]]}});
    return dump({{"format_version", kFormatVersion},
                 {"mode", "pareto"},
                 {"epsilon", r.epsilon},
                 {"capped", r.capped},
                 {"vertices", verts},
                 {"points", points_json(b, r.found)},
                 {"trace", trace_json(r.found)}});
}

std::string serialize_result(const SimResult& r) {
    return dump({{"format_version", kFormatVersion}, {"runs", r.runs}, {"mean", r.mean}, {"half_width", r.half_width}});
}

std::string pareto_csv(const ParetoApprox& r) {
    std::string out = "obj1,obj2\n";
    char buf[64];
    for (const auto& v : r.vertices) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", v[0], v[1]);
        out += buf;
    }
    return out;
}

std::vector<Vec> parse_pareto_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "obj1,obj2") throw InputError("line 1: expected header \"obj1,obj2\"");
    std::vector<Vec> out;
    for (std::size_t no = 2; std::getline(in, line); ++no) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        try {
            if (comma == std::string::npos) throw std::invalid_argument("missing comma");
            std::size_t u1 = 0, u2 = 0;
            const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
            const double x = std::stod(a, &u1), y = std::stod(b, &u2);
            if (u1 != a.size() || u2 != b.size()) throw std::invalid_argument("trailing characters");
            out.push_back({x, y});
        } catch (const std::exception&) {
            throw InputError("line " + std::to_string(no) + ": expected two numbers");
        }
    }
    return out;
}

}  // namespace imdp
