#include "vclab/network_io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "vclab/error.hpp"

namespace vclab {

using nlohmann::json;

namespace {

using Kind = ValidationError::Kind;

void require_fields(const json& obj, const std::set<std::string>& required, const std::set<std::string>& optional,
                    const std::string& where) {
    if (!obj.is_object()) throw ValidationError(Kind::malformed, where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (!required.count(key) && !optional.count(key)) {
            throw ValidationError(Kind::malformed, "unknown field '" + key + "' in " + where);
        }
    }
    for (const auto& key : required) {
        if (!obj.contains(key)) throw ValidationError(Kind::malformed, "missing field '" + key + "' in " + where);
    }
}

Rational rational_field(const json& v, const std::string& where) {
    if (!v.is_string()) throw ValidationError(Kind::malformed, where + " must be a rational string");
    try {
        return Rational::parse(v.get<std::string>());
    } catch (const ParseError& e) {
        throw ValidationError(Kind::malformed, where + ": " + e.what());
    }
}

long integer_field(const json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ValidationError(Kind::malformed, where + " must be an integer");
    return v.get<long>();
}

std::string string_field(const json& v, const std::string& where) {
    if (!v.is_string()) throw ValidationError(Kind::malformed, where + " must be a string");
    return v.get<std::string>();
}

Activation activation_from_json(const json& v, const std::string& where) {
    if (v.is_string()) {
        const auto name = v.get<std::string>();
        if (name == "relu") return Activation::relu();
        if (name == "identity") return Activation::identity();
        throw ValidationError(Kind::unknown_activation, "unknown activation '" + name + "' in " + where);
    }
    if (!v.is_object() || v.size() != 1 || !v.contains("pwl")) {
        throw ValidationError(Kind::unknown_activation, "unrecognized activation in " + where);
    }
    const json& spec = v.at("pwl");
    require_fields(spec, {"breakpoints", "pieces"}, {}, where + " pwl");
    if (!spec.at("breakpoints").is_array() || !spec.at("pieces").is_array()) {
        throw ValidationError(Kind::malformed, where + " pwl breakpoints and pieces must be arrays");
    }
    std::vector<Rational> bps;
    for (const json& b : spec.at("breakpoints")) bps.push_back(rational_field(b, where + " breakpoint"));
    std::vector<Affine> pieces;
    for (const json& p : spec.at("pieces")) {
        if (!p.is_array() || p.size() != 2) throw ValidationError(Kind::malformed, where + " piece must be [slope, intercept]");
        pieces.push_back(Affine{rational_field(p[0], where + " slope"), rational_field(p[1], where + " intercept")});
    }
    try {
        return Activation::piecewise(PwlFunction(std::move(bps), std::move(pieces)));
    } catch (const DomainError& e) {
        throw ValidationError(Kind::malformed, where + ": " + e.what());
    }
}

json activation_to_json(const Activation& a) {
    switch (a.kind()) {
    case Activation::Kind::relu: return "relu";
    case Activation::Kind::identity: return "identity";
    case Activation::Kind::pwl: break;
    }
    json bps = json::array();
    for (const Rational& b : a.function().breakpoints()) bps.push_back(b.str());
    json pieces = json::array();
    for (const Affine& p : a.function().pieces()) pieces.push_back(json::array({p.slope.str(), p.intercept.str()}));
    return json{{"pwl", json{{"breakpoints", bps}, {"pieces", pieces}}}};
}

std::vector<Integer> integer_list(const json& v, const std::string& where) {
    if (!v.is_array()) throw ValidationError(Kind::malformed, where + " must be an array");
    std::vector<Integer> out;
    for (const json& x : v) out.emplace_back(integer_field(x, where + " entry"));
    return out;
}

} // namespace

json network_to_json(const Network& net) {
    json nodes = json::array();
    for (const Unit& u : net.units()) {
        nodes.push_back(json{{"id", u.id}, {"bias", u.bias.str()}, {"activation", activation_to_json(u.activation)}});
    }
    json edges = json::array();
    for (const Edge& e : net.edges()) {
        edges.push_back(json{{"from", net.node_id(e.from)}, {"to", net.node_id(e.to)}, {"weight", e.weight.str()}});
    }
    return json{{"inputs", net.input_count()}, {"nodes", nodes}, {"edges", edges}, {"output", net.node_id(net.output())}};
}

Network network_from_json(const json& doc) {
    require_fields(doc, {"inputs", "nodes", "edges", "output"}, {}, "network");
    long inputs = integer_field(doc.at("inputs"), "inputs");
    if (inputs < 1) throw ValidationError(Kind::malformed, "network needs at least one input");
    if (!doc.at("nodes").is_array() || !doc.at("edges").is_array()) {
        throw ValidationError(Kind::malformed, "nodes and edges must be arrays");
    }

    NetworkBuilder builder(static_cast<std::size_t>(inputs));
    std::map<std::string, NodeIndex> index;
    for (long i = 0; i < inputs; ++i) index["x" + std::to_string(i)] = static_cast<NodeIndex>(i);

    for (const json& node : doc.at("nodes")) {
        require_fields(node, {"id", "bias", "activation"}, {}, "node");
        std::string id = string_field(node.at("id"), "node id");
        std::string where = "node '" + id + "'";
        if (index.count(id)) throw ValidationError(Kind::duplicate_id, "duplicate node id '" + id + "'");
        index[id] = builder.add_unit(id, rational_field(node.at("bias"), where + " bias"),
                                     activation_from_json(node.at("activation"), where));
    }
    auto lookup = [&](const json& v, const std::string& role) {
        std::string id = string_field(v, "edge " + role);
        auto it = index.find(id);
        if (it == index.end()) throw ValidationError(Kind::unknown_id, "edge " + role + " refers to undeclared node '" + id + "'");
        return it->second;
    };
    for (const json& edge : doc.at("edges")) {
        require_fields(edge, {"from", "to", "weight"}, {}, "edge");
        NodeIndex from = lookup(edge.at("from"), "source");
        NodeIndex to = lookup(edge.at("to"), "target");
        builder.add_edge(from, to, rational_field(edge.at("weight"), "edge weight"));
    }
    std::string out = string_field(doc.at("output"), "output");
    auto it = index.find(out);
    if (it == index.end()) throw ValidationError(Kind::unknown_id, "output refers to undeclared node '" + out + "'");
    return builder.build(it->second);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

json parse_json_file(const std::filesystem::path& path) {
    std::string text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path.string() + "'");
    out << text;
}

} // namespace

Network load_network(const std::filesystem::path& path) { return network_from_json(parse_json_file(path)); }

void save_network(const Network& net, const std::filesystem::path& path) {
    write_file(path, network_to_json(net).dump(2) + "\n");
}

ArchSummary summary_from_json(const json& doc) {
    require_fields(doc, {"k", "Wi", "p", "d"}, {}, "summary");
    try {
        return ArchSummary::from_layers(integer_list(doc.at("k"), "k"), integer_list(doc.at("Wi"), "Wi"),
                                        Integer(integer_field(doc.at("p"), "p")), Integer(integer_field(doc.at("d"), "d")));
    } catch (const DomainError& e) {
        throw ValidationError(Kind::malformed, std::string("summary: ") + e.what());
    }
}

std::variant<Network, ArchSummary> load_architecture(const std::filesystem::path& path) {
    json doc = parse_json_file(path);
    if (doc.is_object() && doc.contains("k")) return summary_from_json(doc);
    return network_from_json(doc);
}

LabelMatrix parse_labels(const std::string& text) {
    std::vector<std::string> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(line);
    }
    if (rows.empty()) throw ParseError("label file is empty");
    const std::size_t m = rows.front().size();
    LabelMatrix f(rows.size(), m);
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].size() != m) {
            throw ParseError("label row " + std::to_string(j + 1) + " has " + std::to_string(rows[j].size()) +
                             " columns, expected " + std::to_string(m));
        }
        for (std::size_t i = 0; i < m; ++i) {
            char c = rows[j][i];
            if (c != '0' && c != '1') throw ParseError("label row " + std::to_string(j + 1) + " contains '" + c + "'");
            f.set(j, i, c - '0');
        }
    }
    return f;
}

std::string format_labels(const LabelMatrix& f) {
    std::string out;
    for (std::size_t j = 0; j < f.n(); ++j) {
        for (std::size_t i = 0; i < f.m(); ++i) out.push_back(static_cast<char>('0' + f.bit(j, i)));
        out.push_back('\n');
    }
    return out;
}

LabelMatrix load_labels(const std::filesystem::path& path) { return parse_labels(read_file(path)); }

void save_labels(const LabelMatrix& f, const std::filesystem::path& path) { write_file(path, format_labels(f)); }

std::vector<std::vector<Rational>> points_from_json(const json& doc) {
    if (!doc.is_array()) throw ValidationError(Kind::malformed, "points file must be an array of input vectors");
    std::vector<std::vector<Rational>> points;
    for (const json& p : doc) {
        if (!p.is_array()) throw ValidationError(Kind::malformed, "each point must be an array of rational strings");
        std::vector<Rational> x;
        for (const json& c : p) x.push_back(rational_field(c, "point coordinate"));
        points.push_back(std::move(x));
    }
    return points;
}

std::vector<std::vector<Rational>> load_points(const std::filesystem::path& path) {
    return points_from_json(parse_json_file(path));
}

} // namespace vclab
