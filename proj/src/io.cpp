#include "dimers/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dimers {

using nlohmann::json;

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(line ? what + " at line " + std::to_string(line) + ", column " + std::to_string(column)
                              : what),
      message_(what),
      line_(line),
      column_(column) {}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

namespace {

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // nlohmann reports the byte just past the offending token.
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        std::string msg = e.what();
        const auto cut = msg.find("syntax error");
        throw ParseError(cut == std::string::npos ? msg : msg.substr(cut), line, col);
    }
}

const json& field(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw ParseError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + ": missing field '" + key + "'");
    return *it;
}

int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ParseError(path + ": expected an integer");
    return v.get<int>();
}

Rational as_rational(const json& v, const std::string& path) {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (!v.is_string()) throw ParseError(path + ": expected a rational string like \"1/3\"");
    try {
        return Rational::parse(v.get<std::string>());
    } catch (const std::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace

DimerModel parse_dimer(const std::string& text) {
    const json doc = parse_json(text);
    if (!doc.is_object()) throw ParseError("/: expected an object");

    std::vector<Node> nodes;
    const json& jn = field(doc, "nodes", "");
    if (!jn.is_array()) throw ParseError("/nodes: expected an array");
    for (std::size_t i = 0; i < jn.size(); ++i) {
        const std::string p = "/nodes/" + std::to_string(i);
        Node n;
        n.id = as_int(field(jn[i], "id", p), p + "/id");
        const json& c = field(jn[i], "color", p);
        if (c == "black") n.color = Color::Black;
        else if (c == "white") n.color = Color::White;
        else throw ParseError(p + "/color: expected \"black\" or \"white\"");
        const json& pos = field(jn[i], "pos", p);
        if (!pos.is_array() || pos.size() != 2) throw ParseError(p + "/pos: expected a pair");
        n.x = as_rational(pos[0], p + "/pos/0");
        n.y = as_rational(pos[1], p + "/pos/1");
        for (const Rational* r : {&n.x, &n.y})
            if (*r < Rational(0) || *r >= Rational(1)) throw ParseError(p + "/pos: coordinates must lie in [0,1)");
        nodes.push_back(n);
    }

    std::vector<Edge> edges;
    const json& je = field(doc, "edges", "");
    if (!je.is_array()) throw ParseError("/edges: expected an array");
    for (std::size_t i = 0; i < je.size(); ++i) {
        const std::string p = "/edges/" + std::to_string(i);
        Edge e;
        e.id = as_int(field(je[i], "id", p), p + "/id");
        e.black = as_int(field(je[i], "black", p), p + "/black");
        e.white = as_int(field(je[i], "white", p), p + "/white");
        const json& o = field(je[i], "offset", p);
        if (!o.is_array() || o.size() != 2) throw ParseError(p + "/offset: expected a pair");
        e.offset = {as_int(o[0], p + "/offset/0"), as_int(o[1], p + "/offset/1")};
        edges.push_back(e);
    }

    std::map<int, std::vector<int>> rotations;
    if (auto it = doc.find("rotations"); it != doc.end()) {
        if (!it->is_object()) throw ParseError("/rotations: expected an object");
        for (const auto& [key, list] : it->items()) {
            const std::string p = "/rotations/" + key;
            int node = 0;
            try {
                std::size_t used = 0;
                node = std::stoi(key, &used);
                if (used != key.size()) throw std::invalid_argument(key);
            } catch (const std::exception&) {
                throw ParseError(p + ": key must be a node id");
            }
            if (!list.is_array()) throw ParseError(p + ": expected an array of edge ids");
            std::vector<int> order;
            for (std::size_t k = 0; k < list.size(); ++k) order.push_back(as_int(list[k], p + "/" + std::to_string(k)));
            rotations[node] = std::move(order);
        }
    }

    try {
        return DimerModel(std::move(nodes), std::move(edges), std::move(rotations));
    } catch (const DimerError& e) {
        throw ParseError(e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("error while writing " + path);
}

DimerModel read_dimer(const std::string& path) {
    const std::string text = read_text_file(path);
    try {
        return parse_dimer(text);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.message(), e.line(), e.column());
    }
}

std::string dimer_to_json(const DimerModel& g, const std::string& description) {
    json doc = json::object();
    if (!description.empty()) doc["description"] = description;
    json nodes = json::array();
    for (const Node& n : g.nodes())
        nodes.push_back({{"id", n.id}, {"color", to_string(n.color)}, {"pos", {n.x.str(), n.y.str()}}});
    doc["nodes"] = std::move(nodes);
    json edges = json::array();
    for (const Edge& e : g.edges())
        edges.push_back({{"id", e.id}, {"black", e.black}, {"white", e.white}, {"offset", {e.offset.x, e.offset.y}}});
    doc["edges"] = std::move(edges);
    if (!g.explicit_rotations().empty()) {
        json rot = json::object();
        for (const auto& [node, order] : g.explicit_rotations()) rot[std::to_string(node)] = order;
        doc["rotations"] = std::move(rot);
    }
    return doc.dump(1) + "\n";
}

void write_dimer(const DimerModel& g, const std::string& path, const std::string& description) {
    write_text_file(path, dimer_to_json(g, description));
}

LaurentPolynomial parse_polynomial_json(const std::string& text) {
    const json doc = parse_json(text);
    const json& jt = field(doc, "terms", "");
    if (!jt.is_array()) throw ParseError("/terms: expected an array");
    std::vector<std::pair<LatticeVector, ExactComplex>> terms;
    for (std::size_t i = 0; i < jt.size(); ++i) {
        const std::string p = "/terms/" + std::to_string(i);
        const json& e = field(jt[i], "exp", p);
        if (!e.is_array() || e.size() != 2) throw ParseError(p + "/exp: expected a pair");
        ExactComplex c{as_rational(field(jt[i], "re", p), p + "/re"), Rational(0)};
        if (auto it = jt[i].find("im"); it != jt[i].end()) c.im = as_rational(*it, p + "/im");
        terms.push_back({{as_int(e[0], p + "/exp/0"), as_int(e[1], p + "/exp/1")}, c});
    }
    return LaurentPolynomial(terms);
}

LaurentPolynomial read_polynomial(const std::string& path) {
    const std::string text = read_text_file(path);
    try {
        return parse_polynomial_json(text);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.message(), e.line(), e.column());
    }
}

std::string polynomial_to_json(const LaurentPolynomial& w) {
    json terms = json::array();
    for (const auto& [m, c] : w.terms()) {
        json t{{"exp", {m.x, m.y}}, {"re", c.re.str()}};
        if (c.im != Rational(0)) t["im"] = c.im.str();
        terms.push_back(std::move(t));
    }
    return json{{"terms", std::move(terms)}}.dump(1) + "\n";
}

}  // namespace dimers
