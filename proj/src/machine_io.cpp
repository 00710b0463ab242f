#include "qem/machine_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace qem {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string type_name(const nlohmann::json& v) { return v.type_name(); }

}  // namespace

EpsilonMachine machine_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw io_error(std::string("machine JSON parse error: ") + e.what());
    }

    if (!doc.is_object() || !doc.contains("alphabet") || !doc.contains("states") ||
        !doc.contains("edges"))
        throw validation_error("machine JSON must be an object with alphabet, states and edges");
    if (!doc["alphabet"].is_array() || !doc["states"].is_array() || !doc["edges"].is_array())
        throw validation_error("machine JSON: alphabet, states and edges must be arrays");

    Alphabet alphabet;
    for (const auto& s : doc["alphabet"]) {
        if (!s.is_string())
            throw validation_error("machine JSON: alphabet entries must be strings, got " +
                                   type_name(s));
        alphabet.symbols.push_back(s.get<std::string>());
    }
    std::vector<std::string> states;
    for (const auto& s : doc["states"]) {
        if (!s.is_string())
            throw validation_error("machine JSON: state entries must be strings, got " +
                                   type_name(s));
        states.push_back(s.get<std::string>());
    }

    EpsilonMachine m(std::move(alphabet), std::move(states));

    std::set<std::tuple<int, int, int>> seen;
    for (const auto& e : doc["edges"]) {
        if (!e.is_object() || !e.contains("from") || !e.contains("symbol") || !e.contains("to") ||
            !e.contains("p"))
            throw validation_error("machine JSON: each edge needs from, symbol, to and p");
        const int j = m.state_index(e["from"].get<std::string>());
        const int k = m.state_index(e["to"].get<std::string>());
        const int r = m.alphabet.index_of(e["symbol"].get<std::string>());
        if (j < 0) throw validation_error("machine JSON: unknown state '" +
                                          e["from"].get<std::string>() + "'");
        if (k < 0) throw validation_error("machine JSON: unknown state '" +
                                          e["to"].get<std::string>() + "'");
        if (r < 0) throw validation_error("machine JSON: unknown symbol '" +
                                          e["symbol"].get<std::string>() + "'");
        if (!e["p"].is_number())
            throw validation_error("machine JSON: edge probability must be a number");
        if (!seen.insert({j, r, k}).second) {
            std::ostringstream os;
            os << "machine JSON: duplicate edge (" << m.state_names[j] << ", "
               << m.alphabet.symbols[r] << ", " << m.state_names[k] << ")";
            throw validation_error(os.str());
        }
        m.set_t(j, k, r, e["p"].get<double>());
    }

    require_valid(m);
    return m;
}

std::string machine_to_json(const EpsilonMachine& m) {
    ordered_json doc;
    doc["alphabet"] = m.alphabet.symbols;
    doc["states"] = m.state_names;
    ordered_json edges = ordered_json::array();
    for (int j = 0; j < m.n_states(); ++j)
        for (int r = 0; r < m.n_symbols(); ++r)
            for (int k = 0; k < m.n_states(); ++k) {
                const double p = m.t(j, k, r);
                if (p <= 0.0) continue;
                ordered_json e;
                e["from"] = m.state_names[j];
                e["symbol"] = m.alphabet.symbols[r];
                e["to"] = m.state_names[k];
                e["p"] = p;
                edges.push_back(std::move(e));
            }
    doc["edges"] = std::move(edges);
    return doc.dump(2) + "\n";
}

EpsilonMachine load_machine(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open machine file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw io_error("error reading machine file: " + path.string());
    return machine_from_json(buf.str());
}

void save_machine(const EpsilonMachine& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open output file: " + path.string());
    out << machine_to_json(m);
    if (!out) throw io_error("error writing machine file: " + path.string());
}

}  // namespace qem
