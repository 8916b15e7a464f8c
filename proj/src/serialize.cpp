#include "netmorph/serialize.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "netmorph/errors.hpp"

namespace netmorph {

using nlohmann::json;

namespace {

json term_to_json(const Term& t) {
    json j = json::array();
    if (is_input_source(t.source))
        j.push_back("x" + std::to_string(input_coordinate(t.source)));
    else
        j.push_back(t.source);
    j.push_back(t.weight);
    return j;
}

Activation activation_from_name(const std::string& s) {
    if (s == "relu") return Activation::Relu;
    if (s == "binary_step") return Activation::BinaryStep;
    if (s == "identity") return Activation::Identity;
    throw parse_error("unknown activation \"" + s + "\"");
}

Term term_from_json(const json& j, int input_dim) {
    if (!j.is_array() || j.size() != 2 || !j[1].is_number())
        throw parse_error("malformed term " + j.dump());
    Term t;
    t.weight = j[1].get<double>();
    if (j[0].is_string()) {
        const std::string s = j[0].get<std::string>();
        if (s.size() < 2 || s[0] != 'x')
            throw parse_error("malformed input reference \"" + s + "\"");
        const int k = std::stoi(s.substr(1));
        if (k < 0 || k >= input_dim)
            throw parse_error("input reference " + s + " out of range");
        t.source = input_source(k);
    } else if (j[0].is_number_integer()) {
        t.source = j[0].get<int>();
        if (t.source < 0) throw parse_error("negative neuron reference in term");
    } else {
        throw parse_error("malformed term source " + j[0].dump());
    }
    return t;
}

// Kahn topological sort over neuron ids; throws on cycles.
std::vector<Neuron> topo_sort(std::vector<Neuron> neurons) {
    std::map<int, size_t> pos;
    for (size_t i = 0; i < neurons.size(); ++i) {
        if (!pos.emplace(neurons[i].id, i).second)
            throw parse_error("duplicate neuron id " + std::to_string(neurons[i].id));
    }
    std::vector<int> indegree(neurons.size(), 0);
    std::vector<std::vector<size_t>> dependents(neurons.size());
    for (size_t i = 0; i < neurons.size(); ++i) {
        for (const Term& t : neurons[i].incoming) {
            if (is_input_source(t.source)) continue;
            auto it = pos.find(t.source);
            if (it == pos.end())
                throw parse_error("neuron " + std::to_string(neurons[i].id) +
                                  " references unknown id " + std::to_string(t.source));
            dependents[it->second].push_back(i);
            indegree[i]++;
        }
    }
    std::vector<size_t> ready;
    for (size_t i = 0; i < neurons.size(); ++i)
        if (indegree[i] == 0) ready.push_back(i);
    std::vector<Neuron> sorted;
    sorted.reserve(neurons.size());
    // Smallest-index-first keeps the order deterministic.
    while (!ready.empty()) {
        auto it = std::min_element(ready.begin(), ready.end());
        const size_t i = *it;
        ready.erase(it);
        sorted.push_back(std::move(neurons[i]));
        for (size_t d : dependents[i])
            if (--indegree[d] == 0) ready.push_back(d);
    }
    if (sorted.size() != neurons.size())
        throw parse_error("neuron graph contains a cycle");
    return sorted;
}

}  // namespace

std::string serialize_network(const Network& net) {
    json doc;
    doc["version"] = 1;
    doc["input_dim"] = net.input_dim();
    json ns = json::array();
    for (const Neuron& n : net.neurons()) {
        json jn;
        jn["id"] = n.id;
        jn["activation"] = activation_name(n.activation);
        jn["bias"] = n.bias;
        json in = json::array();
        for (const Term& t : n.incoming) in.push_back(term_to_json(t));
        jn["in"] = in;
        ns.push_back(jn);
    }
    doc["neurons"] = ns;
    json out;
    out["bias"] = net.output().bias;
    json terms = json::array();
    for (const Term& t : net.output().terms) terms.push_back(term_to_json(t));
    out["terms"] = terms;
    doc["output"] = out;
    return doc.dump(2);
}

Network deserialize_network(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("invalid JSON: ") + e.what());
    }
    try {
        if (!doc.contains("version") || doc["version"].get<int>() != 1)
            throw parse_error("unsupported or missing document version");
        const int input_dim = doc.at("input_dim").get<int>();
        if (input_dim <= 0) throw parse_error("input_dim must be positive");
        std::vector<Neuron> neurons;
        for (const json& jn : doc.at("neurons")) {
            Neuron n;
            n.id = jn.at("id").get<int>();
            n.activation = activation_from_name(jn.at("activation").get<std::string>());
            n.bias = jn.at("bias").get<double>();
            for (const json& jt : jn.at("in")) n.incoming.push_back(term_from_json(jt, input_dim));
            neurons.push_back(std::move(n));
        }
        Readout out;
        out.bias = doc.at("output").at("bias").get<double>();
        for (const json& jt : doc.at("output").at("terms")) {
            Term t = term_from_json(jt, input_dim);
            if (is_input_source(t.source))
                throw parse_error("output terms must reference neurons");
            out.terms.push_back(t);
        }
        return Network(input_dim, topo_sort(std::move(neurons)), std::move(out));
    } catch (const json::exception& e) {
        throw parse_error(std::string("malformed network document: ") + e.what());
    }
}

Network load_network(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw parse_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return deserialize_network(ss.str());
}

void save_network(const Network& net, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw parse_error("cannot open " + path + " for writing");
    f << serialize_network(net) << "\n";
}

}  // namespace netmorph
