#ifndef NETMORPH_SERIALIZE_HPP
#define NETMORPH_SERIALIZE_HPP

#include <string>

#include "netmorph/network.hpp"

namespace netmorph {

// Versioned network document:
//   {"version":1,"input_dim":D,
//    "neurons":[{"id":i,"activation":"relu","bias":b,"in":[["x0",w],[id,w],...]}],
//    "output":{"bias":b,"terms":[[id,w],...]}}
// Weights are emitted as shortest round-trip decimals, so the byte round trip
// is lossless. Neurons may arrive in any order; deserialization sorts them
// topologically and rejects cycles.
std::string serialize_network(const Network& net);
Network deserialize_network(const std::string& text);

Network load_network(const std::string& path);
void save_network(const Network& net, const std::string& path);

}  // namespace netmorph

#endif
