#pragma once

#include <vector>

#include "dapac/client.hpp"
#include "dapac/dealer.hpp"
#include "dapac/server.hpp"
#include "dapac/transcript.hpp"

namespace dapac {

struct RetrievalOutcome {
  Message message;
  Transcript transcript;
};

// One replica per server index, all sharing the dealer's database and pads.
std::vector<ServerState> make_servers(const Dealer& dealer);

// Full in-process retrieval: generate queries, answer them locally, decode.
// Throws DecodeError if any server rejects.
RetrievalOutcome run_session(const std::vector<ServerState>& servers,
                             const AccessPolicy& v_star,
                             const std::vector<Credential>& credentials,
                             const SystemParams& params, RandomSource& client_rng);

// Convenience bundle used by the CLI and tests: dealer, servers, and one
// user's credentials, all derived from a single seed via labeled forks.
struct SimulatedSystem {
  SystemParams params;
  Dealer dealer;
  std::vector<ServerState> servers;
  AccessPolicy user_attrs;
  std::vector<Credential> credentials;
  Rng client_rng;

  SimulatedSystem(const SystemParams& params, const AccessPolicy& user_attrs,
                  uint64_t seed);

  RetrievalOutcome retrieve();
};

}  // namespace dapac
