#pragma once

#include <memory>
#include <vector>

#include "dapac/dealer.hpp"
#include "dapac/protocol.hpp"
#include "dapac/transcript.hpp"

namespace dapac {

// N-of-N additive sharing of every message: XOR of all N servers' shares of
// a policy equals the message, and any N-1 shares are jointly uniform.
struct ShareDatabase {
  SystemParams params;
  // shares[n-1][policy rank] -> L-bit share held by server n
  std::vector<std::vector<BitString>> shares;

  const BitString& share(int server_index, const AccessPolicy& policy) const;
};

// For each policy: N-1 uniform shares plus one share that completes the XOR.
ShareDatabase naive_setup(const MessageDatabase& db, const SystemParams& params,
                          RandomSource& rng);

struct NaiveServer {
  int index = 0;  // 1-based
  SystemParams params;
  std::shared_ptr<const ShareDatabase> shares;
  TokenTable tokens;
};

struct NaiveResult {
  Message message;
  Transcript transcript;
};

// Download from each server the shares of every accessible policy (the
// K^(N-1) policies matching the verified attribute); only the desired
// message accumulates all N shares, which XOR back to the message.
NaiveResult naive_retrieve(const AccessPolicy& v_star,
                           const std::vector<Credential>& credentials,
                           const std::vector<NaiveServer>& servers);

}  // namespace dapac
