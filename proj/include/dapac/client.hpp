#pragma once

#include <map>
#include <utility>
#include <vector>

#include "dapac/protocol.hpp"
#include "dapac/rng.hpp"

namespace dapac {

using ServerPair = std::pair<int, int>;  // (m, n), m < n, 1-based

// Where the two halves of one pair's chunk sit in the answers.
struct PairDecode {
  size_t item_at_m = 0;  // 0-based item index in server m's answer
  size_t item_at_n = 0;
  size_t gamma = 0;      // 0-based position of the desired policy in the shared refs
};

// The client's private bookkeeping: which server pair yields which chunk of
// the desired message, where those items sit, and the chunk indices drawn
// for every message (kept so the analyzers can audit the permutation).
struct RetrievalPlan {
  std::map<ServerPair, int> pair_chunk;  // bijection onto [1, n_chunks]
  std::map<ServerPair, PairDecode> pair_items;
  std::map<AccessPolicy, std::vector<uint16_t>> chunk_assignments;  // in draw order
};

struct QuerySet {
  std::vector<Query> queries;  // one per server, index n-1
  RetrievalPlan plan;
};

// Deliberate protocol deviations, injected only by the verification harness
// to confirm the analyzers catch broken clients. The honest path never sets
// any of these.
struct ClientFaults {
  // Drop items whose type already appeared at a lower server.
  bool skip_matched_types = false;
  // Overwrite the first coefficient bit at every server with the indicator
  // (v*_h == 1), h = lowest position other than the server's own.
  bool leak_attribute = false;
  // Assign the desired message's chunk indices in fixed ascending order
  // instead of drawing a random injection.
  bool fixed_desired_chunks = false;
};

// Build the N per-server queries for attribute vector v* plus the private
// plan needed to decode the answers. One credential per server, each
// matching v* at its position.
QuerySet generate_queries(const AccessPolicy& v_star,
                          const std::vector<Credential>& credentials,
                          const SystemParams& params, RandomSource& rng);

// Same, with harness-injected deviations.
QuerySet generate_queries_faulty(const AccessPolicy& v_star,
                                 const std::vector<Credential>& credentials,
                                 const SystemParams& params, RandomSource& rng,
                                 const ClientFaults& faults);

class DecodeError : public Error {
public:
  DecodeError(int server_index, RejectReason reason);
  int server_index() const { return server_index_; }
  RejectReason reason() const { return reason_; }

private:
  int server_index_;
  RejectReason reason_;
};

// XOR the two answer items of each server pair to recover one chunk of the
// desired message, then join the chunks in index order. Throws DecodeError
// naming the offending server if any answer was rejected.
Message decode(const RetrievalPlan& plan, const std::vector<Answer>& answers,
               const SystemParams& params);

}  // namespace dapac
