#include "dapac/client.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace dapac {

namespace {

struct FirstEmit {
  int server = 0;       // 1-based, lower server of the pair
  size_t item_index = 0;
  CoefficientVector coeffs;
  std::vector<ChunkRef> refs;
};

// Per-message chunk-index state: a uniform random injection from appearance
// slots into [1, n_chunks], drawn lazily without replacement. Matched-pair
// appearances reuse the first emitter's draw, so the two servers of a pair
// see identical indices while every other slot of the message stays
// distinct.
class ChunkIndexDraw {
public:
  ChunkIndexDraw(const SystemParams& params, RetrievalPlan& plan)
      : n_chunks_(params.n_chunks()), plan_(plan) {}

  uint16_t draw(const AccessPolicy& policy, RandomSource& rng, bool fixed_order) {
    std::set<uint16_t>& used = used_[policy];
    if (int(used.size()) >= n_chunks_)
      throw Error("message has more appearance slots than chunks");
    uint64_t remaining = uint64_t(n_chunks_) - used.size();
    uint64_t skip = fixed_order ? 0 : rng.uniform(remaining);
    uint16_t index = 1;
    for (;; ++index) {
      if (used.count(index)) continue;
      if (skip == 0) break;
      --skip;
    }
    used.insert(index);
    plan_.chunk_assignments[policy].push_back(index);
    return index;
  }

private:
  int n_chunks_;
  RetrievalPlan& plan_;
  std::map<AccessPolicy, std::set<uint16_t>> used_;
};

void check_inputs(const AccessPolicy& v_star, const std::vector<Credential>& credentials,
                  const SystemParams& params) {
  params.validate();
  policy_rank(v_star, params);  // validates arity and value ranges
  if (credentials.size() != size_t(params.n_servers))
    throw Error("need one credential per server");
  for (int n = 1; n <= params.n_servers; ++n) {
    const Credential& cred = credentials[size_t(n) - 1];
    if (cred.position != n) throw Error("credential position mismatch");
    if (cred.value != v_star.at(n)) throw Error("credential value does not match attributes");
  }
}

}  // namespace

QuerySet generate_queries_faulty(const AccessPolicy& v_star,
                                 const std::vector<Credential>& credentials,
                                 const SystemParams& params, RandomSource& rng,
                                 const ClientFaults& faults) {
  check_inputs(v_star, credentials, params);

  const int n_servers = params.n_servers;
  const int n_values = params.n_values;
  const uint64_t refs_per_item = params.policies_per_type();

  QuerySet out;
  out.plan = {};
  ChunkIndexDraw indices(params, out.plan);
  std::map<TypeId, FirstEmit> emitted;

  for (int n = 1; n <= n_servers; ++n) {
    Query query;
    query.credential = credentials[size_t(n) - 1];

    for (int k = 1; k <= n_values; ++k) {
      for (int j = 1; j <= n_servers; ++j) {
        if (j == n) continue;
        TypeId type = TypeId::make(n, v_star.at(n), j, k);

        QueryItem item;
        item.type = type;
        auto first = emitted.find(type);
        if (first != emitted.end()) {
          if (faults.skip_matched_types) continue;
          // matched pair: reuse the first emitter's refs verbatim and flip
          // the coefficient at the desired message's position
          const FirstEmit& emit = first->second;
          item.refs = emit.refs;
          item.coeffs = emit.coeffs;
          size_t gamma = 0;
          while (gamma < item.refs.size() && item.refs[gamma].policy != v_star) ++gamma;
          if (gamma == item.refs.size())
            throw Error("matched type does not contain the desired policy");
          item.coeffs.flip(gamma);

          ServerPair pair{emit.server, n};
          out.plan.pair_items[pair] =
              PairDecode{emit.item_index, query.items.size(), gamma};
          out.plan.pair_chunk[pair] = item.refs[gamma].chunk_index;
        } else {
          item.coeffs = rng.bits(refs_per_item);
          for (const AccessPolicy& policy : policies_of_type(type, params)) {
            bool fixed = faults.fixed_desired_chunks && policy == v_star;
            item.refs.push_back(ChunkRef{policy, indices.draw(policy, rng, fixed)});
          }
          emitted.emplace(type,
                          FirstEmit{n, query.items.size(), item.coeffs, item.refs});
        }
        query.items.push_back(std::move(item));
      }
    }

    if (faults.leak_attribute && !query.items.empty()) {
      int h = (n == 1) ? 2 : 1;
      query.items.front().coeffs.set(0, v_star.at(h) == 1);
    }
    out.queries.push_back(std::move(query));
  }
  return out;
}

QuerySet generate_queries(const AccessPolicy& v_star,
                          const std::vector<Credential>& credentials,
                          const SystemParams& params, RandomSource& rng) {
  return generate_queries_faulty(v_star, credentials, params, rng, ClientFaults{});
}

DecodeError::DecodeError(int server_index, RejectReason reason)
    : Error("server " + std::to_string(server_index) + " rejected the query: " +
            to_string(reason)),
      server_index_(server_index),
      reason_(reason) {}

Message decode(const RetrievalPlan& plan, const std::vector<Answer>& answers,
               const SystemParams& params) {
  if (answers.size() != size_t(params.n_servers)) throw Error("need one answer per server");
  for (int n = 1; n <= params.n_servers; ++n) {
    const Answer& answer = answers[size_t(n) - 1];
    if (!answer.accepted()) throw DecodeError(n, answer.reject);
  }
  if (plan.pair_items.size() != size_t(params.n_chunks()))
    throw Error("plan does not cover every server pair");

  std::vector<Chunk> chunks(size_t(params.n_chunks()));
  for (const auto& [pair, where] : plan.pair_items) {
    const auto& [m, n] = pair;
    const Answer& at_m = answers[size_t(m) - 1];
    const Answer& at_n = answers[size_t(n) - 1];
    if (where.item_at_m >= at_m.items.size() || where.item_at_n >= at_n.items.size())
      throw Error("answer item missing for a server pair");
    int chunk_index = plan.pair_chunk.at(pair);
    // pads cancel, aligned interference cancels, the flipped coefficient
    // leaves exactly this chunk of the desired message
    chunks[size_t(chunk_index) - 1] =
        at_m.items[where.item_at_m] ^ at_n.items[where.item_at_n];
  }
  return join_chunks(chunks, params);
}

}  // namespace dapac
