#include "dapac/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dapac/server.hpp"

namespace dapac {

namespace {

// Credentials with blank tokens; query structure and coefficients do not
// depend on token bytes, so the analyzers skip the dealer.
std::vector<Credential> dummy_credentials(const AccessPolicy& v_star,
                                          const SystemParams& params) {
  std::vector<Credential> out;
  for (int n = 1; n <= params.n_servers; ++n)
    out.push_back(Credential{uint8_t(n), v_star.at(n), Token{}});
  return out;
}

// Hidden-attribute settings for an observer at server_index: all assignments
// of the other N-1 positions, ranked lexicographically.
uint64_t n_hidden_settings(const SystemParams& params) {
  uint64_t count = 1;
  for (int i = 1; i < params.n_servers; ++i) count *= uint64_t(params.n_values);
  return count;
}

AccessPolicy hidden_setting(uint64_t rank, int server_index, uint16_t own_value,
                            const SystemParams& params) {
  AccessPolicy v;
  v.values.assign(size_t(params.n_servers), 0);
  v.values[size_t(server_index) - 1] = own_value;
  for (int pos = params.n_servers; pos >= 1; --pos) {
    if (pos == server_index) continue;
    v.values[size_t(pos) - 1] = uint16_t(rank % uint64_t(params.n_values) + 1);
    rank /= uint64_t(params.n_values);
  }
  return v;
}

std::vector<TypeId> type_sequence(const Query& query) {
  std::vector<TypeId> out;
  out.reserve(query.items.size());
  for (const QueryItem& item : query.items) out.push_back(item.type);
  return out;
}

// The residual randomness a server sees once the (checked) fixed structure
// is stripped: every coefficient bit and every chunk index, as one flat
// coordinate vector.
std::vector<uint32_t> view_coordinates(const Query& query) {
  std::vector<uint32_t> out;
  for (const QueryItem& item : query.items) {
    for (size_t i = 0; i < item.coeffs.size(); ++i)
      out.push_back(uint32_t(item.coeffs.get(i)));
    for (const ChunkRef& ref : item.refs) out.push_back(ref.chunk_index);
  }
  return out;
}

// Empirical total variation between two count tables with equal totals.
double tv_from_counts(const std::map<uint32_t, uint64_t>& a,
                      const std::map<uint32_t, uint64_t>& b, uint64_t total) {
  double sum = 0.0;
  auto get = [](const std::map<uint32_t, uint64_t>& m, uint32_t key) -> uint64_t {
    auto it = m.find(key);
    return it == m.end() ? 0 : it->second;
  };
  for (const auto& [key, count] : a)
    sum += std::abs(double(count) - double(get(b, key)));
  for (const auto& [key, count] : b)
    if (!a.count(key)) sum += double(count);
  return sum / (2.0 * double(total));
}

using CoordinateCounts = std::vector<std::map<uint32_t, uint64_t>>;

void accumulate(CoordinateCounts& counts, const std::vector<uint32_t>& coords) {
  if (counts.empty()) counts.resize(coords.size());
  if (counts.size() != coords.size())
    throw Error("query structure changed between samples");
  for (size_t i = 0; i < coords.size(); ++i) ++counts[i][coords[i]];
}

// Max over coordinates of the marginal TV; any projection lower-bounds the
// joint TV, and a leaked attribute shows up as one coordinate at height ~1.
double max_marginal_tv(const CoordinateCounts& a, const CoordinateCounts& b,
                       uint64_t total) {
  double best = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    best = std::max(best, tv_from_counts(a[i], b[i], total));
  return best;
}

}  // namespace

MeasureResult measure(const Transcript& transcript) {
  const SystemParams& params = transcript.params;
  params.validate();
  if (transcript.per_server.size() != size_t(params.n_servers))
    throw Error("incomplete transcript");
  for (const ServerTranscript& st : transcript.per_server)
    if (st.reject != RejectReason::none) throw Error("transcript contains a rejection");

  MeasureResult result;
  result.download_bits = transcript.bits_down_total();
  result.equations = transcript.equations_total();
  result.rate = double(params.msg_len_bits) / double(result.download_bits);

  uint64_t K = uint64_t(params.n_values);
  uint64_t N = uint64_t(params.n_servers);
  uint64_t L = params.msg_len_bits;
  if (transcript.scheme == Scheme::dapac) {
    if (result.download_bits != 2 * K * L)
      throw Error("download does not match the 2KL closed form");
    if (result.equations != K * N * (N - 1))
      throw Error("equation count does not match KN(N-1)");
  } else {
    uint64_t accessible = 1;
    for (uint64_t i = 1; i < N; ++i) accessible *= K;
    if (result.download_bits != N * accessible * L)
      throw Error("download does not match the naive N*K^(N-1)*L closed form");
    if (result.equations != N * accessible)
      throw Error("equation count does not match naive N*K^(N-1)");
  }
  return result;
}

double PrivacyReport::max_tv() const {
  double best = 0.0;
  for (const auto& [pair, tv] : tv_distances) best = std::max(best, tv);
  return best;
}

bool privacy_structural_check(const SystemParams& params, int server_index,
                              const ClientFaults& faults) {
  params.validate();
  if (server_index < 1 || server_index > params.n_servers)
    throw Error("server index out of range");

  for (uint16_t own = 1; own <= params.n_values; ++own) {
    std::optional<std::vector<TypeId>> reference;
    for (uint64_t rank = 0; rank < n_hidden_settings(params); ++rank) {
      AccessPolicy v = hidden_setting(rank, server_index, own, params);
      Rng rng(0x5117ULL + rank);  // structure must not depend on the coins
      QuerySet qs = generate_queries_faulty(v, dummy_credentials(v, params), params,
                                            rng, faults);
      std::vector<TypeId> types = type_sequence(qs.queries[size_t(server_index) - 1]);
      if (!reference)
        reference = std::move(types);
      else if (*reference != types)
        return false;
    }
  }
  return true;
}

PrivacyReport privacy_distribution_test(const SystemParams& params, int server_index,
                                        uint64_t n_samples, RandomSource& rng,
                                        const ClientFaults& faults, uint16_t own_value) {
  params.validate();
  if (server_index < 1 || server_index > params.n_servers)
    throw Error("server index out of range");
  if (own_value < 1 || own_value > params.n_values)
    throw Error("own value out of range");

  PrivacyReport report;
  report.samples = n_samples;
  report.structural_equal = privacy_structural_check(params, server_index, faults);

  uint64_t n_settings = n_hidden_settings(params);
  std::vector<CoordinateCounts> counts(n_settings);
  std::vector<bool> structure_broken(n_settings, false);
  for (uint64_t rank = 0; rank < n_settings; ++rank) {
    AccessPolicy v = hidden_setting(rank, server_index, own_value, params);
    std::vector<Credential> creds = dummy_credentials(v, params);
    for (uint64_t s = 0; s < n_samples; ++s) {
      QuerySet qs = generate_queries_faulty(v, creds, params, rng, faults);
      try {
        accumulate(counts[rank], view_coordinates(qs.queries[size_t(server_index) - 1]));
      } catch (const Error&) {
        structure_broken[rank] = true;
        break;
      }
    }
  }

  for (uint64_t a = 0; a < n_settings; ++a) {
    for (uint64_t b = a + 1; b < n_settings; ++b) {
      double tv;
      if (structure_broken[a] || structure_broken[b] ||
          counts[a].size() != counts[b].size()) {
        tv = 1.0;  // the structure itself distinguishes the settings
      } else {
        tv = max_marginal_tv(counts[a], counts[b], n_samples);
      }
      report.tv_distances[{uint32_t(a), uint32_t(b)}] = tv;
    }
  }
  return report;
}

namespace {

// Bits one honest query generation consumes. Measured by running on a
// zero tape; must be constant over the tape for enumeration to be exact,
// which holds whenever every draw is a plain bit (n_chunks == 1).
size_t measure_tape_length(const AccessPolicy& v, const SystemParams& params,
                           const ClientFaults& faults) {
  BitTape tape(0, 4096);
  generate_queries_faulty(v, dummy_credentials(v, params), params, tape, faults);
  return tape.consumed();
}

}  // namespace

PrivacyReport privacy_exhaustive_check(const SystemParams& params, int server_index,
                                       const ClientFaults& faults) {
  params.validate();
  if (params.n_chunks() != 1)
    throw Error("exhaustive privacy check requires N = 2 (single chunk)");

  PrivacyReport report;
  report.samples = 0;
  report.structural_equal = privacy_structural_check(params, server_index, faults);

  uint64_t n_settings = n_hidden_settings(params);
  for (uint16_t own = 1; own <= params.n_values; ++own) {
    // exact distribution of the server's view over all client coins
    std::vector<std::map<std::string, uint64_t>> dists(n_settings);
    for (uint64_t rank = 0; rank < n_settings; ++rank) {
      AccessPolicy v = hidden_setting(rank, server_index, own, params);
      std::vector<Credential> creds = dummy_credentials(v, params);
      size_t tape_len = measure_tape_length(v, params, faults);
      if (tape_len > 24) throw Error("client coin space too large to enumerate");
      for (uint64_t coins = 0; coins < (uint64_t(1) << tape_len); ++coins) {
        BitTape tape(coins, tape_len);
        QuerySet qs = generate_queries_faulty(v, creds, params, tape, faults);
        if (tape.consumed() != tape_len)
          throw Error("coin consumption varies; enumeration would be biased");
        std::string key;
        for (uint32_t c : view_coordinates(qs.queries[size_t(server_index) - 1]))
          key += char('0' + int(c));
        ++dists[rank][key];
      }
    }
    for (uint64_t a = 0; a < n_settings; ++a) {
      for (uint64_t b = a + 1; b < n_settings; ++b) {
        double sum = 0.0;
        uint64_t total = 0;
        for (const auto& [key, count] : dists[a]) total += count;
        for (const auto& [key, count] : dists[a]) {
          auto it = dists[b].find(key);
          sum += std::abs(double(count) - double(it == dists[b].end() ? 0 : it->second));
        }
        for (const auto& [key, count] : dists[b])
          if (!dists[a].count(key)) sum += double(count);
        double tv = sum / (2.0 * double(total));
        auto key = std::make_pair(uint32_t(a), uint32_t(b));
        auto it = report.tv_distances.find(key);
        if (it == report.tv_distances.end() || it->second < tv)
          report.tv_distances[key] = tv;  // worst case over own values
      }
    }
  }
  return report;
}

namespace {

struct SecrecyScale {
  uint64_t db_assignments;   // enumerated or sampled other-message values
  uint64_t pad_assignments;  // always enumerated
  bool sample_databases;
};

// Answers for all servers under explicit database and pad assignments.
std::vector<Answer> answer_all(const QuerySet& qs, const MessageDatabase& db,
                               const CommonRandomness& pads,
                               const SystemParams& params, PadFault fault) {
  const CommonRandomness* effective = &pads;
  CommonRandomness mutated;
  if (fault != PadFault::none) {
    mutated = pads;
    // pick victim types from the first server's query so the fault is live
    const Query& q0 = qs.queries.front();
    if (fault == PadFault::reuse) {
      mutated.pads[q0.items[1].type] = mutated.pads[q0.items[0].type];
    } else {
      // omitting the pad must unmask a combination over non-desired
      // messages, so target a type that appears at exactly one server
      std::map<TypeId, int> uses;
      for (const Query& q : qs.queries)
        for (const QueryItem& item : q.items) ++uses[item.type];
      for (const QueryItem& item : q0.items) {
        if (uses[item.type] == 1) {
          mutated.pads[item.type] = Chunk(params.chunk_len_bits());
          break;
        }
      }
    }
    effective = &mutated;
  }

  std::vector<Answer> answers;
  for (int n = 1; n <= params.n_servers; ++n) {
    const Query& query = qs.queries[size_t(n) - 1];
    Answer answer;
    for (const QueryItem& item : query.items) {
      std::vector<Chunk> chunks;
      chunks.reserve(item.refs.size());
      for (const ChunkRef& ref : item.refs)
        chunks.push_back(message_chunk(db.at(ref.policy), ref.chunk_index, params));
      Chunk masked = xor_combine(item.coeffs, chunks);
      masked.xor_with(effective->pads.at(item.type));
      answer.items.push_back(std::move(masked));
    }
    answers.push_back(std::move(answer));
  }
  return answers;
}

BitString bits_from_value(uint64_t value, size_t nbits) {
  BitString out(nbits);
  for (size_t i = 0; i < nbits; ++i) out.set(i, (value >> i) & 1);
  return out;
}

std::string answer_key(const std::vector<Answer>& answers) {
  std::string key;
  for (const Answer& answer : answers)
    for (const Chunk& chunk : answer.items) key += chunk.to_hex();
  return key;
}

}  // namespace

bool secrecy_bruteforce(const SystemParams& params, const AccessPolicy& v_star,
                        PadFault fault) {
  params.validate();
  policy_rank(v_star, params);

  uint64_t L = params.msg_len_bits;
  uint64_t pad_bits = params.n_types() * params.chunk_len_bits();
  uint64_t other_bits = (params.n_policies() - 1) * L;
  bool enumerate_dbs = params.n_servers == 2 && other_bits <= 8 && L <= 4;
  bool small_sampled = params.n_servers == 3 && params.n_values == 2 && L <= 3;
  if (pad_bits > 16 || (!enumerate_dbs && !small_sampled))
    throw Error("parameters too large for the secrecy enumeration");

  uint64_t db_assignments = enumerate_dbs ? (uint64_t(1) << other_bits) : 24;
  uint64_t desired_values = enumerate_dbs ? (uint64_t(1) << L) : 4;
  Rng sample_rng(0xD5ECULL);

  std::vector<AccessPolicy> policies = enumerate_policies(params);
  std::vector<Credential> creds = dummy_credentials(v_star, params);

  // client coins: enumerate when tiny, otherwise a few sampled draws
  std::vector<uint64_t> coin_values;
  size_t tape_len = 0;
  if (params.n_servers == 2) {
    BitTape probe(0, 4096);
    generate_queries(v_star, creds, params, probe);
    tape_len = probe.consumed();
    if (tape_len > 20) throw Error("client coin space too large");
    for (uint64_t c = 0; c < (uint64_t(1) << tape_len); ++c) coin_values.push_back(c);
  } else {
    coin_values = {1, 2, 3, 4, 5};
  }

  for (uint64_t coins : coin_values) {
    QuerySet qs = [&] {
      if (params.n_servers == 2) {
        BitTape tape(coins, tape_len);
        QuerySet q = generate_queries(v_star, creds, params, tape);
        if (tape.consumed() != tape_len)
          throw Error("coin consumption varies; enumeration would be biased");
        return q;
      }
      Rng rng = Rng(coins).fork("secrecy-client");
      return generate_queries(v_star, creds, params, rng);
    }();

    for (uint64_t desired = 0; desired < desired_values; ++desired) {
      BitString desired_msg =
          enumerate_dbs ? bits_from_value(desired, L) : sample_rng.bits(L);

      std::optional<std::map<std::string, uint64_t>> reference;
      for (uint64_t assignment = 0; assignment < db_assignments; ++assignment) {
        // fixed desired message, varying others
        std::vector<Message> messages;
        uint64_t rest = assignment;
        for (const AccessPolicy& policy : policies) {
          if (policy == v_star) {
            messages.push_back(desired_msg);
          } else if (enumerate_dbs) {
            messages.push_back(bits_from_value(rest & ((uint64_t(1) << L) - 1), L));
            rest >>= L;
          } else {
            messages.push_back(sample_rng.bits(L));
          }
        }
        MessageDatabase db(params, std::move(messages));

        std::map<std::string, uint64_t> dist;
        for (uint64_t pad_value = 0; pad_value < (uint64_t(1) << pad_bits); ++pad_value) {
          CommonRandomness pads;
          uint64_t rest_pads = pad_value;
          for (const TypeId& type : enumerate_types(params)) {
            pads.pads.emplace(type,
                              bits_from_value(rest_pads & ((uint64_t(1) << params.chunk_len_bits()) - 1),
                                              params.chunk_len_bits()));
            rest_pads >>= params.chunk_len_bits();
          }
          ++dist[answer_key(answer_all(qs, db, pads, params, fault))];
        }

        if (!reference)
          reference = std::move(dist);
        else if (*reference != dist)
          return false;  // answers depend on the other messages
      }
    }
  }
  return true;
}

bool deviating_client_check(const SystemParams& params, const AccessPolicy& v_star,
                            const AccessPolicy& v_bar, int deviating_server,
                            const Rng& rng) {
  params.validate();
  policy_rank(v_star, params);
  policy_rank(v_bar, params);
  if (deviating_server < 1 || deviating_server > params.n_servers)
    throw Error("server index out of range");
  if (v_bar.at(deviating_server) != v_star.at(deviating_server))
    throw Error("deviating query must still match the verified attribute");

  Rng dealer_rng = rng.fork("deviate-dealer");
  Dealer dealer(params, std::nullopt, dealer_rng);
  Rng cred_rng = rng.fork("deviate-credentials");
  std::vector<Credential> creds = dealer.issue_credentials(v_star, cred_rng);
  std::vector<ServerState> servers = make_servers(dealer);

  // the deviating generation reuses the real tokens but claims v_bar's
  // values; only the deviating server's query is ever sent, and there the
  // two vectors agree, so that credential is the legitimate one
  std::vector<Credential> creds_bar = creds;
  for (int n = 1; n <= params.n_servers; ++n)
    creds_bar[size_t(n) - 1].value = v_bar.at(n);

  // identical coin streams: the queries are deterministic given the coins
  // and the target, so v_bar == v_star reproduces the honest session exactly
  Rng coins_star = rng.fork("deviate-coins");
  Rng coins_bar = rng.fork("deviate-coins");
  QuerySet honest = generate_queries(v_star, creds, params, coins_star);
  QuerySet deviating = generate_queries(v_bar, creds_bar, params, coins_bar);

  std::vector<Answer> answers;
  for (int n = 1; n <= params.n_servers; ++n) {
    const Query& query = (n == deviating_server)
                             ? deviating.queries[size_t(n) - 1]
                             : honest.queries[size_t(n) - 1];
    answers.push_back(answer_query(servers[size_t(n) - 1], query));
  }

  try {
    Message decoded = decode(honest.plan, answers, params);
    return decoded != dealer.system().db.at(v_star);
  } catch (const DecodeError&) {
    return true;  // a rejected answer also defeats recovery
  }
}

}  // namespace dapac
