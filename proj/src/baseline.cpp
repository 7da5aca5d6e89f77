#include "dapac/baseline.hpp"

#include "dapac/client.hpp"

namespace dapac {

const BitString& ShareDatabase::share(int server_index, const AccessPolicy& policy) const {
  if (server_index < 1 || server_index > params.n_servers)
    throw Error("server index out of range");
  return shares[size_t(server_index) - 1][policy_rank(policy, params)];
}

ShareDatabase naive_setup(const MessageDatabase& db, const SystemParams& params,
                          RandomSource& rng) {
  params.validate();
  if (db.params() != params) throw Error("database parameters mismatch");

  ShareDatabase out;
  out.params = params;
  out.shares.assign(size_t(params.n_servers),
                    std::vector<BitString>(size_t(params.n_policies())));
  for (uint64_t rank = 0; rank < params.n_policies(); ++rank) {
    BitString last = db.messages()[rank];
    for (int n = 1; n < params.n_servers; ++n) {
      BitString share = rng.bits(params.msg_len_bits);
      last.xor_with(share);
      out.shares[size_t(n) - 1][rank] = std::move(share);
    }
    out.shares[size_t(params.n_servers) - 1][rank] = std::move(last);
  }
  return out;
}

NaiveResult naive_retrieve(const AccessPolicy& v_star,
                           const std::vector<Credential>& credentials,
                           const std::vector<NaiveServer>& servers) {
  if (servers.empty()) throw Error("no servers");
  const SystemParams& params = servers.front().params;
  policy_rank(v_star, params);
  if (credentials.size() != size_t(params.n_servers) ||
      servers.size() != size_t(params.n_servers))
    throw Error("need one credential and one server per position");

  Transcript transcript;
  transcript.scheme = Scheme::naive;
  transcript.params = params;

  Message message(params.msg_len_bits);
  for (int n = 1; n <= params.n_servers; ++n) {
    const NaiveServer& server = servers[size_t(n) - 1];
    const Credential& cred = credentials[size_t(n) - 1];

    auto it = server.tokens.find(cred.token);
    if (it == server.tokens.end() || it->second.first != n ||
        it->second.second != cred.value)
      throw DecodeError(n, RejectReason::bad_credential);

    // all K^(N-1) policies matching the verified attribute
    ServerTranscript st;
    for (const AccessPolicy& policy : enumerate_policies(params)) {
      if (policy.at(n) != cred.value) continue;
      const BitString& share = server.shares->share(n, policy);
      if (policy == v_star) message.xor_with(share);
      st.bits_down += share.size();
      st.equations += 1;
    }
    st.bits_up = cred.token.size() * 8;
    transcript.per_server.push_back(std::move(st));
  }
  return NaiveResult{std::move(message), std::move(transcript)};
}

}  // namespace dapac
