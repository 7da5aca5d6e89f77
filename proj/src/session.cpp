#include "dapac/session.hpp"

#include "dapac/wire.hpp"

namespace dapac {

std::vector<ServerState> make_servers(const Dealer& dealer) {
  const SystemParams& params = dealer.system().params;
  std::vector<ServerState> servers;
  servers.reserve(size_t(params.n_servers));
  for (int n = 1; n <= params.n_servers; ++n)
    servers.push_back(ServerState{n, params, dealer.db(), dealer.pads(),
                                  dealer.token_table(n)});
  return servers;
}

RetrievalOutcome run_session(const std::vector<ServerState>& servers,
                             const AccessPolicy& v_star,
                             const std::vector<Credential>& credentials,
                             const SystemParams& params, RandomSource& client_rng) {
  if (servers.size() != size_t(params.n_servers))
    throw Error("need one server per position");

  QuerySet qs = generate_queries(v_star, credentials, params, client_rng);

  Transcript transcript;
  transcript.scheme = Scheme::dapac;
  transcript.params = params;
  std::vector<Answer> answers;
  answers.reserve(qs.queries.size());
  for (int n = 1; n <= params.n_servers; ++n) {
    const Query& query = qs.queries[size_t(n) - 1];
    Answer answer = answer_query(servers[size_t(n) - 1], query);

    ServerTranscript st;
    st.query_bytes = encode_query(query, params);
    st.answer_bytes = encode_frame(answer_frame(answer, params));
    st.bits_up = st.query_bytes.size() * 8;
    st.bits_down = uint64_t(answer.items.size()) * params.chunk_len_bits();
    st.equations = answer.items.size();
    st.reject = answer.reject;
    transcript.per_server.push_back(std::move(st));
    answers.push_back(std::move(answer));
  }

  Message message = decode(qs.plan, answers, params);
  return RetrievalOutcome{std::move(message), std::move(transcript)};
}

SimulatedSystem::SimulatedSystem(const SystemParams& params_in,
                                 const AccessPolicy& user_attrs_in, uint64_t seed)
    : params(params_in),
      dealer([&] {
        Rng dealer_rng = Rng(seed).fork("dealer");
        return Dealer(params_in, std::nullopt, dealer_rng);
      }()),
      user_attrs(user_attrs_in),
      client_rng(Rng(seed).fork("client")) {
  Rng credential_rng = Rng(seed).fork("credentials");
  credentials = dealer.issue_credentials(user_attrs, credential_rng);
  servers = make_servers(dealer);
}

RetrievalOutcome SimulatedSystem::retrieve() {
  return run_session(servers, user_attrs, credentials, params, client_rng);
}

}  // namespace dapac
