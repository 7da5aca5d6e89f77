#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "dapac/baseline.hpp"
#include "dapac/client.hpp"
#include "dapac/session.hpp"
#include "dapac/transcript.hpp"

namespace dapac {

struct MeasureResult {
  double rate = 0.0;
  uint64_t download_bits = 0;
  uint64_t equations = 0;
};

// Rate and download accounting for a completed session. Throws if the
// measured totals do not match the closed forms for the transcript's scheme
// (2KL bits and KN(N-1) equations; N*K^(N-1)*L bits for the naive scheme).
MeasureResult measure(const Transcript& transcript);

// A hidden-attribute setting: the values at all positions other than the
// observed server's, ranked lexicographically.
struct PrivacyReport {
  bool structural_equal = true;
  // (hidden setting rank a, rank b) with a < b -> TV estimate in [0, 1]
  std::map<std::pair<uint32_t, uint32_t>, double> tv_distances;
  uint64_t samples = 0;  // per setting; 0 for exhaustive runs

  double max_tv() const;
};

// Exact, randomness-free check that the ordered type sequence server n sees
// is the same for every setting of the hidden attributes (for each fixed
// own-attribute value).
bool privacy_structural_check(const SystemParams& params, int server_index,
                              const ClientFaults& faults = {});

// Sampled check of the query distribution itself. For every pair of hidden
// settings, estimates the total-variation distance between what the server
// sees: the maximum over serialized coordinates (each coefficient bit, each
// chunk index) of the empirical TV between the coordinate's marginals. Any
// projection lower-bounds the joint TV, so a zero-leak client stays near 0
// while a leaking coordinate stands out at height ~1.
PrivacyReport privacy_distribution_test(const SystemParams& params, int server_index,
                                        uint64_t n_samples, RandomSource& rng,
                                        const ClientFaults& faults = {},
                                        uint16_t own_value = 1);

// Exact joint-distribution comparison, enumerating every client coin. Only
// feasible for tiny parameters (coin count <= 24).
PrivacyReport privacy_exhaustive_check(const SystemParams& params, int server_index,
                                       const ClientFaults& faults = {});

// Server-side pad handling faults for the secrecy oracle.
enum class PadFault : uint8_t {
  none = 0,
  reuse = 1,  // two types share one pad
  omit = 2,   // one non-matched type answered unmasked
};

// Literal check of data secrecy at enumerable parameters: for every fixed
// (client coins, desired message), the distribution of the full answer tuple
// over all pad values must be identical for every assignment of the other
// messages. Enumerates everything at N=2; at (3,2) enumerates pads and coins
// but samples databases. Throws if the parameters are too large to
// enumerate.
bool secrecy_bruteforce(const SystemParams& params, const AccessPolicy& v_star,
                        PadFault fault = PadFault::none);

// Runs the honest session except that the deviating server receives the
// query generated for v_bar. Both generations replay the same client
// randomness (queries are deterministic given the coins and the target), so
// v_bar == v* degenerates to the honest protocol exactly. Returns true iff
// exact recovery of the v* message fails. v_bar must agree with v* at the
// deviating server's position.
bool deviating_client_check(const SystemParams& params, const AccessPolicy& v_star,
                            const AccessPolicy& v_bar, int deviating_server,
                            const Rng& rng);

}  // namespace dapac
