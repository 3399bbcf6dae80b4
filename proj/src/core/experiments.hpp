#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "core/choi.hpp"
#include "core/dense.hpp"
#include "core/sampling.hpp"

namespace rpt {

// Flat key=value experiment configuration.  Keys are sorted, so the hash and
// the serialized form are canonical; identical config + seed reproduces
// byte-identical CSV output.  The hash covers only result-determining keys
// (threads and the output paths are excluded), so varying the thread count or
// an artifact destination leaves the whole output file unchanged.
class RunConfig {
  public:
    static RunConfig from_file(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_str(const std::string& key, const std::string& fallback) const;
    long get_long(const std::string& key, long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::vector<long> get_long_list(const std::string& key,
                                    const std::vector<long>& fallback) const;

    std::uint64_t seed() const { return static_cast<std::uint64_t>(get_long("seed", 1)); }
    int threads() const;

    // FNV-1a over the canonical "key=value\n" serialization.
    std::uint64_t hash() const;
    std::string serialize() const;

  private:
    std::map<std::string, std::string> kv_;
};

namespace expt {

// Builtin state tokens: zero:<n>, plus:<n>, ghz:<n>, bell-pairs:<n>,
// kuniform:<n,k>.  Anything else is treated as a state-file path.
StateVector state_from_token(const std::string& token);

// Density-operator tokens: uniform:<d>, orthomix:<d>,<nu>, state:<token>,
// or an operator-file path.
DenseOperator density_from_token(const std::string& token);

// Preparation-strategy tokens: haar-lbit, fixed-rotated:<state>,
// correlated-identical, kuniform:<n,k>.  n and ell supply the block shape
// for the haar-lbit and correlated samplers.
SamplerSpec sampler_from_token(const std::string& token, int n, int ell);

// Channel tokens: unitary:<file>, heisenberg:<n,J,h,t>, kraus:<file>.
ChoiMatrix channel_from_token(const std::string& token);

// Subcommand runners; each writes one CSV document to `out`.
void run_converge(const RunConfig& cfg, std::ostream& out);
void run_weights(const RunConfig& cfg, std::ostream& out);
void run_scramble(const RunConfig& cfg, std::ostream& out);
void run_tomography(const RunConfig& cfg, std::ostream& out);
void run_fisher(const RunConfig& cfg, std::ostream& out);
void run_fidelity(const RunConfig& cfg, std::ostream& out);

// Dispatch by subcommand name; unknown names raise std::invalid_argument.
void run(const std::string& subcommand, const RunConfig& cfg, std::ostream& out);

}  // namespace expt

}  // namespace rpt
