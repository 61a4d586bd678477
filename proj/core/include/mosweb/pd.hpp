#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>

#include "mosweb/centralizer.hpp"
#include "mosweb/eigen.hpp"

namespace mosweb {

// zeta-space truncation matching a (xi,eta)-space truncation D:
// xi_j zeta^A has map degree 2|A| + 1
inline int zeta_trunc(int map_trunc) { return (map_trunc - 1) / 2; }

// substitute zeta_k = xi_k eta_k into a p-variable series, yielding a
// 2p-variable series (degrees double)
template <class K>
series<K> lift_zeta(const series<K>& s, int map_trunc) {
    const int p = s.dim();
    series<K> out(2 * p, map_trunc);
    for (auto& [a, c] : s.terms()) {
        multi_index m(2 * p);
        for (int i = 0; i < p; ++i) {
            m[i] = a[i];
            m[p + i] = a[i];
        }
        out.add_term(m, c);
    }
    return out;
}

// one small divisor mu^{P-Q} - mu_j, deduplicated by (j, P-Q)
template <class K>
struct divisor_record {
    int j = 0;  // 1-based in reports
    multi_index P, Q;
    std::array<int, multi_index::max_dim> exponent{};  // P - Q
    K value;
};

template <class K>
class divisor_log {
public:
    void add(int j, const multi_index& P, const multi_index& Q, K value) {
        std::array<int, multi_index::max_dim> expnt{};
        for (int i = 0; i < P.dim; ++i) expnt[i] = (int)P[i] - (int)Q[i];
        auto key = std::make_pair(j, expnt);
        if (seen_.count(key)) return;
        seen_.insert(key);
        records_.push_back({j, P, Q, expnt, std::move(value)});
    }
    const std::vector<divisor_record<K>>& records() const { return records_; }
    bool empty() const { return records_.empty(); }
    void merge(const divisor_log& o) {
        for (auto& r : o.records_) add(r.j, r.P, r.Q, r.value);
    }

private:
    std::set<std::pair<int, std::array<int, multi_index::max_dim>>> seen_;
    std::vector<divisor_record<K>> records_;
};

// tau1 (holomorphic involution), rho (anti-holomorphic involution in normal
// form), and optionally an explicit tau2 when the reality relation is not
// assumed; sigma = tau1 tau2
template <class K>
struct reversible_pair {
    int p = 0;
    series_map<K> tau1;
    series_map<K> rho;
    std::optional<series_map<K>> tau2;  // default: rho tau1 rho

    series_map<K> get_tau2() const {
        return tau2 ? *tau2 : conjugate_by_rho(tau1, rho);
    }
    series_map<K> sigma() const { return compose(tau1, get_tau2()); }
};

template <class K>
struct pd_result {
    std::vector<K> mu;            // diagonal multipliers of the linear part
    series_map<K> psi;            // unique normalized map in C^c(S)
    series_map<K> sigma_star;     // psi^{-1} sigma psi, in C(S)
    std::vector<series<K>> M, N;  // sigma_star multipliers, series in zeta
    series_map<K> tau1_star, tau2_star;
    std::vector<series<K>> lambda1, lambda2;  // tau_i^* multipliers
    divisor_log<K> divisors;
};

// extract the multipliers mu_j from the linear part, verifying diag(mu, mu^{-1})
template <class K>
std::vector<K> sigma_multipliers(const series_map<K>& sigma, int p);

// non-resonance gate: mu^Q != 1 for all 0 < |Q| <= height
template <class K>
void check_nonresonant(const std::vector<K>& mu, int height);

// Poincare-Dulac normalization of a bare map sigma with diagonal linear part
template <class K>
struct pd_sigma_result {
    std::vector<K> mu;
    series_map<K> psi;
    series_map<K> sigma_star;
    std::vector<series<K>> M, N;
    divisor_log<K> divisors;
};
template <class K>
pd_sigma_result<K> pd_normalize_sigma(const series_map<K>& sigma, int p);

// Poincare-Dulac normalization of sigma by the unique normalized Psi in C^c(S)
template <class K>
pd_result<K> pd_normalize(const reversible_pair<K>& pair);

// the same degree-by-degree solver on a raw sigma, restricted to degrees
// [2, upto]; returns the composed (unnormalized) transform and conjugate
template <class K>
struct pd_stage {
    series_map<K> transform;  // composition of the degreewise corrections
    series_map<K> sigma_cur;
    divisor_log<K> divisors;
};
template <class K>
pd_stage<K> pd_sweep(const series_map<K>& sigma, const std::vector<K>& mu, int p, int upto,
                     divisor_log<K>* log = nullptr);

template <class K>
struct pair_result {
    series_map<K> psi0;                        // in C^c(T1,T2)
    series_map<K> tau1_t, tau2_t;              // the pair-normalized involutions
    std::vector<series<K>> lambda1, lambda2;   // with Lambda2 = Lambda1^{-1}
    std::vector<series<K>> M;                  // = Lambda1^2
};
template <class K>
pair_result<K> pair_normalize(const pd_result<K>& pd, int p);

// log M per the block typing: log(M_j / mu_j) on elliptic indices,
// -i log(M_j / mu_j) otherwise; a map on zeta-space
template <class K>
std::vector<series<K>> log_m(const std::vector<series<K>>& M, const typing_info& ty,
                             mpfr_prec_t prec = 256);

// hyperplane-preserving normalization of F = I + f on C^p
template <class K>
struct hyperplane_result {
    series_map<K> psi;   // psi_j = zeta_j (1 + g_j), unique
    series_map<K> fhat;  // F o psi with d fhat_j / d zeta_j = 0
};
template <class K>
hyperplane_result<K> hyperplane_normalize(const series_map<K>& F);

template <class K>
struct unf_result {
    pd_result<K> pd;
    pair_result<K> pair;
    std::vector<K> dilation;            // permitted zeta-dilation (empty if identity)
    series_map<K> zeta_psi;             // hyperplane normalizer on zeta-space
    std::vector<series<K>> Mhat;        // unique normal form data
    std::vector<series<K>> lambda1hat;
    series_map<K> sigma_hat, tau1_hat, tau2_hat;
    bool reality_checked = false;
};

// full pipeline of Theorem-style unique normalization
template <class K>
unf_result<K> unique_normal_form(const reversible_pair<K>& pair, bool reality = true);

// build the centralizer-form maps from multiplier series
template <class K>
series_map<K> sigma_from_multiplier(const std::vector<series<K>>& M, int map_trunc);
template <class K>
series_map<K> tau_from_multiplier(const std::vector<series<K>>& L, int map_trunc);

// extract Lambda from a map in the (tauis) shape xi_j' = Lambda_j(zeta) eta_j
template <class K>
std::vector<series<K>> multiplier_of_tau(const series_map<K>& tau, int p);
template <class K>
std::vector<series<K>> multiplier_of_sigma(const series_map<K>& sigma, int p);

// conj-coefficients + s-pair swap action on zeta-space series
template <class K>
series<K> zeta_rho_transport(const series<K>& s, const typing_info& ty);

enum class reality_convention { displayed, swapped };

// residues of the reality relations on the Lambda/M data; empty means satisfied
template <class K>
std::vector<series<K>> reality_residues(const std::vector<series<K>>& lambda1,
                                        const std::vector<series<K>>& lambda2,
                                        const std::vector<series<K>>& M, const typing_info& ty,
                                        reality_convention conv = reality_convention::displayed);

}  // namespace mosweb

#include "mosweb/pd_impl.hpp"
