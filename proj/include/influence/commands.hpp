/*!
  \file commands.hpp
  \brief The subcommands behind the `influence` executable, returning tables

  Column sets (fixed):

    estimate        seed,n,function,regime,epsilon,delta,w,s_star,cutoff,t,m,successes,queries,I_hat,status
    exact           function,n,variable,influence,numerator,denominator,edge_count,band_edge_count,monotone
    oracle-compare  function,n,w,s_star,cutoff,dp,dp_numerator,dp_denominator,edge_sum,symmetric,
                    monte_carlo,mc_trials,mc_std_error,abs_diff_edge_sum,abs_diff_symmetric,
                    abs_diff_monte_carlo,note
    lemma-check     function,n,epsilon,w,s_star,cutoff,p,influence,lower_bound,upper_bound,premise_threshold,status
    lowerbound      family,n,k,t_tilde,i_star,beta,R_size,strategy,q,trials,queries_per_trial,hit_trials,
                    hit_rate,expected_hit_rate,answer_mismatch_trials,distinguisher_advantage
    sweep           function,n,epsilon,delta,regime,w,s_star,t,influence,p_walk,expected_alg_queries,
                    expected_direct_queries,expected_ratio,runs,measured_alg_queries,
                    measured_direct_queries,measured_ratio

  Run r of a multi-run command draws from RngStream(seed, r); rows come out
  in run order whatever the worker count.
*/

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <influence/estimator.hpp>
#include <influence/function_spec.hpp>
#include <influence/lowerbound.hpp>
#include <influence/table.hpp>

namespace influence
{

/*! \brief Raised for unusable command input; the CLI reports it and exits nonzero */
class config_error : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

enum class GameStrategyKind
{
  uniform,
  estimator
};

struct RunConfig
{
  /*! zoo name, inline JSON object, or @path to a JSON file */
  std::string function = "majority";
  /*! dimensions; sweep and lemma-check take several, the rest use the first */
  std::vector<std::uint64_t> n;
  std::vector<double> epsilon{ 0.5 };
  double delta = 0.1;
  double c = 0.0;
  std::optional<std::uint64_t> seed;
  std::uint64_t runs = 1;
  std::optional<std::uint64_t> m_cap;
  std::size_t workers = 1;
  std::optional<Regime> regime;

  /*! oracle-compare grid; empty means {1, 2, 3, 5} */
  std::vector<std::uint64_t> w;
  /*! oracle-compare grid, nullopt = cut-off disabled; empty means {disabled, 1, floor(sqrt n)} */
  std::vector<std::optional<std::uint64_t>> s_star;

  FamilyKind family = FamilyKind::monotone;
  std::optional<double> i_star;
  std::optional<std::size_t> k;
  std::vector<std::uint64_t> q;
  GameStrategyKind strategy = GameStrategyKind::uniform;
  /*! game rounds (default 500) or Monte Carlo walks in oracle-compare (default 0 = skip) */
  std::optional<std::uint64_t> trials;
};

/*! \brief Resolves a zoo name, inline JSON or @file against an optional dimension */
FunctionSpec resolve_function( const std::string& text, std::optional<std::uint64_t> n );

Table cmd_estimate( const RunConfig& config );
Table cmd_exact( const RunConfig& config );
Table cmd_oracle_compare( const RunConfig& config );
Table cmd_lemma_check( const RunConfig& config );
Table cmd_lowerbound( const RunConfig& config );
Table cmd_sweep( const RunConfig& config );

} // namespace influence
