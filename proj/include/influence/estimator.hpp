/*!
  \file estimator.hpp
  \brief Walk-based sequential estimator of total influence and the direct edge-sampling baseline

  Both estimators repeat a two-query trial until t trials succeed and report
  the scaled inverse of the observed success rate.  The walk trial queries
  f at a uniform start v and at the end u of a downward walk with cut-off;
  the direct trial queries f at a uniform x and at x with one uniform
  coordinate flipped.  Symmetric oracles are driven through weights only,
  which makes n ~ 1e9 affordable; the loop logic is shared.
*/

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <influence/function_spec.hpp>
#include <influence/lattice.hpp>

namespace influence
{

enum class Regime
{
  walk,
  direct
};

std::string to_string( Regime r );

struct EstimatorParams
{
  std::uint64_t n = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double epsilon_tilde = 0.0;
  std::uint64_t w = 0;
  std::uint64_t s_star = 0;
  CutoffLevel cutoff_level;
  std::uint64_t t = 1;
  Regime regime = Regime::direct;
  double c = 0.0;
  std::uint64_t m_cap = 0;

  /*! \brief Throws std::invalid_argument when an invariant is broken */
  void validate() const;
};

enum class EstimateStatus
{
  ok,
  floor_exceeded
};

std::string to_string( EstimateStatus s );

struct EstimateReport
{
  std::optional<double> i_hat;
  std::uint64_t m = 0;
  std::uint64_t successes = 0;
  std::uint64_t queries = 0;
  Regime regime = Regime::direct;
  EstimatorParams params;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  EstimateStatus status = EstimateStatus::ok;
};

/*! \brief Right-hand side of the walk-regime premise: 8 sqrt(2 ln(8n/eps)) / sqrt(n) */
double walk_regime_threshold( std::uint64_t n, double epsilon );

/*! \brief All derived parameters for (n, epsilon, delta) under the floor I[f] >= n^-c

  Natural logarithms throughout.  w floors, s* and t ceil.  The walk regime
  is selected iff w >= 1 and epsilon exceeds walk_regime_threshold.
*/
EstimatorParams derive_params( std::uint64_t n, double epsilon, double delta, double c = 0.0 );

/*! \brief Copy of `params` forced into the direct regime, with the matching m_cap */
EstimatorParams as_direct( const EstimatorParams& params );

/*! \brief One walk trial: true iff f(v) != f(u); costs exactly two queries */
bool walk_trial( OracleHandle& o, std::uint64_t w, CutoffLevel cutoff, RngStream& rng );

/*! \brief One edge trial: true iff f(x) != f(x^(+i)); costs exactly two queries */
bool edge_trial( OracleHandle& o, RngStream& rng );

EstimateReport estimate_influence_walk( OracleHandle& o, const EstimatorParams& params, RngStream& rng );
EstimateReport estimate_influence_direct( OracleHandle& o, const EstimatorParams& params, RngStream& rng );

/*! \brief Dispatches on params.regime */
EstimateReport estimate_influence( OracleHandle& o, const EstimatorParams& params, RngStream& rng );

} // namespace influence
