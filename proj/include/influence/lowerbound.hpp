/*!
  \file lowerbound.hpp
  \brief Families that hide influence behind a prefix set, and the distinguishing game

  A member f_R agrees with a low-influence base function except on inputs
  whose k-bit prefix lies in R, where it switches to a high-influence
  function of the remaining n - k coordinates.  An algorithm that never
  queries a point with prefix in R sees the base function; the game measures
  how often a query strategy "hits" R.
*/

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include <influence/function_spec.hpp>
#include <influence/lattice.hpp>

namespace influence
{

enum class FamilyKind
{
  monotone,
  monotone_single_point,
  general
};

std::string to_string( FamilyKind kind );

struct FamilyInstance
{
  FamilyKind kind;
  std::size_t n;
  std::size_t k;
  /*! base threshold t(k,1) or k/2; unused for the general family */
  std::size_t t_tilde;
  std::shared_ptr<const PrefixSet> R;
  double i_star;
  /*! target prefix density: I* / I[maj'_{n-k}] (monotone), |R|/2^k otherwise */
  double beta;
  FunctionSpec member;
  FunctionSpec base;

  /*! \brief Probability that one uniform query hits R: |R| / 2^k */
  double hit_probability() const { return R->density(); }
};

/*! \brief Raised when (n, I*, k) admits no family member; the message names the violated inequality */
class infeasible_instance : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

struct ThresholdChoice
{
  std::size_t t;
  double influence;
};

/*! \brief Largest t <= floor(k/2) with I[tau^t_k] <= 1 */
ThresholdChoice find_t_k1( std::size_t k );

/*! \brief Default prefix width 2 floor(log2 n) */
std::size_t default_monotone_k( std::size_t n );

FamilyInstance build_monotone_family_member( std::size_t n, double i_star, RngStream& rng,
                                             std::optional<std::size_t> k = std::nullopt );

FamilyInstance build_single_point_member( std::size_t n, double i_star, RngStream& rng );

FamilyInstance build_general_family_member( std::size_t n, double i_star, RngStream& rng );

/*! \brief (1 - 2 I* / n) + (I* / n)(n - k) */
double general_influence_bound( std::size_t n, std::size_t k, double i_star );

/*! \brief Same family parameters, freshly sampled R */
FamilyInstance resample_member( const FamilyInstance& instance, RngStream& rng );

/*! \brief `count` distinct k-bit prefixes of weight `weight`, uniform without replacement */
std::shared_ptr<const PrefixSet> sample_weight_prefixes( unsigned k, unsigned weight, std::uint64_t count,
                                                         RngStream& rng );

/*! \brief `count` distinct k-bit prefixes, uniform without replacement */
std::shared_ptr<const PrefixSet> sample_prefixes( unsigned k, std::uint64_t count, RngStream& rng );

struct UniformQueries
{
  std::uint64_t q;
};

struct EstimatorStrategy
{
  double epsilon;
  double delta;
  std::optional<std::uint64_t> m_cap;
};

using GameStrategy = std::variant<UniformQueries, EstimatorStrategy>;

struct GameReport
{
  std::uint64_t trials = 0;
  /*! mean queries per trial on the member arm */
  double queries_per_trial = 0.0;
  std::uint64_t hit_trials = 0;
  double hit_rate = 0.0;
  /*! 1 - (1 - |R|/2^k)^q for uniform queries */
  std::optional<double> expected_hit_rate;
  /*! trials in which some answer differed between the two arms */
  std::uint64_t answer_mismatch_trials = 0;
  /*! estimator strategy: fraction of trials whose two outputs differ by more than a factor 2 */
  std::optional<double> distinguisher_advantage;
};

/*! \brief Plays `trials` rounds; round i uses substream i of a seed drawn from rng

  Each round resamples R, then runs the strategy against the member and the
  base function with identical coins.  A round is a hit when any query to
  the member had its prefix in R.
*/
GameReport run_distinguishing_game( const FamilyInstance& instance, const GameStrategy& strategy,
                                    std::uint64_t trials, RngStream& rng, std::size_t workers = 1 );

} // namespace influence
