/*!
  \file exact_oracle.hpp
  \brief Ground truth at desk scale

  Exact influence and influential-edge counts by enumeration, monotonicity
  checking, and the walk success probability p_{w,s*}(f) computed two
  independent ways: a dynamic program over the lattice that pushes walk mass
  level by level, and a sum over influential edges of the probability that a
  walk passes through the edge.  A closed form covers full-support
  thresholds at any n.
*/

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include <influence/function_spec.hpp>
#include <influence/lattice.hpp>

namespace influence
{

using Rational = boost::multiprecision::cpp_rational;

/*! \brief numerator / 2^exponent */
struct Dyadic
{
  std::uint64_t numerator = 0;
  unsigned exponent = 0;

  double to_double() const noexcept;
  Rational to_rational() const;
};

struct InfluenceProfile
{
  std::size_t n = 0;
  /*! I_i[f] = (#x with f(x) != f(x^(+i))) / 2^n */
  std::vector<Dyadic> per_variable;
  Dyadic total;
  /*! number of influential edges, 2^{n-1} * total */
  std::uint64_t edge_count = 0;
  /*! e_{s*}(f) when a band half-width was supplied */
  std::optional<std::uint64_t> band_edge_count;
};

struct MonotonicityResult
{
  bool monotone = true;
  /*! violating edge: upper covers lower and f(upper) < f(lower) */
  std::optional<Point> upper;
  std::optional<Point> lower;
};

struct KklResult
{
  double lhs;
  double rhs;
  bool holds;
};

class dimension_too_large : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

class not_monotone : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

constexpr std::size_t max_exact_dimension = 24;
constexpr std::size_t max_walk_dp_dimension = 22;

/*! \brief f on every point, indexed as in Point::from_index; costs 2^n queries */
std::vector<std::uint8_t> tabulate( OracleHandle& o );

/*! \brief Walk cut-off ⌊n/2⌋ - s* - 1; disabled when s* is absent or the level is negative */
CutoffLevel cutoff_level_for( std::uint64_t n, std::optional<std::uint64_t> s_star );

InfluenceProfile exact_influence( OracleHandle& o, std::optional<std::uint64_t> s_star = std::nullopt );

std::uint64_t count_influential_edges( OracleHandle& o );

MonotonicityResult is_monotone( OracleHandle& o );

/*! \brief Pr[f(v) = 1 and f(u) = 0] for a uniform start v and cut-off walk endpoint u */
double exact_walk_success_probability( OracleHandle& o, std::uint64_t w, std::optional<std::uint64_t> s_star );
Rational exact_walk_success_probability_rational( OracleHandle& o, std::uint64_t w,
                                                  std::optional<std::uint64_t> s_star );

/*! \brief Pr[f(v) != f(u)]; equals the success probability for monotone f */
double exact_walk_disagreement_probability( OracleHandle& o, std::uint64_t w, std::optional<std::uint64_t> s_star );

/*! \brief Sum over influential edges of the pass-through probability; monotone f only */
double edge_sum_walk_probability( OracleHandle& o, std::uint64_t w, std::optional<std::uint64_t> s_star );
Rational edge_sum_walk_probability_rational( OracleHandle& o, std::uint64_t w, std::optional<std::uint64_t> s_star );

/*! \brief Closed form of p_{w,s*} for tau^t_n, valid for n up to ~1e15 */
double symmetric_exact_walk_probability( std::uint64_t n, std::uint64_t t, std::uint64_t w,
                                         std::optional<std::uint64_t> s_star );
double symmetric_exact_walk_probability( const FunctionSpec& spec, std::uint64_t w,
                                         std::optional<std::uint64_t> s_star );

/*! \brief e_{s*}(tau^t_n) / (2^{n-1} I[tau^t_n]): 1 when both middle levels t-1, t lie in the band, else 0 */
double symmetric_band_edge_fraction( std::uint64_t n, std::uint64_t t, std::uint64_t s_star );

KklResult kkl_check( OracleHandle& o );

} // namespace influence
