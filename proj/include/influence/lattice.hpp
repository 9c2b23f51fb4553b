/*!
  \file lattice.hpp
  \brief Points of the Boolean lattice, seeded random streams and downward walks

  Coordinates are numbered 1..n in documentation and 0..n-1 in code.
  Coordinate i is stored in bit (i % 64) of word (i / 64), so the k-bit
  prefix x_1..x_k of a point is the integer whose bit j holds x_{j+1}.
*/

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/random/binomial_distribution.hpp>

namespace influence
{

/*! \brief An n-bit lattice element with O(1) Hamming-weight access */
class Point
{
public:
  Point() = default;

  /*! \brief All-zeros point of dimension n */
  explicit Point( std::size_t n );

  /*! \brief Parses "x_1 x_2 ... x_n" written as a string of '0'/'1' */
  static Point from_string( std::string_view bits );

  /*! \brief Point whose bit j is bit j of `index` (requires n <= 64) */
  static Point from_index( std::size_t n, std::uint64_t index );

  std::size_t dimension() const noexcept { return n_; }
  std::size_t weight() const noexcept { return weight_; }

  bool test( std::size_t i ) const noexcept { return ( words_[i >> 6] >> ( i & 63 ) ) & 1u; }
  void flip( std::size_t i ) noexcept;
  void set( std::size_t i, bool value ) noexcept;

  /*! \brief Overwrites the point with the bits of `index` (n <= 64) */
  void assign_index( std::uint64_t index );

  /*! \brief Replaces the packed words; bits beyond n are cleared */
  void assign_words( std::span<const std::uint64_t> words );

  /*! \brief Number of ones among coordinates [first, last) */
  std::size_t count_ones( std::size_t first, std::size_t last ) const noexcept;

  /*! \brief Integer formed by the first k coordinates (k <= 64) */
  std::uint64_t prefix( std::size_t k ) const noexcept;

  /*! \brief Integer formed by all coordinates (n <= 64) */
  std::uint64_t to_index() const noexcept { return words_.empty() ? 0u : words_[0]; }

  /*! \brief Index of the r-th (0-based) coordinate equal to 1 */
  std::size_t select_one( std::size_t r ) const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::string to_string() const;

  friend bool operator==( const Point& a, const Point& b ) noexcept
  {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }

private:
  std::size_t n_ = 0;
  std::size_t weight_ = 0;
  std::vector<std::uint64_t> words_;
};

inline std::size_t hamming_weight( const Point& p ) noexcept { return p.weight(); }

/*! \brief Deterministic random stream identified by (seed, stream id)

  The engine is std::mt19937_64 seeded through std::seed_seq, both of which
  are fully specified by the standard.  Derived draws use Boost.Random
  distributions, whose algorithms do not vary between standard libraries.
*/
class RngStream
{
public:
  using engine_type = std::mt19937_64;

  explicit RngStream( std::uint64_t seed, std::uint64_t stream = 0 );

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint64_t next_u64() { return engine_(); }

  /*! \brief Uniform integer in [0, bound), bound >= 1 */
  std::uint64_t uniform_below( std::uint64_t bound );

  /*! \brief Uniform real in [0, 1) */
  double uniform01();

  /*! \brief Binomial(n, 1/2) draw, i.e. the weight of a uniform n-bit point */
  std::uint64_t binomial_half( std::uint64_t n );

  engine_type& engine() noexcept { return engine_; }

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  engine_type engine_;
  std::optional<boost::random::binomial_distribution<std::int64_t, double>> binomial_;
};

/*! \brief Walk cut-off level; std::nullopt means disabled */
using CutoffLevel = std::optional<std::int64_t>;

/*! \brief Weight at or below which a walk halts (0 when disabled or negative) */
inline std::uint64_t cutoff_clamp( CutoffLevel cutoff ) noexcept
{
  return cutoff && *cutoff > 0 ? static_cast<std::uint64_t>( *cutoff ) : 0u;
}

/*! \brief Thrown by step_down on the all-zeros point */
class no_downward_step : public std::domain_error
{
public:
  no_downward_step() : std::domain_error( "no downward step" ) {}
};

struct DownStep
{
  Point point;
  std::size_t flipped;
};

Point sample_uniform_point( std::size_t n, RngStream& rng );

/*! \brief In-place variant of sample_uniform_point reusing p's storage */
void fill_uniform( Point& p, RngStream& rng );

DownStep step_down( const Point& p, RngStream& rng );

/*! \brief Clears one uniformly chosen set coordinate of p; returns its index */
std::size_t step_down_in_place( Point& p, RngStream& rng );

/*! \brief Downward walk of at most w steps, halting at the cut-off clamp

  A start at or below the clamp takes zero steps.
*/
Point walk_down( const Point& v, std::uint64_t w, CutoffLevel cutoff, RngStream& rng );
void walk_down_in_place( Point& p, std::uint64_t w, CutoffLevel cutoff, RngStream& rng );

/*! \brief Endpoint weight of walk_down from any point of weight h */
std::uint64_t walk_down_weight( std::uint64_t h, std::uint64_t w, CutoffLevel cutoff ) noexcept;

} // namespace influence
