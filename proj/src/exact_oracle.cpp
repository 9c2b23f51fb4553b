#include <influence/exact_oracle.hpp>

#include <bit>
#include <cmath>
#include <string>

#include <influence/binomial.hpp>

namespace influence
{

namespace
{

std::uint64_t checked_dimension( const OracleHandle& o, std::size_t limit )
{
  if ( o.dimension() > limit )
  {
    throw dimension_too_large( "exact computation limited to n <= " + std::to_string( limit ) + ", got n = " +
                               std::to_string( o.dimension() ) );
  }
  return o.dimension();
}

unsigned popcount( std::uint64_t x ) { return static_cast<unsigned>( std::popcount( x ) ); }

/*! Walk mass from every start with f = start_value, ending where f differs; unscaled by 2^-n. */
template<class Real>
Real walk_mismatch_mass( const std::vector<std::uint8_t>& table, std::size_t n, std::uint64_t w, std::uint64_t clamp,
                         std::uint8_t start_value )
{
  std::size_t const size = std::size_t{ 1 } << n;
  std::vector<Real> cur( size, Real( 0 ) );
  std::vector<Real> next( size, Real( 0 ) );
  for ( std::size_t x = 0; x < size; ++x )
  {
    if ( table[x] == start_value )
    {
      cur[x] = Real( 1 );
    }
  }

  for ( std::uint64_t step = 0; step < w; ++step )
  {
    bool moved = false;
    for ( auto& v : next )
    {
      v = Real( 0 );
    }
    for ( std::size_t x = 0; x < size; ++x )
    {
      if ( cur[x] == Real( 0 ) )
      {
        continue;
      }
      auto const h = popcount( x );
      if ( h <= clamp )
      {
        next[x] += cur[x];
        continue;
      }
      moved = true;
      Real const share = cur[x] / Real( h );
      for ( auto bits = static_cast<std::uint64_t>( x ); bits; bits &= bits - 1 )
      {
        next[x ^ ( bits & ( ~bits + 1 ) )] += share;
      }
    }
    cur.swap( next );
    if ( !moved )
    {
      break;
    }
  }

  Real mass( 0 );
  for ( std::size_t x = 0; x < size; ++x )
  {
    if ( table[x] != start_value )
    {
      mass += cur[x];
    }
  }
  return mass;
}

template<class Real>
Real power_of_two_inverse( std::size_t n )
{
  if constexpr ( std::is_same_v<Real, Rational> )
  {
    return Rational( 1, boost::multiprecision::cpp_int( 1 ) << n );
  }
  else
  {
    return std::ldexp( 1.0, -static_cast<int>( n ) );
  }
}

template<class Real>
Real walk_success( OracleHandle& o, std::uint64_t w, std::optional<std::uint64_t> s_star )
{
  auto const n = checked_dimension( o, max_walk_dp_dimension );
  auto const table = tabulate( o );
  auto const clamp = cutoff_clamp( cutoff_level_for( n, s_star ) );
  return walk_mismatch_mass<Real>( table, n, w, clamp, 1 ) * power_of_two_inverse<Real>( n );
}

/*! Pass-through probability of one edge with upper level ell, as a literal double product. */
template<class Real>
Real pass_probability_scaled( std::uint64_t n, std::uint64_t ell, std::uint64_t w )
{
  Real sum( 1 );
  for ( std::uint64_t i = 1; i + 1 <= w; ++i )
  {
    if ( ell + i > n )
    {
      break;
    }
    Real product( 1 );
    for ( std::uint64_t j = 0; j < i; ++j )
    {
      product *= Real( n - ell - j ) / Real( ell + i - j );
    }
    sum += product;
  }
  return sum / Real( ell );
}

template<class Real>
Real edge_sum( OracleHandle& o, std::uint64_t w, std::optional<std::uint64_t> s_star )
{
  auto const n = checked_dimension( o, max_exact_dimension );
  auto const table = tabulate( o );
  if ( w == 0 )
  {
    return Real( 0 );
  }
  auto const clamp = cutoff_clamp( cutoff_level_for( n, s_star ) );

  std::vector<std::uint64_t> edges_at_level( n + 1, 0 );
  std::size_t const size = std::size_t{ 1 } << n;
  for ( std::size_t x = 0; x < size; ++x )
  {
    for ( std::size_t i = 0; i < n; ++i )
    {
      auto const bit = std::size_t{ 1 } << i;
      if ( x & bit )
      {
        continue;
      }
      auto const y = x | bit;
      if ( table[y] == table[x] )
      {
        continue;
      }
      if ( table[y] < table[x] )
      {
        throw not_monotone( "edge-sum walk probability requires a monotone function" );
      }
      if ( popcount( x ) >= clamp )
      {
        ++edges_at_level[popcount( y )];
      }
    }
  }

  Real total( 0 );
  for ( std::uint64_t ell = 1; ell <= n; ++ell )
  {
    if ( edges_at_level[ell] != 0 )
    {
      total += Real( edges_at_level[ell] ) * pass_probability_scaled<Real>( n, ell, w );
    }
  }
  return total * power_of_two_inverse<Real>( n );
}

} // namespace

double Dyadic::to_double() const noexcept
{
  return std::ldexp( static_cast<double>( numerator ), -static_cast<int>( exponent ) );
}

Rational Dyadic::to_rational() const
{
  return Rational( boost::multiprecision::cpp_int( numerator ), boost::multiprecision::cpp_int( 1 ) << exponent );
}

std::vector<std::uint8_t> tabulate( OracleHandle& o )
{
  auto const n = checked_dimension( o, max_exact_dimension );
  std::size_t const size = std::size_t{ 1 } << n;
  std::vector<std::uint8_t> table( size );
  Point p( n );
  for ( std::size_t x = 0; x < size; ++x )
  {
    p.assign_index( x );
    table[x] = o.evaluate( p ) ? 1 : 0;
  }
  return table;
}

CutoffLevel cutoff_level_for( std::uint64_t n, std::optional<std::uint64_t> s_star )
{
  if ( !s_star )
  {
    return std::nullopt;
  }
  auto const level = static_cast<std::int64_t>( n / 2 ) - static_cast<std::int64_t>( *s_star ) - 1;
  if ( level < 0 )
  {
    return std::nullopt;
  }
  return level;
}

InfluenceProfile exact_influence( OracleHandle& o, std::optional<std::uint64_t> s_star )
{
  auto const n = checked_dimension( o, max_exact_dimension );
  auto const table = tabulate( o );
  std::size_t const size = std::size_t{ 1 } << n;

  std::vector<std::uint64_t> sensitive( n, 0 );
  for ( std::size_t x = 0; x < size; ++x )
  {
    for ( std::size_t i = 0; i < n; ++i )
    {
      if ( table[x] != table[x ^ ( std::size_t{ 1 } << i )] )
      {
        ++sensitive[i];
      }
    }
  }

  InfluenceProfile profile;
  profile.n = n;
  std::uint64_t sum = 0;
  for ( auto c : sensitive )
  {
    profile.per_variable.push_back( { c, static_cast<unsigned>( n ) } );
    sum += c;
  }
  profile.total = { sum, static_cast<unsigned>( n ) };
  profile.edge_count = sum / 2;

  if ( s_star )
  {
    // n/2 - s* <= h(x) and h(y) <= n/2 + s*, doubled to stay in integers
    auto const lo = static_cast<std::int64_t>( n ) - 2 * static_cast<std::int64_t>( *s_star );
    auto const hi = static_cast<std::int64_t>( n ) + 2 * static_cast<std::int64_t>( *s_star );
    std::uint64_t band = 0;
    for ( std::size_t x = 0; x < size; ++x )
    {
      auto const hx = static_cast<std::int64_t>( popcount( x ) );
      if ( 2 * hx < lo || 2 * ( hx + 1 ) > hi )
      {
        continue;
      }
      for ( std::size_t i = 0; i < n; ++i )
      {
        auto const bit = std::size_t{ 1 } << i;
        if ( !( x & bit ) && table[x] != table[x | bit] )
        {
          ++band;
        }
      }
    }
    profile.band_edge_count = band;
  }
  return profile;
}

std::uint64_t count_influential_edges( OracleHandle& o )
{
  auto const n = checked_dimension( o, max_exact_dimension );
  auto const table = tabulate( o );
  std::size_t const size = std::size_t{ 1 } << n;
  std::uint64_t edges = 0;
  for ( std::size_t i = 0; i < n; ++i )
  {
    auto const bit = std::size_t{ 1 } << i;
    for ( std::size_t x = 0; x < size; ++x )
    {
      if ( !( x & bit ) && table[x] != table[x | bit] )
      {
        ++edges;
      }
    }
  }
  return edges;
}

MonotonicityResult is_monotone( OracleHandle& o )
{
  auto const n = checked_dimension( o, max_exact_dimension );
  auto const table = tabulate( o );
  std::size_t const size = std::size_t{ 1 } << n;
  for ( std::size_t x = 0; x < size; ++x )
  {
    if ( !table[x] )
    {
      continue;
    }
    for ( std::size_t i = 0; i < n; ++i )
    {
      auto const bit = std::size_t{ 1 } << i;
      if ( !( x & bit ) && !table[x | bit] )
      {
        return { false, Point::from_index( n, x | bit ), Point::from_index( n, x ) };
      }
    }
  }
  return {};
}

double exact_walk_success_probability( OracleHandle& o, std::uint64_t w, std::optional<std::uint64_t> s_star )
{
  return walk_success<double>( o, w, s_star );
}

Rational exact_walk_success_probability_rational( OracleHandle& o, std::uint64_t w,
                                                  std::optional<std::uint64_t> s_star )
{
  return walk_success<Rational>( o, w, s_star );
}

double exact_walk_disagreement_probability( OracleHandle& o, std::uint64_t w, std::optional<std::uint64_t> s_star )
{
  auto const n = checked_dimension( o, max_walk_dp_dimension );
  auto const table = tabulate( o );
  auto const clamp = cutoff_clamp( cutoff_level_for( n, s_star ) );
  auto const mass = walk_mismatch_mass<double>( table, n, w, clamp, 1 ) + walk_mismatch_mass<double>( table, n, w, clamp, 0 );
  return std::ldexp( mass, -static_cast<int>( n ) );
}

double edge_sum_walk_probability( OracleHandle& o, std::uint64_t w, std::optional<std::uint64_t> s_star )
{
  return edge_sum<double>( o, w, s_star );
}

Rational edge_sum_walk_probability_rational( OracleHandle& o, std::uint64_t w, std::optional<std::uint64_t> s_star )
{
  return edge_sum<Rational>( o, w, s_star );
}

double symmetric_exact_walk_probability( std::uint64_t n, std::uint64_t t, std::uint64_t w,
                                         std::optional<std::uint64_t> s_star )
{
  if ( w == 0 || t == 0 || t > n )
  {
    return 0.0;
  }
  auto const clamp = cutoff_clamp( cutoff_level_for( n, s_star ) );
  if ( t - 1 < clamp )
  {
    return 0.0;
  }
  // 1 + sum_{i=1}^{w-1} prod_{j<i} (n-t-j)/(t+i-j), each product built from the previous one
  double sum = 1.0;
  double ratio = 1.0;
  for ( std::uint64_t i = 1; i < w && i <= n - t; ++i )
  {
    ratio *= static_cast<double>( n - t - i + 1 ) / static_cast<double>( t + i );
    sum += ratio;
  }
  return half_binomial_pmf( n, t ) * sum;
}

double symmetric_exact_walk_probability( const FunctionSpec& spec, std::uint64_t w,
                                         std::optional<std::uint64_t> s_star )
{
  auto const* th = std::get_if<spec::Threshold>( &spec.body() );
  if ( !th || th->k != spec.dimension() )
  {
    throw std::invalid_argument( "symmetric walk probability requires a full-support threshold" );
  }
  return symmetric_exact_walk_probability( spec.dimension(), th->t, w, s_star );
}

double symmetric_band_edge_fraction( std::uint64_t n, std::uint64_t t, std::uint64_t s_star )
{
  if ( t == 0 || t > n )
  {
    throw std::invalid_argument( "constant threshold has no influential edges" );
  }
  auto const lo = static_cast<std::int64_t>( n ) - 2 * static_cast<std::int64_t>( s_star );
  auto const hi = static_cast<std::int64_t>( n ) + 2 * static_cast<std::int64_t>( s_star );
  auto const lower = 2 * static_cast<std::int64_t>( t - 1 );
  auto const upper = 2 * static_cast<std::int64_t>( t );
  return ( lower >= lo && upper <= hi ) ? 1.0 : 0.0;
}

KklResult kkl_check( OracleHandle& o )
{
  auto const profile = exact_influence( o );
  auto const n = profile.n;
  std::uint64_t ones = 0;
  for ( auto v : tabulate( o ) )
  {
    ones += v;
  }
  auto const zeros = ( std::uint64_t{ 1 } << n ) - ones;

  // I = S / 2^n >= 4 N1 N0 / 4^n  <=>  S * 2^n >= 4 N1 N0
  __extension__ using u128 = unsigned __int128;
  auto const lhs_scaled = static_cast<u128>( profile.total.numerator ) << n;
  auto const rhs_scaled = static_cast<u128>( 4 ) * ones * zeros;

  KklResult result;
  result.lhs = profile.total.to_double();
  result.rhs = 4.0 * std::ldexp( static_cast<double>( ones ), -static_cast<int>( n ) ) *
               std::ldexp( static_cast<double>( zeros ), -static_cast<int>( n ) );
  result.holds = lhs_scaled >= rhs_scaled;
  return result;
}

} // namespace influence
