#include <influence/binomial.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace influence
{

double stirling_error( double n )
{
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;

  if ( n <= 15.0 )
  {
    return std::lgamma( n + 1.0 ) - ( n + 0.5 ) * std::log( n ) + n - 0.5 * std::log( 2.0 * std::numbers::pi );
  }
  auto const nn = n * n;
  if ( n > 500.0 )
  {
    return ( s0 - s1 / nn ) / n;
  }
  if ( n > 80.0 )
  {
    return ( s0 - ( s1 - s2 / nn ) / nn ) / n;
  }
  if ( n > 35.0 )
  {
    return ( s0 - ( s1 - ( s2 - s3 / nn ) / nn ) / nn ) / n;
  }
  return ( s0 - ( s1 - ( s2 - ( s3 - s4 / nn ) / nn ) / nn ) / nn ) / n;
}

double binomial_deviance( double x, double np )
{
  if ( std::abs( x - np ) < 0.1 * ( x + np ) )
  {
    auto v = ( x - np ) / ( x + np );
    auto s = ( x - np ) * v;
    auto ej = 2.0 * x * v;
    v = v * v;
    for ( int j = 1; j < 1000; ++j )
    {
      ej *= v;
      auto const next = s + ej / ( 2 * j + 1 );
      if ( next == s )
      {
        return next;
      }
      s = next;
    }
    return s;
  }
  return x * std::log( x / np ) + np - x;
}

double log_half_binomial_pmf( std::uint64_t n, std::uint64_t k )
{
  if ( k > n )
  {
    return -std::numeric_limits<double>::infinity();
  }
  auto const nd = static_cast<double>( n );
  if ( k == 0 || k == n )
  {
    return -nd * std::numbers::ln2;
  }
  auto const kd = static_cast<double>( k );
  auto const half = 0.5 * nd;
  auto const lc = stirling_error( nd ) - stirling_error( kd ) - stirling_error( nd - kd ) -
                  binomial_deviance( kd, half ) - binomial_deviance( nd - kd, half );
  auto const lf = std::log( 2.0 * std::numbers::pi ) + std::log( kd ) + std::log1p( -kd / nd );
  return lc - 0.5 * lf;
}

double half_binomial_pmf( std::uint64_t n, std::uint64_t k )
{
  return std::exp( log_half_binomial_pmf( n, k ) );
}

double log_choose( std::uint64_t n, std::uint64_t k )
{
  if ( k > n )
  {
    return -std::numeric_limits<double>::infinity();
  }
  return log_half_binomial_pmf( n, k ) + static_cast<double>( n ) * std::numbers::ln2;
}

std::optional<std::uint64_t> choose_exact( std::uint64_t n, std::uint64_t k )
{
  if ( k > n )
  {
    return 0u;
  }
  if ( k > n - k )
  {
    k = n - k;
  }
  __extension__ using u128 = unsigned __int128;
  u128 acc = 1;
  for ( std::uint64_t i = 1; i <= k; ++i )
  {
    // acc * (n - k + i) / i stays integral at every step
    acc = acc * ( n - k + i ) / i;
    if ( acc > std::numeric_limits<std::uint64_t>::max() )
    {
      return std::nullopt;
    }
  }
  return static_cast<std::uint64_t>( acc );
}

double threshold_influence( std::uint64_t k, std::uint64_t t )
{
  if ( t == 0 || t > k )
  {
    return 0.0;
  }
  return static_cast<double>( k ) * half_binomial_pmf( k - 1, t - 1 );
}

} // namespace influence
