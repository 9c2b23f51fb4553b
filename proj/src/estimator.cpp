#include <influence/estimator.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace influence
{

namespace
{

std::uint64_t saturating_cap( double value )
{
  constexpr double limit = 9.2e18;
  if ( !( value < limit ) )
  {
    return static_cast<std::uint64_t>( limit );
  }
  return static_cast<std::uint64_t>( std::ceil( value ) );
}

std::uint64_t direct_cap( std::uint64_t t, std::uint64_t n, double c )
{
  return saturating_cap( 100.0 * static_cast<double>( t ) * std::pow( static_cast<double>( n ), 1.0 + c ) );
}

template<class Trial>
EstimateReport run_until_t_successes( OracleHandle& o, const EstimatorParams& params, RngStream& rng, Trial&& trial )
{
  EstimateReport report;
  report.params = params;
  report.regime = params.regime;
  report.seed = rng.seed();
  report.stream = rng.stream();

  auto const queries_before = o.query_count();
  while ( report.successes < params.t )
  {
    if ( report.m >= params.m_cap )
    {
      report.status = EstimateStatus::floor_exceeded;
      break;
    }
    if ( trial() )
    {
      ++report.successes;
    }
    ++report.m;
  }
  report.queries = o.query_count() - queries_before;
  return report;
}

} // namespace

std::string to_string( Regime r ) { return r == Regime::walk ? "walk" : "direct"; }

std::string to_string( EstimateStatus s ) { return s == EstimateStatus::ok ? "ok" : "floor_exceeded"; }

void EstimatorParams::validate() const
{
  if ( !( epsilon > 0.0 && epsilon < 1.0 ) )
  {
    throw std::invalid_argument( "epsilon must lie in (0, 1)" );
  }
  if ( !( delta > 0.0 && delta < 1.0 ) )
  {
    throw std::invalid_argument( "delta must lie in (0, 1)" );
  }
  if ( t < 1 )
  {
    throw std::invalid_argument( "success target t must be >= 1" );
  }
  if ( regime == Regime::walk && w < 1 )
  {
    throw std::invalid_argument( "walk regime requires w >= 1" );
  }
  if ( cutoff_level && *cutoff_level >= static_cast<std::int64_t>( n / 2 ) )
  {
    throw std::invalid_argument( "cut-off level must lie below floor(n/2)" );
  }
  if ( m_cap < 1 )
  {
    throw std::invalid_argument( "m_cap must be >= 1" );
  }
}

double walk_regime_threshold( std::uint64_t n, double epsilon )
{
  auto const nd = static_cast<double>( n );
  return 8.0 * std::sqrt( 2.0 * std::log( 8.0 * nd / epsilon ) ) / std::sqrt( nd );
}

EstimatorParams derive_params( std::uint64_t n, double epsilon, double delta, double c )
{
  if ( n < 2 )
  {
    throw std::invalid_argument( "n must be >= 2" );
  }
  if ( !( c >= 0.0 ) )
  {
    throw std::invalid_argument( "influence floor exponent c must be >= 0" );
  }
  if ( !( epsilon > 0.0 && epsilon < 1.0 ) )
  {
    throw std::invalid_argument( "epsilon must lie in (0, 1)" );
  }
  if ( !( delta > 0.0 && delta < 1.0 ) )
  {
    throw std::invalid_argument( "delta must lie in (0, 1)" );
  }

  EstimatorParams p;
  p.n = n;
  p.epsilon = epsilon;
  p.delta = delta;
  p.c = c;
  p.epsilon_tilde = epsilon / 4.0;

  auto const nd = static_cast<double>( n );
  // ln(2n / (eps~ * n^-c))
  auto const log_term = std::log( 2.0 * nd / p.epsilon_tilde ) + c * std::log( nd );
  p.w = static_cast<std::uint64_t>( std::floor( p.epsilon_tilde * std::sqrt( nd ) / ( 16.0 * std::sqrt( 2.0 * log_term ) ) ) );
  p.s_star = static_cast<std::uint64_t>( std::ceil( 0.5 * std::sqrt( 2.0 * nd * log_term ) ) );
  auto const level = static_cast<std::int64_t>( n / 2 ) - static_cast<std::int64_t>( p.s_star ) - 1;
  if ( level >= 0 )
  {
    p.cutoff_level = level;
  }
  p.t = static_cast<std::uint64_t>( std::ceil( 96.0 * std::log( 2.0 / delta ) / ( epsilon * epsilon ) ) );
  p.regime = ( p.w >= 1 && epsilon > walk_regime_threshold( n, epsilon ) ) ? Regime::walk : Regime::direct;

  p.m_cap = direct_cap( p.t, n, c );
  if ( p.regime == Regime::walk )
  {
    p.m_cap = std::max<std::uint64_t>( 1, p.m_cap / p.w );
  }
  p.validate();
  return p;
}

EstimatorParams as_direct( const EstimatorParams& params )
{
  auto p = params;
  p.regime = Regime::direct;
  p.m_cap = direct_cap( p.t, p.n, p.c );
  return p;
}

bool walk_trial( OracleHandle& o, std::uint64_t w, CutoffLevel cutoff, RngStream& rng )
{
  if ( o.symmetric() )
  {
    auto const h = rng.binomial_half( o.dimension() );
    auto const end = walk_down_weight( h, w, cutoff );
    auto const fv = o.evaluate_at_weight( h );
    auto const fu = o.evaluate_at_weight( end );
    return fv != fu;
  }
  thread_local Point v;
  if ( v.dimension() != o.dimension() )
  {
    v = Point( o.dimension() );
  }
  fill_uniform( v, rng );
  thread_local Point u;
  u = v;
  walk_down_in_place( u, w, cutoff, rng );
  auto const fv = o.evaluate( v );
  auto const fu = o.evaluate( u );
  return fv != fu;
}

bool edge_trial( OracleHandle& o, RngStream& rng )
{
  auto const n = o.dimension();
  if ( o.symmetric() )
  {
    auto const h = rng.binomial_half( n );
    // by exchangeability the flipped coordinate is a 1 with probability h/n
    auto const i = rng.uniform_below( n );
    auto const neighbour = i < h ? h - 1 : h + 1;
    auto const fx = o.evaluate_at_weight( h );
    auto const fy = o.evaluate_at_weight( neighbour );
    return fx != fy;
  }
  thread_local Point x;
  if ( x.dimension() != n )
  {
    x = Point( n );
  }
  fill_uniform( x, rng );
  auto const fx = o.evaluate( x );
  x.flip( rng.uniform_below( n ) );
  auto const fy = o.evaluate( x );
  return fx != fy;
}

EstimateReport estimate_influence_walk( OracleHandle& o, const EstimatorParams& params, RngStream& rng )
{
  params.validate();
  if ( params.regime != Regime::walk )
  {
    throw std::invalid_argument( "estimate_influence_walk requires walk-regime parameters" );
  }
  if ( params.n != o.dimension() )
  {
    throw std::invalid_argument( "parameter dimension does not match the oracle" );
  }
  auto report = run_until_t_successes( o, params, rng, [&] { return walk_trial( o, params.w, params.cutoff_level, rng ); } );
  if ( report.status == EstimateStatus::ok )
  {
    // (n/w)(t/m) as one correctly rounded quotient of exact integers
    report.i_hat = static_cast<double>( params.n * params.t ) / static_cast<double>( params.w * report.m );
  }
  return report;
}

EstimateReport estimate_influence_direct( OracleHandle& o, const EstimatorParams& params, RngStream& rng )
{
  auto p = params;
  p.regime = Regime::direct;
  p.validate();
  if ( p.n != o.dimension() )
  {
    throw std::invalid_argument( "parameter dimension does not match the oracle" );
  }
  auto report = run_until_t_successes( o, p, rng, [&] { return edge_trial( o, rng ); } );
  if ( report.status == EstimateStatus::ok )
  {
    report.i_hat = static_cast<double>( p.n * p.t ) / static_cast<double>( report.m );
  }
  return report;
}

EstimateReport estimate_influence( OracleHandle& o, const EstimatorParams& params, RngStream& rng )
{
  return params.regime == Regime::walk ? estimate_influence_walk( o, params, rng )
                                       : estimate_influence_direct( o, params, rng );
}

} // namespace influence
