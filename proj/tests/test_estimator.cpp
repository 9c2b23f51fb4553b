#include <doctest.h>

#include <cmath>

#include <influence/exact_oracle.hpp>
#include <influence/estimator.hpp>

using namespace influence;

namespace
{

FunctionSpec as_table( const FunctionSpec& f )
{
  std::vector<std::uint8_t> values( std::size_t{ 1 } << f.dimension() );
  for ( std::uint64_t x = 0; x < values.size(); ++x )
  {
    values[x] = f( Point::from_index( f.dimension(), x ) );
  }
  return FunctionSpec::truth_table( f.dimension(), std::move( values ) );
}

double within_se( double observed, double p, double trials )
{
  return std::abs( observed - p ) / std::sqrt( p * ( 1 - p ) / trials );
}

} // namespace

TEST_SUITE( "estimator" )
{

TEST_CASE( "derived parameters" )
{
  auto const a = derive_params( 1'000'000, 0.5, 0.1 );
  CHECK( a.epsilon_tilde == 0.125 );
  CHECK( a.w == 1 );
  CHECK( a.s_star == 2880 );
  CHECK( a.cutoff_level == CutoffLevel{ 497119 } );
  CHECK( a.t == 1151 );
  CHECK( a.regime == Regime::walk );

  auto const b = derive_params( 10'000, 0.1, 0.1 );
  CHECK( b.regime == Regime::direct );
  CHECK( walk_regime_threshold( 10'000, 0.1 ) == doctest::Approx( 0.417 ).epsilon( 1e-3 ) );

  CHECK( derive_params( 1000, 0.5, 2 / std::exp( 2.0 ) ).t == 768 );

  auto const big = derive_params( 100'000'001, 0.5, 0.1 );
  CHECK( big.w == 11 );
  CHECK( big.s_star == 32553 );
  CHECK( big.cutoff_level == CutoffLevel{ 49'967'446 } );
  CHECK( big.m_cap == static_cast<std::uint64_t>( std::ceil( 100.0 * 1151 * 100'000'001.0 ) ) / 11 );

  // a larger influence floor exponent lengthens the log term
  auto const floor = derive_params( 1'000'000, 0.5, 0.1, 1.0 );
  CHECK( floor.s_star > a.s_star );
  CHECK( floor.m_cap > a.m_cap );

  CHECK_THROWS( derive_params( 1, 0.5, 0.1 ) );
  CHECK_THROWS( derive_params( 100, 1.0, 0.1 ) );
  CHECK_THROWS( derive_params( 100, 0.5, 0.0 ) );
  CHECK_THROWS( derive_params( 100, 0.5, 0.1, -1 ) );
}

TEST_CASE( "regime consistency: w = 0 never selects the walk" )
{
  for ( std::uint64_t n = 2; n < 5'000'000; n = n * 3 + 1 )
  {
    for ( double eps : { 0.05, 0.3, 0.5, 0.9, 0.99 } )
    {
      auto const p = derive_params( n, eps, 0.1 );
      REQUIRE( ( p.regime == Regime::direct || p.w >= 1 ) );
      if ( p.cutoff_level )
      {
        REQUIRE( *p.cutoff_level < std::int64_t( n / 2 ) );
      }
    }
  }
  auto p = derive_params( 100, 0.5, 0.1 );
  p.regime = Regime::walk;
  auto o = make_counting_oracle( FunctionSpec::majority( 100 ) );
  RngStream rng( 1 );
  CHECK_THROWS( estimate_influence_walk( o, p, rng ) );
}

TEST_CASE( "floor exceeded on a constant" )
{
  auto p = derive_params( 100, 0.5, 0.1 );
  p.m_cap = 5000;
  auto o = make_counting_oracle( FunctionSpec::constant( 100, false ) );
  RngStream rng( 9 );
  auto const r = estimate_influence( o, p, rng );
  CHECK( r.status == EstimateStatus::floor_exceeded );
  CHECK( r.successes == 0 );
  CHECK( !r.i_hat );
  CHECK( r.m == 5000 );
  CHECK( r.queries == 2 * r.m );
}

TEST_CASE( "replay is deterministic" )
{
  auto const p = derive_params( 1'000'001, 0.5, 0.1 );
  auto o = make_counting_oracle( FunctionSpec::majority( 1'000'001 ) );
  RngStream r1( 44, 3 );
  RngStream r2( 44, 3 );
  auto const a = estimate_influence( o, p, r1 );
  auto const b = estimate_influence( o, p, r2 );
  CHECK( a.i_hat == b.i_hat );
  CHECK( a.m == b.m );
  CHECK( a.queries == b.queries );
  CHECK( a.seed == 44 );
  CHECK( a.stream == 3 );
}

TEST_CASE( "direct estimator: parity succeeds every time" )
{
  auto const p = as_direct( derive_params( 10, 0.5, 0.1 ) );
  for ( bool table : { false, true } )
  {
    auto o = make_counting_oracle( table ? as_table( FunctionSpec::parity( 10 ) ) : FunctionSpec::parity( 10 ) );
    RngStream rng( 2 );
    auto const r = estimate_influence_direct( o, p, rng );
    CHECK( r.m == p.t );
    CHECK( r.i_hat == 10.0 );
    CHECK( r.queries == 2 * r.m );
  }
}

TEST_CASE( "direct estimator: dictator mean iteration count" )
{
  auto p = as_direct( derive_params( 16, 0.5, 0.1 ) );
  p.t = 100;
  constexpr int runs = 400;
  double sum = 0;
  for ( int run = 0; run < runs; ++run )
  {
    auto o = make_counting_oracle( FunctionSpec::dictator( 16, 1 ) );
    RngStream rng( 5, run );
    auto const r = estimate_influence_direct( o, p, rng );
    REQUIRE( r.successes == 100 );
    sum += double( r.m );
  }
  // m is negative binomial: mean t/p = 1600, variance t(1-p)/p^2 = 24000
  CHECK( std::abs( sum / runs - 1600 ) < 4 * std::sqrt( 24000.0 / runs ) );
}

TEST_CASE( "estimator identity and accounting" )
{
  for ( std::uint64_t n : { 101u, 100'001u, 10'000'001u } )
  {
    auto const p = derive_params( n, 0.7, 0.2 );
    auto o = make_counting_oracle( FunctionSpec::majority( n ) );
    RngStream rng( n );
    auto const r = estimate_influence( o, p, rng );
    REQUIRE( r.status == EstimateStatus::ok );
    CHECK( r.successes == p.t );
    CHECK( r.queries == 2 * r.m );
    auto const w = p.regime == Regime::walk ? p.w : 1;
    auto const lhs = *r.i_hat * double( r.m ) * double( w );
    CHECK( std::abs( lhs - double( n * p.t ) ) <= 1e-15 * double( n * p.t ) );
  }
}

TEST_CASE( "walk success frequency matches the exact probability" )
{
  // n = 13 majority, both the weight-only path and the point path
  constexpr std::uint64_t trials = 1'000'000;
  auto const majority = FunctionSpec::majority( 13 );
  auto exact_oracle = make_counting_oracle( majority );
  for ( auto [w, s] : { std::pair<std::uint64_t, std::optional<std::uint64_t>>{ 2, std::nullopt },
                        std::pair<std::uint64_t, std::optional<std::uint64_t>>{ 3, 1 } } )
  {
    auto const p = exact_walk_success_probability( exact_oracle, w, s );
    for ( bool table : { false, true } )
    {
      auto o = make_counting_oracle( table ? as_table( majority ) : majority );
      REQUIRE( o.symmetric() == !table );
      RngStream rng( 77, table );
      std::uint64_t hits = 0;
      for ( std::uint64_t i = 0; i < trials; ++i )
      {
        hits += walk_trial( o, w, cutoff_level_for( 13, s ), rng );
      }
      CHECK( o.query_count() == 2 * trials );
      CHECK( within_se( hits / double( trials ), p, trials ) < 4 );
    }
  }
}

TEST_CASE( "edge trial frequency matches I/n on both paths" )
{
  constexpr std::uint64_t trials = 400'000;
  for ( std::size_t n : { 7, 12 } )
  {
    auto const f = FunctionSpec::threshold( n, n, n / 3 + 1 );
    auto const p = *closed_form_influence( f ) / double( n );
    for ( bool table : { false, true } )
    {
      auto o = make_counting_oracle( table ? as_table( f ) : f );
      RngStream rng( 8, n + table );
      std::uint64_t hits = 0;
      for ( std::uint64_t i = 0; i < trials; ++i )
      {
        hits += edge_trial( o, rng );
      }
      CHECK( within_se( hits / double( trials ), p, trials ) < 4 );
    }
  }
}

TEST_CASE( "non-monotone walk: frequency tracks the disagreement probability" )
{
  // for parity the walk counts f(v) != f(u); this equals the disagreement probability,
  // which exceeds p_{w,s*} = Pr[f(v) = 1, f(u) = 0]
  constexpr std::uint64_t trials = 400'000;
  auto o = make_counting_oracle( FunctionSpec::parity( 10 ) );
  auto const disagreement = exact_walk_disagreement_probability( o, 2, 1 );
  auto const success = exact_walk_success_probability( o, 2, 1 );
  RngStream rng( 31 );
  std::uint64_t hits = 0;
  for ( std::uint64_t i = 0; i < trials; ++i )
  {
    hits += walk_trial( o, 2, cutoff_level_for( 10, 1 ), rng );
  }
  CHECK( within_se( hits / double( trials ), disagreement, trials ) < 4 );
  CHECK( success < disagreement );
}

}
