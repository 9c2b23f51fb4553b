#include <doctest.h>

#include <bit>
#include <cmath>
#include <map>

#include <influence/binomial.hpp>
#include <influence/exact_oracle.hpp>
#include <influence/lowerbound.hpp>

using namespace influence;

TEST_SUITE( "lowerbound" )
{

TEST_CASE( "find_t_k1 examples" )
{
  auto const k2 = find_t_k1( 2 );
  CHECK( k2.t == 1 );
  CHECK( k2.influence == 1.0 );
  auto const k16 = find_t_k1( 16 );
  CHECK( k16.t == 5 );
  CHECK( k16.influence == doctest::Approx( 21840.0 / 32768 ).epsilon( 1e-14 ) );
  auto const k24 = find_t_k1( 24 );
  CHECK( k24.t == 8 );
  CHECK( k24.influence == doctest::Approx( 0.7013998031616211 ).epsilon( 1e-13 ) );
  CHECK_THROWS( find_t_k1( 1 ) );
}

TEST_CASE( "find_t_k1 brackets influence one" )
{
  // k = 2 is the one width where t = floor(k/2) already reaches influence exactly 1
  for ( std::size_t k = 3; k <= 40; ++k )
  {
    auto const c = find_t_k1( k );
    CAPTURE( k );
    REQUIRE( c.influence <= 1.0 );
    REQUIRE( threshold_influence( k, c.t + 1 ) > 1.0 );
    REQUIRE( c.influence == threshold_influence( k, c.t ) );
  }
}

TEST_CASE( "monotone family feasibility" )
{
  RngStream rng( 1 );
  try
  {
    build_monotone_family_member( 4096, 4.0, rng, 24 );
    FAIL( "expected infeasible" );
  }
  catch ( const infeasible_instance& e )
  {
    std::string const message = e.what();
    CHECK( message.find( "735471" ) != std::string::npos );
    CHECK( message.find( "1318143" ) != std::string::npos );
  }

  auto const inst = build_monotone_family_member( 4096, 2.0, rng, 24 );
  CHECK( inst.k == 24 );
  CHECK( inst.t_tilde == 8 );
  CHECK( inst.beta == doctest::Approx( 0.0393 ).epsilon( 1e-3 ) );
  CHECK( inst.R->size() == std::floor( inst.beta * 16777216.0 ) );
  CHECK( inst.R->size() <= 735471 );
  CHECK( default_monotone_k( 4096 ) == 24 );
  CHECK( default_monotone_k( 5000 ) == 24 );
}

TEST_CASE( "monotone desk instance by brute force" )
{
  RngStream rng( 2 );
  auto const inst = build_monotone_family_member( 20, 0.25, rng, 10 );
  CHECK( inst.t_tilde == 3 );
  CHECK( inst.beta == doctest::Approx( 0.1016 ).epsilon( 1e-3 ) );
  CHECK( inst.R->size() == 104 );
  for ( auto x : inst.R->members() )
  {
    REQUIRE( std::popcount( x ) == 3 );
  }
  auto o = make_counting_oracle( inst.member );
  CHECK( is_monotone( o ).monotone );
  CHECK( exact_influence( o ).total.to_double() >= 0.25 );
}

TEST_CASE( "smaller monotone instances stay monotone with influence above I*" )
{
  for ( std::uint64_t seed = 0; seed < 4; ++seed )
  {
    RngStream rng( seed );
    auto const inst = build_monotone_family_member( 16, 0.2, rng, 8 );
    auto o = make_counting_oracle( inst.member );
    CHECK( is_monotone( o ).monotone );
    CHECK( exact_influence( o ).total.to_double() >= 0.2 );
  }
}

TEST_CASE( "members agree with the base off R" )
{
  RngStream rng( 3 );
  std::vector<FamilyInstance> instances{ build_monotone_family_member( 16, 0.2, rng, 8 ),
                                         build_general_family_member( 16, 2.0, rng ),
                                         build_single_point_member( 16, 0.5, rng ) };
  for ( auto const& inst : instances )
  {
    CAPTURE( to_string( inst.kind ) );
    std::uint64_t differing_on_R = 0;
    for ( std::uint64_t x = 0; x < ( 1u << 16 ); ++x )
    {
      auto const p = Point::from_index( 16, x );
      if ( !inst.R->contains( p.prefix( inst.k ) ) )
      {
        REQUIRE( inst.member( p ) == inst.base( p ) );
      }
      else
      {
        differing_on_R += inst.member( p ) != inst.base( p );
      }
    }
    CHECK( differing_on_R > 0 );
  }

  // sampled check at large n
  RngStream big_rng( 4 );
  auto const inst = build_monotone_family_member( 4096, 2.0, big_rng, 24 );
  Point p( 4096 );
  for ( int i = 0; i < 100000; ++i )
  {
    fill_uniform( p, big_rng );
    if ( !inst.R->contains( p.prefix( 24 ) ) )
    {
      REQUIRE( inst.member( p ) == inst.base( p ) );
    }
  }
}

TEST_CASE( "single point family" )
{
  RngStream rng( 5 );
  auto const inst = build_single_point_member( 1 << 16, 16.0, rng );
  CHECK( inst.k == 4 );
  CHECK( inst.t_tilde == 2 );
  CHECK( inst.R->size() == 1 );
  CHECK( std::popcount( inst.R->members().front() ) == 2 );

  auto const desk = build_single_point_member( 20, 1.0, rng );
  CHECK( desk.R->size() == 1 );
  auto member = make_counting_oracle( desk.member );
  auto base = make_counting_oracle( desk.base );
  CHECK( exact_influence( member ).total.to_double() > exact_influence( base ).total.to_double() );

  CHECK_THROWS_AS( build_single_point_member( 16, 2.0, rng ), infeasible_instance );
}

TEST_CASE( "general family" )
{
  RngStream rng( 6 );
  auto const inst = build_general_family_member( 16, 2.0, rng );
  CHECK( inst.k == 4 );
  CHECK( inst.R->size() == 2 );
  CHECK( general_influence_bound( 16, 4, 2.0 ) == 2.25 );
  auto o = make_counting_oracle( inst.member );
  CHECK( exact_influence( o ).total.to_double() >= 2.0 );

  CHECK( general_influence_bound( 64, 6, 8.0 ) == 8.0 );
  CHECK_NOTHROW( build_general_family_member( 64, 8.0, rng ) );
  CHECK_THROWS_AS( build_general_family_member( 64, 9.0, rng ), infeasible_instance );
  CHECK_THROWS_AS( build_general_family_member( 48, 1.0, rng ), infeasible_instance );

  auto const empty = build_general_family_member( 16, 0.0, rng );
  CHECK( empty.R->size() == 0 );
  auto e = make_counting_oracle( empty.member );
  CHECK( exact_influence( e ).total.to_double() == 1.0 );
}

TEST_CASE( "prefix sampling is uniform without replacement" )
{
  // 2 of the 6 weight-2 prefixes of width 4: each prefix is chosen with probability 1/3
  RngStream rng( 7 );
  std::map<std::uint64_t, int> counts;
  constexpr int draws = 30000;
  for ( int i = 0; i < draws; ++i )
  {
    auto const R = sample_weight_prefixes( 4, 2, 2, rng );
    REQUIRE( R->members().size() == 2 );
    REQUIRE( R->members()[0] < R->members()[1] );
    for ( auto x : R->members() )
    {
      REQUIRE( std::popcount( x ) == 2 );
      ++counts[x];
    }
  }
  CHECK( counts.size() == 6 );
  auto const se = std::sqrt( ( 1 / 3.0 ) * ( 2 / 3.0 ) / draws );
  for ( auto [x, c] : counts )
  {
    CHECK( std::abs( c / double( draws ) - 1 / 3.0 ) < 4 * se );
  }

  // the same for most of a level (complement branch)
  std::map<std::uint64_t, int> dense;
  for ( int i = 0; i < draws; ++i )
  {
    auto const R = sample_weight_prefixes( 4, 2, 5, rng );
    for ( auto x : R->members() )
    {
      ++dense[x];
    }
  }
  auto const se5 = std::sqrt( ( 5 / 6.0 ) * ( 1 / 6.0 ) / draws );
  for ( auto [x, c] : dense )
  {
    CHECK( std::abs( c / double( draws ) - 5 / 6.0 ) < 4 * se5 );
  }

  // a level too large to enumerate and a request too large to list
  auto const wide = sample_weight_prefixes( 40, 20, 1000, rng );
  CHECK( wide->members().size() == 1000 );
  for ( auto x : wide->members() )
  {
    REQUIRE( std::popcount( x ) == 20 );
  }
  auto const huge = sample_weight_prefixes( 30, 15, 5'000'000, rng );
  CHECK( huge->is_predicate() );
  CHECK( huge->size() == doctest::Approx( 5'000'000 ) );

  auto const all = sample_prefixes( 10, 1024, rng );
  CHECK( all->members().size() == 1024 );
  CHECK_THROWS_AS( sample_weight_prefixes( 4, 2, 7, rng ), infeasible_instance );
  CHECK( sample_prefixes( 50, 3, rng )->members().size() == 3 );
}

TEST_CASE( "uniform-query game" )
{
  RngStream rng( 8 );
  auto const inst = build_monotone_family_member( 64, 0.5, rng, 10 );

  RngStream g0( 9 );
  auto const none = run_distinguishing_game( inst, UniformQueries{ 0 }, 100, g0 );
  CHECK( none.hit_rate == 0.0 );
  CHECK( none.queries_per_trial == 0.0 );

  constexpr std::uint64_t trials = 4000;
  RngStream g1( 10 );
  auto const r = run_distinguishing_game( inst, UniformQueries{ 4 }, trials, g1 );
  REQUIRE( r.expected_hit_rate );
  auto const p = *r.expected_hit_rate;
  CHECK( r.hit_rate >= 0.0 );
  CHECK( r.hit_rate <= 1.0 );
  CHECK( std::abs( r.hit_rate - p ) < 4 * std::sqrt( p * ( 1 - p ) / trials ) );
  CHECK( r.answer_mismatch_trials <= r.hit_trials );
  CHECK( r.queries_per_trial == 4.0 );

  RngStream g2( 10 );
  auto const again = run_distinguishing_game( inst, UniformQueries{ 4 }, trials, g2, 3 );
  CHECK( again.hit_trials == r.hit_trials );
  CHECK( again.answer_mismatch_trials == r.answer_mismatch_trials );
}

TEST_CASE( "estimator game" )
{
  RngStream rng( 11 );
  auto const inst = build_general_family_member( 64, 8.0, rng );
  RngStream g( 12 );
  auto const r = run_distinguishing_game( inst, EstimatorStrategy{ 0.5, 0.2, std::nullopt }, 10, g );
  REQUIRE( r.distinguisher_advantage );
  CHECK( *r.distinguisher_advantage >= 0.0 );
  CHECK( *r.distinguisher_advantage <= 1.0 );
  CHECK( r.queries_per_trial > 0 );
  CHECK( !r.expected_hit_rate );
}

}
