#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include <influence/commands.hpp>
#include <influence/exact_oracle.hpp>

using namespace influence;

namespace
{

std::string csv( const Table& t )
{
  std::ostringstream os;
  write_csv( t, os );
  return os.str();
}

std::size_t column( const Table& t, const std::string& name )
{
  for ( std::size_t i = 0; i < t.columns.size(); ++i )
  {
    if ( t.columns[i] == name )
    {
      return i;
    }
  }
  FAIL( "no column " << name );
  return 0;
}

double real( const Table& t, std::size_t row, const std::string& name )
{
  return std::get<double>( t.rows.at( row ).at( column( t, name ) ) );
}

RunConfig config_for( const std::string& function, std::uint64_t n )
{
  RunConfig c;
  c.function = function;
  c.n = { n };
  return c;
}

} // namespace

TEST_SUITE( "commands" )
{

TEST_CASE( "output formats" )
{
  CHECK( format_real( 0.1 ) == "0.10000000000000001" );
  CHECK( format_real( 1.5 ) == "1.5" );
  CHECK( format_real( std::nan( "" ) ) == "nan" );

  Table t;
  t.columns = { "a", "b", "c" };
  t.add_row( { std::string( "x,y" ), 0.25, Cell{} } );
  t.add_row( { true, std::uint64_t{ 7 }, std::int64_t{ -2 } } );
  CHECK_THROWS( t.add_row( { 1.0 } ) );
  CHECK( csv( t ) == "a,b,c\n\"x,y\",0.25,\ntrue,7,-2\n" );

  std::ostringstream os;
  write_json( t, os );
  auto const j = nlohmann::json::parse( os.str() );
  REQUIRE( j.size() == 2 );
  CHECK( j[0]["a"] == "x,y" );
  CHECK( j[0]["c"].is_null() );
  CHECK( j[1]["c"] == -2 );
}

TEST_CASE( "function resolution" )
{
  CHECK( resolve_function( "majority", 5 ).label() == "majority" );
  CHECK( resolve_function( R"({"kind":"dictator","params":{"n":4,"i":2}})", std::nullopt ).label() == "dictator(2)" );
  CHECK_THROWS_AS( resolve_function( "majority", std::nullopt ), config_error );
  CHECK_THROWS_AS( resolve_function( R"({"kind":"dictator","params":{"n":4,"i":2}})", 5 ), config_error );
  CHECK_THROWS_AS( resolve_function( "@/nonexistent/spec.json", std::nullopt ), config_error );
}

TEST_CASE( "estimate" )
{
  auto c = config_for( "majority", 101 );
  CHECK_THROWS_AS( cmd_estimate( c ), config_error );
  c.seed = 5;
  c.runs = 4;
  auto const t = cmd_estimate( c );
  CHECK( t.columns == std::vector<std::string>{ "seed", "n", "function", "regime", "epsilon", "delta", "w", "s_star",
                                                "cutoff", "t", "m", "successes", "queries", "I_hat", "status" } );
  CHECK( t.rows.size() == 4 );

  c.workers = 3;
  CHECK( csv( cmd_estimate( c ) ) == csv( t ) );

  auto zero = config_for( "constant0", 100 );
  zero.seed = 1;
  zero.m_cap = 1000;
  auto const z = cmd_estimate( zero );
  CHECK( std::get<std::string>( z.rows[0][column( z, "status" )] ) == "floor_exceeded" );
  CHECK( std::holds_alternative<std::monostate>( z.rows[0][column( z, "I_hat" )] ) );

  auto forced = config_for( "majority", 101 );
  forced.seed = 1;
  forced.regime = Regime::walk;
  CHECK_THROWS_AS( cmd_estimate( forced ), config_error );
}

TEST_CASE( "exact" )
{
  auto const t = cmd_exact( config_for( "majority", 3 ) );
  REQUIRE( t.rows.size() == 4 );
  CHECK( real( t, 3, "influence" ) == 1.5 );
  CHECK( std::get<std::uint64_t>( t.rows[3][column( t, "edge_count" )] ) == 6 );
  CHECK( std::get<std::uint64_t>( t.rows[3][column( t, "numerator" )] ) == 3 );
  CHECK( std::get<std::uint64_t>( t.rows[3][column( t, "denominator" )] ) == 2 );
  CHECK( real( cmd_exact( config_for( "dictator", 4 ) ), 4, "influence" ) == 1.0 );
  CHECK( real( cmd_exact( config_for( "parity", 3 ) ), 3, "influence" ) == 3.0 );
  CHECK_THROWS( cmd_exact( config_for( "majority", 25 ) ) );
}

TEST_CASE( "oracle-compare" )
{
  auto c = config_for( "dictator", 2 );
  c.w = { 1 };
  c.s_star = { std::nullopt };
  auto const d = cmd_oracle_compare( c );
  REQUIRE( d.rows.size() == 1 );
  CHECK( real( d, 0, "dp" ) == 0.375 );
  CHECK( real( d, 0, "edge_sum" ) == 0.375 );
  CHECK( real( d, 0, "abs_diff_edge_sum" ) < 1e-12 );

  auto m = config_for( "majority", 3 );
  m.w = { 3, 0 };
  m.s_star = { std::nullopt };
  auto const t = cmd_oracle_compare( m );
  CHECK( real( t, 0, "dp" ) == 0.5 );
  CHECK( real( t, 0, "edge_sum" ) == 0.5 );
  CHECK( real( t, 0, "symmetric" ) == doctest::Approx( 0.5 ).epsilon( 1e-15 ) );
  CHECK( real( t, 1, "dp" ) == 0.0 );
  CHECK( real( t, 1, "edge_sum" ) == 0.0 );

  auto p = config_for( "parity", 6 );
  p.trials = 20000;
  p.seed = 3;
  auto const pt = cmd_oracle_compare( p );
  CHECK( pt.rows.size() == 12 );
  CHECK( std::holds_alternative<std::monostate>( pt.rows[0][column( pt, "edge_sum" )] ) );
  CHECK( std::get<std::string>( pt.rows[0][column( pt, "note" )] ).find( "not monotone" ) != std::string::npos );
  for ( std::size_t r = 0; r < pt.rows.size(); ++r )
  {
    CHECK( real( pt, r, "abs_diff_monte_carlo" ) <= 4 * real( pt, r, "mc_std_error" ) + 1e-12 );
  }
  p.seed.reset();
  CHECK_THROWS_AS( cmd_oracle_compare( p ), config_error );
  CHECK_THROWS( cmd_oracle_compare( config_for( "majority", 21 ) ) );
}

TEST_CASE( "lemma-check" )
{
  RunConfig c;
  c.function = "majority";
  c.n = { 1'000'001, 10'000 };
  c.epsilon = { 0.5, 0.1 };
  auto const t = cmd_lemma_check( c );
  // (1e6+1, 0.5) holds and (1e4, 0.1) violates the premise; the other two cells have w = 0
  REQUIRE( t.rows.size() == 2 );
  auto const status = column( t, "status" );
  CHECK( std::get<std::string>( t.rows[0][status] ) == "holds" );
  CHECK( std::get<std::uint64_t>( t.rows[0][column( t, "w" )] ) == 1 );
  CHECK( std::get<std::uint64_t>( t.rows[0][column( t, "s_star" )] ) == 2880 );
  CHECK( std::get<std::string>( t.rows[1][status] ) == "premise_violated" );
  CHECK( real( t, 1, "premise_threshold" ) == doctest::Approx( 0.417 ).epsilon( 1e-3 ) );

  auto bad = config_for( "dictator", 100 );
  CHECK_THROWS_AS( cmd_lemma_check( bad ), config_error );
}

TEST_CASE( "lowerbound" )
{
  auto c = config_for( "majority", 64 );
  c.i_star = 0.5;
  c.k = 10;
  c.q = { 0, 5 };
  c.trials = 200;
  CHECK_THROWS_AS( cmd_lowerbound( c ), config_error );
  c.seed = 4;
  auto const t = cmd_lowerbound( c );
  REQUIRE( t.rows.size() == 2 );
  CHECK( real( t, 0, "hit_rate" ) == 0.0 );
  CHECK( real( t, 1, "hit_rate" ) > 0.0 );
  c.workers = 2;
  CHECK( csv( cmd_lowerbound( c ) ) == csv( t ) );

  c.i_star = 100.0;
  CHECK_THROWS_AS( cmd_lowerbound( c ), infeasible_instance );
}

TEST_CASE( "sweep" )
{
  RunConfig c;
  c.function = "majority";
  c.n = { 10'000, 1'000'000 };
  c.epsilon = { 0.9 };
  c.runs = 0;
  auto const t = cmd_sweep( c );
  REQUIRE( t.rows.size() == 2 );
  CHECK( real( t, 0, "expected_ratio" ) == 1.0 );
  CHECK( real( t, 1, "expected_ratio" ) < 1.0 );
  CHECK( std::holds_alternative<std::monostate>( t.rows[0][column( t, "measured_ratio" )] ) );
  c.runs = 1;
  CHECK_THROWS_AS( cmd_sweep( c ), config_error );
  c.seed = 2;
  auto const m = cmd_sweep( c );
  CHECK( real( m, 1, "measured_alg_queries" ) > 0 );
}

}
