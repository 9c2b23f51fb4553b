#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <influence/commands.hpp>
#include <influence/exact_oracle.hpp>

using namespace influence;

namespace
{

struct Options
{
  RunConfig config;
  std::vector<std::string> s_star;
  std::string family = "monotone";
  std::string strategy = "uniform";
  std::string regime;
  std::string format = "csv";
  std::string out;
};

std::optional<std::uint64_t> parse_s_star( const std::string& text )
{
  if ( text == "none" || text == "disabled" )
  {
    return std::nullopt;
  }
  std::size_t used = 0;
  auto const value = std::stoull( text, &used );
  if ( used != text.size() )
  {
    throw config_error( "bad --s-star value '" + text + "'" );
  }
  return value;
}

void add_common( CLI::App* app, Options& o, bool randomized )
{
  app->add_option( "--function", o.config.function, "zoo name, inline JSON spec, or @file.json" )
      ->capture_default_str();
  app->add_option( "--n", o.config.n, "dimension(s)" )->delimiter( ',' );
  app->add_option( "--format", o.format, "csv or json" )->check( CLI::IsMember( { "csv", "json" } ) );
  app->add_option( "--out", o.out, "output file (default stdout)" );
  if ( randomized )
  {
    app->add_option( "--seed", o.config.seed, "base seed; run r uses substream r" );
    app->add_option( "--workers", o.config.workers, "threads across runs/trials" )->check( CLI::PositiveNumber );
  }
}

void add_estimator_options( CLI::App* app, Options& o )
{
  app->add_option( "--epsilon", o.config.epsilon, "accuracy parameter(s)" )->delimiter( ',' );
  app->add_option( "--delta", o.config.delta, "failure probability" );
  app->add_option( "--c", o.config.c, "influence floor exponent: I[f] >= n^-c" );
  app->add_option( "--runs", o.config.runs, "independent runs" );
  app->add_option( "--m-cap", o.config.m_cap, "iteration cap override" );
  app->add_option( "--regime", o.regime, "force walk or direct" )->check( CLI::IsMember( { "walk", "direct" } ) );
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Total influence estimation: walk estimator, exact oracles, lower-bound games" };
  app.require_subcommand( 1 );
  Options o;

  auto* estimate = app.add_subcommand( "estimate", "run the estimator --runs times" );
  add_common( estimate, o, true );
  add_estimator_options( estimate, o );

  auto* exact = app.add_subcommand( "exact", "exact influence profile by enumeration (n <= 24)" );
  add_common( exact, o, false );
  exact->add_option( "--s-star", o.s_star, "band half-width for the band edge count" );

  auto* compare = app.add_subcommand( "oracle-compare", "walk success probability by every available method" );
  add_common( compare, o, true );
  compare->add_option( "--w", o.config.w, "walk lengths" )->delimiter( ',' );
  compare->add_option( "--s-star", o.s_star, "band half-widths, 'none' disables the cut-off" )->delimiter( ',' );
  compare->add_option( "--trials", o.config.trials, "Monte Carlo walks per cell (0 = skip)" );

  auto* lemma = app.add_subcommand( "lemma-check", "exact p against the lemma bounds for thresholds" );
  add_common( lemma, o, false );
  lemma->add_option( "--epsilon", o.config.epsilon, "accuracy parameter(s)" )->delimiter( ',' );
  lemma->add_option( "--delta", o.config.delta, "failure probability" );
  lemma->add_option( "--c", o.config.c, "influence floor exponent" );

  auto* lower = app.add_subcommand( "lowerbound", "prefix-hit game against a hidden-R family" );
  add_common( lower, o, true );
  lower->add_option( "--family", o.family, "monotone, monotone_single_point (or single_point) or general" )
      ->check( CLI::IsMember( { "monotone", "monotone_single_point", "single_point", "general" } ) );
  lower->add_option( "--i-star", o.config.i_star, "target influence" )->required();
  lower->add_option( "--k", o.config.k, "prefix width (monotone family)" );
  lower->add_option( "--q", o.config.q, "uniform queries per trial" )->delimiter( ',' );
  lower->add_option( "--trials", o.config.trials, "trials per row" );
  lower->add_option( "--strategy", o.strategy, "uniform or estimator" )
      ->check( CLI::IsMember( { "uniform", "estimator" } ) );
  lower->add_option( "--epsilon", o.config.epsilon, "estimator strategy accuracy" )->delimiter( ',' );
  lower->add_option( "--delta", o.config.delta, "estimator strategy failure probability" );
  lower->add_option( "--m-cap", o.config.m_cap, "estimator strategy iteration cap" );

  auto* sweep = app.add_subcommand( "sweep", "expected and measured query counts over an (n, epsilon) grid" );
  add_common( sweep, o, true );
  add_estimator_options( sweep, o );

  CLI11_PARSE( app, argc, argv );

  try
  {
    for ( auto const& s : o.s_star )
    {
      o.config.s_star.push_back( parse_s_star( s ) );
    }
    if ( !o.regime.empty() )
    {
      o.config.regime = o.regime == "walk" ? Regime::walk : Regime::direct;
    }
    static const std::map<std::string, FamilyKind> families{ { "monotone", FamilyKind::monotone },
                                                             { "monotone_single_point", FamilyKind::monotone_single_point },
                                                             { "single_point", FamilyKind::monotone_single_point },
                                                             { "general", FamilyKind::general } };
    o.config.family = families.at( o.family );
    o.config.strategy = o.strategy == "estimator" ? GameStrategyKind::estimator : GameStrategyKind::uniform;

    Table table;
    if ( estimate->parsed() )
    {
      table = cmd_estimate( o.config );
    }
    else if ( exact->parsed() )
    {
      table = cmd_exact( o.config );
    }
    else if ( compare->parsed() )
    {
      table = cmd_oracle_compare( o.config );
    }
    else if ( lemma->parsed() )
    {
      table = cmd_lemma_check( o.config );
    }
    else if ( lower->parsed() )
    {
      table = cmd_lowerbound( o.config );
    }
    else
    {
      table = cmd_sweep( o.config );
    }

    std::ofstream file;
    if ( !o.out.empty() )
    {
      file.open( o.out );
      if ( !file )
      {
        std::cerr << "error: cannot write " << o.out << '\n';
        return 1;
      }
    }
    std::ostream& os = o.out.empty() ? std::cout : file;
    if ( o.format == "json" )
    {
      write_json( table, os );
    }
    else
    {
      write_csv( table, os );
    }
    return os ? 0 : 1;
  }
  catch ( const std::exception& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
