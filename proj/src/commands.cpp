#include <influence/commands.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include <influence/exact_oracle.hpp>
#include <influence/parallel.hpp>
#include <influence/spec_json.hpp>

namespace influence
{

namespace
{

Cell opt_cell( const std::optional<double>& v ) { return v ? Cell{ *v } : Cell{}; }

Cell cutoff_cell( CutoffLevel cutoff ) { return cutoff ? Cell{ *cutoff } : Cell{}; }

Cell s_star_cell( std::optional<std::uint64_t> s ) { return s ? Cell{ *s } : Cell{ std::string( "none" ) }; }

std::uint64_t require_seed( const RunConfig& config, const char* command )
{
  if ( !config.seed )
  {
    throw config_error( std::string( command ) + " is randomized and needs --seed" );
  }
  return *config.seed;
}

std::optional<std::uint64_t> first_n( const RunConfig& config )
{
  return config.n.empty() ? std::nullopt : std::optional<std::uint64_t>( config.n.front() );
}

bool is_full_threshold( const FunctionSpec& spec )
{
  auto const* t = std::get_if<spec::Threshold>( &spec.body() );
  return t && t->k == spec.dimension();
}

std::uint64_t full_threshold_t( const FunctionSpec& spec ) { return std::get<spec::Threshold>( spec.body() ).t; }

EstimatorParams configured_params( const RunConfig& config, std::uint64_t n, double epsilon )
{
  auto params = derive_params( n, epsilon, config.delta, config.c );
  if ( config.regime == Regime::direct )
  {
    params = as_direct( params );
  }
  else if ( config.regime == Regime::walk && params.regime != Regime::walk )
  {
    if ( params.w < 1 )
    {
      throw config_error( "walk regime forced but the derived walk length w is 0" );
    }
    params.regime = Regime::walk;
    params.m_cap = std::max<std::uint64_t>( 1, params.m_cap / params.w );
  }
  if ( config.m_cap )
  {
    params.m_cap = *config.m_cap;
  }
  params.validate();
  return params;
}

std::pair<std::uint64_t, std::uint64_t> reduced( const Dyadic& d )
{
  auto num = d.numerator;
  auto exp = d.exponent;
  while ( exp > 0 && num % 2 == 0 )
  {
    num /= 2;
    --exp;
  }
  return { num, std::uint64_t{ 1 } << exp };
}

/*! Fraction of cut-off walks with f(v) = 1 and f(u) = 0, by simulation */
double simulate_walk_success( const FunctionSpec& spec, std::uint64_t w, CutoffLevel cutoff, std::uint64_t trials,
                              RngStream& rng )
{
  Point v( spec.dimension() );
  std::uint64_t successes = 0;
  for ( std::uint64_t i = 0; i < trials; ++i )
  {
    fill_uniform( v, rng );
    auto const start = spec( v );
    walk_down_in_place( v, w, cutoff, rng );
    successes += start && !spec( v ) ? 1 : 0;
  }
  return static_cast<double>( successes ) / static_cast<double>( trials );
}

} // namespace

FunctionSpec resolve_function( const std::string& text, std::optional<std::uint64_t> n )
{
  auto const check_dimension = [&]( FunctionSpec spec ) {
    if ( n && *n != spec.dimension() )
    {
      throw config_error( "--n " + std::to_string( *n ) + " disagrees with the function dimension " +
                          std::to_string( spec.dimension() ) );
    }
    return spec;
  };
  if ( !text.empty() && text.front() == '{' )
  {
    return check_dimension( spec_from_json( nlohmann::json::parse( text ) ) );
  }
  if ( !text.empty() && text.front() == '@' )
  {
    std::ifstream in( text.substr( 1 ) );
    if ( !in )
    {
      throw config_error( "cannot open function file " + text.substr( 1 ) );
    }
    return check_dimension( spec_from_json( nlohmann::json::parse( in ) ) );
  }
  if ( !n )
  {
    throw config_error( "named function '" + text + "' needs --n" );
  }
  return named_spec( text, *n );
}

Table cmd_estimate( const RunConfig& config )
{
  auto const seed = require_seed( config, "estimate" );
  auto const spec = resolve_function( config.function, first_n( config ) );
  auto const params = configured_params( config, spec.dimension(), config.epsilon.front() );

  std::vector<EstimateReport> reports( config.runs );
  parallel_for( config.runs, config.workers, [&]( std::size_t run ) {
    auto oracle = make_counting_oracle( spec );
    RngStream rng( seed, run );
    reports[run] = estimate_influence( oracle, params, rng );
  } );

  Table table;
  table.columns = { "seed", "n",         "function", "regime",  "epsilon", "delta",  "w",     "s_star",
                    "cutoff", "t",       "m",        "successes", "queries", "I_hat", "status" };
  auto const label = spec.label();
  for ( auto const& r : reports )
  {
    table.add_row( { r.seed, r.params.n, label, to_string( r.regime ), r.params.epsilon, r.params.delta, r.params.w,
                     r.params.s_star, cutoff_cell( r.params.cutoff_level ), r.params.t, r.m, r.successes, r.queries,
                     opt_cell( r.i_hat ), to_string( r.status ) } );
  }
  return table;
}

Table cmd_exact( const RunConfig& config )
{
  auto const spec = resolve_function( config.function, first_n( config ) );
  if ( spec.dimension() > max_exact_dimension )
  {
    throw dimension_too_large( "exact computation needs n <= " + std::to_string( max_exact_dimension ) );
  }
  std::optional<std::uint64_t> s_star;
  if ( !config.s_star.empty() )
  {
    s_star = config.s_star.front();
  }
  auto oracle = make_counting_oracle( spec );
  auto const profile = exact_influence( oracle, s_star );
  auto const monotone = is_monotone( oracle ).monotone;

  Table table;
  table.columns = { "function", "n", "variable", "influence", "numerator", "denominator", "edge_count",
                    "band_edge_count", "monotone" };
  auto const label = spec.label();
  for ( std::size_t i = 0; i < profile.per_variable.size(); ++i )
  {
    auto const [num, den] = reduced( profile.per_variable[i] );
    table.add_row( { label, std::uint64_t{ spec.dimension() }, std::to_string( i + 1 ),
                     profile.per_variable[i].to_double(), num, den, Cell{}, Cell{}, Cell{} } );
  }
  auto const [num, den] = reduced( profile.total );
  table.add_row( { label, std::uint64_t{ spec.dimension() }, std::string( "total" ), profile.total.to_double(), num, den,
                   profile.edge_count,
                   profile.band_edge_count ? Cell{ *profile.band_edge_count } : Cell{}, monotone } );
  return table;
}

Table cmd_oracle_compare( const RunConfig& config )
{
  auto const spec = resolve_function( config.function, first_n( config ) );
  auto const n = spec.dimension();
  if ( n > 20 )
  {
    throw dimension_too_large( "oracle-compare needs n <= 20" );
  }
  auto const mc_trials = config.trials.value_or( 0 );
  std::uint64_t seed = 0;
  if ( mc_trials > 0 )
  {
    seed = require_seed( config, "oracle-compare with --trials" );
  }

  auto ws = config.w.empty() ? std::vector<std::uint64_t>{ 1, 2, 3, 5 } : config.w;
  auto stars = config.s_star;
  if ( stars.empty() )
  {
    stars = { std::nullopt, std::uint64_t{ 1 },
              static_cast<std::uint64_t>( std::floor( std::sqrt( static_cast<double>( n ) ) ) ) };
  }

  auto oracle = make_counting_oracle( spec );
  auto const monotone = is_monotone( oracle ).monotone;
  auto const symmetric = is_full_threshold( spec );

  struct GridPoint
  {
    std::uint64_t w;
    std::optional<std::uint64_t> s_star;
  };
  std::vector<GridPoint> grid;
  for ( auto w : ws )
  {
    for ( auto s : stars )
    {
      grid.push_back( { w, s } );
    }
  }

  std::vector<std::optional<double>> mc( grid.size() );
  if ( mc_trials > 0 )
  {
    parallel_for( grid.size(), config.workers, [&]( std::size_t i ) {
      RngStream rng( seed, i );
      mc[i] = simulate_walk_success( spec, grid[i].w, cutoff_level_for( n, grid[i].s_star ), mc_trials, rng );
    } );
  }

  Table table;
  table.columns = { "function",    "n",          "w",           "s_star",          "cutoff",
                    "dp",          "dp_numerator", "dp_denominator", "edge_sum",    "symmetric",
                    "monte_carlo", "mc_trials",  "mc_std_error", "abs_diff_edge_sum", "abs_diff_symmetric",
                    "abs_diff_monte_carlo", "note" };
  auto const label = spec.label();
  for ( std::size_t i = 0; i < grid.size(); ++i )
  {
    auto const [w, s] = grid[i];
    auto const exact = exact_walk_success_probability_rational( oracle, w, s );
    auto const dp = static_cast<double>( exact );
    std::optional<double> edge_sum;
    std::optional<double> closed;
    std::string note;
    if ( monotone )
    {
      edge_sum = edge_sum_walk_probability( oracle, w, s );
    }
    else
    {
      note = "edge_sum rejected: function is not monotone";
    }
    if ( symmetric )
    {
      closed = symmetric_exact_walk_probability( spec, w, s );
    }
    auto const diff = [&]( const std::optional<double>& x ) {
      return x ? Cell{ std::abs( *x - dp ) } : Cell{};
    };
    Cell std_error;
    if ( mc[i] )
    {
      std_error = std::sqrt( dp * ( 1.0 - dp ) / static_cast<double>( mc_trials ) );
    }
    table.add_row( { label, std::uint64_t{ n }, w, s_star_cell( s ), cutoff_cell( cutoff_level_for( n, s ) ), dp,
                     boost::multiprecision::numerator( exact ).str(), boost::multiprecision::denominator( exact ).str(),
                     opt_cell( edge_sum ), opt_cell( closed ), opt_cell( mc[i] ),
                     mc[i] ? Cell{ mc_trials } : Cell{}, std_error, diff( edge_sum ), diff( closed ), diff( mc[i] ),
                     note } );
  }
  return table;
}

Table cmd_lemma_check( const RunConfig& config )
{
  if ( config.n.empty() )
  {
    throw config_error( "lemma-check needs --n" );
  }
  Table table;
  table.columns = { "function", "n",         "epsilon",     "w",           "s_star",            "cutoff",
                    "p",        "influence", "lower_bound", "upper_bound", "premise_threshold", "status" };
  for ( auto n : config.n )
  {
    auto const spec = resolve_function( config.function, n );
    if ( !is_full_threshold( spec ) )
    {
      throw config_error( "lemma-check needs a threshold over all n coordinates" );
    }
    auto const influence = *closed_form_influence( spec );
    for ( auto epsilon : config.epsilon )
    {
      auto const params = derive_params( n, epsilon, config.delta, config.c );
      auto const threshold = walk_regime_threshold( n, epsilon );
      if ( !( epsilon > threshold ) )
      {
        table.add_row( { spec.label(), n, epsilon, params.w, params.s_star, cutoff_cell( params.cutoff_level ), Cell{},
                         influence, Cell{}, Cell{}, threshold, std::string( "premise_violated" ) } );
        continue;
      }
      if ( params.w == 0 )
      {
        continue;
      }
      auto const p = symmetric_exact_walk_probability( n, full_threshold_t( spec ), params.w, params.s_star );
      auto const scale = static_cast<double>( params.w ) / static_cast<double>( n ) * influence;
      auto const lower = ( 1.0 - epsilon / 2.0 ) * scale;
      auto const upper = ( 1.0 + epsilon / 2.0 ) * scale;
      auto const holds = lower <= p && p <= upper;
      table.add_row( { spec.label(), n, epsilon, params.w, params.s_star, cutoff_cell( params.cutoff_level ), p,
                       influence, lower, upper, threshold, std::string( holds ? "holds" : "violated" ) } );
    }
  }
  return table;
}

Table cmd_lowerbound( const RunConfig& config )
{
  auto const seed = require_seed( config, "lowerbound" );
  if ( config.n.empty() )
  {
    throw config_error( "lowerbound needs --n" );
  }
  if ( !config.i_star )
  {
    throw config_error( "lowerbound needs --i-star" );
  }
  auto const n = config.n.front();
  auto const trials = config.trials.value_or( 500 );

  auto const build = [&]( RngStream& rng ) {
    switch ( config.family )
    {
    case FamilyKind::monotone:
      return build_monotone_family_member( n, *config.i_star, rng, config.k );
    case FamilyKind::monotone_single_point:
      return build_single_point_member( n, *config.i_star, rng );
    case FamilyKind::general:
      return build_general_family_member( n, *config.i_star, rng );
    }
    throw std::logic_error( "unknown family" );
  };

  std::vector<GameStrategy> strategies;
  if ( config.strategy == GameStrategyKind::uniform )
  {
    auto qs = config.q.empty() ? std::vector<std::uint64_t>{ 3, 100 } : config.q;
    for ( auto q : qs )
    {
      strategies.emplace_back( UniformQueries{ q } );
    }
  }
  else
  {
    strategies.emplace_back( EstimatorStrategy{ config.epsilon.front(), config.delta, config.m_cap } );
  }

  Table table;
  table.columns = { "family",      "n",          "k",        "t_tilde",     "i_star",     "beta",
                    "R_size",      "strategy",   "q",        "trials",      "queries_per_trial",
                    "hit_trials",  "hit_rate",   "expected_hit_rate", "answer_mismatch_trials",
                    "distinguisher_advantage" };
  for ( std::size_t j = 0; j < strategies.size(); ++j )
  {
    RngStream rng( seed, j );
    auto const instance = build( rng );
    auto const report = run_distinguishing_game( instance, strategies[j], trials, rng, config.workers );
    auto const* uniform = std::get_if<UniformQueries>( &strategies[j] );
    table.add_row( { to_string( instance.kind ), std::uint64_t{ instance.n }, std::uint64_t{ instance.k },
                     std::uint64_t{ instance.t_tilde }, instance.i_star, instance.beta, instance.R->size(),
                     std::string( uniform ? "uniform" : "estimator" ), uniform ? Cell{ uniform->q } : Cell{},
                     report.trials, report.queries_per_trial, report.hit_trials, report.hit_rate,
                     opt_cell( report.expected_hit_rate ), report.answer_mismatch_trials,
                     opt_cell( report.distinguisher_advantage ) } );
  }
  return table;
}

Table cmd_sweep( const RunConfig& config )
{
  auto const ns = config.n.empty() ? std::vector<std::uint64_t>{ 10'000, 1'000'000, 100'000'000 } : config.n;
  std::uint64_t seed = 0;
  if ( config.runs > 0 )
  {
    seed = require_seed( config, "sweep" );
  }

  Table table;
  table.columns = { "function",
                    "n",
                    "epsilon",
                    "delta",
                    "regime",
                    "w",
                    "s_star",
                    "t",
                    "influence",
                    "p_walk",
                    "expected_alg_queries",
                    "expected_direct_queries",
                    "expected_ratio",
                    "runs",
                    "measured_alg_queries",
                    "measured_direct_queries",
                    "measured_ratio" };
  std::uint64_t cell = 0;
  for ( auto n : ns )
  {
    auto const spec = resolve_function( config.function, n );
    for ( auto epsilon : config.epsilon )
    {
      auto const params = configured_params( config, n, epsilon );
      auto const direct = as_direct( params );

      std::optional<double> influence = closed_form_influence( spec );
      std::optional<double> p_walk;
      std::optional<double> expected_alg;
      std::optional<double> expected_direct;
      std::optional<double> expected_ratio;
      auto const t = static_cast<double>( params.t );
      if ( influence && *influence > 0.0 )
      {
        auto const p_edge = *influence / static_cast<double>( n );
        if ( params.regime == Regime::walk && is_full_threshold( spec ) )
        {
          p_walk = symmetric_exact_walk_probability( spec, params.w, params.s_star );
        }
        else if ( params.regime == Regime::direct )
        {
          p_walk = p_edge;
        }
        expected_direct = 2.0 * t / p_edge;
        if ( p_walk )
        {
          expected_alg = 2.0 * t / *p_walk;
          expected_ratio = *expected_alg / *expected_direct;
        }
      }

      std::optional<double> measured_alg;
      std::optional<double> measured_direct;
      std::optional<double> measured_ratio;
      if ( config.runs > 0 )
      {
        std::vector<std::uint64_t> alg_queries( config.runs );
        std::vector<std::uint64_t> direct_queries( config.runs );
        parallel_for( config.runs, config.workers, [&]( std::size_t run ) {
          auto const base = 2 * ( cell * config.runs + run );
          auto alg_oracle = make_counting_oracle( spec );
          RngStream alg_rng( seed, base );
          alg_queries[run] = estimate_influence( alg_oracle, params, alg_rng ).queries;
          auto direct_oracle = make_counting_oracle( spec );
          RngStream direct_rng( seed, base + 1 );
          direct_queries[run] = estimate_influence( direct_oracle, direct, direct_rng ).queries;
        } );
        double a = 0.0;
        double d = 0.0;
        for ( std::size_t r = 0; r < config.runs; ++r )
        {
          a += static_cast<double>( alg_queries[r] );
          d += static_cast<double>( direct_queries[r] );
        }
        measured_alg = a / static_cast<double>( config.runs );
        measured_direct = d / static_cast<double>( config.runs );
        measured_ratio = *measured_alg / *measured_direct;
      }

      table.add_row( { spec.label(), n, epsilon, config.delta, to_string( params.regime ), params.w, params.s_star,
                       params.t, opt_cell( influence ), opt_cell( p_walk ), opt_cell( expected_alg ),
                       opt_cell( expected_direct ), opt_cell( expected_ratio ), config.runs, opt_cell( measured_alg ),
                       opt_cell( measured_direct ), opt_cell( measured_ratio ) } );
      ++cell;
    }
  }
  return table;
}

} // namespace influence
