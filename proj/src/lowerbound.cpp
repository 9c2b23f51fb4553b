#include <influence/lowerbound.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <unordered_set>
#include <vector>

#include <influence/binomial.hpp>
#include <influence/estimator.hpp>
#include <influence/parallel.hpp>

namespace influence
{

namespace
{

// populations up to this size are sampled through a rank bitmap, larger ones through a hash set
constexpr std::uint64_t max_bitmap_population = std::uint64_t{ 1 } << 25;

std::uint64_t exact_choose( std::uint64_t n, std::uint64_t k )
{
  auto const c = choose_exact( n, k );
  if ( !c )
  {
    throw std::overflow_error( "binomial coefficient exceeds 64 bits" );
  }
  return *c;
}

std::uint64_t next_same_weight( std::uint64_t x )
{
  auto const c = x & ( ~x + 1 );
  auto const r = x + c;
  return ( ( ( r ^ x ) >> 2 ) / c ) | r;
}

/*! Combination of the given colex rank, as a bitmask; colex order is numeric order. */
std::uint64_t unrank_colex( std::uint64_t rank, unsigned weight )
{
  std::uint64_t mask = 0;
  for ( unsigned i = weight; i >= 1; --i )
  {
    std::uint64_t c = i - 1;
    while ( exact_choose( c + 1, i ) <= rank )
    {
      ++c;
    }
    mask |= std::uint64_t{ 1 } << c;
    rank -= exact_choose( c, i );
  }
  return mask;
}

std::vector<std::uint64_t> floyd_sample( std::uint64_t population, std::uint64_t count, RngStream& rng )
{
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve( count * 2 );
  for ( auto j = population - count; j < population; ++j )
  {
    auto const r = rng.uniform_below( j + 1 );
    if ( !chosen.insert( r ).second )
    {
      chosen.insert( j );
    }
  }
  return { chosen.begin(), chosen.end() };
}

/*! All k-bit masks of the given weight in increasing order; the last level asked for is cached per thread */
const std::vector<std::uint64_t>& level_masks( unsigned k, unsigned weight )
{
  thread_local std::vector<std::uint64_t> masks;
  thread_local unsigned cached_k = 0;
  thread_local unsigned cached_weight = 0;
  if ( masks.empty() || cached_k != k || cached_weight != weight )
  {
    auto const size = exact_choose( k, weight );
    masks.resize( size );
    auto x = weight == 0 ? std::uint64_t{ 0 } : ( std::uint64_t{ 1 } << weight ) - 1;
    for ( std::uint64_t i = 0; i < size; ++i )
    {
      masks[i] = x;
      if ( i + 1 < size )
      {
        x = next_same_weight( x );
      }
    }
    cached_k = k;
    cached_weight = weight;
  }
  return masks;
}

/*! Uniform `count`-subset of [0, population) as a membership bitmap; draws the smaller of the set and its complement */
std::vector<bool> sample_rank_bitmap( std::uint64_t population, std::uint64_t count, RngStream& rng )
{
  auto const complement = count > population / 2;
  auto const picks = complement ? population - count : count;
  std::vector<bool> chosen( population, complement );
  for ( auto j = population - picks; j < population; ++j )
  {
    auto const r = rng.uniform_below( j + 1 );
    auto const slot = chosen[r] != complement ? j : r;
    chosen[slot] = !complement;
  }
  return chosen;
}

double log2_floor( std::size_t n ) { return std::floor( std::log2( static_cast<double>( n ) ) ); }

double suffix_majority_influence( std::size_t n, std::size_t k )
{
  auto const m = n - k;
  return threshold_influence( m, m / 2 + 1 );
}

FamilyInstance sample_monotone( std::size_t n, std::size_t k, double i_star, RngStream& rng )
{
  if ( k < 2 || k > 62 )
  {
    throw infeasible_instance( "prefix width k must lie in [2, 62], got k = " + std::to_string( k ) );
  }
  if ( k >= n )
  {
    throw infeasible_instance( "prefix width k = " + std::to_string( k ) + " must be below n = " + std::to_string( n ) );
  }
  if ( !( i_star >= 0.0 ) )
  {
    throw std::invalid_argument( "I* must be >= 0" );
  }
  auto const t = find_t_k1( k ).t;
  auto const beta = i_star / suffix_majority_influence( n, k );
  auto const required = std::floor( beta * std::ldexp( 1.0, static_cast<int>( k ) ) );
  auto const level_size = exact_choose( k, t );
  if ( required > static_cast<double>( level_size ) )
  {
    std::ostringstream os;
    os << "infeasible: required |R| = floor(beta * 2^k) = " << std::fixed << required << " (beta = " << beta
       << ") exceeds C(k, t) = C(" << k << ", " << t << ") = " << level_size;
    throw infeasible_instance( os.str() );
  }
  auto R = sample_weight_prefixes( static_cast<unsigned>( k ), static_cast<unsigned>( t ),
                                   static_cast<std::uint64_t>( required ), rng );
  return { FamilyKind::monotone,
           n,
           k,
           t,
           R,
           i_star,
           beta,
           FunctionSpec::monotone_lowerbound( n, k, t, i_star, R ),
           FunctionSpec::threshold( n, k, t ) };
}

FamilyInstance sample_single_point( std::size_t n, std::size_t k, double i_star, RngStream& rng )
{
  auto const t = ( k + 1 ) / 2;
  auto R = sample_weight_prefixes( static_cast<unsigned>( k ), static_cast<unsigned>( t ), 1, rng );
  return { FamilyKind::monotone_single_point,
           n,
           k,
           t,
           R,
           i_star,
           R->density(),
           FunctionSpec::monotone_lowerbound( n, k, t, i_star, R ),
           FunctionSpec::threshold( n, k, t ) };
}

FamilyInstance sample_general( std::size_t n, std::size_t k, double i_star, RngStream& rng )
{
  auto const count = static_cast<std::uint64_t>( std::ceil( i_star ) );
  auto R = sample_prefixes( static_cast<unsigned>( k ), count, rng );
  return { FamilyKind::general,
           n,
           k,
           0,
           R,
           i_star,
           R->density(),
           FunctionSpec::general_lowerbound( n, k, R ),
           FunctionSpec::dictator( n, 1 ) };
}

struct TrialOutcome
{
  bool hit = false;
  bool mismatch = false;
  bool distinguished = false;
  std::uint64_t queries = 0;
};

bool outputs_differ( const EstimateReport& a, const EstimateReport& b )
{
  if ( a.i_hat.has_value() != b.i_hat.has_value() )
  {
    return true;
  }
  if ( !a.i_hat )
  {
    return false;
  }
  auto const hi = std::max( *a.i_hat, *b.i_hat );
  auto const lo = std::min( *a.i_hat, *b.i_hat );
  return hi > 2.0 * lo;
}

} // namespace

std::string to_string( FamilyKind kind )
{
  switch ( kind )
  {
  case FamilyKind::monotone:
    return "monotone";
  case FamilyKind::monotone_single_point:
    return "monotone_single_point";
  case FamilyKind::general:
    return "general";
  }
  return "unknown";
}

ThresholdChoice find_t_k1( std::size_t k )
{
  if ( k < 2 )
  {
    throw std::invalid_argument( "find_t_k1 requires k >= 2" );
  }
  ThresholdChoice best{ 0, 0.0 };
  for ( std::size_t t = 1; t <= k / 2; ++t )
  {
    auto const influence = threshold_influence( k, t );
    if ( influence > 1.0 + 1e-12 )
    {
      break;
    }
    best = { t, influence };
  }
  return best;
}

std::size_t default_monotone_k( std::size_t n )
{
  if ( n < 2 )
  {
    throw std::invalid_argument( "n must be >= 2" );
  }
  return 2 * static_cast<std::size_t>( log2_floor( n ) );
}

FamilyInstance build_monotone_family_member( std::size_t n, double i_star, RngStream& rng, std::optional<std::size_t> k )
{
  return sample_monotone( n, k.value_or( default_monotone_k( n ) ), i_star, rng );
}

FamilyInstance build_single_point_member( std::size_t n, double i_star, RngStream& rng )
{
  if ( !( i_star > 0.0 ) )
  {
    throw std::invalid_argument( "I* must be > 0" );
  }
  auto const raw = std::floor( std::log2( std::sqrt( static_cast<double>( n ) ) / i_star ) );
  if ( raw < 2.0 )
  {
    throw infeasible_instance( "degenerate: k = floor(log2(sqrt(n)/I*)) = " + std::to_string( static_cast<long long>( raw ) ) +
                               " < 2" );
  }
  auto const k = static_cast<std::size_t>( raw );
  if ( k >= n || k > 62 )
  {
    throw infeasible_instance( "prefix width k = " + std::to_string( k ) + " out of range" );
  }
  return sample_single_point( n, k, i_star, rng );
}

double general_influence_bound( std::size_t n, std::size_t k, double i_star )
{
  auto const nd = static_cast<double>( n );
  return ( 1.0 - 2.0 * i_star / nd ) + ( i_star / nd ) * static_cast<double>( n - k );
}

FamilyInstance build_general_family_member( std::size_t n, double i_star, RngStream& rng )
{
  if ( n < 4 || !std::has_single_bit( n ) )
  {
    throw infeasible_instance( "general family requires n to be a power of two >= 4, got n = " + std::to_string( n ) );
  }
  if ( !( i_star >= 0.0 ) )
  {
    throw std::invalid_argument( "I* must be >= 0" );
  }
  auto const k = static_cast<std::size_t>( std::countr_zero( n ) );
  if ( static_cast<double>( n ) < static_cast<double>( k + 2 ) * i_star )
  {
    std::ostringstream os;
    os << "infeasible: n = " << n << " < (k + 2) * I* = " << ( k + 2 ) << " * " << i_star;
    throw infeasible_instance( os.str() );
  }
  return sample_general( n, k, i_star, rng );
}

FamilyInstance resample_member( const FamilyInstance& instance, RngStream& rng )
{
  switch ( instance.kind )
  {
  case FamilyKind::monotone:
    return sample_monotone( instance.n, instance.k, instance.i_star, rng );
  case FamilyKind::monotone_single_point:
    return sample_single_point( instance.n, instance.k, instance.i_star, rng );
  case FamilyKind::general:
    return sample_general( instance.n, instance.k, instance.i_star, rng );
  }
  throw std::logic_error( "unknown family kind" );
}

std::shared_ptr<const PrefixSet> sample_weight_prefixes( unsigned k, unsigned weight, std::uint64_t count,
                                                         RngStream& rng )
{
  if ( weight > k )
  {
    throw std::invalid_argument( "prefix weight exceeds k" );
  }
  auto const population = exact_choose( k, weight );
  if ( count > population )
  {
    throw infeasible_instance( "cannot draw " + std::to_string( count ) + " distinct prefixes from C(" +
                               std::to_string( k ) + ", " + std::to_string( weight ) + ") = " +
                               std::to_string( population ) );
  }
  if ( count > PrefixSet::max_explicit_size )
  {
    auto const density = static_cast<double>( count ) / std::ldexp( 1.0, static_cast<int>( k ) );
    return std::make_shared<const PrefixSet>( PrefixSet::predicate( k, rng.next_u64(), density, weight ) );
  }

  std::vector<std::uint64_t> members;
  members.reserve( count );
  if ( population <= max_bitmap_population )
  {
    auto const& masks = level_masks( k, weight );
    auto const chosen = sample_rank_bitmap( population, count, rng );
    for ( std::uint64_t i = 0; i < population; ++i )
    {
      if ( chosen[i] )
      {
        members.push_back( masks[i] );
      }
    }
  }
  else
  {
    for ( auto rank : floyd_sample( population, count, rng ) )
    {
      members.push_back( unrank_colex( rank, weight ) );
    }
  }
  return std::make_shared<const PrefixSet>( PrefixSet::explicit_set( k, std::move( members ) ) );
}

std::shared_ptr<const PrefixSet> sample_prefixes( unsigned k, std::uint64_t count, RngStream& rng )
{
  if ( k == 0 || k > 62 )
  {
    throw std::invalid_argument( "prefix width must lie in [1, 62]" );
  }
  auto const population = std::uint64_t{ 1 } << k;
  if ( count > population )
  {
    throw infeasible_instance( "cannot draw " + std::to_string( count ) + " distinct prefixes from 2^" +
                               std::to_string( k ) );
  }
  if ( count > PrefixSet::max_explicit_size )
  {
    auto const density = static_cast<double>( count ) / static_cast<double>( population );
    return std::make_shared<const PrefixSet>( PrefixSet::predicate( k, rng.next_u64(), density ) );
  }
  std::vector<std::uint64_t> members;
  if ( population <= max_bitmap_population )
  {
    members.reserve( count );
    auto const chosen = sample_rank_bitmap( population, count, rng );
    for ( std::uint64_t x = 0; x < population; ++x )
    {
      if ( chosen[x] )
      {
        members.push_back( x );
      }
    }
  }
  else
  {
    members = floyd_sample( population, count, rng );
  }
  return std::make_shared<const PrefixSet>( PrefixSet::explicit_set( k, std::move( members ) ) );
}

GameReport run_distinguishing_game( const FamilyInstance& instance, const GameStrategy& strategy,
                                    std::uint64_t trials, RngStream& rng, std::size_t workers )
{
  auto const game_seed = rng.next_u64();
  std::vector<TrialOutcome> outcomes( trials );

  std::optional<EstimatorParams> params;
  if ( auto const* e = std::get_if<EstimatorStrategy>( &strategy ) )
  {
    params = derive_params( instance.n, e->epsilon, e->delta );
    if ( e->m_cap )
    {
      params->m_cap = *e->m_cap;
    }
  }

  parallel_for( trials, workers, [&]( std::size_t trial ) {
    RngStream trial_rng( game_seed, trial );
    auto const member = resample_member( instance, trial_rng );
    auto member_oracle = make_counting_oracle( member.member );
    auto base_oracle = make_counting_oracle( member.base );
    TrialOutcome outcome;

    if ( auto const* u = std::get_if<UniformQueries>( &strategy ) )
    {
      Point x( instance.n );
      for ( std::uint64_t j = 0; j < u->q; ++j )
      {
        fill_uniform( x, trial_rng );
        if ( member_oracle.evaluate( x ) != base_oracle.evaluate( x ) )
        {
          outcome.mismatch = true;
        }
      }
    }
    else
    {
      auto const coins = trial_rng.next_u64();
      RngStream member_rng( coins, 0 );
      RngStream base_rng( coins, 0 );
      auto const a = estimate_influence( member_oracle, *params, member_rng );
      auto const b = estimate_influence( base_oracle, *params, base_rng );
      outcome.distinguished = outputs_differ( a, b );
      outcome.mismatch = a.m != b.m || a.successes != b.successes;
    }
    outcome.hit = member_oracle.prefix_hits() > 0;
    outcome.queries = member_oracle.query_count();
    outcomes[trial] = outcome;
  } );

  GameReport report;
  report.trials = trials;
  std::uint64_t queries = 0;
  std::uint64_t distinguished = 0;
  for ( auto const& o : outcomes )
  {
    report.hit_trials += o.hit ? 1 : 0;
    report.answer_mismatch_trials += o.mismatch ? 1 : 0;
    distinguished += o.distinguished ? 1 : 0;
    queries += o.queries;
  }
  if ( trials > 0 )
  {
    report.hit_rate = static_cast<double>( report.hit_trials ) / static_cast<double>( trials );
    report.queries_per_trial = static_cast<double>( queries ) / static_cast<double>( trials );
  }
  if ( auto const* u = std::get_if<UniformQueries>( &strategy ) )
  {
    report.expected_hit_rate = 1.0 - std::pow( 1.0 - instance.hit_probability(), static_cast<double>( u->q ) );
  }
  else if ( trials > 0 )
  {
    report.distinguisher_advantage = static_cast<double>( distinguished ) / static_cast<double>( trials );
  }
  return report;
}

} // namespace influence
