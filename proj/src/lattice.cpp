#include <influence/lattice.hpp>

#include <algorithm>
#include <bit>

#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace influence
{

namespace
{

constexpr std::size_t words_for( std::size_t n ) { return ( n + 63 ) / 64; }

std::uint64_t low_mask( std::size_t bits )
{
  return bits >= 64 ? ~std::uint64_t{ 0 } : ( std::uint64_t{ 1 } << bits ) - 1u;
}

std::size_t select_in_word( std::uint64_t word, std::size_t r )
{
  for ( std::size_t j = 0; j < r; ++j )
  {
    word &= word - 1u;
  }
  return static_cast<std::size_t>( std::countr_zero( word ) );
}

} // namespace

Point::Point( std::size_t n ) : n_( n ), words_( words_for( n ), 0u ) {}

Point Point::from_string( std::string_view bits )
{
  Point p( bits.size() );
  for ( std::size_t i = 0; i < bits.size(); ++i )
  {
    if ( bits[i] == '1' )
    {
      p.flip( i );
    }
    else if ( bits[i] != '0' )
    {
      throw std::invalid_argument( "point string may contain only '0' and '1'" );
    }
  }
  return p;
}

Point Point::from_index( std::size_t n, std::uint64_t index )
{
  Point p( n );
  p.assign_index( index );
  return p;
}

void Point::flip( std::size_t i ) noexcept
{
  auto& word = words_[i >> 6];
  auto const mask = std::uint64_t{ 1 } << ( i & 63 );
  word ^= mask;
  if ( word & mask )
  {
    ++weight_;
  }
  else
  {
    --weight_;
  }
}

void Point::set( std::size_t i, bool value ) noexcept
{
  if ( test( i ) != value )
  {
    flip( i );
  }
}

void Point::assign_index( std::uint64_t index )
{
  if ( n_ > 64 )
  {
    throw std::invalid_argument( "assign_index requires dimension <= 64" );
  }
  if ( n_ == 0 )
  {
    return;
  }
  words_[0] = index & low_mask( n_ );
  weight_ = static_cast<std::size_t>( std::popcount( words_[0] ) );
}

void Point::assign_words( std::span<const std::uint64_t> words )
{
  if ( words.size() != words_.size() )
  {
    throw std::invalid_argument( "word count does not match dimension" );
  }
  std::copy( words.begin(), words.end(), words_.begin() );
  if ( n_ % 64 != 0 )
  {
    words_.back() &= low_mask( n_ % 64 );
  }
  weight_ = 0;
  for ( auto w : words_ )
  {
    weight_ += static_cast<std::size_t>( std::popcount( w ) );
  }
}

std::size_t Point::count_ones( std::size_t first, std::size_t last ) const noexcept
{
  if ( first >= last )
  {
    return 0;
  }
  if ( first == 0 && last == n_ )
  {
    return weight_;
  }
  std::size_t count = 0;
  auto const first_word = first >> 6;
  auto const last_word = ( last - 1 ) >> 6;
  for ( auto wi = first_word; wi <= last_word; ++wi )
  {
    auto word = words_[wi];
    if ( wi == first_word )
    {
      word &= ~low_mask( first & 63 );
    }
    if ( wi == last_word && ( last & 63 ) != 0 )
    {
      word &= low_mask( last & 63 );
    }
    count += static_cast<std::size_t>( std::popcount( word ) );
  }
  return count;
}

std::uint64_t Point::prefix( std::size_t k ) const noexcept
{
  if ( k == 0 || words_.empty() )
  {
    return 0;
  }
  return words_[0] & low_mask( std::min<std::size_t>( k, 64 ) );
}

std::size_t Point::select_one( std::size_t r ) const
{
  for ( std::size_t wi = 0; wi < words_.size(); ++wi )
  {
    auto const ones = static_cast<std::size_t>( std::popcount( words_[wi] ) );
    if ( r < ones )
    {
      return ( wi << 6 ) + select_in_word( words_[wi], r );
    }
    r -= ones;
  }
  throw std::out_of_range( "select_one: rank exceeds weight" );
}

std::string Point::to_string() const
{
  std::string s( n_, '0' );
  for ( std::size_t i = 0; i < n_; ++i )
  {
    if ( test( i ) )
    {
      s[i] = '1';
    }
  }
  return s;
}

RngStream::RngStream( std::uint64_t seed, std::uint64_t stream )
    : seed_( seed ), stream_( stream )
{
  std::seed_seq seq{ static_cast<std::uint32_t>( seed ), static_cast<std::uint32_t>( seed >> 32 ),
                     static_cast<std::uint32_t>( stream ), static_cast<std::uint32_t>( stream >> 32 ) };
  engine_.seed( seq );
}

std::uint64_t RngStream::uniform_below( std::uint64_t bound )
{
  if ( bound == 0 )
  {
    throw std::invalid_argument( "uniform_below: empty range" );
  }
  return boost::random::uniform_int_distribution<std::uint64_t>( 0, bound - 1 )( engine_ );
}

double RngStream::uniform01()
{
  return boost::random::uniform_01<double>()( engine_ );
}

std::uint64_t RngStream::binomial_half( std::uint64_t n )
{
  if ( n == 0 )
  {
    return 0;
  }
  if ( !binomial_ || static_cast<std::uint64_t>( binomial_->t() ) != n )
  {
    binomial_.emplace( static_cast<std::int64_t>( n ), 0.5 );
  }
  return static_cast<std::uint64_t>( ( *binomial_ )( engine_ ) );
}

Point sample_uniform_point( std::size_t n, RngStream& rng )
{
  if ( n == 0 )
  {
    throw std::invalid_argument( "sample_uniform_point: dimension must be >= 1" );
  }
  Point p( n );
  fill_uniform( p, rng );
  return p;
}

void fill_uniform( Point& p, RngStream& rng )
{
  thread_local std::vector<std::uint64_t> buffer;
  buffer.resize( p.words().size() );
  for ( auto& w : buffer )
  {
    w = rng.next_u64();
  }
  p.assign_words( buffer );
}

std::size_t step_down_in_place( Point& p, RngStream& rng )
{
  if ( p.weight() == 0 )
  {
    throw no_downward_step();
  }
  auto const index = p.select_one( rng.uniform_below( p.weight() ) );
  p.flip( index );
  return index;
}

DownStep step_down( const Point& p, RngStream& rng )
{
  DownStep result{ p, 0 };
  result.flipped = step_down_in_place( result.point, rng );
  return result;
}

void walk_down_in_place( Point& p, std::uint64_t w, CutoffLevel cutoff, RngStream& rng )
{
  auto const clamp = cutoff_clamp( cutoff );
  for ( std::uint64_t step = 0; step < w && p.weight() > clamp; ++step )
  {
    step_down_in_place( p, rng );
  }
}

Point walk_down( const Point& v, std::uint64_t w, CutoffLevel cutoff, RngStream& rng )
{
  Point u = v;
  walk_down_in_place( u, w, cutoff, rng );
  return u;
}

std::uint64_t walk_down_weight( std::uint64_t h, std::uint64_t w, CutoffLevel cutoff ) noexcept
{
  auto const clamp = cutoff_clamp( cutoff );
  if ( h <= clamp )
  {
    return h;
  }
  return w >= h - clamp ? clamp : h - w;
}

} // namespace influence
